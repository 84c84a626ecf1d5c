#include "parawork/optimize.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <stdexcept>

namespace parawork {

namespace {

std::vector<double> clamped(std::vector<double> x, const OptConfig& cfg) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], cfg.lo[i], cfg.hi[i]);
    return x;
}

} // namespace

OptResult pattern_search(const Objective& objective, const OptConfig& cfg) {
    const std::size_t dim = cfg.rho0.size();
    if (cfg.lo.size() != dim || cfg.hi.size() != dim)
        throw std::invalid_argument("pattern_search: bounds/initial point dimension mismatch");
    for (std::size_t i = 0; i < dim; ++i)
        if (!(cfg.lo[i] <= cfg.rho0[i] && cfg.rho0[i] <= cfg.hi[i]))
            throw std::invalid_argument("pattern_search: initial point outside bounds");

    OptResult out;
    std::map<std::vector<double>, double> cache;
    const auto eval = [&](const std::vector<double>& x) {
        if (cfg.cache) {
            auto it = cache.find(x);
            if (it != cache.end()) return it->second;
        }
        const double v = objective(x);
        ++out.evaluations;
        if (cfg.cache) cache.emplace(x, v);
        return v;
    };

    std::vector<double> x = clamped(cfg.rho0, cfg);
    double fx = eval(x);
    double mesh = cfg.mesh0;
    out.trace.push_back({0, out.evaluations, mesh, x, fx});

    while (mesh >= cfg.mesh_tol && out.evaluations < cfg.max_evals) {
        ++out.iterations;
        bool improved = false;
        for (std::size_t d = 0; d < dim && !improved; ++d) {
            for (const double sign : {1.0, -1.0}) {
                std::vector<double> y = x;
                y[d] = std::clamp(y[d] + sign * mesh, cfg.lo[d], cfg.hi[d]);
                if (y[d] == x[d]) continue;
                const double fy = eval(y);
                if (fy > fx) {
                    x = std::move(y);
                    fx = fy;
                    improved = true;
                    break;
                }
                if (out.evaluations >= cfg.max_evals) break;
            }
        }
        mesh *= improved ? cfg.expand : cfg.contract;
        out.trace.push_back({out.iterations, out.evaluations, mesh, x, fx});
    }
    out.budget_exhausted = out.evaluations >= cfg.max_evals;
    out.rho_opt = x;
    out.v_opt = fx;
    return out;
}

Objective volume_objective(MechKind kind, const GridConfig& grid, double r_b, int jobs) {
    if (kind == MechKind::Prs3) {
        return [grid, r_b, jobs](const std::vector<double>& rho) -> double {
            assert(rho.size() == 3);
            Prs3Params p;
            p.r_a = rho[0] * r_b;
            p.r_b = r_b;
            p.l = rho[1] * r_b;
            p.gamma = rho[2];
            if (p.r_a <= 0.0 || p.l <= 0.0) return 0.0;
            const auto mech = make_prs3(p);
            return boundary_search(*mech, grid, jobs).total_volume;
        };
    }
    return [grid, r_b, jobs](const std::vector<double>& rho) -> double {
        assert(rho.size() == 7);
        TmechParams p;
        p.r_b = r_b;
        for (int i = 0; i < 7; ++i) {
            if (rho[i] <= 0.0) return 0.0;
            p.rho[i] = rho[i];
        }
        const auto mech = make_tmech(p);
        return boundary_search(*mech, grid, jobs).total_volume;
    };
}

OptResult optimize_full(const Objective& objective, const OptConfig& cfg) {
    return pattern_search(objective, cfg);
}

namespace {

// Pattern search restricted to a coordinate subset, the others frozen.
OptResult subspace_search(const Objective& objective, const OptConfig& cfg,
                          const std::vector<double>& base, const std::vector<int>& idx) {
    OptConfig sub;
    sub.mesh0 = cfg.mesh0;
    sub.mesh_tol = cfg.mesh_tol;
    sub.expand = cfg.expand;
    sub.contract = cfg.contract;
    sub.max_evals = cfg.max_evals;
    sub.cache = cfg.cache;
    for (int i : idx) {
        sub.rho0.push_back(base[i]);
        sub.lo.push_back(cfg.lo[i]);
        sub.hi.push_back(cfg.hi[i]);
    }
    const Objective wrapped = [&](const std::vector<double>& x) {
        std::vector<double> full = base;
        for (std::size_t k = 0; k < idx.size(); ++k) full[idx[k]] = x[k];
        return objective(full);
    };
    OptResult r = pattern_search(wrapped, sub);
    // Report the full-dimensional optimum.
    std::vector<double> full = base;
    for (std::size_t k = 0; k < idx.size(); ++k) full[idx[k]] = r.rho_opt[k];
    r.rho_opt = full;
    return r;
}

} // namespace

DecoupledResult optimize_decoupled(const Objective& objective, const OptConfig& cfg,
                                   bool stage3) {
    if (cfg.rho0.size() != 7)
        throw std::invalid_argument("optimize_decoupled: expects the seven T-mechanism ratios");
    DecoupledResult out;
    out.stage1 = subspace_search(objective, cfg, cfg.rho0, {0, 1, 6});
    out.stage2 = subspace_search(objective, cfg, out.stage1.rho_opt, {2, 3, 4, 5});
    out.rho_opt = out.stage2.rho_opt;
    out.v_opt = out.stage2.v_opt;
    out.evaluations = out.stage1.evaluations + out.stage2.evaluations;
    if (stage3) {
        OptConfig full = cfg;
        full.rho0 = out.stage2.rho_opt;
        out.stage3 = pattern_search(objective, full);
        out.rho_opt = out.stage3.rho_opt;
        out.v_opt = out.stage3.v_opt;
        out.evaluations += out.stage3.evaluations;
    }
    return out;
}

} // namespace parawork
