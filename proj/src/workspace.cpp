#include "parawork/workspace.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace parawork {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMaxTiltRadius = M_PI; // tilt angles beyond pi are meaningless

struct MarchResult {
    double psi = 0.0;
    double theta = 0.0;
    double cond = kInf;
};

// Radial search along direction eps: step outward by d_alpha while the gate
// holds, halve the step on exceedance, stop at th_boundary. The recorded
// boundary is the last probe that satisfied the gate; if none ever did the
// direction contributes zero radius.
template <class Eval, class Inside>
MarchResult radial_march(Eval&& eval, Inside&& inside, double eps, double d_alpha0,
                         double th_boundary) {
    MarchResult best;
    double psi = 0.0, theta = 0.0;
    double d_alpha = d_alpha0;
    bool found = false;
    while (d_alpha > th_boundary) {
        const double d_theta = d_alpha * std::sin(eps);
        const double d_psi = d_alpha * std::cos(eps);
        psi -= d_psi;
        theta -= d_theta;
        for (;;) {
            psi += d_psi;
            theta += d_theta;
            if (std::sqrt(psi * psi + theta * theta) > kMaxTiltRadius) break;
            const PoseEval ev = eval(psi, theta);
            if (!inside(ev)) break;
            best.psi = psi;
            best.theta = theta;
            best.cond = ev.cond;
            found = true;
        }
        psi -= d_psi;
        theta -= d_theta;
        d_alpha *= 0.5;
    }
    if (!found) return MarchResult{};
    return best;
}

using MarchEvaluator = std::function<PoseEval(double psi, double theta)>;
// Fresh evaluator per march; lets the mechanism path warm-start its position
// solve from the previous probe without sharing state across threads.
using MarchFactory = std::function<MarchEvaluator(double z)>;

WorkspaceBoundary run_search(const MarchFactory& factory, const GridConfig& cfg, int jobs) {
    WorkspaceBoundary b;
    b.n = cfg.n;
    b.m = cfg.m;
    b.dz = (cfg.zf - cfg.z0) / cfg.n;
    b.deps = 2.0 * M_PI / cfg.m;
    b.pts.assign(static_cast<std::size_t>(cfg.n + 1) * (cfg.m + 1), BoundaryPoint{});
    b.slice_area.assign(cfg.n + 1, 0.0);

    const double d_alpha0 = b.deps;

    auto do_slice = [&](int i) {
        const double z = cfg.z0 + i * b.dz;

        double det_gate = 0.0;
        if (cfg.mode == BoundaryMode::Det) {
            MarchEvaluator center = factory(z);
            const PoseEval ev = center(0.0, 0.0);
            det_gate = ev.reachable ? cfg.det_tol * std::abs(ev.det) : 0.0;
        }
        const auto inside = [&](const PoseEval& ev) {
            if (!ev.reachable) return false;
            if (cfg.mode == BoundaryMode::Det) return std::abs(ev.det) >= det_gate;
            return ev.cond < cfg.k_max;
        };

        double area = 0.0;
        for (int j = 0; j <= cfg.m; ++j) {
            const double eps = j * b.deps;
            MarchEvaluator eval = factory(z);
            const MarchResult r = radial_march(
                [&](double psi, double theta) { return eval(psi, theta); }, inside, eps,
                d_alpha0, cfg.th_boundary);
            BoundaryPoint& pt = b.pts[static_cast<std::size_t>(i) * (cfg.m + 1) + j];
            pt.z = z;
            pt.eps = eps;
            pt.psi = r.psi;
            pt.theta = r.theta;
            pt.cond = r.cond;
            area += 0.5 * b.deps * std::sqrt(r.psi * r.psi + r.theta * r.theta);
        }
        b.slice_area[i] = area;
    };

    if (jobs <= 1) {
        for (int i = 0; i <= cfg.n; ++i) do_slice(i);
    } else {
        std::atomic<int> next{0};
        auto worker = [&]() {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i > cfg.n) return;
                do_slice(i);
            }
        };
        std::vector<std::thread> pool;
        const int count = std::min(jobs, cfg.n + 1);
        pool.reserve(count);
        for (int t = 0; t < count; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    b.total_volume = volume(b);
    return b;
}

} // namespace

double volume(const WorkspaceBoundary& b) {
    double v = 0.0;
    for (int i = 0; i <= b.n; ++i)
        for (int j = 0; j <= b.m; ++j) {
            const BoundaryPoint& pt = b.at(i, j);
            v += 0.5 * b.deps * std::sqrt(pt.psi * pt.psi + pt.theta * pt.theta) * b.dz;
        }
    return v;
}

PoseEvaluator make_pose_evaluator(const Mechanism& mech, const GridConfig& cfg) {
    const double zscale = cfg.normalize_z ? mech.z_max() : 1.0;
    return [&mech, zscale](double z, double psi, double theta) -> PoseEval {
        const JacobianBundle b = build_jdh_at(mech, {z * zscale, psi, theta});
        return PoseEval{b.ok(), b.cond, b.det};
    };
}

WorkspaceBoundary boundary_search(const PoseEvaluator& eval, const GridConfig& cfg, int jobs) {
    MarchFactory factory = [&eval](double z) -> MarchEvaluator {
        return [&eval, z](double psi, double theta) { return eval(z, psi, theta); };
    };
    return run_search(factory, cfg, jobs);
}

WorkspaceBoundary boundary_search(const Mechanism& mech, const GridConfig& cfg, int jobs) {
    const double zscale = cfg.normalize_z ? mech.z_max() : 1.0;
    MarchFactory factory = [&mech, zscale](double z) -> MarchEvaluator {
        // Shared warm state across the probes of one march.
        auto warm = std::make_shared<Result<GeometryState>>(Fail::Unreachable);
        return [&mech, zscale, warm, z](double psi, double theta) -> PoseEval {
            const PoseSpec pose{z * zscale, psi, theta};
            Result<GeometryState> g = mech.solve(pose, warm->ok() ? &warm->value : nullptr);
            if (!g) return PoseEval{false, kInf, 0.0};
            *warm = g;
            const JacobianBundle b = build_jdh(mech, *g);
            return PoseEval{b.ok(), b.cond, b.det};
        };
    };
    return run_search(factory, cfg, jobs);
}

} // namespace parawork
