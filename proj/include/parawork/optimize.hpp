#pragma once

#include <functional>
#include <vector>

#include "parawork/workspace.hpp"

namespace parawork {

struct OptConfig {
    std::vector<double> rho0;
    std::vector<double> lo, hi; // per-coordinate bounds
    double mesh0 = 1.0;
    double mesh_tol = 1e-3;
    double expand = 2.0;
    double contract = 0.5;
    long max_evals = 100000;
    bool cache = true;
};

struct TracePoint {
    int iteration = 0;
    long evaluations = 0;
    double mesh = 0.0;
    std::vector<double> rho;
    double value = 0.0;
};

struct OptResult {
    std::vector<double> rho_opt;
    double v_opt = 0.0;
    long evaluations = 0; // objective calls (cache hits excluded)
    int iterations = 0;
    bool budget_exhausted = false;
    std::vector<TracePoint> trace;
};

using Objective = std::function<double(const std::vector<double>&)>;

// Generalized pattern search, maximizing. Polls the 2d coordinate directions
// in the fixed order +e1, -e1, +e2, ... scaled by the mesh, moves to the
// first improving point, doubles the mesh on success and halves it on
// failure; polls are clamped to the bounds. Deterministic for a given config.
OptResult pattern_search(const Objective& objective, const OptConfig& cfg);

// rho -> workspace volume for one mechanism family. 3-PRS: rho = [r_a, l,
// gamma] with r_b = 1; T-mechanism: the seven length ratios, z grid
// normalized by the candidate's own z_max. Parameter sets with an empty
// workspace score 0.
Objective volume_objective(MechKind kind, const GridConfig& grid, double r_b = 1.0,
                           int jobs = 1);

OptResult optimize_full(const Objective& objective, const OptConfig& cfg);

// Two-phase driver for the T-mechanism's decoupled structure: first the
// limb-1/3 ratios (rho1, rho2, rho7), then the limb-2 group (rho3..rho6),
// optionally a final full-set polish from the combined optimum.
struct DecoupledResult {
    OptResult stage1; // over (rho1, rho2, rho7)
    OptResult stage2; // over (rho3, rho4, rho5, rho6)
    OptResult stage3; // over all seven (when enabled)
    std::vector<double> rho_opt;
    double v_opt = 0.0;
    long evaluations = 0;
};

DecoupledResult optimize_decoupled(const Objective& objective, const OptConfig& cfg,
                                   bool stage3);

} // namespace parawork
