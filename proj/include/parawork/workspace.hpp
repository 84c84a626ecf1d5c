#pragma once

#include <functional>
#include <vector>

#include "parawork/homojac.hpp"
#include "parawork/mechanism.hpp"

namespace parawork {

enum class BoundaryMode { Cond, Det };

struct GridConfig {
    double z0 = 0.0;
    double zf = 1.0;
    int n = 150;
    int m = 150;
    double k_max = 6.0; // may be +inf
    double th_boundary = 1e-4;
    BoundaryMode mode = BoundaryMode::Cond;
    double det_tol = 1e-9;    // relative to the slice-center |det| in det mode
    bool normalize_z = false; // grid over z' = z / z_max (T-mechanism)
};

struct BoundaryPoint {
    double z = 0.0;   // grid coordinate (normalized when normalize_z is on)
    double eps = 0.0;
    double psi = 0.0;
    double theta = 0.0;
    double cond = 0.0; // achieved at the recorded pose; +inf when nothing was feasible
};

struct WorkspaceBoundary {
    int n = 0, m = 0;
    double dz = 0.0;
    double deps = 0.0;
    std::vector<BoundaryPoint> pts;      // (n+1)*(m+1), index i*(m+1)+j
    std::vector<double> slice_area;     // per slice: sum_j (deps/2) * radius
    double total_volume = 0.0;

    const BoundaryPoint& at(int i, int j) const { return pts[static_cast<std::size_t>(i) * (m + 1) + j]; }
};

// One probe of the radial search: whether the pose solves at all, and the
// spectral data of its homogeneous Jacobian.
struct PoseEval {
    bool reachable = false;
    double cond = 0.0;
    double det = 0.0;
};

// Evaluation hook; (z, psi, theta) with z in grid coordinates. Must be safe
// to call concurrently from several slices.
using PoseEvaluator = std::function<PoseEval(double z, double psi, double theta)>;

// Discretized boundary determination: for each height slice and meridian
// direction, march outward in steps of d_alpha, halve the step whenever the
// gate is exceeded, and record the boundary once d_alpha falls below
// th_boundary. Slices of an infeasible region record psi = theta = 0.
WorkspaceBoundary boundary_search(const PoseEvaluator& eval, const GridConfig& cfg, int jobs = 1);
WorkspaceBoundary boundary_search(const Mechanism& mech, const GridConfig& cfg, int jobs = 1);

// Volume of Eq.-style double sum: V = sum_i sum_j (deps/2) sqrt(psi^2+theta^2) dz,
// accumulated in (i, j) lexicographic order for bit reproducibility.
double volume(const WorkspaceBoundary& b);

PoseEvaluator make_pose_evaluator(const Mechanism& mech, const GridConfig& cfg);

} // namespace parawork
