#pragma once

#include <array>

#include "parawork/mechanism.hpp"
#include "parawork/screw.hpp"

namespace parawork {

// Smooth pose path on [0, 1]: one cubic per coordinate (z, psi, theta).
struct PoseTrajectory {
    // c[coord][power]: value = c0 + c1 t + c2 t^2 + c3 t^3
    std::array<std::array<double, 4>, 3> c{};

    PoseSpec at(double t) const;
    std::array<double, 3> rate(double t) const; // analytic (z', psi', theta')
};

// Central-difference plate twist [v; w] at O', linear part from the solved
// origin positions, angular part from the relative rotation R(t+h) R(t-h)^T.
Result<Screw6> fd_twist(const Mechanism& mech, const PoseTrajectory& traj, double t,
                        double h = 1e-6);

// Central differences of the actuated joint values. Fails with BranchFlip
// when the solve branch changes between the two samples.
Result<std::array<double, 3>> fd_joint_rates(const Mechanism& mech, const PoseTrajectory& traj,
                                             double t, double h = 1e-6);

// Central difference of the fixed-frame position of plate point `index`.
Result<Vec3> fd_point_velocity(const Mechanism& mech, const PoseTrajectory& traj, double t,
                               double h, int index);

} // namespace parawork
