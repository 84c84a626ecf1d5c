#include "parawork/verify.hpp"

#include <cmath>

namespace parawork {

PoseSpec PoseTrajectory::at(double t) const {
    auto cubic = [t](const std::array<double, 4>& a) {
        return ((a[3] * t + a[2]) * t + a[1]) * t + a[0];
    };
    return {cubic(c[0]), cubic(c[1]), cubic(c[2])};
}

std::array<double, 3> PoseTrajectory::rate(double t) const {
    auto deriv = [t](const std::array<double, 4>& a) {
        return (3.0 * a[3] * t + 2.0 * a[2]) * t + a[1];
    };
    return {deriv(c[0]), deriv(c[1]), deriv(c[2])};
}

namespace {

struct SamplePair {
    GeometryState lo, hi;
};

Result<SamplePair> solve_pair(const Mechanism& mech, const PoseTrajectory& traj, double t,
                              double h) {
    Result<GeometryState> mid = mech.solve(traj.at(t));
    if (!mid) return mid.fail;
    Result<GeometryState> lo = mech.solve(traj.at(t - h), &mid.value);
    if (!lo) return lo.fail;
    Result<GeometryState> hi = mech.solve(traj.at(t + h), &mid.value);
    if (!hi) return hi.fail;
    return SamplePair{*lo, *hi};
}

} // namespace

Result<Screw6> fd_twist(const Mechanism& mech, const PoseTrajectory& traj, double t, double h) {
    Result<SamplePair> s = solve_pair(mech, traj, t, h);
    if (!s) return s.fail;
    const Vec3 v = (s->hi.p - s->lo.p) / (2.0 * h);
    const SmallMat dr = s->hi.rot * s->lo.rot.transposed();
    const Vec3 w = rotation_vector(dr) / (2.0 * h);
    return Screw6::angular_linear(w, v, Ordering::LinearFirst);
}

Result<std::array<double, 3>> fd_joint_rates(const Mechanism& mech, const PoseTrajectory& traj,
                                             double t, double h) {
    Result<SamplePair> s = solve_pair(mech, traj, t, h);
    if (!s) return s.fail;
    const auto qlo = joint_values(s->lo);
    const auto qhi = joint_values(s->hi);
    std::array<double, 3> rates{};
    for (int i = 0; i < 3; ++i) {
        const double dq = qhi[i] - qlo[i];
        // A revolute value jumping by ~pi between samples 2h apart means the
        // solve landed on another branch, not a fast joint.
        if (std::abs(dq) > 1.0) return Fail::BranchFlip;
        rates[i] = dq / (2.0 * h);
    }
    return rates;
}

Result<Vec3> fd_point_velocity(const Mechanism& mech, const PoseTrajectory& traj, double t,
                               double h, int index) {
    Result<SamplePair> s = solve_pair(mech, traj, t, h);
    if (!s) return s.fail;
    const Vec3 plo = s->lo.p + s->lo.attach[index];
    const Vec3 phi = s->hi.p + s->hi.attach[index];
    return (phi - plo) / (2.0 * h);
}

} // namespace parawork
