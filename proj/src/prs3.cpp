#include <cmath>

#include "parawork/mechanism.hpp"

namespace parawork {

std::array<double, 3> joint_values(const GeometryState& g) {
    return {g.limb[0].q, g.limb[1].q, g.limb[2].q};
}

namespace {

constexpr double kXi[3] = {0.0, 2.0 * M_PI / 3.0, 4.0 * M_PI / 3.0};

Vec3 radial(int i) { return {std::cos(kXi[i]), std::sin(kXi[i]), 0.0}; }
// Limb plane contains the z-axis and b_i; its normal is the horizontal
// tangent, which is also the axis of the link revolute joint.
Vec3 plane_normal(int i) { return {-std::sin(kXi[i]), std::cos(kXi[i]), 0.0}; }

} // namespace

// Position solve: the plate joint centers must stay in their limb planes,
// which pins the parasitic coordinates (x, y, yaw); the slider values follow
// from the per-limb closure quadratic.
Result<GeometryState> prs3_solve(const PoseSpec& pose, const Prs3Params& p,
                                 const GeometryState* warm) {
    if (!std::isfinite(pose.z) || !std::isfinite(pose.psi) || !std::isfinite(pose.theta))
        return Fail::Unreachable;

    const SmallMat ryx = rot_y(pose.theta) * rot_x(pose.psi);
    Vec3 aprime[3];
    for (int i = 0; i < 3; ++i) aprime[i] = radial(i) * p.r_a;

    double x = warm ? warm->x : 0.0;
    double y = warm ? warm->y : 0.0;
    double yaw = warm ? warm->yaw : 0.0;

    // Newton on F_i(x, y, yaw) = n_i . (p + R a_i') = 0 with
    // R = Rz(yaw) Ry(theta) Rx(psi).
    const double ftol = 1e-12 * std::max(p.r_b, std::abs(pose.z));
    SmallMat rot(3, 3);
    bool converged = false;
    for (int it = 0; it < 50; ++it) {
        rot = rot_z(yaw) * ryx;
        const Vec3 pos{x, y, pose.z};
        double f[3];
        SmallMat jac(3, 3);
        for (int i = 0; i < 3; ++i) {
            const Vec3 n = plane_normal(i);
            const Vec3 ai = mul3(rot, aprime[i]);
            f[i] = n.dot(pos + ai);
            jac(i, 0) = n.x;
            jac(i, 1) = n.y;
            jac(i, 2) = n.dot(Vec3::unit_z().cross(ai));
        }
        if (std::abs(f[0]) < ftol && std::abs(f[1]) < ftol && std::abs(f[2]) < ftol) {
            converged = true;
            break;
        }
        double rhs[3] = {-f[0], -f[1], -f[2]};
        double step[3];
        if (!solve3(jac, rhs, step)) return Fail::Unreachable;
        x += step[0];
        y += step[1];
        yaw += step[2];
        if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(yaw))
            return Fail::Unreachable;
    }
    if (!converged) return Fail::Unreachable;

    GeometryState g;
    g.pose = pose;
    g.x = x;
    g.y = y;
    g.yaw = yaw;
    g.rot = rot_z(yaw) * ryx;
    g.p = {x, y, pose.z};

    for (int i = 0; i < 3; ++i) {
        const Vec3 b = radial(i) * p.r_b;
        const Vec3 d = radial(i) * (-std::cos(p.gamma)) + Vec3::unit_z() * std::sin(p.gamma);
        const Vec3 ai = mul3(g.rot, aprime[i]);
        const Vec3 v = g.p + ai - b;

        // ||v - q d||^2 = l^2, with d unit.
        const double vd = v.dot(d);
        const double disc = vd * vd - v.dot(v) + p.l * p.l;
        if (disc < 0.0) return Fail::Unreachable;
        const double root = std::sqrt(disc);
        const double q_hi = vd + root;
        const double q_lo = vd - root;

        double q;
        if (warm) {
            const double prev = warm->limb[i].q;
            q = std::abs(q_hi - prev) <= std::abs(q_lo - prev) ? q_hi : q_lo;
        } else {
            // Sphere on the positive-z side of the slider; tie-break |q|.
            const double lz_hi = v.z - q_hi * d.z;
            const double lz_lo = v.z - q_lo * d.z;
            const bool hi_up = lz_hi > 0.0, lo_up = lz_lo > 0.0;
            if (hi_up != lo_up)
                q = hi_up ? q_hi : q_lo;
            else
                q = std::abs(q_hi) <= std::abs(q_lo) ? q_hi : q_lo;
        }

        LimbGeometry& lg = g.limb[i];
        lg.base = b;
        lg.rail = d;
        lg.q = q;
        lg.mid = b + d * q;
        lg.tip = g.p + ai;
        lg.l1 = lg.mid - b;
        lg.l2 = lg.tip - lg.mid;
        lg.axis = plane_normal(i);
        g.attach[i] = ai;
    }
    return g;
}

Result<SmallMat> prs3_gt(const GeometryState& g) {
    SmallMat gt(6, 6);
    for (int i = 0; i < 3; ++i) {
        const LimbGeometry& lg = g.limb[i];
        const Vec3 lhat = lg.l2.normalized();
        const double den = lhat.dot(lg.rail);
        if (std::abs(den) < 1e-12) return Fail::SingularLimb; // link orthogonal to rail
        gt.set_row(i, lhat / den, g.attach[i].cross(lhat) / den);
        gt.set_row(i + 3, lg.axis, g.attach[i].cross(lg.axis));
    }
    return gt;
}

namespace {

class Prs3 final : public Mechanism {
public:
    explicit Prs3(const Prs3Params& p) : p_(p) {}
    MechKind kind() const override { return MechKind::Prs3; }
    Result<GeometryState> solve(const PoseSpec& pose, const GeometryState* warm) const override {
        return prs3_solve(pose, p_, warm);
    }
    Result<SmallMat> gt(const GeometryState& g) const override { return prs3_gt(g); }
    double ref_length() const override { return p_.r_b; }
    double z_max() const override { return p_.l + p_.r_b; }

private:
    Prs3Params p_;
};

} // namespace

std::unique_ptr<Mechanism> make_prs3(const Prs3Params& p) {
    return std::make_unique<Prs3>(p);
}

} // namespace parawork
