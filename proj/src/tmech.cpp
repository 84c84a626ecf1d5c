#include <cmath>

#include "parawork/mechanism.hpp"

namespace parawork {

namespace {

// The paper leaves open which universal-joint axis is fixed to link l32 and
// which to the plate ("toward the y- and z-axes" at home fits both). The
// finite-difference joint-rate oracle accepts either once the distal link
// angle phi is solved consistently with the chosen axes; this assignment
// (link-side y, plate-side z) also reproduces the published workspace
// volumes.
constexpr bool kLinkAxisIsY = true;

// Distal link angle of limb 2 about x. The universal-joint cross keeps the
// link-fixed axis perpendicular to the plate-fixed axis, which pins the link
// direction Rx(phi)*y_hat for a given (psi, theta); phi == psi whenever
// theta == 0.
double limb2_link_angle(double psi, double theta) {
    if (kLinkAxisIsY)
        return std::atan2(std::sin(psi), std::cos(theta) * std::cos(psi));
    return std::atan2(std::cos(theta) * std::sin(psi), std::cos(psi));
}

// Planar two-link IK in the plane with normal `n`. Knee branch selected by
// `sign`: knee = base + alpha*u + sign*h*(n x u).
bool planar_2r(const Vec3& base, const Vec3& target, double la, double lb,
               const Vec3& n, double sign, double scale, Vec3& knee) {
    const Vec3 d = target - base;
    const double dist = d.norm();
    if (dist < 1e-12 * scale) return false;
    if (dist > la + lb || dist < std::abs(la - lb)) return false;
    const Vec3 u = d / dist;
    const double alpha = (dist * dist + la * la - lb * lb) / (2.0 * dist);
    const double h2 = la * la - alpha * alpha;
    const double h = std::sqrt(std::max(h2, 0.0));
    knee = base + u * alpha + n.cross(u) * (sign * h);
    return true;
}

} // namespace

Result<GeometryState> tmech_solve(const PoseSpec& pose, const TmechParams& p,
                                  const GeometryState* /*warm*/) {
    if (!std::isfinite(pose.z) || !std::isfinite(pose.psi) || !std::isfinite(pose.theta))
        return Fail::Unreachable;

    GeometryState g;
    g.pose = pose;
    g.p = {0.0, 0.0, pose.z};
    g.rot = rot_y(pose.theta) * rot_x(pose.psi);
    g.phi = limb2_link_angle(pose.psi, pose.theta);

    const Vec3 yhat = Vec3::unit_y();
    const Vec3 xhat = Vec3::unit_x();

    // Limbs 1 and 3: RRS chains in the x-z plane, knees outward.
    const double branch_sign[3] = {1.0, 1.0, -1.0};
    const Vec3 bases[3] = {{p.r_b, 0.0, 0.0}, {0.0, -p.r_b2(), 0.0}, {-p.r_b, 0.0, 0.0}};
    g.attach[0] = mul3(g.rot, {p.r_a(), 0.0, 0.0});
    g.attach[2] = mul3(g.rot, {-p.r_a(), 0.0, 0.0});

    for (int i : {0, 2}) {
        LimbGeometry& lg = g.limb[i];
        lg.base = bases[i];
        lg.tip = g.p + g.attach[i];
        lg.axis = yhat;
        Vec3 knee;
        if (!planar_2r(lg.base, lg.tip, p.l11(), p.l21(), yhat, branch_sign[i], p.r_b, knee))
            return Fail::Unreachable;
        lg.mid = knee;
        lg.l1 = knee - lg.base;
        lg.l2 = lg.tip - knee;
        lg.q = std::atan2(lg.l1.x, lg.l1.z); // about +y
    }

    // Limb 2: RRR in the y-z plane up to the third revolute, then link l32 to
    // the universal joint at O'.
    const SmallMat rphi = rot_x(g.phi);
    g.l32 = mul3(rphi, {0.0, p.l32(), 0.0}); // third revolute -> O'
    g.attach[1] = -g.l32;
    {
        LimbGeometry& lg = g.limb[1];
        lg.base = bases[1];
        lg.tip = g.p + g.attach[1];
        lg.axis = xhat;
        Vec3 knee;
        if (!planar_2r(lg.base, lg.tip, p.l12(), p.l22(), xhat, 1.0, p.r_b, knee))
            return Fail::Unreachable;
        lg.mid = knee;
        lg.l1 = knee - lg.base;
        lg.l2 = lg.tip - knee;
        lg.q = std::atan2(lg.l1.z, lg.l1.y); // about +x
    }

    if (kLinkAxisIsY) {
        g.s42 = mul3(rphi, yhat);
        g.s52 = mul3(g.rot, Vec3::unit_z());
    } else {
        g.s42 = mul3(rphi, Vec3::unit_z());
        g.s52 = mul3(g.rot, yhat);
    }

    const double kden = triple(xhat, g.s42, g.s52);
    if (std::abs(kden) < 1e-12) return Fail::SingularUJoint;
    g.k = triple(xhat, g.limb[1].l2, g.l32) / kden;
    return g;
}

Result<SmallMat> tmech_gt(const GeometryState& g) {
    SmallMat gt(6, 6);
    for (int i : {0, 2}) {
        const LimbGeometry& lg = g.limb[i];
        const double den = lg.l2.dot(lg.axis.cross(lg.l1));
        if (std::abs(den) < 1e-12 * lg.l1.norm() * lg.l2.norm()) return Fail::SingularLimb;
        gt.set_row(i, lg.l2 / den, g.attach[i].cross(lg.l2) / den);
        gt.set_row(i + 3, lg.axis, g.attach[i].cross(lg.axis));
    }
    {
        const LimbGeometry& lg = g.limb[1];
        const double den = triple(lg.axis, lg.l1, lg.l2);
        if (std::abs(den) < 1e-12 * lg.l1.norm() * lg.l2.norm()) return Fail::SingularLimb;
        gt.set_row(1, lg.l2 / den, g.s42.cross(g.s52) * (g.k / den));
        gt.set_row(4, lg.axis, Vec3::zero());
    }
    return gt;
}

namespace {

class Tmech final : public Mechanism {
public:
    explicit Tmech(const TmechParams& p) : p_(p) {}
    MechKind kind() const override { return MechKind::Tmech; }
    Result<GeometryState> solve(const PoseSpec& pose, const GeometryState* warm) const override {
        return tmech_solve(pose, p_, warm);
    }
    Result<SmallMat> gt(const GeometryState& g) const override { return tmech_gt(g); }
    double ref_length() const override { return p_.r_b; }
    double z_max() const override { return p_.z_max(); }

private:
    TmechParams p_;
};

} // namespace

std::unique_ptr<Mechanism> make_tmech(const TmechParams& p) {
    return std::make_unique<Tmech>(p);
}

} // namespace parawork
