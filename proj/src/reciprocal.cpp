#include "parawork/reciprocal.hpp"

#include <cmath>

namespace parawork {

namespace {

constexpr Ordering kRecip = Ordering::AngularFirst; // [moment; direction]

Screw6 zero_pitch(const Vec3& s, const Vec3& r) {
    return Screw6{s, s.cross(r), kRecip}; // joint screw at a reference r away
}

} // namespace

LimbWrenches rrs_wrenches(const GeometryState& g, int limb) {
    const LimbGeometry& lg = g.limb[limb];
    const Vec3 a_s = -g.attach[limb]; // spherical joint -> O'
    LimbWrenches w;
    w.active = Screw6{lg.l2.cross(a_s), lg.l2, kRecip};
    w.constraint = Screw6{lg.axis.cross(a_s), lg.axis, kRecip};
    return w;
}

Result<RrruWrenches> rrru_wrenches(const GeometryState& g) {
    const LimbGeometry& lg = g.limb[1];
    const double den = triple(lg.axis, g.s42, g.s52);
    if (std::abs(den) < 1e-12) return Fail::SingularUJoint;
    RrruWrenches w;
    w.k = triple(lg.axis, lg.l2, g.l32) / den;
    w.active = Screw6{g.s42.cross(g.s52) * w.k, lg.l2, kRecip};
    w.constraint = Screw6{Vec3::zero(), lg.axis, kRecip};
    return w;
}

Result<Vec3> reciprocal_5s0(const std::array<Screw6, 5>& screws) {
    Vec3 s[5], m[5];
    for (int i = 0; i < 5; ++i) {
        s[i] = screws[i].angular();
        m[i] = screws[i].linear(); // equals p_5i x s_i at this reference
    }
    const double c1 = triple(s[4], s[3], s[2]);
    const double c2 = triple(s[4], s[2], s[0]);
    const double c3 = triple(s[4], s[3], s[0]);
    const double c4 = triple(s[4], s[2], s[1]);
    const double c5 = triple(s[4], s[3], s[4]); // identically zero
    const double c6 = triple(s[4], s[3], s[1]);

    double scale = 0.0;
    for (const Vec3& v : s) scale = std::max(scale, v.norm());
    const double tol = 1e-14 * scale * scale * scale;
    if (std::abs(c1) < tol && std::abs(c2) < tol && std::abs(c3) < tol &&
        std::abs(c4) < tol && std::abs(c5) < tol && std::abs(c6) < tol)
        return Fail::DegenerateSystem;

    const Vec3 dir = -c1 * m[1].cross(m[0]) + c2 * m[3].cross(m[1]) -
                     c3 * m[2].cross(m[1]) + c4 * m[3].cross(m[0]) -
                     c5 * m[3].cross(m[2]) + c6 * m[2].cross(m[0]);
    return dir;
}

Result<std::pair<Vec3, Vec3>> reciprocal_4s0_1sinf(const std::array<Screw6, 5>& screws) {
    // screws[0..3]: zero pitch (joints 2..5); screws[4]: infinite pitch, its
    // linear part is the translation direction.
    const Vec3 s2 = screws[0].angular(), m2 = screws[0].linear();
    const Vec3 s3 = screws[1].angular(), m3 = screws[1].linear();
    const Vec3 s4 = screws[2].angular(), m4 = screws[2].linear();
    const Vec3 s5 = screws[3].angular();
    const Vec3 t = screws[4].linear();

    const double c1 = triple(s5, s3, s2);
    const double c2 = triple(s5, s4, s2);
    const double c3 = triple(s5, s4, s3);
    double scale = std::max({s2.norm(), s3.norm(), s4.norm(), s5.norm()});
    const double tol = 1e-14 * scale * scale * scale;
    if (std::abs(c1) < tol && std::abs(c2) < tol && std::abs(c3) < tol)
        return Fail::DegenerateSystem;

    const Vec3 s_par = -c1 * m4.cross(t) + c2 * m3.cross(t) - c3 * m2.cross(t);

    const double den = triple(s3, s4, s5);
    if (std::abs(den) < tol) return Fail::DegenerateSystem;
    const double k = -m3.dot(s_par) / den;
    const Vec3 s_perp = s4.cross(s5) * k;
    return std::make_pair(s_par, s_perp);
}

std::array<Screw6, 5> rrs_joint_screws(const GeometryState& g, int limb) {
    const LimbGeometry& lg = g.limb[limb];
    const Vec3 r1 = lg.l1 + lg.l2; // joint 1 -> limb end
    return {zero_pitch(lg.axis, r1), zero_pitch(lg.axis, lg.l2),
            zero_pitch(Vec3::unit_x(), Vec3::zero()),
            zero_pitch(Vec3::unit_y(), Vec3::zero()),
            zero_pitch(Vec3::unit_z(), Vec3::zero())};
}

std::array<Screw6, 5> rrru_active_screws(const GeometryState& g) {
    const LimbGeometry& lg = g.limb[1];
    const Vec3 r22 = lg.l2 + g.l32; // knee -> O'
    return {zero_pitch(lg.axis, r22), zero_pitch(lg.axis, g.l32),
            zero_pitch(g.s42, Vec3::zero()), zero_pitch(g.s52, Vec3::zero()),
            Screw6{Vec3::zero(), lg.axis, kRecip}};
}

namespace {

SmallMat screws_to_system(const Screw6* screws, int n) {
    SmallMat a(n, 6);
    for (int i = 0; i < n; ++i) a.set_row(i, screws[i].angular(), screws[i].linear());
    return a;
}

} // namespace

SmallMat rrs_joint_system(const GeometryState& g, int limb) {
    const auto s = rrs_joint_screws(g, limb);
    return screws_to_system(s.data(), 5);
}

SmallMat rrru_active_system(const GeometryState& g) {
    const auto s = rrru_active_screws(g);
    return screws_to_system(s.data(), 5);
}

} // namespace parawork
