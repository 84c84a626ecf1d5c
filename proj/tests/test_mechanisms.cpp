#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <optional>
#include <random>

#include "parawork/homojac.hpp"
#include "parawork/mechanism.hpp"
#include "parawork/reciprocal.hpp"
#include "parawork/verify.hpp"

using namespace parawork;

namespace {

std::mt19937 rng(0x3d2f11);

double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Prs3Params table1_opt() { return Prs3Params{0.62, 1.0, 1.0, 0.0}; }

TmechParams tmech_unit() {
    TmechParams p;
    p.r_b = 45.0;
    return p;
}

std::optional<GeometryState> sample_feasible(const Mechanism& mech, double zlo, double zhi,
                                             double tilt) {
    for (int tries = 0; tries < 200; ++tries) {
        const PoseSpec pose{uniform(zlo, zhi), uniform(-tilt, tilt), uniform(-tilt, tilt)};
        Result<GeometryState> g = mech.solve(pose);
        if (!g) continue;
        const JacobianBundle b = build_jdh(mech, *g);
        if (!b.ok() || b.cond > 1e6) continue;
        return *g;
    }
    return std::nullopt;
}

PoseTrajectory random_traj(const Mechanism& mech, double zc, double z_amp, double tilt_amp) {
    for (int tries = 0; tries < 500; ++tries) {
        PoseTrajectory tr;
        tr.c[0] = {zc + uniform(-0.2, 0.2) * z_amp, uniform(-1, 1) * z_amp,
                   uniform(-1, 1) * z_amp, uniform(-1, 1) * z_amp};
        for (int c : {1, 2})
            tr.c[c] = {uniform(-0.3, 0.3) * tilt_amp, uniform(-1, 1) * tilt_amp,
                       uniform(-1, 1) * tilt_amp, uniform(-1, 1) * tilt_amp};
        bool ok = true;
        for (int k = 0; k <= 10 && ok; ++k) {
            const JacobianBundle b = build_jdh_at(mech, tr.at(k / 10.0));
            ok = b.ok() && b.cond < 1e5;
        }
        if (ok) return tr;
    }
    FAIL("no feasible trajectory found");
    return {};
}

// Joint twist of a unit rotation about `axis` through point `c`, expressed at
// the origin O' in [moment-pairing] order [w; v].
Screw6 joint_twist(const Vec3& axis, const Vec3& c, const Vec3& origin) {
    return Screw6{axis, axis.cross(origin - c), Ordering::AngularFirst};
}

double norm_inf6(const std::array<double, 6>& v) {
    double n = 0.0;
    for (double x : v) n = std::max(n, std::abs(x));
    return n;
}

} // namespace

// ---------------------------------------------------------------------------
// 3-PRS
// ---------------------------------------------------------------------------

TEST_CASE("prs3 symmetric poses have no parasitic motion")
{
    const Prs3Params p = table1_opt();
    for (double z : {0.3, 0.5, 0.8}) {
        auto g = prs3_solve({z, 0.0, 0.0}, p);
        REQUIRE(g.ok());
        CHECK(std::abs(g->x) < 1e-12);
        CHECK(std::abs(g->y) < 1e-12);
        CHECK(std::abs(g->yaw) < 1e-12);
        CHECK(g->limb[0].q == doctest::Approx(g->limb[1].q).epsilon(1e-12));
        CHECK(g->limb[1].q == doctest::Approx(g->limb[2].q).epsilon(1e-12));
    }
}

TEST_CASE("prs3 tilted solve satisfies plane and closure constraints")
{
    const Prs3Params p = table1_opt();
    auto g = prs3_solve({0.8, 0.2, 0.1}, p);
    REQUIRE(g.ok());
    for (int i = 0; i < 3; ++i) {
        const double xi = 2.0 * M_PI / 3.0 * i;
        const Vec3 n{-std::sin(xi), std::cos(xi), 0.0};
        CHECK(std::abs(n.dot(g->p + g->attach[i])) < 1e-10 * p.r_b); // limb plane
        CHECK(std::abs(g->limb[i].l2.norm() - p.l) < 1e-10 * p.r_b); // link length
    }
    CHECK(std::abs(g->x) > 1e-6); // a genuinely parasitic pose
}

TEST_CASE("prs3 unreachable pose is reported")
{
    Prs3Params p = table1_opt();
    p.l = 0.3; // short links cannot reach the plate circle
    CHECK(prs3_solve({2.0, 0.0, 0.0}, p).fail == Fail::Unreachable);
}

TEST_CASE("prs3 heave twist gives equal rates and sleeping constraints")
{
    const Prs3Params p = table1_opt();
    auto g = prs3_solve({0.8, 0.0, 0.0}, p);
    REQUIRE(g.ok());
    auto gt = prs3_gt(*g);
    REQUIRE(gt.ok());
    const double heave[6] = {0, 0, 1, 0, 0, 0};
    double rates[3], cons[3];
    for (int i = 0; i < 3; ++i) {
        rates[i] = 0.0;
        cons[i] = 0.0;
        for (int j = 0; j < 6; ++j) {
            rates[i] += (*gt)(i, j) * heave[j];
            cons[i] += (*gt)(i + 3, j) * heave[j];
        }
    }
    CHECK(rates[0] == doctest::Approx(rates[1]).epsilon(1e-12));
    CHECK(rates[1] == doctest::Approx(rates[2]).epsilon(1e-12));
    CHECK(std::abs(cons[0]) < 1e-14);
    CHECK(std::abs(cons[1]) < 1e-14);
    CHECK(std::abs(cons[2]) < 1e-14);
}

TEST_CASE("prs3 inverse identity and constraint compatibility at random poses")
{
    const Prs3Params p = table1_opt();
    const auto mech = make_prs3(p);
    int tested = 0;
    while (tested < 300) {
        auto g = sample_feasible(*mech, 0.2, 0.95, 0.35);
        REQUIRE(g.has_value());
        auto gt = prs3_gt(*g);
        REQUIRE(gt.ok());
        auto j = invert6(*gt);
        REQUIRE(j.ok());
        CHECK(((*gt) * (*j) - SmallMat::identity(6)).norm_inf() < 1e-9);

        // G_c^T (J_a qdot) = 0 for arbitrary joint rates.
        const SmallMat j_a = j->block(0, 0, 6, 3);
        const SmallMat gc = gt->block(3, 0, 3, 6);
        const SmallMat zero = gc * j_a;
        CHECK(zero.max_abs() < 1e-9);
        ++tested;
    }
}

TEST_CASE("prs3 actuator rates match finite differences")
{
    const Prs3Params p = table1_opt();
    const auto mech = make_prs3(p);
    for (int trial = 0; trial < 10; ++trial) {
        const PoseTrajectory tr = random_traj(*mech, 0.7, 0.12, 0.15);
        for (double t : {0.2, 0.5, 0.8}) {
            const auto fd_q = fd_joint_rates(*mech, tr, t);
            const auto fd_x = fd_twist(*mech, tr, t);
            REQUIRE(fd_q.ok());
            REQUIRE(fd_x.ok());
            auto g = mech->solve(tr.at(t));
            REQUIRE(g.ok());
            auto gt = mech->gt(*g);
            REQUIRE(gt.ok());
            const auto x = fd_x->raw();
            double scale = 1e-3;
            for (double r : *fd_q) scale = std::max(scale, std::abs(r));
            for (int i = 0; i < 3; ++i) {
                double predicted = 0.0;
                for (int j = 0; j < 6; ++j) predicted += (*gt)(i, j) * x[j];
                CHECK(std::abs(predicted - (*fd_q)[i]) < 1e-6 * scale);
            }
        }
    }
}

TEST_CASE("prs3 branch continuity along a path")
{
    const Prs3Params p = table1_opt();
    const auto mech = make_prs3(p);
    const PoseTrajectory tr = random_traj(*mech, 0.7, 0.15, 0.2);
    Result<GeometryState> prev = mech->solve(tr.at(0.0));
    REQUIRE(prev.ok());
    for (int k = 1; k <= 400; ++k) {
        Result<GeometryState> g = mech->solve(tr.at(k / 400.0), &prev.value);
        REQUIRE(g.ok());
        for (int i = 0; i < 3; ++i) CHECK(std::abs(g->limb[i].q - prev->limb[i].q) < 0.05);
        prev = g;
    }
}

// ---------------------------------------------------------------------------
// T-mechanism
// ---------------------------------------------------------------------------

TEST_CASE("tmech home geometry")
{
    const TmechParams p = tmech_unit();
    auto g = tmech_solve({60.0, 0.0, 0.0}, p);
    REQUIRE(g.ok());
    CHECK((g->attach[0] - Vec3{45, 0, 0}).norm() < 1e-12);
    CHECK((g->attach[2] - Vec3{-45, 0, 0}).norm() < 1e-12);
    CHECK((g->limb[1].tip - Vec3{0, -45, 60}).norm() < 1e-12);
    CHECK(g->phi == 0.0);
    // knees outward: limb 1 toward +x, limb 3 toward -x, limb 2 toward -y
    CHECK(g->limb[0].mid.x > p.r_b);
    CHECK(g->limb[2].mid.x < -p.r_b);
    CHECK(g->limb[1].mid.y < -p.r_b2());
}

TEST_CASE("tmech full-extension boundary")
{
    const TmechParams p = tmech_unit();
    CHECK(tmech_solve({p.z_max(), 0.0, 0.0}, p).ok());
    CHECK(tmech_solve({p.z_max() + 1e-9, 0.0, 0.0}, p).fail == Fail::Unreachable);
    // straight knees make the actuation rows blow up
    auto g = tmech_solve({p.z_max(), 0.0, 0.0}, p);
    CHECK(tmech_gt(*g).fail == Fail::SingularLimb);
}

TEST_CASE("tmech closure and planarity at tilted poses")
{
    TmechParams p = tmech_unit();
    p.rho = {2.0092, 1.7207, 2.2441, 1.9355, 1.5000, 0.8398, 3.000};
    auto g = tmech_solve({0.6 * p.z_max(), 0.3, 0.2}, p);
    REQUIRE(g.ok());
    CHECK(std::abs(g->attach[0].y) < 1e-14);
    CHECK(std::abs(g->attach[2].y) < 1e-14);
    for (int i : {0, 2}) {
        CHECK(std::abs(g->limb[i].l1.norm() - p.l11()) < 1e-10 * p.r_b);
        CHECK(std::abs(g->limb[i].l2.norm() - p.l21()) < 1e-10 * p.r_b);
        CHECK(std::abs(g->limb[i].mid.y) < 1e-12);
    }
    CHECK(std::abs(g->limb[1].l1.norm() - p.l12()) < 1e-10 * p.r_b);
    CHECK(std::abs(g->limb[1].l2.norm() - p.l22()) < 1e-10 * p.r_b);
    CHECK(std::abs(g->limb[1].mid.x) < 1e-12);
    CHECK(std::abs(g->limb[1].tip.x) < 1e-12);
    CHECK(std::abs(g->l32.norm() - p.l32()) < 1e-10 * p.r_b);
    // chain closes through the universal joint at O'
    CHECK((g->limb[1].tip + g->l32 - g->p).norm() < 1e-10 * p.r_b);
}

TEST_CASE("tmech home inverse Jacobian structure")
{
    const TmechParams p = tmech_unit();
    auto g = tmech_solve({60.0, 0.0, 0.0}, p);
    REQUIRE(g.ok());
    auto gt = tmech_gt(*g);
    REQUIRE(gt.ok());

    // row 5 pins v_x
    CHECK((*gt)(4, 0) == doctest::Approx(1.0));
    for (int j = 1; j < 6; ++j) CHECK(std::abs((*gt)(4, j)) < 1e-14);
    // rows 4/6: [y, a x y]
    CHECK((*gt)(3, 1) == doctest::Approx(1.0));
    CHECK((*gt)(3, 5) == doctest::Approx(45.0));
    CHECK((*gt)(5, 1) == doctest::Approx(1.0));
    CHECK((*gt)(5, 5) == doctest::Approx(-45.0));
    // row 2: pure psi-rate coupling k/den = 3/(2 sqrt(5)) at this height
    const double psi_gain = (*gt)(1, 3);
    CHECK(psi_gain == doctest::Approx(std::sqrt(0.45)));
    CHECK(std::abs((*gt)(1, 4)) < 1e-14);
    CHECK(std::abs((*gt)(1, 5)) < 1e-14);
    // mirrored limbs: equal heave gain with opposite rotation sense
    CHECK((*gt)(0, 2) == doctest::Approx(-(*gt)(2, 2)));
}

TEST_CASE("tmech inverse identity at many random feasible poses")
{
    const TmechParams p = tmech_unit();
    const auto mech = make_tmech(p);
    int tested = 0;
    while (tested < 1000) {
        auto g = sample_feasible(*mech, 0.15 * p.z_max(), 0.9 * p.z_max(), 0.45);
        REQUIRE(g.has_value());
        auto gt = tmech_gt(*g);
        REQUIRE(gt.ok());
        auto j = invert6(*gt);
        REQUIRE(j.ok());
        CHECK(((*gt) * (*j) - SmallMat::identity(6)).norm_inf() < 1e-9);
        const SmallMat gc = gt->block(3, 0, 3, 6);
        const SmallMat j_a = j->block(0, 0, 6, 3);
        CHECK((gc * j_a).max_abs() < 1e-9);
        ++tested;
    }
}

TEST_CASE("tmech constraint rows annihilate finite-difference twists")
{
    const TmechParams p = tmech_unit();
    const auto mech = make_tmech(p);
    for (int trial = 0; trial < 10; ++trial) {
        const PoseTrajectory tr = random_traj(*mech, 0.55 * p.z_max(), 0.1 * p.z_max(), 0.12);
        for (double t : {0.25, 0.5, 0.75}) {
            const auto fd_x = fd_twist(*mech, tr, t);
            REQUIRE(fd_x.ok());
            auto g = mech->solve(tr.at(t));
            auto gt = mech->gt(*g);
            REQUIRE(gt.ok());
            const auto x = fd_x->raw();
            for (int i = 3; i < 6; ++i) {
                double r = 0.0;
                for (int j = 0; j < 6; ++j) r += (*gt)(i, j) * x[j];
                CHECK(std::abs(r) < 1e-6 * p.r_b);
            }
        }
    }
}

TEST_CASE("tmech actuator rates match finite differences")
{
    const TmechParams p = tmech_unit();
    const auto mech = make_tmech(p);
    for (int trial = 0; trial < 10; ++trial) {
        const PoseTrajectory tr = random_traj(*mech, 0.55 * p.z_max(), 0.08 * p.z_max(), 0.12);
        for (double t : {0.2, 0.5, 0.8}) {
            const auto fd_q = fd_joint_rates(*mech, tr, t);
            const auto fd_x = fd_twist(*mech, tr, t);
            REQUIRE(fd_q.ok());
            REQUIRE(fd_x.ok());
            auto g = mech->solve(tr.at(t));
            auto gt = mech->gt(*g);
            REQUIRE(gt.ok());
            const auto x = fd_x->raw();
            double scale = 1e-3;
            for (double r : *fd_q) scale = std::max(scale, std::abs(r));
            for (int i = 0; i < 3; ++i) {
                double predicted = 0.0;
                for (int j = 0; j < 6; ++j) predicted += (*gt)(i, j) * x[j];
                CHECK(std::abs(predicted - (*fd_q)[i]) < 1e-6 * scale);
            }
        }
    }
}

TEST_CASE("tmech pure psi motion leaves limbs 1 and 3 still")
{
    const TmechParams p = tmech_unit();
    const auto mech = make_tmech(p);
    PoseTrajectory tr;
    tr.c[0] = {55.0, 0, 0, 0};
    tr.c[1] = {-0.1, 0.25, 0, 0}; // psi sweep only
    tr.c[2] = {0, 0, 0, 0};
    const auto fd_q = fd_joint_rates(*mech, tr, 0.5);
    REQUIRE(fd_q.ok());
    CHECK(std::abs((*fd_q)[0]) < 1e-9);
    CHECK(std::abs((*fd_q)[2]) < 1e-9);
    CHECK(std::abs((*fd_q)[1]) > 1e-3);
}

// ---------------------------------------------------------------------------
// reciprocal screws
// ---------------------------------------------------------------------------

TEST_CASE("rrs wrenches: structure, reciprocity, nullspace direction")
{
    const TmechParams p = tmech_unit();
    const auto mech = make_tmech(p);

    auto home = tmech_solve({60.0, 0.0, 0.0}, p);
    REQUIRE(home.ok());
    const LimbWrenches w_home = rrs_wrenches(*home, 0);
    CHECK((w_home.constraint.linear() - Vec3::unit_y()).norm() < 1e-14);

    for (int trial = 0; trial < 50; ++trial) {
        auto g = sample_feasible(*mech, 0.2 * p.z_max(), 0.85 * p.z_max(), 0.4);
        REQUIRE(g.has_value());
        for (int limb : {0, 2}) {
            const LimbWrenches w = rrs_wrenches(*g, limb);
            const LimbGeometry& lg = g->limb[limb];

            // reciprocity against the passive joint twists (knee + sphere)
            const Screw6 passive[4] = {
                joint_twist(lg.axis, lg.mid, g->p),
                joint_twist(Vec3::unit_x(), lg.tip, g->p),
                joint_twist(Vec3::unit_y(), lg.tip, g->p),
                joint_twist(Vec3::unit_z(), lg.tip, g->p),
            };
            const double wn = w.active.head.norm() + w.active.tail.norm();
            for (const Screw6& tw : passive) {
                const double tn = tw.head.norm() + tw.tail.norm() + 1e-300;
                CHECK(std::abs(pair(w.active, tw)) < 1e-12 * wn * tn);
            }
            // the constraint wrench is reciprocal to every joint including
            // the actuated one
            const Screw6 base = joint_twist(lg.axis, lg.base, g->p);
            const double cn = w.constraint.head.norm() + w.constraint.tail.norm();
            const double bn = base.head.norm() + base.tail.norm();
            CHECK(std::abs(pair(w.constraint, base)) < 1e-12 * cn * bn);

            // direction agrees with the nullspace oracle on the limb system
            const auto ns = nullspace_small(rrs_joint_system(*g, limb));
            REQUIRE(ns.size() == 1);
            const Vec3 dir{(*ns.begin())[3], (*ns.begin())[4], (*ns.begin())[5]};
            const Vec3 moment{(*ns.begin())[0], (*ns.begin())[1], (*ns.begin())[2]};
            CHECK(moment.norm() < 1e-10); // s_perp vanishes for the RRS limb
            CHECK(dir.normalized().cross(w.constraint.linear().normalized()).norm() < 1e-9);
        }
    }
}

TEST_CASE("reciprocal_5s0 closed form against the nullspace oracle")
{
    const TmechParams p = tmech_unit();
    const auto mech = make_tmech(p);
    for (int trial = 0; trial < 200; ++trial) {
        auto g = sample_feasible(*mech, 0.2 * p.z_max(), 0.85 * p.z_max(), 0.4);
        REQUIRE(g.has_value());
        const int limb = (trial % 2) ? 2 : 0;
        const auto screws = rrs_joint_screws(*g, limb);
        const auto dir = reciprocal_5s0(screws);
        REQUIRE(dir.ok());
        CHECK(dir->normalized().cross(g->limb[limb].axis).norm() < 1e-9);

        const auto ns = nullspace_small(rrs_joint_system(*g, limb));
        REQUIRE(ns.size() == 1);
        const Vec3 oracle{(*ns.begin())[3], (*ns.begin())[4], (*ns.begin())[5]};
        CHECK(dir->normalized().cross(oracle.normalized()).norm() < 1e-9);

        // homogeneity: scaling the moment arms leaves the direction alone
        auto scaled = screws;
        for (auto& s : scaled) s.tail = s.tail * 37.0;
        const auto dir2 = reciprocal_5s0(scaled);
        REQUIRE(dir2.ok());
        CHECK(dir->normalized().cross(dir2->normalized()).norm() < 1e-12);
    }
}

TEST_CASE("rrru wrenches and reciprocal_4s0_1sinf against the nullspace oracle")
{
    const TmechParams p = tmech_unit();
    const auto mech = make_tmech(p);

    auto home = tmech_solve({60.0, 0.0, 0.0}, p);
    REQUIRE(home.ok());
    CHECK(triple(Vec3::unit_x(), home->s42, home->s52) == doctest::Approx(1.0));

    for (int trial = 0; trial < 200; ++trial) {
        auto g = sample_feasible(*mech, 0.2 * p.z_max(), 0.85 * p.z_max(), 0.4);
        REQUIRE(g.has_value());
        const auto w = rrru_wrenches(*g);
        REQUIRE(w.ok());
        const LimbGeometry& lg = g->limb[1];

        // reciprocity against the passive columns: joints 2..5 and the
        // constraint direction
        const Screw6 passive[5] = {
            joint_twist(lg.axis, lg.mid, g->p),
            joint_twist(lg.axis, lg.tip, g->p),
            joint_twist(g->s42, g->p, g->p),
            joint_twist(g->s52, g->p, g->p),
            Screw6{Vec3::zero(), lg.axis, Ordering::AngularFirst},
        };
        const double wn = w->active.head.norm() + w->active.tail.norm();
        for (const Screw6& tw : passive) {
            const double tn = tw.head.norm() + tw.tail.norm() + 1e-300;
            CHECK(std::abs(pair(w->active, tw)) < 1e-12 * wn * tn);
        }

        // closed form of the 4$0-1$inf system
        const auto rec = reciprocal_4s0_1sinf(rrru_active_screws(*g));
        REQUIRE(rec.ok());
        const Vec3 s_par = rec->first, s_perp = rec->second;
        CHECK(s_par.normalized().cross(lg.l2.normalized()).norm() < 1e-9);
        CHECK(std::abs(s_par.normalized().dot(lg.axis)) < 1e-9); // fifth row

        const auto ns = nullspace_small(rrru_active_system(*g));
        REQUIRE(ns.size() == 1);
        const Vec3 o_m{(*ns.begin())[0], (*ns.begin())[1], (*ns.begin())[2]};
        const Vec3 o_d{(*ns.begin())[3], (*ns.begin())[4], (*ns.begin())[5]};
        CHECK(o_d.normalized().cross(s_par.normalized()).norm() < 1e-9);
        const double ratio = s_par.norm() / o_d.norm();
        const double sgn = s_par.normalized().dot(o_d.normalized()) > 0 ? 1.0 : -1.0;
        CHECK((o_m * (sgn * ratio) - s_perp).norm() < 1e-9 * (s_perp.norm() + 1e-300));

        // k of the wrench matches the nullspace-implied scale
        const Vec3 cross = g->s42.cross(g->s52);
        const double alpha = sgn * lg.l2.norm() / o_d.norm();
        const double k_implied = (o_m * alpha).dot(cross) / cross.dot(cross);
        CHECK(w->k == doctest::Approx(k_implied).epsilon(1e-9));
    }
}
