#include "parawork/homojac.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace parawork {

const char* variant_name(MotionVariant v) {
    switch (v) {
        case MotionVariant::TxRxRy: return "TxRxRy";
        case MotionVariant::TxRxRz: return "TxRxRz";
        case MotionVariant::TxRyRz: return "TxRyRz";
        case MotionVariant::TyRxRy: return "TyRxRy";
        case MotionVariant::TyRxRz: return "TyRxRz";
        case MotionVariant::TyRyRz: return "TyRyRz";
        case MotionVariant::TzRxRy: return "TzRxRy";
        case MotionVariant::TzRxRz: return "TzRxRz";
        case MotionVariant::TzRyRz: return "TzRyRz";
    }
    return "?";
}

namespace {

struct VariantAxes {
    int t;       // desired translation axis
    int rot_a;   // desired rotation axes
    int rot_b;
};

VariantAxes axes_of(MotionVariant v) {
    switch (v) {
        case MotionVariant::TxRxRy: return {0, 0, 1};
        case MotionVariant::TxRxRz: return {0, 0, 2};
        case MotionVariant::TxRyRz: return {0, 1, 2};
        case MotionVariant::TyRxRy: return {1, 0, 1};
        case MotionVariant::TyRxRz: return {1, 0, 2};
        case MotionVariant::TyRyRz: return {1, 1, 2};
        case MotionVariant::TzRxRy: return {2, 0, 1};
        case MotionVariant::TzRxRz: return {2, 0, 2};
        case MotionVariant::TzRyRz: return {2, 1, 2};
    }
    return {2, 0, 1};
}

} // namespace

bool variant_is_combination(MotionVariant v) {
    const VariantAxes a = axes_of(v);
    return a.t == a.rot_a || a.t == a.rot_b; // rotation about the translation axis
}

SmallMat velocity_transition(const PointSet& points) {
    SmallMat vp(9, 6);
    const SmallMat eye = SmallMat::identity(3);
    for (int i = 0; i < 3; ++i) {
        vp.set_block(3 * i, 0, eye);
        vp.set_block(3 * i, 3, skew(points.a[i]) * (-1.0));
    }
    return vp;
}

SelectionMatrix selection_standard(MotionVariant v) {
    if (variant_is_combination(v))
        throw std::invalid_argument(std::string("selection_standard: variant ") + variant_name(v) +
                                    " needs combined components; use selection_extended");
    SelectionMatrix out;
    out.variant = v;
    const int t = axes_of(v).t;
    for (int i = 0; i < 3; ++i) out.s(i, 3 * i + t) = 1.0;
    return out;
}

Result<SelectionMatrix> selection_extended(MotionVariant v, const PointSet& points) {
    if (!variant_is_combination(v)) {
        return selection_standard(v); // single-component varieties need no geometry
    }
    const VariantAxes ax = axes_of(v);
    const int t = ax.t;
    const int o = (ax.rot_a == t) ? ax.rot_b : ax.rot_a; // the rotation carried by v_it
    const int u = 3 - t - o;                             // undesired rotation axis

    double scale = 0.0;
    for (const Vec3& a : points.a)
        scale = std::max({scale, std::abs(a.x), std::abs(a.y), std::abs(a.z)});

    SelectionMatrix out;
    out.variant = v;
    constexpr int pair_i[3] = {0, 1, 2};
    constexpr int pair_j[3] = {1, 2, 0};
    for (int r = 0; r < 3; ++r) {
        const int i = pair_i[r], j = pair_j[r];
        const double aio = points.a[i][o];
        const double ajo = points.a[j][o];
        const double den = ajo - aio;
        if (std::abs(den) < 1e-12 * std::max(scale, 1e-300)) return Fail::DegeneratePoints;
        // u-components with weights +-1 cancel v_u; t-component weights cancel
        // w_u and already give v_t a unit coefficient.
        out.s(r, 3 * i + u) = 1.0;
        out.s(r, 3 * j + u) = -1.0;
        out.s(r, 3 * i + t) = ajo / den;
        out.s(r, 3 * j + t) = -aio / den;
    }
    return out;
}

PointSet representative_points(const GeometryState& g) {
    return PointSet{g.attach};
}

JacobianBundle build_jdh(const Mechanism& mech, const GeometryState& g) {
    JacobianBundle b;
    b.v_p = velocity_transition(representative_points(g));
    b.s = selection_standard(MotionVariant::TzRxRy).s;

    Result<SmallMat> gt = mech.gt(g);
    if (!gt) {
        b.fail = gt.fail;
        b.cond = std::numeric_limits<double>::infinity();
        return b;
    }
    b.gt = *gt;
    Result<SmallMat> j = invert6(b.gt);
    if (!j) {
        b.fail = j.fail;
        b.cond = std::numeric_limits<double>::infinity();
        return b;
    }
    b.j = *j;
    b.j_a = b.j.block(0, 0, 6, 3); // constraint columns multiply a zero block
    b.j_dh = b.s * b.v_p * b.j_a;
    b.cond = cond2(b.j_dh);
    b.det = det3(b.j_dh);
    return b;
}

JacobianBundle build_jdh_at(const Mechanism& mech, const PoseSpec& pose,
                            const GeometryState* warm) {
    Result<GeometryState> g = mech.solve(pose, warm);
    if (!g) {
        JacobianBundle b;
        b.fail = g.fail;
        b.cond = std::numeric_limits<double>::infinity();
        return b;
    }
    return build_jdh(mech, *g);
}

} // namespace parawork
