#pragma once

#include <array>
#include <string>

#include "parawork/mechanism.hpp"
#include "parawork/smallmat.hpp"

namespace parawork {

// Three non-collinear plate points given as fixed-frame offsets from O'.
struct PointSet {
    std::array<Vec3, 3> a;
};

// The nine 1T2R motion varieties. Three are describable by a single velocity
// component of each point; the other six need combined ("nominal") velocities
// and carry geometry in their selection matrix.
enum class MotionVariant {
    TxRxRy, TxRxRz, TxRyRz, TyRxRy, TyRxRz, TyRyRz, TzRxRy, TzRxRz, TzRyRz,
};

const char* variant_name(MotionVariant v);
bool variant_is_combination(MotionVariant v);

struct SelectionMatrix {
    SmallMat s{3, 9};
    MotionVariant variant = MotionVariant::TzRxRy;
};

// Stacked shifting map: rows of [I, -skew(a_i)] for the three points, acting
// on x_dot = [v; w].
SmallMat velocity_transition(const PointSet& points);

// Single-component selection (Tx Ry Rz / Ty Rx Rz / Tz Rx Ry). Throws
// std::invalid_argument for the six combination varieties.
SelectionMatrix selection_standard(MotionVariant v);

// Extended selection matrix: per row, a combination of two velocity
// components of a point pair whose coefficients cancel the undesired motions;
// rows are normalized so the desired translation has coefficient 1. For the
// three single-component varieties this degenerates to selection_standard.
Result<SelectionMatrix> selection_extended(MotionVariant v, const PointSet& points);

struct JacobianBundle {
    SmallMat gt{6, 6};
    SmallMat j{6, 6};
    SmallMat j_a{6, 3};
    SmallMat v_p{9, 6};
    SmallMat s{3, 9};
    SmallMat j_dh{3, 3};
    double cond = 0.0;
    double det = 0.0;
    Fail fail = Fail::None; // Unreachable / Singular* map to cond = +inf
    bool ok() const { return fail == Fail::None; }
};

PointSet representative_points(const GeometryState& g);

// Full pipeline for one solved pose: J = (G^T)^-1, J_a its first three
// columns, J_dh = S V_p J_a with the Tz Rx Ry selection.
JacobianBundle build_jdh(const Mechanism& mech, const GeometryState& g);

// Convenience: solve + build; failures yield a bundle with cond = +inf.
JacobianBundle build_jdh_at(const Mechanism& mech, const PoseSpec& pose,
                            const GeometryState* warm = nullptr);

} // namespace parawork
