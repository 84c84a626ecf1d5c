#pragma once

#include <array>
#include <utility>

#include "parawork/mechanism.hpp"
#include "parawork/screw.hpp"
#include "parawork/smallmat.hpp"

namespace parawork {

// Manipulator-level wrenches of an RRS limb (limbs 1/3 of the T-mechanism),
// in reciprocal coordinates pairing with twists $ = [w; v]: head = moment
// about O', tail = line direction.
struct LimbWrenches {
    Screw6 active;
    Screw6 constraint;
};

// limb is 0 or 2.
LimbWrenches rrs_wrenches(const GeometryState& g, int limb);

struct RrruWrenches {
    Screw6 active;
    Screw6 constraint;
    double k = 0.0;
};

Result<RrruWrenches> rrru_wrenches(const GeometryState& g);

// Direction vector of the screw reciprocal to five zero-pitch screws, from
// the closed-form six-term expansion. Screws are expressed at a reference
// point on the fifth axis, so each linear part equals p_5i x s_i.
Result<Vec3> reciprocal_5s0(const std::array<Screw6, 5>& screws);

// Direction and moment of the screw reciprocal to four zero-pitch screws plus
// one infinite-pitch screw (the last entry; its angular part is zero and its
// linear part the translation direction). Same reference-point convention.
Result<std::pair<Vec3, Vec3>> reciprocal_4s0_1sinf(const std::array<Screw6, 5>& screws);

// Joint-screw systems feeding the nullspace oracle: rows [s^T, (s x r)^T]
// acting on [s_perp; s_par].
SmallMat rrs_joint_system(const GeometryState& g, int limb);    // 5x6, limbs 1/3
SmallMat rrru_active_system(const GeometryState& g);            // 5x6, limb 2 minus its base joint

// The same systems as screw arrays for the closed-form operations.
std::array<Screw6, 5> rrs_joint_screws(const GeometryState& g, int limb);
std::array<Screw6, 5> rrru_active_screws(const GeometryState& g);

} // namespace parawork
