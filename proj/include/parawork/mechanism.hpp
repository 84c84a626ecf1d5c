#pragma once

#include <array>
#include <memory>

#include "parawork/result.hpp"
#include "parawork/screw.hpp"
#include "parawork/smallmat.hpp"
#include "parawork/vec3.hpp"

namespace parawork {

// Independent pose coordinates of a 1T2R plate: heave z, rotation psi about
// x, rotation theta about y. Angles in radians, z in the mechanism's length
// unit.
struct PoseSpec {
    double z = 0.0;
    double psi = 0.0;
    double theta = 0.0;
};

struct Prs3Params {
    double r_a = 0.5;  // moving-plate radius
    double r_b = 1.0;  // base radius, the fixed reference length
    double l = 1.0;    // link length, identical per limb
    double gamma = 0.0; // rail inclination from horizontal, [0, pi/2]
};

struct TmechParams {
    double r_b = 45.0;
    std::array<double, 7> rho{1, 1, 1, 1, 1, 1, 1};

    double l11() const { return rho[0] * r_b; } // = l13
    double l21() const { return rho[1] * r_b; } // = l23
    double l12() const { return rho[2] * r_b; }
    double l22() const { return rho[3] * r_b; }
    double l32() const { return rho[4] * r_b; }
    double r_b2() const { return rho[5] * r_b; }
    double r_a() const { return rho[6] * r_b; }
    double z_max() const { return l11() + l21(); } // full extension of limbs 1/3
};

struct LimbGeometry {
    Vec3 base; // joint on the base plate
    Vec3 mid;  // knee (revolute limbs) or slider position (3-PRS)
    Vec3 tip;  // distal joint: spherical center, or third revolute of limb 2
    Vec3 l1;   // base -> mid
    Vec3 l2;   // mid -> tip
    Vec3 axis; // first revolute axis (3-PRS: axis of the link revolute)
    Vec3 rail; // 3-PRS rail direction d_i (unit); unused otherwise
    double q = 0.0; // actuated joint value (angle or slider travel)
};

// Solved geometry for one pose. `attach[i]` is the fixed-frame vector from O'
// to limb i's representative plate point; these double as the point set of
// the homogeneous Jacobian.
struct GeometryState {
    PoseSpec pose;
    Vec3 p;            // O' in the fixed frame
    SmallMat rot{3, 3};
    double x = 0.0, y = 0.0, yaw = 0.0; // 3-PRS parasitic coordinates
    std::array<Vec3, 3> attach;
    std::array<LimbGeometry, 3> limb;

    // T-mechanism limb-2 extras
    Vec3 s42, s52; // universal joint axes (link side, plate side)
    Vec3 l32;      // link vector from the third revolute to O'
    double k = 0.0;  // moment scale of the limb-2 actuation wrench
    double phi = 0.0; // limb-2 distal link angle about x
};

enum class MechKind { Prs3, Tmech };

class Mechanism {
public:
    virtual ~Mechanism() = default;
    virtual MechKind kind() const = 0;

    // Position-level solve. `warm` carries the previous solution along a
    // continuous path so branch choices cannot flip.
    virtual Result<GeometryState> solve(const PoseSpec& pose,
                                        const GeometryState* warm = nullptr) const = 0;

    // Constraint-embedded 6x6 inverse Jacobian G^T in x_dot = [v; w] order:
    // rows 1-3 actuation, rows 4-6 structural constraints.
    virtual Result<SmallMat> gt(const GeometryState& g) const = 0;

    virtual double ref_length() const = 0;
    // Physical height corresponding to normalized z' = 1 (T-mechanism); the
    // 3-PRS grid runs over physical z directly.
    virtual double z_max() const = 0;
};

std::array<double, 3> joint_values(const GeometryState& g);

std::unique_ptr<Mechanism> make_prs3(const Prs3Params& p);
std::unique_ptr<Mechanism> make_tmech(const TmechParams& p);

// --- 3-PRS operations ---------------------------------------------------

Result<GeometryState> prs3_solve(const PoseSpec& pose, const Prs3Params& p,
                                 const GeometryState* warm = nullptr);
Result<SmallMat> prs3_gt(const GeometryState& g);

// --- T-mechanism operations ----------------------------------------------

Result<GeometryState> tmech_solve(const PoseSpec& pose, const TmechParams& p,
                                  const GeometryState* warm = nullptr);
Result<SmallMat> tmech_gt(const GeometryState& g);

} // namespace parawork
