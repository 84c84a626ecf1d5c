#pragma once

#include <array>

#include "parawork/vec3.hpp"

namespace parawork {

// Storage order of the two 3-blocks of a screw-like 6-vector. Twists appear
// both as $ = [w; v] (angular first) and x_dot = [v; w] (linear first);
// wrenches are kept in whatever reciprocal order pairs componentwise with the
// twist they act on.
enum class Ordering { AngularFirst, LinearFirst };

struct Screw6 {
    Vec3 head;
    Vec3 tail;
    Ordering ordering = Ordering::AngularFirst;

    Screw6() = default;
    Screw6(const Vec3& head_, const Vec3& tail_, Ordering ord) : head(head_), tail(tail_), ordering(ord) {}

    static Screw6 angular_linear(const Vec3& ang, const Vec3& lin, Ordering ord) {
        return ord == Ordering::AngularFirst ? Screw6{ang, lin, ord} : Screw6{lin, ang, ord};
    }

    Vec3 angular() const { return ordering == Ordering::AngularFirst ? head : tail; }
    Vec3 linear() const { return ordering == Ordering::AngularFirst ? tail : head; }

    std::array<double, 6> raw() const {
        return {head.x, head.y, head.z, tail.x, tail.y, tail.z};
    }
};

// Re-express a screw with the requested block order. Swaps the stored blocks
// iff the order changes; applying it twice returns the input.
inline Screw6 reorder(const Screw6& s, Ordering target) {
    if (s.ordering == target) return s;
    return Screw6{s.tail, s.head, target};
}

// Componentwise pairing of two consistently ordered 6-vectors. With a wrench
// stored in reciprocal coordinates this is the instantaneous power.
inline double pair(const Screw6& a, const Screw6& b) {
    return a.head.dot(b.head) + a.tail.dot(b.tail);
}

} // namespace parawork
