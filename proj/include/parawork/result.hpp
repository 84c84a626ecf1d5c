#pragma once

namespace parawork {

// Failure kinds that are normal control flow (a pose outside the reachable
// set, a singular configuration). Callers that build workspaces map all of
// them to an infinite condition number.
enum class Fail {
    None,
    Unreachable,
    SingularMatrix,
    SingularBlock,
    SingularLimb,
    SingularUJoint,
    DegenerateSystem,
    DegeneratePoints,
    BranchFlip,
};

const char* fail_name(Fail f);

template <class T>
struct Result {
    T value{};
    Fail fail = Fail::None;

    Result() = default;
    Result(T v) : value(static_cast<T&&>(v)) {}
    Result(Fail f) : fail(f) {}

    bool ok() const { return fail == Fail::None; }
    explicit operator bool() const { return ok(); }
    const T& operator*() const { return value; }
    T& operator*() { return value; }
    const T* operator->() const { return &value; }
};

} // namespace parawork
