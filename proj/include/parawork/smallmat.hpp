#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "parawork/result.hpp"
#include "parawork/vec3.hpp"

namespace parawork {

// Dense row-major matrix with dimensions fixed at construction, at most 9x9.
// Everything this project inverts or decomposes is 6x6 or smaller, so the
// storage is a flat stack array and all algorithms favor stability over speed.
class SmallMat {
public:
    static constexpr int kMaxDim = 9;

    SmallMat() : rows_(0), cols_(0) { a_.fill(0.0); }
    SmallMat(int rows, int cols);

    static SmallMat identity(int n);
    static SmallMat from_rows(std::initializer_list<std::initializer_list<double>> rows);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

    SmallMat operator*(const SmallMat& b) const;
    SmallMat operator*(double k) const;
    SmallMat operator+(const SmallMat& b) const;
    SmallMat operator-(const SmallMat& b) const;
    SmallMat transposed() const;

    // Max absolute row sum.
    double norm_inf() const;
    // Largest |entry|.
    double max_abs() const;
    bool finite() const;

    SmallMat block(int i0, int j0, int r, int c) const;
    void set_block(int i0, int j0, const SmallMat& b);
    void set_row(int i, const Vec3& head, const Vec3& tail); // 6-wide rows

private:
    int rows_, cols_;
    std::array<double, kMaxDim * kMaxDim> a_;
};

using Vec6 = std::array<double, 6>;

// --- screw / rotation helpers -----------------------------------------------

// 3x3 skew-symmetric matrix of a: skew(a) * b == a x b.
SmallMat skew(const Vec3& a);

SmallMat rot_x(double angle);
SmallMat rot_y(double angle);
SmallMat rot_z(double angle);

Vec3 mul3(const SmallMat& m, const Vec3& v); // 3x3 times vector

// Rotation vector (axis * angle) of a rotation matrix. Accurate for the small
// rotations produced by finite differencing; handles angles up to pi.
Vec3 rotation_vector(const SmallMat& r);

// --- factorizations and spectra ----------------------------------------------

// Inverse of a 6x6 matrix by partially pivoted elimination with one Newton
// refinement pass. Fails with SingularMatrix when |det| <= 1e-12 * ||A||_inf^6,
// a relative test so mm-vs-m scaling does not move the threshold.
Result<SmallMat> invert6(const SmallMat& gt);

// Inverse of a 6x6 matrix through its 2x2 partition into 3x3 blocks
//   [ A  B ]        using the Schur complement S = D - C A^-1 B.
//   [ C  D ]
// Fails with SingularBlock when A (or S) is singular even though the full
// matrix may be invertible; callers fall back to invert6.
Result<SmallMat> block_invert(const SmallMat& gt);

// 2-norm condition number sigma_max / sigma_min for 2x2 and 3x3 matrices,
// via the analytic eigenvalues of M^T M (closed-form quadratic/cubic with a
// Newton polish). Returns +inf when sigma_min underflows; never throws for
// finite input.
double cond2(const SmallMat& m);

double det3(const SmallMat& m);

// Orthonormal basis of the nullspace {x : A x = 0} for A with <= 6 columns
// and m <= 6 rows. Column-pivoted elimination, pivot tolerance relative to
// ||A||_inf. Empty when A has full column rank.
std::vector<Vec6> nullspace_small(const SmallMat& a);

// Solve a 3x3 system in place; returns false when the pivot collapses.
bool solve3(const SmallMat& a, const double b[3], double x[3]);

} // namespace parawork
