#include "parawork/smallmat.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace parawork {

const char* fail_name(Fail f) {
    switch (f) {
        case Fail::None: return "none";
        case Fail::Unreachable: return "unreachable";
        case Fail::SingularMatrix: return "singular-matrix";
        case Fail::SingularBlock: return "singular-block";
        case Fail::SingularLimb: return "singular-limb";
        case Fail::SingularUJoint: return "singular-u-joint";
        case Fail::DegenerateSystem: return "degenerate-system";
        case Fail::DegeneratePoints: return "degenerate-points";
        case Fail::BranchFlip: return "branch-flip";
    }
    return "unknown";
}

SmallMat::SmallMat(int rows, int cols) : rows_(rows), cols_(cols) {
    assert(rows >= 0 && rows <= kMaxDim && cols >= 0 && cols <= kMaxDim);
    a_.fill(0.0);
}

SmallMat SmallMat::identity(int n) {
    SmallMat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

SmallMat SmallMat::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const int r = static_cast<int>(rows.size());
    const int c = r > 0 ? static_cast<int>(rows.begin()->size()) : 0;
    SmallMat m(r, c);
    int i = 0;
    for (const auto& row : rows) {
        assert(static_cast<int>(row.size()) == c);
        int j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

SmallMat SmallMat::operator*(const SmallMat& b) const {
    assert(cols_ == b.rows_);
    SmallMat out(rows_, b.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const double aik = (*this)(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

SmallMat SmallMat::operator*(double k) const {
    SmallMat out(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j) * k;
    return out;
}

SmallMat SmallMat::operator+(const SmallMat& b) const {
    assert(rows_ == b.rows_ && cols_ == b.cols_);
    SmallMat out(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j) + b(i, j);
    return out;
}

SmallMat SmallMat::operator-(const SmallMat& b) const {
    assert(rows_ == b.rows_ && cols_ == b.cols_);
    SmallMat out(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j) - b(i, j);
    return out;
}

SmallMat SmallMat::transposed() const {
    SmallMat out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

double SmallMat::norm_inf() const {
    double best = 0.0;
    for (int i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (int j = 0; j < cols_; ++j) s += std::abs((*this)(i, j));
        best = std::max(best, s);
    }
    return best;
}

double SmallMat::max_abs() const {
    double best = 0.0;
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) best = std::max(best, std::abs((*this)(i, j)));
    return best;
}

bool SmallMat::finite() const {
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if (!std::isfinite((*this)(i, j))) return false;
    return true;
}

SmallMat SmallMat::block(int i0, int j0, int r, int c) const {
    assert(i0 + r <= rows_ && j0 + c <= cols_);
    SmallMat out(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) out(i, j) = (*this)(i0 + i, j0 + j);
    return out;
}

void SmallMat::set_block(int i0, int j0, const SmallMat& b) {
    assert(i0 + b.rows_ <= rows_ && j0 + b.cols_ <= cols_);
    for (int i = 0; i < b.rows_; ++i)
        for (int j = 0; j < b.cols_; ++j) (*this)(i0 + i, j0 + j) = b(i, j);
}

void SmallMat::set_row(int i, const Vec3& head, const Vec3& tail) {
    assert(cols_ == 6);
    (*this)(i, 0) = head.x;
    (*this)(i, 1) = head.y;
    (*this)(i, 2) = head.z;
    (*this)(i, 3) = tail.x;
    (*this)(i, 4) = tail.y;
    (*this)(i, 5) = tail.z;
}

SmallMat skew(const Vec3& a) {
    SmallMat m(3, 3);
    m(0, 1) = -a.z; m(0, 2) = a.y;
    m(1, 0) = a.z;  m(1, 2) = -a.x;
    m(2, 0) = -a.y; m(2, 1) = a.x;
    return m;
}

SmallMat rot_x(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return SmallMat::from_rows({{1, 0, 0}, {0, c, -s}, {0, s, c}});
}

SmallMat rot_y(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return SmallMat::from_rows({{c, 0, s}, {0, 1, 0}, {-s, 0, c}});
}

SmallMat rot_z(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return SmallMat::from_rows({{c, -s, 0}, {s, c, 0}, {0, 0, 1}});
}

Vec3 mul3(const SmallMat& m, const Vec3& v) {
    assert(m.rows() == 3 && m.cols() == 3);
    return {m(0, 0) * v.x + m(0, 1) * v.y + m(0, 2) * v.z,
            m(1, 0) * v.x + m(1, 1) * v.y + m(1, 2) * v.z,
            m(2, 0) * v.x + m(2, 1) * v.y + m(2, 2) * v.z};
}

Vec3 rotation_vector(const SmallMat& r) {
    assert(r.rows() == 3 && r.cols() == 3);
    const Vec3 v{0.5 * (r(2, 1) - r(1, 2)),
                 0.5 * (r(0, 2) - r(2, 0)),
                 0.5 * (r(1, 0) - r(0, 1))};
    const double s = v.norm();                              // sin(theta)
    const double c = 0.5 * (r(0, 0) + r(1, 1) + r(2, 2) - 1.0); // cos(theta)
    const double theta = std::atan2(s, c);
    if (s < 1e-12) return v; // theta ~ sin(theta) to machine precision
    return v * (theta / s);
}

namespace {

// LU decomposition with partial pivoting, in place. Returns the determinant
// (0.0 when a pivot vanishes exactly) and fills the permutation.
double lu_decompose(SmallMat& a, int n, int piv[]) {
    double det = 1.0;
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
        piv[k] = p;
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            det = -det;
        }
        const double pivot = a(k, k);
        det *= pivot;
        if (pivot == 0.0) return 0.0;
        for (int i = k + 1; i < n; ++i) {
            const double f = a(i, k) / pivot;
            a(i, k) = f;
            for (int j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return det;
}

void lu_solve_inplace(const SmallMat& lu, int n, const int piv[], double* x) {
    // The stored multipliers are the final, fully permuted L, so the whole
    // permutation must hit the right-hand side before the triangular solves.
    for (int k = 0; k < n; ++k)
        if (piv[k] != k) std::swap(x[k], x[piv[k]]);
    for (int k = 0; k < n; ++k)
        for (int i = k + 1; i < n; ++i) x[i] -= lu(i, k) * x[k];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[i] -= lu(i, j) * x[j];
        x[i] /= lu(i, i);
    }
}

Result<SmallMat> invert_n(const SmallMat& m, int n, Fail on_singular) {
    SmallMat lu = m;
    int piv[SmallMat::kMaxDim];
    const double det = lu_decompose(lu, n, piv);
    // Relative singularity gate against the Hadamard bound prod ||row_i||,
    // which stays meaningful when rows carry different physical units (the
    // constraint-embedded matrices mix 1/length, 1 and length entries).
    double tol = 1e-12;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += m(i, j) * m(i, j);
        tol *= std::sqrt(row);
    }
    if (!(std::abs(det) > tol)) return on_singular;

    SmallMat inv(n, n);
    double col[SmallMat::kMaxDim];
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) col[i] = (i == j) ? 1.0 : 0.0;
        lu_solve_inplace(lu, n, piv, col);
        for (int i = 0; i < n; ++i) inv(i, j) = col[i];
    }

    // One Newton step X <- X (2I - M X) sharpens the residual M*X - I.
    SmallMat e = SmallMat::identity(n) * 2.0 - m * inv;
    inv = inv * e;
    if (!inv.finite()) return on_singular;
    return inv;
}

// Eigenvalues of a symmetric 3x3, ascending. Closed-form trigonometric
// solution followed by a Newton polish of each root on the characteristic
// polynomial.
std::array<double, 3> sym_eigen3(const SmallMat& b) {
    const double p1 = b(0, 1) * b(0, 1) + b(0, 2) * b(0, 2) + b(1, 2) * b(1, 2);
    std::array<double, 3> lam;
    if (p1 == 0.0) {
        lam = {b(0, 0), b(1, 1), b(2, 2)};
        std::sort(lam.begin(), lam.end());
        return lam;
    }
    const double q = (b(0, 0) + b(1, 1) + b(2, 2)) / 3.0;
    const double p2 = (b(0, 0) - q) * (b(0, 0) - q) + (b(1, 1) - q) * (b(1, 1) - q) +
                      (b(2, 2) - q) * (b(2, 2) - q) + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    SmallMat c = b;
    for (int i = 0; i < 3; ++i) c(i, i) -= q;
    c = c * (1.0 / p);
    double r = det3(c) / 2.0;
    r = std::clamp(r, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    lam[2] = q + 2.0 * p * std::cos(phi);
    lam[0] = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
    lam[1] = 3.0 * q - lam[0] - lam[2];
    std::sort(lam.begin(), lam.end());
    return lam;
}

} // namespace

Result<SmallMat> invert6(const SmallMat& gt) {
    assert(gt.rows() == 6 && gt.cols() == 6);
    return invert_n(gt, 6, Fail::SingularMatrix);
}

Result<SmallMat> block_invert(const SmallMat& gt) {
    assert(gt.rows() == 6 && gt.cols() == 6);
    const SmallMat a = gt.block(0, 0, 3, 3);
    const SmallMat b = gt.block(0, 3, 3, 3);
    const SmallMat c = gt.block(3, 0, 3, 3);
    const SmallMat d = gt.block(3, 3, 3, 3);

    Result<SmallMat> ainv = invert_n(a, 3, Fail::SingularBlock);
    if (!ainv) return Fail::SingularBlock;
    const SmallMat schur = d - c * (*ainv) * b;
    Result<SmallMat> sinv = invert_n(schur, 3, Fail::SingularBlock);
    if (!sinv) return Fail::SingularBlock;

    const SmallMat j21 = (*sinv) * c * (*ainv) * (-1.0);
    const SmallMat j11 = (*ainv) + (*ainv) * b * (*sinv) * c * (*ainv);
    const SmallMat j12 = (*ainv) * b * (*sinv) * (-1.0);

    SmallMat j(6, 6);
    j.set_block(0, 0, j11);
    j.set_block(0, 3, j12);
    j.set_block(3, 0, j21);
    j.set_block(3, 3, *sinv);
    return j;
}

double cond2(const SmallMat& m) {
    const int f = m.rows();
    if (f != m.cols() || (f != 2 && f != 3))
        throw std::invalid_argument("cond2: matrix must be 2x2 or 3x3");
    if (!m.finite()) return std::numeric_limits<double>::infinity();

    // The cancelled cubic/quadratic root loses relative accuracy on the small
    // eigenvalue once cond^2 approaches 1/eps, so sigma_min is recovered from
    // the exact product identity prod(sigma) = |det M| instead.
    const SmallMat b = m.transposed() * m;
    double smax, smin;
    if (f == 2) {
        const double tr = b(0, 0) + b(1, 1);
        const double disc2 = 0.25 * tr * tr - (b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0));
        const double hi = 0.5 * tr + std::sqrt(std::max(disc2, 0.0));
        smax = std::sqrt(std::max(hi, 0.0));
        const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        smin = smax > 0.0 ? std::abs(det) / smax : 0.0;
    } else {
        const auto lam = sym_eigen3(b);
        smax = std::sqrt(std::max(lam[2], 0.0));
        const double smid = std::sqrt(std::max(lam[1], 0.0));
        const double prod = smax * smid;
        smin = prod > 0.0 ? std::abs(det3(m)) / prod : 0.0;
    }
    if (smin < 1e-300) return std::numeric_limits<double>::infinity();
    return std::max(smax / smin, 1.0);
}

double det3(const SmallMat& m) {
    assert(m.rows() == 3 && m.cols() == 3);
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

std::vector<Vec6> nullspace_small(const SmallMat& a) {
    const int m = a.rows(), n = a.cols();
    assert(m <= 6 && n <= 6);
    SmallMat r = a;
    const double tol = 1e-10 * std::max(a.norm_inf(), 1e-300);

    int pivot_col[6];
    bool is_pivot[6] = {false, false, false, false, false, false};
    int rank = 0;
    for (int step = 0; step < m && rank < n; ++step) {
        // Full pivot over the remaining submatrix (column-pivoted on top of
        // the usual row search; these systems are tiny).
        int pi = -1, pj = -1;
        double best = tol;
        for (int i = rank; i < m; ++i)
            for (int j = 0; j < n; ++j) {
                if (is_pivot[j]) continue;
                if (std::abs(r(i, j)) > best) {
                    best = std::abs(r(i, j));
                    pi = i;
                    pj = j;
                }
            }
        if (pi < 0) break;
        if (pi != rank)
            for (int j = 0; j < n; ++j) std::swap(r(rank, j), r(pi, j));
        const double pivot = r(rank, pj);
        for (int j = 0; j < n; ++j) r(rank, j) /= pivot;
        for (int i = 0; i < m; ++i) {
            if (i == rank) continue;
            const double f = r(i, pj);
            if (f == 0.0) continue;
            for (int j = 0; j < n; ++j) r(i, j) -= f * r(rank, j);
        }
        pivot_col[rank] = pj;
        is_pivot[pj] = true;
        ++rank;
    }

    std::vector<Vec6> basis;
    for (int j = 0; j < n; ++j) {
        if (is_pivot[j]) continue;
        Vec6 v{};
        v[j] = 1.0;
        for (int k = 0; k < rank; ++k) v[pivot_col[k]] = -r(k, j);
        basis.push_back(v);
    }

    // Modified Gram-Schmidt, run twice.
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t i = 0; i < basis.size(); ++i) {
            for (std::size_t k = 0; k < i; ++k) {
                double dot = 0.0;
                for (int c = 0; c < n; ++c) dot += basis[i][c] * basis[k][c];
                for (int c = 0; c < n; ++c) basis[i][c] -= dot * basis[k][c];
            }
            double nrm = 0.0;
            for (int c = 0; c < n; ++c) nrm += basis[i][c] * basis[i][c];
            nrm = std::sqrt(nrm);
            for (int c = 0; c < n; ++c) basis[i][c] /= nrm;
        }
    }
    return basis;
}

bool solve3(const SmallMat& a, const double b[3], double x[3]) {
    SmallMat lu = a;
    int piv[SmallMat::kMaxDim];
    const double det = lu_decompose(lu, 3, piv);
    const double norm = a.norm_inf();
    if (!(std::abs(det) > 1e-14 * norm * norm * norm)) return false;
    x[0] = b[0]; x[1] = b[1]; x[2] = b[2];
    lu_solve_inplace(lu, 3, piv, x);
    return true;
}

} // namespace parawork
