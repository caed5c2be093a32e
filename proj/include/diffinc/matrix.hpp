#pragma once

#include <span>
#include <vector>

namespace diffinc {

/// Dense symmetric positive definite matrix of small-to-moderate order.
///
/// Construction validates symmetry (bit equality of mirrored entries) and
/// positive definiteness (a Cholesky factorization of a copy must succeed);
/// a failing input raises instead of producing an unusable operator.
class SpdMatrix {
  public:
    SpdMatrix(int order, std::vector<double> entries);

    int order() const { return order_; }

    /// Entry in row k, column l, zero-based.
    double operator()(int k, int l) const { return entries_[static_cast<size_t>(k) * order_ + l]; }

    /// Row-major entries, size order*order.
    std::span<const double> entries() const { return entries_; }

    /// Matrix-vector product A*u.
    std::vector<double> multiply(std::span<const double> u) const;

    /// Max absolute row sum.
    double norm_inf() const;

  private:
    int order_;
    std::vector<double> entries_;
};

/// Eigenvalues of a symmetric matrix, ascending.
struct Spectrum {
    std::vector<double> eigenvalues;
    double lambda_min;
    double lambda_max;
};

/// Rectangular grid extent; m is the fast index bound, n the slow one.
struct GridShape {
    int m;
    int n;
};

/// Symmetric tridiagonal operator with constant diagonal b > 0 and off-diagonal a < 0.
/// Requires T >= 2 and cos(pi/(T+1)) < -b/(2a), which is exactly positive definiteness.
SpdMatrix build_tridiagonal(int T, double a, double b);

/// Three-point second difference operator: tridiagonal with a = -1, b = 2. Accepts T >= 1.
SpdMatrix build_second_order(int T);

/// Five-point fourth difference operator with stencil (1, -4, 6, -4, 1),
/// truncated at the boundary rows. Accepts T >= 1.
SpdMatrix build_fourth_order(int T);

/// Five-point grid Laplacian on an m-by-n rectangle, diagonal 4, neighbors -1,
/// ordered by the index bijection of grid_index. Accepts m, n >= 1.
SpdMatrix build_grid_laplacian(GridShape shape);

/// Bijection (i, j) -> i + m*(j - 1) from grid cells to 1..m*n. One-based on both sides.
int grid_index(int i, int j, GridShape shape);

/// Inverse of grid_index; returns the one-based cell (i, j) of the one-based row k.
std::pair<int, int> grid_index_inverse(int k, GridShape shape);

/// Full eigenvalue set by cyclic Jacobi rotations.
///
/// Sweeps until the off-diagonal Frobenius norm falls below 1e-14 times the
/// Frobenius norm of the input, with a hard cap of 100 sweeps (ConvergenceFailure
/// beyond the cap). Deterministic: identical input yields identical output.
Spectrum spectrum(const SpdMatrix& a);

/// k-th smallest eigenvalue of build_tridiagonal(T, a, b) in closed form:
/// b + 2a*cos(k*pi/(T+1)), ascending in k because a < 0. k is one-based.
double tridiagonal_eigenvalue(int k, int T, double a, double b);

/// Sum of all entries, i.e. the quadratic form on the all-ones vector.
double ones_quadratic(const SpdMatrix& a);

/// u^T A u.
double quadratic_form(const SpdMatrix& a, std::span<const double> u);

} // namespace diffinc
