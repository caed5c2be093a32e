#include "diffinc/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "diffinc/errors.hpp"

namespace diffinc {

namespace {

// Plain Cholesky on a scratch copy; returns false on a nonpositive pivot.
bool cholesky_succeeds(int n, std::vector<double> a) {
    for (int j = 0; j < n; ++j) {
        double d = a[static_cast<size_t>(j) * n + j];
        for (int k = 0; k < j; ++k) {
            const double l = a[static_cast<size_t>(j) * n + k];
            d -= l * l;
        }
        if (!(d > 0.0)) return false;
        const double dj = std::sqrt(d);
        a[static_cast<size_t>(j) * n + j] = dj;
        for (int i = j + 1; i < n; ++i) {
            double s = a[static_cast<size_t>(i) * n + j];
            for (int k = 0; k < j; ++k)
                s -= a[static_cast<size_t>(i) * n + k] * a[static_cast<size_t>(j) * n + k];
            a[static_cast<size_t>(i) * n + j] = s / dj;
        }
    }
    return true;
}

double frobenius(const std::vector<double>& a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
}

double off_diagonal_frobenius(int n, const std::vector<double>& a) {
    double s = 0.0;
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q) {
            const double v = a[static_cast<size_t>(p) * n + q];
            s += 2.0 * v * v;
        }
    return std::sqrt(s);
}

} // namespace

SpdMatrix::SpdMatrix(int order, std::vector<double> entries) : order_(order), entries_(std::move(entries)) {
    if (order_ < 1) throw OutOfRange("matrix order must be >= 1, got " + std::to_string(order_));
    if (entries_.size() != static_cast<size_t>(order_) * order_)
        throw DimensionMismatch("entry count " + std::to_string(entries_.size()) + " does not match order " +
                                std::to_string(order_));
    for (int k = 0; k < order_; ++k)
        for (int l = k + 1; l < order_; ++l)
            if (entries_[static_cast<size_t>(k) * order_ + l] != entries_[static_cast<size_t>(l) * order_ + k])
                throw NotSymmetric("entries (" + std::to_string(k) + "," + std::to_string(l) +
                                   ") and mirror differ");
    if (!cholesky_succeeds(order_, entries_))
        throw NotPositiveDefinite("symmetric factorization failed: matrix is not positive definite");
}

std::vector<double> SpdMatrix::multiply(std::span<const double> u) const {
    if (u.size() != static_cast<size_t>(order_))
        throw DimensionMismatch("vector length " + std::to_string(u.size()) + " does not match order " +
                                std::to_string(order_));
    std::vector<double> r(static_cast<size_t>(order_), 0.0);
    for (int k = 0; k < order_; ++k) {
        double s = 0.0;
        const double* row = entries_.data() + static_cast<size_t>(k) * order_;
        for (int l = 0; l < order_; ++l) s += row[l] * u[static_cast<size_t>(l)];
        r[static_cast<size_t>(k)] = s;
    }
    return r;
}

double SpdMatrix::norm_inf() const {
    double best = 0.0;
    for (int k = 0; k < order_; ++k) {
        double s = 0.0;
        for (int l = 0; l < order_; ++l) s += std::abs((*this)(k, l));
        best = std::max(best, s);
    }
    return best;
}

SpdMatrix build_tridiagonal(int T, double a, double b) {
    if (T < 2) throw OutOfRange("tridiagonal operator needs T >= 2, got " + std::to_string(T));
    if (!(a < 0.0)) throw InvalidSign("off-diagonal coefficient must satisfy a < 0");
    if (!(b > 0.0)) throw InvalidSign("diagonal coefficient must satisfy b > 0");
    const double c = std::cos(std::numbers::pi / (T + 1));
    if (!(c < -b / (2.0 * a)))
        throw AdmissibilityViolation("cos(pi/(T+1)) = " + std::to_string(c) +
                                     " is not below -b/(2a) = " + std::to_string(-b / (2.0 * a)));
    std::vector<double> e(static_cast<size_t>(T) * T, 0.0);
    for (int k = 0; k < T; ++k) {
        e[static_cast<size_t>(k) * T + k] = b;
        if (k + 1 < T) {
            e[static_cast<size_t>(k) * T + k + 1] = a;
            e[static_cast<size_t>(k + 1) * T + k] = a;
        }
    }
    return SpdMatrix(T, std::move(e));
}

SpdMatrix build_second_order(int T) {
    if (T < 1) throw OutOfRange("second difference operator needs T >= 1, got " + std::to_string(T));
    if (T == 1) return SpdMatrix(1, {2.0});
    return build_tridiagonal(T, -1.0, 2.0);
}

SpdMatrix build_fourth_order(int T) {
    if (T < 1) throw OutOfRange("fourth difference operator needs T >= 1, got " + std::to_string(T));
    std::vector<double> e(static_cast<size_t>(T) * T, 0.0);
    for (int k = 0; k < T; ++k)
        for (int l = 0; l < T; ++l) {
            const int d = std::abs(k - l);
            double v = 0.0;
            if (d == 0) v = 6.0;
            else if (d == 1) v = -4.0;
            else if (d == 2) v = 1.0;
            e[static_cast<size_t>(k) * T + l] = v;
        }
    return SpdMatrix(T, std::move(e));
}

SpdMatrix build_grid_laplacian(GridShape shape) {
    if (shape.m < 1 || shape.n < 1)
        throw OutOfRange("grid extents must be >= 1, got " + std::to_string(shape.m) + "x" +
                         std::to_string(shape.n));
    const int N = shape.m * shape.n;
    std::vector<double> e(static_cast<size_t>(N) * N, 0.0);
    for (int j = 1; j <= shape.n; ++j)
        for (int i = 1; i <= shape.m; ++i) {
            const int k = grid_index(i, j, shape) - 1;
            e[static_cast<size_t>(k) * N + k] = 4.0;
            const auto couple = [&](int ii, int jj) {
                if (ii < 1 || ii > shape.m || jj < 1 || jj > shape.n) return;
                const int l = grid_index(ii, jj, shape) - 1;
                e[static_cast<size_t>(k) * N + l] = -1.0;
            };
            couple(i - 1, j);
            couple(i + 1, j);
            couple(i, j - 1);
            couple(i, j + 1);
        }
    return SpdMatrix(N, std::move(e));
}

int grid_index(int i, int j, GridShape shape) {
    if (i < 1 || i > shape.m || j < 1 || j > shape.n)
        throw OutOfRange("grid cell (" + std::to_string(i) + "," + std::to_string(j) + ") outside " +
                         std::to_string(shape.m) + "x" + std::to_string(shape.n));
    return i + shape.m * (j - 1);
}

std::pair<int, int> grid_index_inverse(int k, GridShape shape) {
    if (k < 1 || k > shape.m * shape.n)
        throw OutOfRange("grid row " + std::to_string(k) + " outside 1.." +
                         std::to_string(shape.m * shape.n));
    const int j = (k - 1) / shape.m + 1;
    const int i = k - shape.m * (j - 1);
    return {i, j};
}

Spectrum spectrum(const SpdMatrix& mat) {
    const int n = mat.order();
    std::vector<double> a(mat.entries().begin(), mat.entries().end());
    const double target = 1e-14 * frobenius(a);

    int sweeps = 0;
    while (off_diagonal_frobenius(n, a) > target) {
        if (++sweeps > 100)
            throw ConvergenceFailure("Jacobi sweep cap of 100 reached before the off-diagonal target");
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                const double apq = a[static_cast<size_t>(p) * n + q];
                if (apq == 0.0) continue;
                const double app = a[static_cast<size_t>(p) * n + p];
                const double aqq = a[static_cast<size_t>(q) * n + q];
                const double theta = (aqq - app) / (2.0 * apq);
                double t;
                if (std::abs(theta) > 1e150) {
                    t = 1.0 / (2.0 * theta);
                } else {
                    t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                a[static_cast<size_t>(p) * n + p] = app - t * apq;
                a[static_cast<size_t>(q) * n + q] = aqq + t * apq;
                a[static_cast<size_t>(p) * n + q] = 0.0;
                a[static_cast<size_t>(q) * n + p] = 0.0;
                for (int r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    double& arp = a[static_cast<size_t>(r) * n + p];
                    double& arq = a[static_cast<size_t>(r) * n + q];
                    const double vp = arp;
                    const double vq = arq;
                    arp = vp - s * (vq + tau * vp);
                    arq = vq + s * (vp - tau * vq);
                    a[static_cast<size_t>(p) * n + r] = arp;
                    a[static_cast<size_t>(q) * n + r] = arq;
                }
            }
    }

    std::vector<double> ev(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) ev[static_cast<size_t>(k)] = a[static_cast<size_t>(k) * n + k];
    std::sort(ev.begin(), ev.end());
    return Spectrum{ev, ev.front(), ev.back()};
}

double tridiagonal_eigenvalue(int k, int T, double a, double b) {
    if (T < 2) throw OutOfRange("tridiagonal operator needs T >= 2, got " + std::to_string(T));
    if (!(a < 0.0)) throw InvalidSign("off-diagonal coefficient must satisfy a < 0");
    if (!(b > 0.0)) throw InvalidSign("diagonal coefficient must satisfy b > 0");
    if (k < 1 || k > T) throw OutOfRange("eigenvalue index " + std::to_string(k) + " outside 1.." + std::to_string(T));
    return b + 2.0 * a * std::cos(k * std::numbers::pi / (T + 1));
}

double ones_quadratic(const SpdMatrix& a) {
    double s = 0.0;
    for (double v : a.entries()) s += v;
    return s;
}

double quadratic_form(const SpdMatrix& a, std::span<const double> u) {
    if (u.size() != static_cast<size_t>(a.order()))
        throw DimensionMismatch("vector length " + std::to_string(u.size()) + " does not match order " +
                                std::to_string(a.order()));
    const std::vector<double> au = a.multiply(u);
    double s = 0.0;
    for (size_t k = 0; k < u.size(); ++k) s += u[k] * au[k];
    return s;
}

} // namespace diffinc
