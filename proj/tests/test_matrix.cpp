#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "diffinc/errors.hpp"
#include "diffinc/matrix.hpp"

using namespace diffinc;

namespace {

double uniform_unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Characteristic polynomial of a 3x3 symmetric matrix, evaluated at x.
// Independent of the iterative eigensolver: direct cofactor expansion.
double char3(const SpdMatrix& m, double x) {
    const double a = m(0, 0) - x, b = m(0, 1), c = m(0, 2);
    const double d = m(1, 1) - x, e = m(1, 2), f = m(2, 2) - x;
    return a * (d * f - e * e) - b * (b * f - e * c) + c * (b * e - d * c);
}

} // namespace

TEST_CASE("tridiagonal builder lays out the stencil") {
    const SpdMatrix a = build_tridiagonal(2, -1.0, 2.0);
    CHECK(a.order() == 2);
    CHECK(a(0, 0) == 2.0);
    CHECK(a(0, 1) == -1.0);
    CHECK(a(1, 0) == -1.0);
    CHECK(a(1, 1) == 2.0);
}

TEST_CASE("tridiagonal builder rejects bad coefficients") {
    CHECK_THROWS_AS(build_tridiagonal(2, -1.0, 0.5), AdmissibilityViolation); // cos(pi/3)=0.5 >= 0.25
    CHECK_THROWS_AS(build_tridiagonal(5, 0.0, 2.0), InvalidSign);
    CHECK_THROWS_AS(build_tridiagonal(5, 1.0, 2.0), InvalidSign);
    CHECK_THROWS_AS(build_tridiagonal(5, -1.0, 0.0), InvalidSign);
    CHECK_THROWS_AS(build_tridiagonal(5, -1.0, -2.0), InvalidSign);
    CHECK_THROWS_AS(build_tridiagonal(1, -1.0, 2.0), OutOfRange);
}

TEST_CASE("admissibility boundary is strict") {
    // T=3: cos(pi/4) = sqrt(2)/2; with a=-1 the condition is b > sqrt(2).
    CHECK_THROWS_AS(build_tridiagonal(3, -1.0, std::sqrt(2.0) * 0.999), AdmissibilityViolation);
    CHECK_NOTHROW(build_tridiagonal(3, -1.0, std::sqrt(2.0) * 1.001));
}

TEST_CASE("second difference operator") {
    const SpdMatrix one = build_second_order(1);
    CHECK(one.order() == 1);
    CHECK(one(0, 0) == 2.0);

    const SpdMatrix a = build_second_order(3);
    CHECK(a(0, 0) == 2.0);
    CHECK(a(1, 0) == -1.0);
    CHECK(a(2, 0) == 0.0);
    CHECK_THROWS_AS(build_second_order(0), OutOfRange);
}

TEST_CASE("fourth difference operator truncates the stencil at the boundary") {
    const SpdMatrix small = build_fourth_order(1);
    CHECK(small(0, 0) == 6.0);

    const SpdMatrix a = build_fourth_order(9);
    // First two rows written out; the rest follows the |k-l| stencil.
    const double row0[9] = {6, -4, 1, 0, 0, 0, 0, 0, 0};
    const double row1[9] = {-4, 6, -4, 1, 0, 0, 0, 0, 0};
    for (int l = 0; l < 9; ++l) {
        CHECK(a(0, l) == row0[l]);
        CHECK(a(1, l) == row1[l]);
    }
    for (int k = 0; k < 9; ++k)
        for (int l = 0; l < 9; ++l) {
            const int d = std::abs(k - l);
            const double want = d == 0 ? 6.0 : d == 1 ? -4.0 : d == 2 ? 1.0 : 0.0;
            CHECK(a(k, l) == want);
        }
}

TEST_CASE("fourth difference row sums at T=4") {
    const SpdMatrix a = build_fourth_order(4);
    const double want[4] = {3.0, -1.0, -1.0, 3.0};
    for (int k = 0; k < 4; ++k) {
        double s = 0.0;
        for (int l = 0; l < 4; ++l) s += a(k, l);
        CHECK(s == want[k]);
    }
    CHECK(ones_quadratic(a) == 4.0);
}

TEST_CASE("grid Laplacian on a 2x2 rectangle") {
    const SpdMatrix b = build_grid_laplacian({2, 2});
    const double want[4][4] = {
        {4, -1, -1, 0},
        {-1, 4, 0, -1},
        {-1, 0, 4, -1},
        {0, -1, -1, 4},
    };
    for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) CHECK(b(k, l) == want[k][l]);
}

TEST_CASE("grid Laplacian rows match an independent neighbor enumeration") {
    for (int m = 1; m <= 6; ++m)
        for (int n = 1; n <= 5; ++n) {
            const GridShape shape{m, n};
            const SpdMatrix b = build_grid_laplacian(shape);
            for (int k = 1; k <= m * n; ++k) {
                const auto [i, j] = grid_index_inverse(k, shape);
                for (int l = 1; l <= m * n; ++l) {
                    const auto [p, q] = grid_index_inverse(l, shape);
                    const int dist = std::abs(i - p) + std::abs(j - q);
                    const double want = (dist == 0) ? 4.0 : (dist == 1 && (i == p || j == q)) ? -1.0 : 0.0;
                    CHECK(b(k - 1, l - 1) == want);
                }
            }
        }
}

TEST_CASE("grid index bijection") {
    const GridShape shape{5, 3};
    CHECK(grid_index(1, 1, shape) == 1);
    CHECK(grid_index(3, 2, shape) == 8);
    CHECK(grid_index(5, 3, shape) == 15);
    CHECK(grid_index_inverse(8, shape) == std::pair<int, int>(3, 2));
    for (int k = 1; k <= 15; ++k) {
        const auto [i, j] = grid_index_inverse(k, shape);
        CHECK(grid_index(i, j, shape) == k);
    }
    CHECK_THROWS_AS(grid_index(0, 1, shape), OutOfRange);
    CHECK_THROWS_AS(grid_index(6, 1, shape), OutOfRange);
    CHECK_THROWS_AS(grid_index(1, 4, shape), OutOfRange);
    CHECK_THROWS_AS(grid_index_inverse(0, shape), OutOfRange);
    CHECK_THROWS_AS(grid_index_inverse(16, shape), OutOfRange);
}

TEST_CASE("constructor validates symmetry and positive definiteness") {
    CHECK_THROWS_AS(SpdMatrix(2, {1.0, 2.0, 2.0000001, 5.0}), NotSymmetric);
    CHECK_THROWS_AS(SpdMatrix(2, {1.0, 2.0, 2.0, 1.0}), NotPositiveDefinite); // eigenvalues -1, 3
    CHECK_THROWS_AS(SpdMatrix(2, {0.0, 0.0, 0.0, 1.0}), NotPositiveDefinite); // semidefinite
    CHECK_THROWS_AS(SpdMatrix(2, {1.0, 2.0, 3.0}), DimensionMismatch);
    CHECK_NOTHROW(SpdMatrix(2, {2.0, 1.0, 1.0, 2.0}));
}

TEST_CASE("spectrum of the identity") {
    const Spectrum s = spectrum(SpdMatrix(3, {1, 0, 0, 0, 1, 0, 0, 0, 1}));
    CHECK(s.eigenvalues.size() == 3);
    for (double v : s.eigenvalues) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.lambda_min == s.eigenvalues.front());
    CHECK(s.lambda_max == s.eigenvalues.back());
}

TEST_CASE("spectrum of the 3x3 second difference operator") {
    const Spectrum s = spectrum(build_second_order(3));
    const double want[3] = {2.0 - std::sqrt(2.0), 2.0, 2.0 + std::sqrt(2.0)};
    for (int k = 0; k < 3; ++k) CHECK(s.eigenvalues[k] == doctest::Approx(want[k]).epsilon(1e-13));
}

TEST_CASE("spectrum of the 3x3 fourth difference operator") {
    const SpdMatrix a = build_fourth_order(3);
    const Spectrum s = spectrum(a);
    // Characteristic polynomial x^3 - 18x^2 + 75x - 50 = (x - 5)(x^2 - 13x + 10).
    const double r = std::sqrt(129.0);
    const double want[3] = {(13.0 - r) / 2.0, 5.0, (13.0 + r) / 2.0};
    for (int k = 0; k < 3; ++k) {
        CHECK(s.eigenvalues[k] == doctest::Approx(want[k]).epsilon(1e-12));
        CHECK(std::abs(char3(a, s.eigenvalues[k])) < 1e-10 * 50.0);
    }
}

TEST_CASE("closed-form tridiagonal eigenvalues") {
    CHECK(tridiagonal_eigenvalue(1, 5, -1.0, 2.0) == doctest::Approx(2.0 - std::sqrt(3.0)).epsilon(1e-15));
    // T=2, (a,b)=(-1,2): eigenvalues 1 and 3.
    CHECK(tridiagonal_eigenvalue(1, 2, -1.0, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(tridiagonal_eigenvalue(2, 2, -1.0, 2.0) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK_THROWS_AS(tridiagonal_eigenvalue(0, 5, -1.0, 2.0), OutOfRange);
    CHECK_THROWS_AS(tridiagonal_eigenvalue(6, 5, -1.0, 2.0), OutOfRange);
    CHECK_THROWS_AS(tridiagonal_eigenvalue(1, 5, 0.0, 2.0), InvalidSign);
}

TEST_CASE("closed form matches the iterative spectrum") {
    for (const auto& [a, b] : {std::pair{-1.0, 2.0}, std::pair{-0.5, 2.0}, std::pair{-2.0, 5.0}}) {
        for (int T : {2, 3, 7, 12}) {
            const Spectrum s = spectrum(build_tridiagonal(T, a, b));
            for (int k = 1; k <= T; ++k) {
                const double closed = tridiagonal_eigenvalue(k, T, a, b);
                CHECK(std::abs(s.eigenvalues[static_cast<size_t>(k - 1)] - closed) < 1e-11);
            }
        }
    }
}

TEST_CASE("aggregate entry sums in closed form") {
    for (const auto& [a, b] : {std::pair{-1.0, 2.0}, std::pair{-0.5, 2.0}, std::pair{-2.0, 5.0}}) {
        for (int T : {2, 5, 17}) {
            CHECK(ones_quadratic(build_tridiagonal(T, a, b)) == b * T + 2.0 * a * (T - 1));
        }
    }
    for (int T : {2, 3, 4, 9, 14}) CHECK(ones_quadratic(build_fourth_order(T)) == 4.0);
    for (int m : {1, 2, 3, 5})
        for (int n : {1, 2, 4}) CHECK(ones_quadratic(build_grid_laplacian({m, n})) == 2.0 * (m + n));
    // Entry sum equals the quadratic form on the all-ones vector.
    const SpdMatrix g = build_grid_laplacian({3, 2});
    const std::vector<double> ones(6, 1.0);
    CHECK(ones_quadratic(g) == doctest::Approx(quadratic_form(g, ones)).epsilon(1e-15));
    CHECK(ones_quadratic(g) == 10.0);
}

TEST_CASE("quadratic form basics") {
    const SpdMatrix a = build_second_order(2);
    const std::vector<double> u{1.0, 1.0};
    CHECK(quadratic_form(a, u) == 2.0);
    const std::vector<double> z{0.0, 0.0};
    CHECK(quadratic_form(a, z) == 0.0);
    const std::vector<double> bad{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(quadratic_form(a, bad), DimensionMismatch);
}

TEST_CASE("spectral sandwich and sup-norm embedding") {
    std::mt19937_64 rng(7);
    const SpdMatrix mats[] = {build_second_order(5), build_fourth_order(6), build_grid_laplacian({3, 3}),
                              build_tridiagonal(8, -0.5, 2.0)};
    for (const SpdMatrix& a : mats) {
        const Spectrum s = spectrum(a);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> u(static_cast<size_t>(a.order()));
            for (double& x : u) x = -5.0 + 10.0 * uniform_unit(rng);
            double norm2 = 0.0, norm_inf = 0.0;
            for (double x : u) {
                norm2 += x * x;
                norm_inf = std::max(norm_inf, std::abs(x));
            }
            const double q = quadratic_form(a, u);
            CHECK(q >= s.lambda_min * norm2 - 1e-9 * std::max(1.0, q));
            CHECK(q <= s.lambda_max * norm2 + 1e-9 * std::max(1.0, std::abs(s.lambda_max) * norm2));
            CHECK(norm_inf <= std::sqrt(q / s.lambda_min) + 1e-9);
        }
    }
}

TEST_CASE("spectrum is deterministic") {
    const SpdMatrix a = build_grid_laplacian({4, 3});
    const Spectrum s1 = spectrum(a);
    const Spectrum s2 = spectrum(a);
    for (size_t k = 0; k < s1.eigenvalues.size(); ++k) CHECK(s1.eigenvalues[k] == s2.eigenvalues[k]);
}
