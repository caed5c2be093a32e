#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "diffinc/piecewise.hpp"

namespace testsupport {

// Portable uniform double in [0, 1): top 53 bits of the generator output.
inline double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform_unit(rng);
}

inline std::vector<double> random_vector(std::mt19937_64& rng, size_t n, double lo, double hi) {
    std::vector<double> u(n);
    for (double& x : u) x = uniform_in(rng, lo, hi);
    return u;
}

// Unit direction in the Euclidean norm, via rejection from the cube.
inline std::vector<double> random_direction(std::mt19937_64& rng, size_t n) {
    while (true) {
        std::vector<double> u = random_vector(rng, n, -1.0, 1.0);
        double s = 0.0;
        for (double x : u) s += x * x;
        if (s < 1e-6 || s > 1.0) continue;
        const double inv = 1.0 / std::sqrt(s);
        for (double& x : u) x *= inv;
        return u;
    }
}

// Bounded quadratic bump: 0 below -1, t^2 on (-1, 1), 0 above 1.
// Jumps at +/-1; its potential is t^3/3 clamped to +/-1/3 outside.
inline diffinc::PiecewiseNonlinearity truncated_quadratic(bool declare_bounds = true) {
    using diffinc::Polynomial;
    std::vector<double> bp{-1.0, 1.0};
    std::vector<Polynomial> segs{Polynomial{{}}, Polynomial{{0.0, 0.0, 1.0}}, Polynomial{{}}};
    std::optional<diffinc::DeclaredBound> quad;
    std::optional<diffinc::DeclaredBound> lin;
    if (declare_bounds) {
        quad = diffinc::DeclaredBound{0.0, 1.0};
        lin = diffinc::DeclaredBound{0.0, 1.0};
    }
    return diffinc::PiecewiseNonlinearity(std::move(bp), std::move(segs), quad, lin);
}

// Two upward jumps: 0 below 0, 1 on (0, 1), 3 above 1.
inline diffinc::PiecewiseNonlinearity two_step() {
    using diffinc::Polynomial;
    return diffinc::PiecewiseNonlinearity({0.0, 1.0},
                                          {Polynomial{{}}, Polynomial{{1.0}}, Polynomial{{3.0}}},
                                          std::nullopt, std::nullopt);
}

} // namespace testsupport
