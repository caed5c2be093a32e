#include "diffinc/hypotheses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "diffinc/errors.hpp"

namespace diffinc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kConsistencyTol = 1e-12;

void check_family(const SpdMatrix& a, std::span<const PiecewiseNonlinearity> gs) {
    if (gs.size() != static_cast<size_t>(a.order()))
        throw DimensionMismatch("need one nonlinearity per component: got " + std::to_string(gs.size()) +
                                " for order " + std::to_string(a.order()));
}

// Strict positivity of the segment polynomial on the open interval (lo, hi).
// Fails when a stationary point or midpoint inside is <= 0, or when an
// endpoint value is < 0 (continuity then forces negative values inside).
// An endpoint value of exactly 0 is allowed: the requirement is interior.
bool positive_on_open(const Polynomial& p, double lo, double hi) {
    if (!(lo < hi)) return true;
    if (p(lo) < 0.0 || p(hi) < 0.0) return false;
    if (p(0.5 * (lo + hi)) <= 0.0) return false;
    for (double c : p.derivative().roots_in(lo, hi)) {
        if (c > lo && c < hi && p(c) <= 0.0) return false;
    }
    // Interior roots (even multiplicity included) violate strict positivity.
    for (double r : p.roots_in(lo, hi)) {
        const double margin = 1e-11 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
        if (r > lo + margin && r < hi - margin) return false;
    }
    return true;
}

// Strict positivity of h on (0, delta) and (-delta, 0), piece by piece.
bool value_positive_near_zero(const PiecewiseNonlinearity& h, double delta) {
    const auto& bp = h.breakpoints();
    const auto& segs = h.segments();
    for (size_t i = 0; i < segs.size(); ++i) {
        const double seg_lo = i == 0 ? -kInf : bp[i - 1];
        const double seg_hi = i == bp.size() ? kInf : bp[i];
        for (const auto& [win_lo, win_hi] : {std::pair{0.0, delta}, std::pair{-delta, 0.0}}) {
            const double lo = std::max(seg_lo, win_lo);
            const double hi = std::min(seg_hi, win_hi);
            if (lo < hi && !positive_on_open(segs[i], lo, hi)) return false;
        }
    }
    return true;
}

// Valuation of the segment owning (0, eps): value/t -> 0 iff the constant and
// linear coefficients both vanish (a zero polynomial passes vacuously).
bool vanishes_superlinearly_at_zero(const PiecewiseNonlinearity& h) {
    const auto& c = h.segments()[h.segment_index(0.0)].coefficients();
    if (c.size() >= 1 && c[0] != 0.0) return false;
    if (c.size() >= 2 && c[1] != 0.0) return false;
    return true;
}

} // namespace

HypothesisReport check_g1(const SpdMatrix& a, std::span<const PiecewiseNonlinearity> gs, double gamma,
                          double delta) {
    check_family(a, gs);
    if (!(gamma > 0.0) || !(delta > 0.0)) throw OutOfRange("window parameters must be positive");

    const double lam1 = spectrum(a).lambda_min;
    const double ones = ones_quadratic(a);

    double sup_sum = 0.0;
    double pot_sum = 0.0;
    for (const auto& g : gs) {
        sup_sum += g.sup_potential(gamma);
        pot_sum += g.potential(delta);
    }

    HypothesisReport r;
    r.gamma = gamma;
    r.delta = delta;
    r.delta_lower_bound = std::sqrt(lam1 / ones) * gamma;
    r.g1_lhs = sup_sum / (gamma * gamma);
    r.g1_rhs = (lam1 / ones) * pot_sum / (delta * delta);

    bool declared = true;
    for (const auto& g : gs)
        if (!g.declared_quadratic_bound()) declared = false;
    r.g2_margin = declared ? check_g2(a, gs) : kNaN;

    r.lambda_interval.left = pot_sum > 0.0 ? (ones / 2.0) * delta * delta / pot_sum : kInf;
    r.lambda_interval.right = sup_sum > 0.0 ? (lam1 / 2.0) * gamma * gamma / sup_sum : kInf;

    r.satisfied = (delta > r.delta_lower_bound) && (r.g1_lhs < r.g1_rhs) && (r.g2_margin > 0.0);
    return r;
}

double check_g2(const SpdMatrix& a, std::span<const PiecewiseNonlinearity> gs) {
    check_family(a, gs);
    const double lam1 = spectrum(a).lambda_min;
    double worst = -kInf;
    for (const auto& g : gs) worst = std::max(worst, g.asymptotic_quadratic_bound());
    return lam1 / 2.0 - worst;
}

OpenInterval lambda_interval(const SpdMatrix& a, std::span<const PiecewiseNonlinearity> gs, double gamma,
                             double delta) {
    const HypothesisReport r = check_g1(a, gs, gamma, delta);
    if (!r.satisfied)
        throw HypothesisNotSatisfied("window comparison or growth margin failed; no admissible interval");
    return r.lambda_interval;
}

CorollaryReport check_h_conditions(const PiecewiseNonlinearity& h, const WeightVector& alpha,
                                   const SpdMatrix& a, double delta) {
    if (alpha.size() != static_cast<size_t>(a.order()))
        throw DimensionMismatch("weight count does not match order");
    if (!(delta > 0.0)) throw OutOfRange("delta must be positive");

    const double pot = h.potential(delta);
    if (!(pot > 0.0)) throw NonpositivePotential("potential at delta is not positive");

    const double lam1 = spectrum(a).lambda_min;
    const double ones = ones_quadratic(a);

    CorollaryReport r;
    r.delta = delta;
    r.threshold = (ones / 2.0) / alpha.sum() * delta * delta / pot;
    r.h1_ok = value_positive_near_zero(h, delta);
    r.h2_ok = vanishes_superlinearly_at_zero(h);
    r.h3_ok = h.asymptotic_linear_bound() < lam1 / alpha.sum();

    // Default search range spans two decades either side of the given delta;
    // the given delta itself is always a candidate, so the optimized value
    // can only improve on the plain threshold.
    std::vector<double> grid;
    const double lo = std::log(delta / 100.0);
    const double hi = std::log(delta * 100.0);
    for (int i = 0; i < 256; ++i)
        grid.push_back(std::exp(lo + (hi - lo) * static_cast<double>(i) / 255.0));
    grid.push_back(delta);
    r.optimized_threshold = optimize_threshold(h, alpha, a, grid);
    return r;
}

double optimize_threshold(const PiecewiseNonlinearity& h, const WeightVector& alpha, const SpdMatrix& a,
                          std::span<const double> delta_grid) {
    if (alpha.size() != static_cast<size_t>(a.order()))
        throw DimensionMismatch("weight count does not match order");
    if (delta_grid.empty()) throw OutOfRange("empty search grid");

    const double prefactor = (ones_quadratic(a) / 2.0) / alpha.sum();
    const auto objective = [&](double d) -> double {
        if (!(d > 0.0)) return kInf;
        const double pot = h.potential(d);
        return pot > 0.0 ? d * d / pot : kInf;
    };

    double best_delta = kNaN;
    double best = kInf;
    for (double d : delta_grid) {
        const double v = objective(d);
        if (v < best) {
            best = v;
            best_delta = d;
        }
    }
    if (!(best < kInf)) throw NonpositivePotential("potential is nonpositive on the whole search grid");

    double span = 0.0;
    {
        double lo = kInf, hi = -kInf;
        for (double d : delta_grid) {
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
        span = lo > 0.0 && hi > lo ? std::log(hi / lo) : 1.0;
    }
    for (int round = 1; round <= 2; ++round) {
        const double half = 0.5 * span / std::pow(4.0, round);
        const double lo = std::log(best_delta) - half;
        const double hi = std::log(best_delta) + half;
        for (int i = 0; i < 256; ++i) {
            const double d = std::exp(lo + (hi - lo) * static_cast<double>(i) / 255.0);
            const double v = objective(d);
            if (v < best) {
                best = v;
                best_delta = d;
            }
        }
    }
    return prefactor * best;
}

HypothesisReport specialize_tridiagonal(int T, double a, double b, std::span<const PiecewiseNonlinearity> gs,
                                        double gamma, double delta) {
    const SpdMatrix mat = build_tridiagonal(T, a, b);
    const HypothesisReport r = check_g1(mat, gs, gamma, delta);
    const double lam1_closed = tridiagonal_eigenvalue(1, T, a, b);
    const double lam1_num = spectrum(mat).lambda_min;
    if (std::abs(lam1_num - lam1_closed) > kConsistencyTol * std::max(1.0, std::abs(lam1_closed)))
        throw InternalError("iterative smallest eigenvalue disagrees with the closed form");
    const double ones_closed = b * T + 2.0 * a * (T - 1);
    if (std::abs(ones_quadratic(mat) - ones_closed) > kConsistencyTol * std::max(1.0, std::abs(ones_closed)))
        throw InternalError("entry sum disagrees with the closed form");
    return r;
}

HypothesisReport specialize_fourth_order(int T, std::span<const PiecewiseNonlinearity> gs, double gamma,
                                         double delta) {
    const SpdMatrix mat = build_fourth_order(T);
    const HypothesisReport r = check_g1(mat, gs, gamma, delta);
    if (T >= 2 && ones_quadratic(mat) != 4.0)
        throw InternalError("fourth difference entry sum is not 4");
    return r;
}

HypothesisReport specialize_grid(GridShape shape, std::span<const PiecewiseNonlinearity> gs, double gamma,
                                 double delta) {
    const SpdMatrix mat = build_grid_laplacian(shape);
    const HypothesisReport r = check_g1(mat, gs, gamma, delta);
    if (ones_quadratic(mat) != 2.0 * (shape.m + shape.n))
        throw InternalError("grid Laplacian entry sum is not 2(m+n)");
    return r;
}

} // namespace diffinc
