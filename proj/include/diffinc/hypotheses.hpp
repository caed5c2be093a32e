#pragma once

#include <span>
#include <vector>

#include "diffinc/matrix.hpp"
#include "diffinc/piecewise.hpp"

namespace diffinc {

/// Open parameter interval ]left, right[. Empty unless left < right.
struct OpenInterval {
    double left;
    double right;
    bool nonempty() const { return left < right; }
    bool contains(double x) const { return x > left && x < right; }
};

/// Outcome of verifying the small-window/large-window energy comparison and
/// the subquadratic growth margin for a given operator and nonlinearity family.
///
/// satisfied holds exactly when all three of the following do:
///   delta > delta_lower_bound,
///   g1_lhs < g1_rhs,
///   g2_margin > 0.
/// When it holds, lambda_interval is the nonempty admissible parameter range.
struct HypothesisReport {
    double gamma;
    double delta;
    double delta_lower_bound; ///< sqrt(lambda_min / entry sum) * gamma
    double g1_lhs;            ///< sum of windowed potential suprema over gamma^2
    double g1_rhs;            ///< (lambda_min / entry sum) * sum of potentials at delta over delta^2
    double g2_margin;         ///< lambda_min/2 minus the largest declared quadratic bound; NaN if undeclared
    OpenInterval lambda_interval;
    bool satisfied;
};

/// Outcome of the sign/decay/growth conditions used by the two-nontrivial-
/// solution criterion, together with the parameter threshold above which it applies.
struct CorollaryReport {
    double delta;
    double threshold;           ///< (entry sum / 2) / (weight sum) * delta^2 / potential(delta)
    bool h1_ok;                 ///< value strictly positive for 0 < |t| < delta
    bool h2_ok;                 ///< value/t -> 0 as t -> 0+
    bool h3_ok;                 ///< declared linear growth below lambda_min / weight sum
    double optimized_threshold; ///< threshold minimized over a default delta grid
    bool satisfied() const { return h1_ok && h2_ok && h3_ok; }
};

/// Verify the window comparison for the family gs on the operator a.
/// Fills every report field; the growth margin needs declared quadratic bounds
/// on every component and is NaN (hence satisfied = false) without them.
HypothesisReport check_g1(const SpdMatrix& a, std::span<const PiecewiseNonlinearity> gs, double gamma,
                          double delta);

/// Margin lambda_min/2 minus the largest validated declared quadratic bound.
/// Positive margin is the subquadratic growth condition.
double check_g2(const SpdMatrix& a, std::span<const PiecewiseNonlinearity> gs);

/// Admissible open parameter interval; requires a satisfied report.
OpenInterval lambda_interval(const SpdMatrix& a, std::span<const PiecewiseNonlinearity> gs, double gamma,
                             double delta);

/// Verify the sign, decay and growth conditions for a single nonlinearity with
/// weights alpha on the operator a, and compute the parameter threshold at delta.
CorollaryReport check_h_conditions(const PiecewiseNonlinearity& h, const WeightVector& alpha,
                                   const SpdMatrix& a, double delta);

/// Minimize the threshold prefactor * delta^2 / potential(delta) over the given
/// grid, with two refinement rounds shrinking the search range by a factor of
/// four around the incumbent. Grid points with nonpositive potential are
/// skipped; if none remain the potential is unusable and this raises.
double optimize_threshold(const PiecewiseNonlinearity& h, const WeightVector& alpha, const SpdMatrix& a,
                          std::span<const double> delta_grid);

/// check_g1 on a freshly built tridiagonal operator, cross-checked against the
/// closed forms for the smallest eigenvalue and the entry sum.
HypothesisReport specialize_tridiagonal(int T, double a, double b, std::span<const PiecewiseNonlinearity> gs,
                                        double gamma, double delta);

/// check_g1 on the fourth difference operator; for T >= 2 the entry sum is
/// cross-checked against its constant value 4.
HypothesisReport specialize_fourth_order(int T, std::span<const PiecewiseNonlinearity> gs, double gamma,
                                         double delta);

/// check_g1 on the grid Laplacian; the entry sum is cross-checked against 2(m+n).
HypothesisReport specialize_grid(GridShape shape, std::span<const PiecewiseNonlinearity> gs, double gamma,
                                 double delta);

} // namespace diffinc
