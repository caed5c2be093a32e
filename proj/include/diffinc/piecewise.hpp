#pragma once

#include <optional>
#include <vector>

#include "diffinc/polynomial.hpp"

namespace diffinc {

/// Declared one-sided growth bound with the radius beyond which it is claimed.
struct DeclaredBound {
    double c;
    double radius;
};

/// Piecewise polynomial function on the real line, breakpoints strictly
/// increasing. With s breakpoints there are s+1 segments; segment i covers
/// (t_i, t_{i+1}) with t_0 = -inf and t_{s+1} = +inf. At a breakpoint the
/// plain value uses the right segment; the function is identified with any
/// almost-everywhere equal one, so one-sided limits are the meaningful data.
///
/// Two optional declared bounds travel with the function:
///  - quadratic_bound: limsup_{|t| -> inf} of the potential over t^2 is at most c,
///  - linear_bound: limsup_{|t| -> inf} of the value over t is at most c.
/// Declarations are metadata; operations that consume them first run a
/// sampling probe and refuse declarations their samples contradict.
class PiecewiseNonlinearity {
  public:
    PiecewiseNonlinearity(std::vector<double> breakpoints, std::vector<Polynomial> segments,
                          std::optional<DeclaredBound> quadratic_bound = std::nullopt,
                          std::optional<DeclaredBound> linear_bound = std::nullopt);

    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<Polynomial>& segments() const { return segments_; }
    const std::optional<DeclaredBound>& declared_quadratic_bound() const { return quadratic_bound_; }
    const std::optional<DeclaredBound>& declared_linear_bound() const { return linear_bound_; }

    /// Index of the segment owning t; an exact breakpoint belongs to its right segment.
    size_t segment_index(double t) const;

    /// Pointwise value (right-segment convention at breakpoints).
    double operator()(double t) const;

    /// Lower envelope: min of the one-sided limits at t.
    double envelope_minus(double t) const;

    /// Upper envelope: max of the one-sided limits at t.
    double envelope_plus(double t) const;

    /// Segment-polynomial derivative at t (right-segment convention). The
    /// envelope pair, not this, is the object with meaning at breakpoints.
    double slope(double t) const;

    /// Potential: integral of the function from 0 to t. Continuous in t.
    double potential(double t) const;

    /// Exact supremum of the potential over [-gamma, gamma], gamma > 0.
    /// Candidates: the endpoints, 0, interior breakpoints, and the real roots
    /// of each segment polynomial (stationary points of the potential).
    double sup_potential(double gamma) const;

    /// Validated declared bound on potential(t)/t^2 at infinity.
    ///
    /// Probes log-spaced samples with |t| in [R, 100R] and rejects the
    /// declaration if potential(t) exceeds c*t^2 + M + 1e-9*max(1, t^2),
    /// where M is the supremum of the potential over [-R, R]. The additive
    /// constant is what a bounded inner part contributes, so bounded
    /// functions legitimately declare c = 0.
    double asymptotic_quadratic_bound() const;

    /// Validated declared bound on value(t)/t at infinity, probed the same way
    /// with an additive constant equal to the largest |value| over [-R, R].
    double asymptotic_linear_bound() const;

  private:
    std::vector<double> breakpoints_;
    std::vector<Polynomial> segments_;
    std::optional<DeclaredBound> quadratic_bound_;
    std::optional<DeclaredBound> linear_bound_;
};

/// Nonnegative per-component weights with positive total mass.
class WeightVector {
  public:
    explicit WeightVector(std::vector<double> alpha);

    const std::vector<double>& alpha() const { return alpha_; }
    double operator[](size_t k) const { return alpha_[k]; }
    size_t size() const { return alpha_.size(); }
    double sum() const { return sum_; }

  private:
    std::vector<double> alpha_;
    double sum_;
};

} // namespace diffinc
