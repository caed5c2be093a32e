#pragma once

#include <vector>

namespace diffinc {

/// Dense univariate polynomial, coefficients in ascending degree order.
/// An empty coefficient list is the zero polynomial.
class Polynomial {
  public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coefficients);

    const std::vector<double>& coefficients() const { return coeffs_; }

    /// Degree after ignoring trailing exact-zero coefficients; -1 for the zero polynomial.
    int degree() const;
    bool is_zero() const { return degree() < 0; }

    double operator()(double t) const;

    Polynomial derivative() const;

    /// Antiderivative with zero constant term.
    Polynomial antiderivative() const;

    /// Integral over [lo, hi]; lo > hi yields the signed value.
    double integral(double lo, double hi) const;

    /// Real roots inside [lo, hi], ascending, deduplicated.
    /// Sign-change roots are isolated via the derivative's critical points and
    /// bisected to near machine precision; critical points where the value is
    /// numerically zero are included so tangential roots are not missed.
    /// The zero polynomial reports no roots.
    std::vector<double> roots_in(double lo, double hi) const;

    /// Maximum of the polynomial over [lo, hi] (endpoints and interior critical points).
    double max_on(double lo, double hi) const;

    /// Maximum of |p| over [lo, hi].
    double max_abs_on(double lo, double hi) const;

  private:
    std::vector<double> coeffs_;
};

} // namespace diffinc
