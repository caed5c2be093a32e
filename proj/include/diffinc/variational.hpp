#pragma once

#include <optional>
#include <span>
#include <vector>

#include "diffinc/matrix.hpp"
#include "diffinc/piecewise.hpp"

namespace diffinc {

/// Closed interval [lo, hi].
struct Interval {
    double lo;
    double hi;
    bool contains(double x) const { return x >= lo && x <= hi; }
    /// Distance from x to the interval; 0 inside.
    double distance(double x) const { return x < lo ? lo - x : x > hi ? x - hi : 0.0; }
};

/// Inclusion problem: find u with (A u)_k inside lambda * alpha_k * [envelopes of g_k at u_k].
///
/// Carries the operator, one nonlinearity per component, optional nonnegative
/// weights (all ones when omitted), and the positive parameter lambda.
class InclusionProblem {
  public:
    InclusionProblem(SpdMatrix matrix, std::vector<PiecewiseNonlinearity> nonlinearities, double lambda,
                     std::optional<WeightVector> weights = std::nullopt);

    const SpdMatrix& matrix() const { return matrix_; }
    const std::vector<PiecewiseNonlinearity>& nonlinearities() const { return nonlinearities_; }
    const PiecewiseNonlinearity& nonlinearity(size_t k) const { return nonlinearities_[k]; }
    double lambda() const { return lambda_; }
    double weight(size_t k) const { return weights_[k]; }
    const std::vector<double>& weights() const { return weights_; }
    int order() const { return matrix_.order(); }

  private:
    SpdMatrix matrix_;
    std::vector<PiecewiseNonlinearity> nonlinearities_;
    double lambda_;
    std::vector<double> weights_;
};

/// Quadratic part: u^T A u / 2.
double phi(const InclusionProblem& p, std::span<const double> u);

/// Weighted potential sum over components.
double psi(const InclusionProblem& p, std::span<const double> u);

/// Energy phi - lambda * psi; its critical points are the solutions.
double j_lambda(const InclusionProblem& p, std::span<const double> u);

/// Per-component admissible interval lambda * alpha_k * [env-, env+] at u_k.
std::vector<Interval> gradient_box(const InclusionProblem& p, std::span<const double> u);

/// Max over components of the distance from (A u)_k to its admissible interval.
/// Zero exactly at solutions of the inclusion.
double residual(const InclusionProblem& p, std::span<const double> u);

bool is_solution(const InclusionProblem& p, std::span<const double> u, double tol);

/// A u minus the box element nearest to it, componentwise; the steepest
/// admissible descent datum for the nonsmooth energy. Its max-norm equals the
/// residual, so it vanishes exactly at solutions.
std::vector<double> descent_direction(const InclusionProblem& p, std::span<const double> u);

} // namespace diffinc
