#include "diffinc/variational.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "diffinc/errors.hpp"

namespace diffinc {

InclusionProblem::InclusionProblem(SpdMatrix matrix, std::vector<PiecewiseNonlinearity> nonlinearities,
                                   double lambda, std::optional<WeightVector> weights)
    : matrix_(std::move(matrix)), nonlinearities_(std::move(nonlinearities)), lambda_(lambda) {
    const size_t T = static_cast<size_t>(matrix_.order());
    if (nonlinearities_.size() != T)
        throw DimensionMismatch("need one nonlinearity per component: got " +
                                std::to_string(nonlinearities_.size()) + " for order " + std::to_string(T));
    if (!(lambda_ > 0.0)) throw ValidationError("lambda must be positive");
    if (weights) {
        if (weights->size() != T)
            throw DimensionMismatch("weight count " + std::to_string(weights->size()) +
                                    " does not match order " + std::to_string(T));
        weights_ = weights->alpha();
    } else {
        weights_.assign(T, 1.0);
    }
}

namespace {

void check_dim(const InclusionProblem& p, std::span<const double> u) {
    if (u.size() != static_cast<size_t>(p.order()))
        throw DimensionMismatch("vector length " + std::to_string(u.size()) + " does not match order " +
                                std::to_string(p.order()));
}

} // namespace

double phi(const InclusionProblem& p, std::span<const double> u) {
    check_dim(p, u);
    return 0.5 * quadratic_form(p.matrix(), u);
}

double psi(const InclusionProblem& p, std::span<const double> u) {
    check_dim(p, u);
    double s = 0.0;
    for (size_t k = 0; k < u.size(); ++k) s += p.weight(k) * p.nonlinearity(k).potential(u[k]);
    return s;
}

double j_lambda(const InclusionProblem& p, std::span<const double> u) {
    return phi(p, u) - p.lambda() * psi(p, u);
}

std::vector<Interval> gradient_box(const InclusionProblem& p, std::span<const double> u) {
    check_dim(p, u);
    std::vector<Interval> box(u.size());
    for (size_t k = 0; k < u.size(); ++k) {
        const double scale = p.lambda() * p.weight(k); // nonnegative, preserves orientation
        box[k] = Interval{scale * p.nonlinearity(k).envelope_minus(u[k]),
                          scale * p.nonlinearity(k).envelope_plus(u[k])};
    }
    return box;
}

double residual(const InclusionProblem& p, std::span<const double> u) {
    const std::vector<double> au = p.matrix().multiply(u);
    const std::vector<Interval> box = gradient_box(p, u);
    double r = 0.0;
    for (size_t k = 0; k < u.size(); ++k) r = std::max(r, box[k].distance(au[k]));
    return r;
}

bool is_solution(const InclusionProblem& p, std::span<const double> u, double tol) {
    return residual(p, u) <= tol;
}

std::vector<double> descent_direction(const InclusionProblem& p, std::span<const double> u) {
    const std::vector<double> au = p.matrix().multiply(u);
    const std::vector<Interval> box = gradient_box(p, u);
    std::vector<double> d(u.size());
    for (size_t k = 0; k < u.size(); ++k) {
        const double nearest = std::clamp(au[k], box[k].lo, box[k].hi);
        d[k] = au[k] - nearest;
    }
    return d;
}

} // namespace diffinc
