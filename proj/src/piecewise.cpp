#include "diffinc/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "diffinc/errors.hpp"

namespace diffinc {

namespace {

constexpr double kProbeSlack = 1e-9;
constexpr int kProbeSamplesPerSide = 48;

// Log-spaced magnitudes in [radius, 100*radius], both signs.
std::vector<double> probe_points(double radius) {
    std::vector<double> pts;
    pts.reserve(2 * kProbeSamplesPerSide);
    const double lo = std::log(radius);
    const double hi = std::log(100.0 * radius);
    for (int i = 0; i < kProbeSamplesPerSide; ++i) {
        const double f = static_cast<double>(i) / (kProbeSamplesPerSide - 1);
        const double mag = std::exp(lo + f * (hi - lo));
        pts.push_back(mag);
        pts.push_back(-mag);
    }
    return pts;
}

} // namespace

PiecewiseNonlinearity::PiecewiseNonlinearity(std::vector<double> breakpoints, std::vector<Polynomial> segments,
                                             std::optional<DeclaredBound> quadratic_bound,
                                             std::optional<DeclaredBound> linear_bound)
    : breakpoints_(std::move(breakpoints)),
      segments_(std::move(segments)),
      quadratic_bound_(quadratic_bound),
      linear_bound_(linear_bound) {
    for (size_t i = 1; i < breakpoints_.size(); ++i)
        if (!(breakpoints_[i - 1] < breakpoints_[i]))
            throw ValidationError("breakpoints must be strictly increasing");
    if (segments_.size() != breakpoints_.size() + 1)
        throw ValidationError("need " + std::to_string(breakpoints_.size() + 1) + " segments for " +
                              std::to_string(breakpoints_.size()) + " breakpoints, got " +
                              std::to_string(segments_.size()));
    for (const DeclaredBound* b : {quadratic_bound_ ? &*quadratic_bound_ : nullptr,
                                   linear_bound_ ? &*linear_bound_ : nullptr}) {
        if (b && !(b->radius > 0.0)) throw ValidationError("declared bound radius must be positive");
    }
}

size_t PiecewiseNonlinearity::segment_index(double t) const {
    return static_cast<size_t>(std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t) -
                               breakpoints_.begin());
}

double PiecewiseNonlinearity::operator()(double t) const { return segments_[segment_index(t)](t); }

double PiecewiseNonlinearity::envelope_minus(double t) const {
    const size_t right = segment_index(t);
    const double v = segments_[right](t);
    const auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), t);
    if (it != breakpoints_.end() && *it == t) {
        const size_t left = static_cast<size_t>(it - breakpoints_.begin());
        return std::min(v, segments_[left](t));
    }
    return v;
}

double PiecewiseNonlinearity::envelope_plus(double t) const {
    const size_t right = segment_index(t);
    const double v = segments_[right](t);
    const auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), t);
    if (it != breakpoints_.end() && *it == t) {
        const size_t left = static_cast<size_t>(it - breakpoints_.begin());
        return std::max(v, segments_[left](t));
    }
    return v;
}

double PiecewiseNonlinearity::slope(double t) const {
    return segments_[segment_index(t)].derivative()(t);
}

double PiecewiseNonlinearity::potential(double t) const {
    if (t == 0.0) return 0.0;
    const double lo = std::min(0.0, t);
    const double hi = std::max(0.0, t);
    double acc = 0.0;
    for (size_t i = 0; i < segments_.size(); ++i) {
        const double seg_lo = i == 0 ? -std::numeric_limits<double>::infinity() : breakpoints_[i - 1];
        const double seg_hi =
            i == breakpoints_.size() ? std::numeric_limits<double>::infinity() : breakpoints_[i];
        const double a = std::max(lo, seg_lo);
        const double b = std::min(hi, seg_hi);
        if (a < b) acc += segments_[i].integral(a, b);
    }
    return t > 0.0 ? acc : -acc;
}

double PiecewiseNonlinearity::sup_potential(double gamma) const {
    if (!(gamma > 0.0)) throw OutOfRange("window half-width must be positive");
    std::vector<double> candidates{-gamma, 0.0, gamma};
    for (double b : breakpoints_)
        if (b > -gamma && b < gamma) candidates.push_back(b);
    for (size_t i = 0; i < segments_.size(); ++i) {
        const double seg_lo = i == 0 ? -gamma : std::max(-gamma, breakpoints_[i - 1]);
        const double seg_hi = i == breakpoints_.size() ? gamma : std::min(gamma, breakpoints_[i]);
        if (seg_lo >= seg_hi) continue;
        for (double r : segments_[i].roots_in(seg_lo, seg_hi)) candidates.push_back(r);
    }
    double best = -std::numeric_limits<double>::infinity();
    for (double c : candidates) best = std::max(best, potential(c));
    return best;
}

double PiecewiseNonlinearity::asymptotic_quadratic_bound() const {
    if (!quadratic_bound_)
        throw UndeclaredAsymptotics("no declared quadratic growth bound on the potential");
    const double c = quadratic_bound_->c;
    const double R = quadratic_bound_->radius;
    const double inner = std::max(0.0, sup_potential(R));
    for (double t : probe_points(R)) {
        const double allowed = c * t * t + inner + kProbeSlack * std::max(1.0, t * t);
        if (potential(t) > allowed)
            throw InconsistentDeclaration("potential sample at t = " + std::to_string(t) +
                                          " exceeds the declared quadratic bound");
    }
    return c;
}

double PiecewiseNonlinearity::asymptotic_linear_bound() const {
    if (!linear_bound_) throw UndeclaredAsymptotics("no declared linear growth bound on the value");
    const double c = linear_bound_->c;
    const double R = linear_bound_->radius;
    double inner = 0.0;
    for (size_t i = 0; i < segments_.size(); ++i) {
        const double seg_lo = i == 0 ? -R : std::max(-R, breakpoints_[i - 1]);
        const double seg_hi = i == breakpoints_.size() ? R : std::min(R, breakpoints_[i]);
        if (seg_lo > seg_hi) continue;
        inner = std::max(inner, segments_[i].max_abs_on(seg_lo, seg_hi));
    }
    for (double t : probe_points(R)) {
        // limsup of value/t: for negative t the ratio bound reads value >= c*t - slack.
        const double ratio = (*this)(t) / t;
        if (ratio > c + inner / std::abs(t) + kProbeSlack)
            throw InconsistentDeclaration("value sample at t = " + std::to_string(t) +
                                          " exceeds the declared linear bound");
    }
    return c;
}

WeightVector::WeightVector(std::vector<double> alpha) : alpha_(std::move(alpha)), sum_(0.0) {
    if (alpha_.empty()) throw ValidationError("weight vector must be nonempty");
    for (double a : alpha_) {
        if (!(a >= 0.0)) throw ValidationError("weights must be nonnegative");
        sum_ += a;
    }
    if (!(sum_ > 0.0)) throw ValidationError("weights must have positive total mass");
}

} // namespace diffinc
