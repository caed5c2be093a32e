#include "diffinc/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace diffinc {

namespace {

// Scale used to decide whether a value counts as a numerical zero of p near x.
double zero_scale(const std::vector<double>& coeffs, double x) {
    double s = 0.0;
    double p = 1.0;
    const double ax = std::max(1.0, std::abs(x));
    for (double c : coeffs) {
        s += std::abs(c) * p;
        p *= ax;
    }
    return std::max(s, 1.0);
}

// Bisection on a bracket [x0, x1] with f(x0) and f(x1) of opposite sign.
double bisect(const Polynomial& p, double x0, double x1, double f0) {
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (x0 + x1);
        if (mid <= x0 || mid >= x1) break;
        const double fm = p(mid);
        if (fm == 0.0) return mid;
        if ((f0 < 0.0) == (fm < 0.0)) {
            x0 = mid;
            f0 = fm;
        } else {
            x1 = mid;
        }
    }
    return 0.5 * (x0 + x1);
}

} // namespace

Polynomial::Polynomial(std::vector<double> coefficients) : coeffs_(std::move(coefficients)) {}

int Polynomial::degree() const {
    int d = static_cast<int>(coeffs_.size()) - 1;
    while (d >= 0 && coeffs_[static_cast<size_t>(d)] == 0.0) --d;
    return d;
}

double Polynomial::operator()(double t) const {
    double v = 0.0;
    for (size_t i = coeffs_.size(); i-- > 0;) v = v * t + coeffs_[i];
    return v;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1) return Polynomial{};
    std::vector<double> d(coeffs_.size() - 1);
    for (size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<double>(i);
    return Polynomial{std::move(d)};
}

Polynomial Polynomial::antiderivative() const {
    if (coeffs_.empty()) return Polynomial{};
    std::vector<double> a(coeffs_.size() + 1, 0.0);
    for (size_t i = 0; i < coeffs_.size(); ++i) a[i + 1] = coeffs_[i] / static_cast<double>(i + 1);
    return Polynomial{std::move(a)};
}

double Polynomial::integral(double lo, double hi) const {
    const Polynomial a = antiderivative();
    return a(hi) - a(lo);
}

std::vector<double> Polynomial::roots_in(double lo, double hi) const {
    std::vector<double> out;
    if (lo > hi) return out;
    const int d = degree();
    if (d <= 0) return out; // constants (zero included) report no isolated roots
    if (d == 1) {
        const double r = -coeffs_[0] / coeffs_[1];
        if (r >= lo && r <= hi) out.push_back(r);
        return out;
    }

    // Critical points partition [lo, hi] into intervals where p is monotone.
    std::vector<double> knots = derivative().roots_in(lo, hi);
    knots.push_back(lo);
    knots.push_back(hi);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

    const double tiny = 1e-12 * zero_scale(coeffs_, std::max(std::abs(lo), std::abs(hi)));
    for (size_t i = 0; i < knots.size(); ++i) {
        const double x = knots[i];
        if (std::abs((*this)(x)) <= tiny) {
            out.push_back(x);
            continue;
        }
        if (i + 1 < knots.size()) {
            const double y = knots[i + 1];
            const double fx = (*this)(x);
            const double fy = (*this)(y);
            if (std::abs(fy) <= tiny) continue; // handled as the next knot
            if ((fx < 0.0) != (fy < 0.0)) out.push_back(bisect(*this, x, y, fx));
        }
    }
    std::sort(out.begin(), out.end());
    const double sep = 1e-12 * std::max(1.0, std::abs(hi - lo));
    std::vector<double> dedup;
    for (double r : out) {
        if (dedup.empty() || r - dedup.back() > sep) dedup.push_back(r);
    }
    return dedup;
}

double Polynomial::max_on(double lo, double hi) const {
    double best = std::max((*this)(lo), (*this)(hi));
    for (double c : derivative().roots_in(lo, hi)) best = std::max(best, (*this)(c));
    return best;
}

double Polynomial::max_abs_on(double lo, double hi) const {
    double best = std::max(std::abs((*this)(lo)), std::abs((*this)(hi)));
    for (double c : derivative().roots_in(lo, hi)) best = std::max(best, std::abs((*this)(c)));
    return best;
}

} // namespace diffinc
