#include "gspec/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gspec/error.hpp"

namespace gspec {

QuadratureRule gauss_legendre(int order) {
    if (order < 1) {
        throw SizeError("quadrature order must be positive, got " + std::to_string(order));
    }
    QuadratureRule rule;
    rule.order = order;
    rule.nodes.resize(static_cast<std::size_t>(order));
    rule.weights.resize(static_cast<std::size_t>(order));

    const int n = order;
    // Roots come in symmetric pairs; solve for the upper half with Newton.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = t;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            const double step = p1 / dp;
            t -= step;
            if (std::abs(step) < 1e-16) {
                break;
            }
        }
        // Weight on [-1,1] is 2/((1-t^2) P'_n(t)^2); halve it for the unit interval.
        const double w = 1.0 / ((1.0 - t * t) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        rule.nodes[lo] = 0.5 * (1.0 - t);
        rule.nodes[hi] = 0.5 * (1.0 + t);
        rule.weights[lo] = w;
        rule.weights[hi] = w;
    }
    return rule;
}

const QuadratureRule& default_rule() {
    static const QuadratureRule rule = gauss_legendre(kDefaultQuadratureOrder);
    return rule;
}

double integrate_1d(const std::function<double(double)>& f, const QuadratureRule& rule) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double v = f(rule.nodes[i]);
        if (!std::isfinite(v)) {
            throw NumericError("non-finite integrand value at x=" + std::to_string(rule.nodes[i]));
        }
        acc += rule.weights[i] * v;
    }
    return acc;
}

double integrate_2d(const std::function<double(double, double)>& f, const QuadratureRule& rule) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < rule.size(); ++j) {
            const double v = f(rule.nodes[i], rule.nodes[j]);
            if (!std::isfinite(v)) {
                throw NumericError("non-finite integrand value at (" + std::to_string(rule.nodes[i]) +
                                   ", " + std::to_string(rule.nodes[j]) + ")");
            }
            row += rule.weights[j] * v;
        }
        acc += rule.weights[i] * row;
    }
    return acc;
}

}  // namespace gspec
