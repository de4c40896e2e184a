#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace gspec {

// Gauss-Legendre rule mapped onto the unit interval. Weights sum to one, so
// a rule integrates against the uniform probability measure on [0,1].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    int order = 0;

    std::size_t size() const noexcept { return nodes.size(); }
};

inline constexpr int kDefaultQuadratureOrder = 64;

// Builds an `order`-node rule; exact for polynomials of degree <= 2*order-1.
QuadratureRule gauss_legendre(int order);

// Cached default 64-node rule.
const QuadratureRule& default_rule();

double integrate_1d(const std::function<double(double)>& f, const QuadratureRule& rule);

// Tensor-product estimate of the integral of f over [0,1]^2.
// Throws NumericError if f returns a non-finite value.
double integrate_2d(const std::function<double(double, double)>& f, const QuadratureRule& rule);

}  // namespace gspec
