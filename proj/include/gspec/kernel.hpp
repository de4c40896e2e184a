#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gspec/quadrature.hpp"

namespace gspec {

inline constexpr int kMaxLegendreDegree = 32;
inline constexpr std::size_t kValidationGridSize = 512;
inline constexpr double kOrthonormalityTol = 1e-8;
inline constexpr double kDegeneracyTol = 1e-9;

// L2[0,1]-normalized shifted Legendre polynomial of the given degree.
// Throws UnsupportedDegreeError above kMaxLegendreDegree and DomainError for
// x outside [0,1].
double shifted_legendre_eval(int degree, double x);

// Monomial coefficients (constant term first) of the normalized shifted
// Legendre polynomial.
std::vector<double> shifted_legendre_coefficients(int degree);

enum class BasisKind { shifted_legendre, tabulated_callable };

class BasisFunction {
public:
    static BasisFunction shifted_legendre(int degree);
    static BasisFunction callable(std::function<double(double)> fn, std::string label);

    BasisKind kind() const noexcept { return kind_; }
    int degree() const noexcept { return degree_; }
    const std::vector<double>& coefficients() const noexcept { return coefficients_; }
    const std::string& label() const noexcept { return label_; }
    bool is_polynomial() const noexcept { return kind_ == BasisKind::shifted_legendre; }

    // Domain-checked evaluation.
    double operator()(double x) const;
    double value_unchecked(double x) const;

    // Upper bounds on |phi| and |phi'| over [0,1]; only available for
    // polynomial bases.
    std::optional<double> sup_abs_bound() const;
    std::optional<double> derivative_sup_bound() const;

private:
    BasisKind kind_ = BasisKind::shifted_legendre;
    int degree_ = 0;
    std::vector<double> coefficients_;
    std::function<double(double)> fn_;
    std::string label_;
};

struct SpectralComponent {
    double eigenvalue;
    BasisFunction basis;
};

// Finite-rank symmetric kernel K(x,y) = sum_j lambda_j phi_j(x) phi_j(y).
// Positive components are stored in strictly decreasing eigenvalue order,
// negative components with lambda'_1 <= lambda'_2 <= ... < 0. Immutable.
class SpectralKernel {
public:
    // Bounds left empty are derived from the basis when every basis function
    // is polynomial; otherwise InvalidKernelError.
    SpectralKernel(std::vector<SpectralComponent> positive, std::vector<SpectralComponent> negative,
                   std::optional<double> lipschitz_bound = std::nullopt,
                   std::optional<double> sup_bound = std::nullopt, std::string name = {});

    const std::vector<SpectralComponent>& positive() const noexcept { return positive_; }
    const std::vector<SpectralComponent>& negative() const noexcept { return negative_; }
    const std::string& name() const noexcept { return name_; }
    double lipschitz_bound() const noexcept { return lipschitz_bound_; }
    double sup_bound() const noexcept { return sup_bound_; }

    std::size_t rank() const noexcept { return positive_.size() + negative_.size(); }
    double lambda1() const noexcept { return positive_.front().eigenvalue; }
    const BasisFunction& top_eigenfunction() const noexcept { return positive_.front().basis; }
    // lambda_1 - lambda_2, with lambda_2 = 0 for a rank-one positive part.
    double spectral_gap() const noexcept;
    // Every stored eigenvalue, signed, descending.
    std::vector<double> eigenvalues() const;
    // sigma(K) \ {lambda_1}: remaining positive components then the negative ones.
    std::vector<double> non_leading_eigenvalues() const;
    bool all_polynomial() const noexcept;

    // Basis values at x in component order (positive, then negative).
    void basis_values(double x, std::span<double> out) const;
    // Kernel value from precomputed basis values. Bitwise symmetric in its
    // two arguments.
    double combine(std::span<const double> bx, std::span<const double> by) const noexcept;

    double operator()(double x, double y) const;

    // Per-component integrals of phi_j under the default rule.
    const std::vector<double>& component_means() const noexcept { return means_; }

private:
    std::vector<SpectralComponent> positive_;
    std::vector<SpectralComponent> negative_;
    std::vector<double> weights_;  // eigenvalues in component order
    std::vector<double> means_;
    double lipschitz_bound_ = 0.0;
    double sup_bound_ = 0.0;
    std::string name_;
};

enum class PaperKernel { W1, W2 };

SpectralKernel make_paper_kernel(PaperKernel which);
// c * 1(x) 1(y); c must be positive.
SpectralKernel make_constant_kernel(double c);

enum class RangeMode { strict, clamp };

// A spectral kernel used as a graphon. Grid range is measured once at
// construction.
class GraphonView {
public:
    GraphonView(SpectralKernel kernel, RangeMode mode);

    const SpectralKernel& kernel() const noexcept { return kernel_; }
    RangeMode mode() const noexcept { return mode_; }
    double grid_min() const noexcept { return grid_min_; }
    double grid_max() const noexcept { return grid_max_; }
    bool grid_in_range() const noexcept { return grid_min_ >= 0.0 && grid_max_ <= 1.0; }

    // Value used as an edge probability: clipped in clamp mode, range
    // checked (GraphonRangeError) in strict mode.
    double probability(double raw) const;

private:
    SpectralKernel kernel_;
    RangeMode mode_;
    double grid_min_ = 0.0;
    double grid_max_ = 0.0;
};

// Uniform grid of kValidationGridSize points on [0,1], endpoints included.
const std::vector<double>& validation_grid();

double eval_kernel(const SpectralKernel& kernel, double x, double y);

// d_K(x) = integral of K(x,y) dy.
double degree_function(const SpectralKernel& kernel, double x, const QuadratureRule& rule = default_rule());

// Degeneracy in the sense of a constant leading eigenfunction.
bool is_degenerate(const SpectralKernel& kernel, double tol = kDegeneracyTol);

// Diagnostic only: whether the degree function is constant on the grid.
bool has_constant_degree(const SpectralKernel& kernel, double tol = kDegeneracyTol);

struct ValidationReport {
    double sup_abs = 0.0;
    double sup_bound = 0.0;
    bool sup_ok = false;
    double lipschitz_estimate = 0.0;
    double lipschitz_bound = 0.0;
    bool lipschitz_ok = false;
    double spectral_gap = 0.0;
    bool gap_ok = false;
    double orthonormality_defect = 0.0;
    bool orthonormal_ok = false;
    double grid_min = 0.0;
    double grid_max = 0.0;
    // |K| <= 1 on the grid. Reported, not gating.
    bool unit_bounded = false;
    // Only set when validating a strict-mode graphon view.
    std::optional<bool> range_ok;

    bool passed() const noexcept;
};

ValidationReport validate_assumptions(const SpectralKernel& kernel);
ValidationReport validate_assumptions(const GraphonView& graphon);

// max |<phi_i, phi_j> - delta_ij| over every stored basis pair.
double orthonormality_defect(const SpectralKernel& kernel, const QuadratureRule& rule = default_rule());

struct EigenfunctionBound {
    double eigenvalue;
    double sup_abs;  // measured on the validation grid
    double bound;    // sup|K| / |eigenvalue|
    bool ok;
};

// sup |phi_j| <= sup|K| / |lambda_j| for every component, with sup|K|
// measured on the validation grid.
std::vector<EigenfunctionBound> eigenfunction_bounds(const SpectralKernel& kernel);

}  // namespace gspec
