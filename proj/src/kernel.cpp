#include "gspec/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "gspec/error.hpp"

namespace gspec {

namespace {

void check_unit(double x, const char* what) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw DomainError(std::string(what) + " must lie in [0,1], got " + std::to_string(x));
    }
}

void check_degree(int degree) {
    if (degree < 0 || degree > kMaxLegendreDegree) {
        throw UnsupportedDegreeError("shifted Legendre degree " + std::to_string(degree) +
                                     " outside supported range [0, " +
                                     std::to_string(kMaxLegendreDegree) + "]");
    }
}

// Three-term recurrence in t = 2x - 1; stable for every supported degree,
// unlike Horner on the alternating monomial coefficients.
double legendre_recurrence(int degree, double x) {
    const double t = 2.0 * x - 1.0;
    double p0 = 1.0;
    double p1 = t;
    if (degree == 0) {
        return 1.0;
    }
    for (int k = 1; k < degree; ++k) {
        const double next = ((2.0 * k + 1.0) * t * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = next;
    }
    return std::sqrt(2.0 * degree + 1.0) * p1;
}

bool approx_le(double value, double bound) {
    return value <= bound * (1.0 + 1e-9) + 1e-12;
}

// Kernel values on the validation grid, row-major.
std::vector<double> grid_values(const SpectralKernel& kernel) {
    const auto& grid = validation_grid();
    const std::size_t g = grid.size();
    const std::size_t r = kernel.rank();
    std::vector<double> basis(g * r);
    for (std::size_t i = 0; i < g; ++i) {
        kernel.basis_values(grid[i], std::span<double>(basis.data() + i * r, r));
    }
    std::vector<double> values(g * g);
    for (std::size_t i = 0; i < g; ++i) {
        const std::span<const double> bi(basis.data() + i * r, r);
        for (std::size_t j = 0; j < g; ++j) {
            values[i * g + j] = kernel.combine(bi, std::span<const double>(basis.data() + j * r, r));
        }
    }
    return values;
}

void fill_range_and_smoothness(const SpectralKernel& kernel, ValidationReport& report) {
    const auto values = grid_values(kernel);
    const std::size_t g = validation_grid().size();
    const double h = 1.0 / static_cast<double>(g - 1);
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    report.grid_min = *lo;
    report.grid_max = *hi;
    report.sup_abs = std::max(std::abs(*lo), std::abs(*hi));
    double slope = 0.0;
    for (std::size_t i = 0; i + 1 < g; ++i) {
        for (std::size_t j = 0; j < g; ++j) {
            slope = std::max(slope, std::abs(values[(i + 1) * g + j] - values[i * g + j]) / h);
            slope = std::max(slope, std::abs(values[j * g + i + 1] - values[j * g + i]) / h);
        }
    }
    report.lipschitz_estimate = slope;
}

}  // namespace

double shifted_legendre_eval(int degree, double x) {
    check_degree(degree);
    check_unit(x, "x");
    return legendre_recurrence(degree, x);
}

std::vector<double> shifted_legendre_coefficients(int degree) {
    check_degree(degree);
    // phi_n(x) = sqrt(2n+1) * sum_k (-1)^(n+k) C(n,k) C(n+k,k) x^k
    std::vector<double> coeffs(static_cast<std::size_t>(degree) + 1);
    const double scale = std::sqrt(2.0 * degree + 1.0);
    double binom_n_k = 1.0;
    double binom_nk_k = 1.0;
    for (int k = 0; k <= degree; ++k) {
        if (k > 0) {
            binom_n_k = binom_n_k * (degree - k + 1) / k;
            binom_nk_k = binom_nk_k * (degree + k) / k;
        }
        const double sign = ((degree + k) % 2 == 0) ? 1.0 : -1.0;
        coeffs[static_cast<std::size_t>(k)] = scale * sign * binom_n_k * binom_nk_k;
    }
    return coeffs;
}

BasisFunction BasisFunction::shifted_legendre(int degree) {
    BasisFunction b;
    b.kind_ = BasisKind::shifted_legendre;
    b.degree_ = degree;
    b.coefficients_ = shifted_legendre_coefficients(degree);
    b.label_ = "shifted-legendre:" + std::to_string(degree);
    return b;
}

BasisFunction BasisFunction::callable(std::function<double(double)> fn, std::string label) {
    if (!fn) {
        throw InvalidKernelError("callable basis function is empty");
    }
    BasisFunction b;
    b.kind_ = BasisKind::tabulated_callable;
    b.degree_ = -1;
    b.fn_ = std::move(fn);
    b.label_ = std::move(label);
    return b;
}

double BasisFunction::operator()(double x) const {
    check_unit(x, "x");
    return value_unchecked(x);
}

double BasisFunction::value_unchecked(double x) const {
    if (kind_ == BasisKind::shifted_legendre) {
        return legendre_recurrence(degree_, x);
    }
    return fn_(x);
}

std::optional<double> BasisFunction::sup_abs_bound() const {
    if (!is_polynomial()) {
        return std::nullopt;
    }
    return std::sqrt(2.0 * degree_ + 1.0);
}

std::optional<double> BasisFunction::derivative_sup_bound() const {
    if (!is_polynomial()) {
        return std::nullopt;
    }
    // |P_n'| peaks at the endpoints with value n(n+1)/2; the map t = 2x-1
    // doubles it.
    return std::sqrt(2.0 * degree_ + 1.0) * degree_ * (degree_ + 1.0);
}

SpectralKernel::SpectralKernel(std::vector<SpectralComponent> positive, std::vector<SpectralComponent> negative,
                               std::optional<double> lipschitz_bound, std::optional<double> sup_bound,
                               std::string name)
    : positive_(std::move(positive)), negative_(std::move(negative)), name_(std::move(name)) {
    if (positive_.empty()) {
        throw InvalidKernelError("kernel needs at least one positive eigenvalue");
    }
    for (std::size_t i = 0; i < positive_.size(); ++i) {
        const double v = positive_[i].eigenvalue;
        if (!(std::isfinite(v) && v > 0.0)) {
            throw InvalidKernelError("positive component eigenvalue must be finite and > 0");
        }
        if (i > 0 && !(v < positive_[i - 1].eigenvalue)) {
            throw InvalidKernelError("positive eigenvalues must be strictly decreasing");
        }
    }
    for (std::size_t i = 0; i < negative_.size(); ++i) {
        const double v = negative_[i].eigenvalue;
        if (!(std::isfinite(v) && v < 0.0)) {
            throw InvalidKernelError("negative component eigenvalue must be finite and < 0");
        }
        if (i > 0 && !(v > negative_[i - 1].eigenvalue)) {
            throw InvalidKernelError("negative eigenvalues must be strictly increasing");
        }
    }

    double sup = 0.0;
    double lip = 0.0;
    bool derivable = true;
    auto absorb = [&](const SpectralComponent& c) {
        weights_.push_back(c.eigenvalue);
        means_.push_back(integrate_1d([&c](double x) { return c.basis.value_unchecked(x); }, default_rule()));
        const auto s = c.basis.sup_abs_bound();
        const auto d = c.basis.derivative_sup_bound();
        if (s && d) {
            sup += std::abs(c.eigenvalue) * (*s) * (*s);
            lip += std::abs(c.eigenvalue) * (*s) * (*d);
        } else {
            derivable = false;
        }
    };
    for (const auto& c : positive_) absorb(c);
    for (const auto& c : negative_) absorb(c);

    if ((!lipschitz_bound || !sup_bound) && !derivable) {
        throw InvalidKernelError("kernels with callable basis functions need explicit sup and Lipschitz bounds");
    }
    lipschitz_bound_ = lipschitz_bound.value_or(lip);
    sup_bound_ = sup_bound.value_or(sup);
    if (lipschitz_bound_ < 0.0 || sup_bound_ < 0.0) {
        throw InvalidKernelError("kernel bounds must be non-negative");
    }
}

double SpectralKernel::spectral_gap() const noexcept {
    const double second = positive_.size() > 1 ? positive_[1].eigenvalue : 0.0;
    return lambda1() - second;
}

std::vector<double> SpectralKernel::eigenvalues() const {
    std::vector<double> out;
    out.reserve(rank());
    for (const auto& c : positive_) out.push_back(c.eigenvalue);
    for (auto it = negative_.rbegin(); it != negative_.rend(); ++it) out.push_back(it->eigenvalue);
    return out;
}

std::vector<double> SpectralKernel::non_leading_eigenvalues() const {
    std::vector<double> out;
    for (std::size_t i = 1; i < positive_.size(); ++i) out.push_back(positive_[i].eigenvalue);
    for (const auto& c : negative_) out.push_back(c.eigenvalue);
    return out;
}

bool SpectralKernel::all_polynomial() const noexcept {
    auto poly = [](const SpectralComponent& c) { return c.basis.is_polynomial(); };
    return std::all_of(positive_.begin(), positive_.end(), poly) &&
           std::all_of(negative_.begin(), negative_.end(), poly);
}

void SpectralKernel::basis_values(double x, std::span<double> out) const {
    std::size_t k = 0;
    for (const auto& c : positive_) out[k++] = c.basis.value_unchecked(x);
    for (const auto& c : negative_) out[k++] = c.basis.value_unchecked(x);
}

double SpectralKernel::combine(std::span<const double> bx, std::span<const double> by) const noexcept {
    double acc = 0.0;
    for (std::size_t j = 0; j < weights_.size(); ++j) {
        acc += weights_[j] * (bx[j] * by[j]);
    }
    return acc;
}

double SpectralKernel::operator()(double x, double y) const {
    check_unit(x, "x");
    check_unit(y, "y");
    std::vector<double> bx(rank());
    std::vector<double> by(rank());
    basis_values(x, bx);
    basis_values(y, by);
    return combine(bx, by);
}

SpectralKernel make_paper_kernel(PaperKernel which) {
    using B = BasisFunction;
    switch (which) {
        case PaperKernel::W1:
            return SpectralKernel({{1.0 / 2.0, B::shifted_legendre(1)},
                                   {1.0 / 9.0, B::shifted_legendre(2)},
                                   {1.0 / 30.0, B::shifted_legendre(3)}},
                                  {}, std::nullopt, std::nullopt, "W1");
        case PaperKernel::W2:
            return SpectralKernel({{1.0 / 5.0, B::shifted_legendre(0)},
                                   {1.0 / 9.0, B::shifted_legendre(1)},
                                   {1.0 / 30.0, B::shifted_legendre(2)}},
                                  {}, std::nullopt, std::nullopt, "W2");
    }
    throw InvalidKernelError("unknown built-in kernel");
}

SpectralKernel make_constant_kernel(double c) {
    return SpectralKernel({{c, BasisFunction::shifted_legendre(0)}}, {}, std::nullopt, std::nullopt,
                          "constant(" + std::to_string(c) + ")");
}

GraphonView::GraphonView(SpectralKernel kernel, RangeMode mode) : kernel_(std::move(kernel)), mode_(mode) {
    const auto values = grid_values(kernel_);
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    grid_min_ = *lo;
    grid_max_ = *hi;
}

double GraphonView::probability(double raw) const {
    if (mode_ == RangeMode::clamp) {
        return std::clamp(raw, 0.0, 1.0);
    }
    if (!(raw >= 0.0 && raw <= 1.0)) {
        throw GraphonRangeError("graphon value " + std::to_string(raw) + " outside [0,1] in strict mode");
    }
    return raw;
}

const std::vector<double>& validation_grid() {
    static const std::vector<double> grid = [] {
        std::vector<double> g(kValidationGridSize);
        for (std::size_t i = 0; i < g.size(); ++i) {
            g[i] = static_cast<double>(i) / static_cast<double>(g.size() - 1);
        }
        return g;
    }();
    return grid;
}

double eval_kernel(const SpectralKernel& kernel, double x, double y) {
    return kernel(x, y);
}

double degree_function(const SpectralKernel& kernel, double x, const QuadratureRule& rule) {
    check_unit(x, "x");
    const std::size_t r = kernel.rank();
    std::vector<double> means;
    if (&rule == &default_rule()) {
        means = kernel.component_means();
    } else {
        means.reserve(r);
        for (const auto& c : kernel.positive())
            means.push_back(integrate_1d([&c](double t) { return c.basis.value_unchecked(t); }, rule));
        for (const auto& c : kernel.negative())
            means.push_back(integrate_1d([&c](double t) { return c.basis.value_unchecked(t); }, rule));
    }
    std::vector<double> bx(r);
    kernel.basis_values(x, bx);
    return kernel.combine(bx, means);
}

bool is_degenerate(const SpectralKernel& kernel, double tol) {
    const auto& phi = kernel.top_eigenfunction();
    const double mid = phi.value_unchecked(0.5);
    for (double x : validation_grid()) {
        if (std::abs(phi.value_unchecked(x) - mid) > tol) {
            return false;
        }
    }
    return true;
}

bool has_constant_degree(const SpectralKernel& kernel, double tol) {
    const double mid = degree_function(kernel, 0.5);
    for (double x : validation_grid()) {
        if (std::abs(degree_function(kernel, x) - mid) > tol) {
            return false;
        }
    }
    return true;
}

double orthonormality_defect(const SpectralKernel& kernel, const QuadratureRule& rule) {
    std::vector<const BasisFunction*> basis;
    for (const auto& c : kernel.positive()) basis.push_back(&c.basis);
    for (const auto& c : kernel.negative()) basis.push_back(&c.basis);
    const std::size_t r = basis.size();
    std::vector<double> values(rule.size() * r);
    for (std::size_t q = 0; q < rule.size(); ++q) {
        for (std::size_t j = 0; j < r; ++j) {
            values[q * r + j] = basis[j]->value_unchecked(rule.nodes[q]);
        }
    }
    double defect = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = i; j < r; ++j) {
            double inner = 0.0;
            for (std::size_t q = 0; q < rule.size(); ++q) {
                inner += rule.weights[q] * values[q * r + i] * values[q * r + j];
            }
            defect = std::max(defect, std::abs(inner - (i == j ? 1.0 : 0.0)));
        }
    }
    return defect;
}

bool ValidationReport::passed() const noexcept {
    return sup_ok && lipschitz_ok && gap_ok && orthonormal_ok && range_ok.value_or(true);
}

ValidationReport validate_assumptions(const SpectralKernel& kernel) {
    ValidationReport report;
    fill_range_and_smoothness(kernel, report);
    report.sup_bound = kernel.sup_bound();
    report.sup_ok = approx_le(report.sup_abs, report.sup_bound);
    report.lipschitz_bound = kernel.lipschitz_bound();
    report.lipschitz_ok = approx_le(report.lipschitz_estimate, report.lipschitz_bound);
    report.spectral_gap = kernel.spectral_gap();
    report.gap_ok = report.spectral_gap > 0.0;
    report.orthonormality_defect = orthonormality_defect(kernel);
    report.orthonormal_ok = report.orthonormality_defect <= kOrthonormalityTol;
    report.unit_bounded = report.sup_abs <= 1.0;
    return report;
}

ValidationReport validate_assumptions(const GraphonView& graphon) {
    ValidationReport report = validate_assumptions(graphon.kernel());
    if (graphon.mode() == RangeMode::strict) {
        report.range_ok = graphon.grid_in_range();
    }
    return report;
}

std::vector<EigenfunctionBound> eigenfunction_bounds(const SpectralKernel& kernel) {
    ValidationReport report;
    fill_range_and_smoothness(kernel, report);
    std::vector<EigenfunctionBound> out;
    auto check = [&](const SpectralComponent& c) {
        double sup = 0.0;
        for (double x : validation_grid()) {
            sup = std::max(sup, std::abs(c.basis.value_unchecked(x)));
        }
        const double bound = report.sup_abs / std::abs(c.eigenvalue);
        out.push_back({c.eigenvalue, sup, bound, approx_le(sup, bound)});
    };
    for (const auto& c : kernel.positive()) check(c);
    for (const auto& c : kernel.negative()) check(c);
    return out;
}

}  // namespace gspec
