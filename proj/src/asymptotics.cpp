#include "gspec/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gspec/error.hpp"
#include "gspec/rng.hpp"

namespace gspec {

namespace {

void require_valid(const SpectralKernel& kernel) {
    const auto report = validate_assumptions(kernel);
    if (!report.passed()) {
        std::string why;
        if (!report.sup_ok) why += " sup bound exceeded;";
        if (!report.lipschitz_ok) why += " Lipschitz bound exceeded;";
        if (!report.gap_ok) why += " no spectral gap;";
        if (!report.orthonormal_ok) why += " basis not orthonormal;";
        throw InvalidKernelError("kernel '" + kernel.name() + "' fails the limit-theorem assumptions:" + why);
    }
}

WeightedChiSquaredLaw zeta_law(const SpectralKernel& kernel, bool centered) {
    return {chi_squared_weights(kernel), centered ? zeta_shift(kernel) : 0.0, centered};
}

double chisq_draw(const WeightedChiSquaredLaw& law, std::uint64_t seed, std::uint64_t sample) {
    double acc = law.shift;
    for (std::size_t k = 0; k < law.weights.size(); ++k) {
        const double z = rng::normal(rng::kLimitLaw, seed, sample, k);
        acc += law.weights[k] * (law.centered ? z * z - 1.0 : z * z);
    }
    return acc;
}

// Key slot for the independent Gaussian component, disjoint from the
// chi-squared slots 0..rank.
constexpr std::uint64_t kGaussianSlot = 1ULL << 40;

}  // namespace

std::string_view law_variant_name(const LimitLaw& law) noexcept {
    switch (law.index()) {
        case 0: return "gaussian";
        case 1: return "weighted-chisq";
        default: return "graph-degenerate";
    }
}

std::string_view to_string(Centering c) noexcept {
    switch (c) {
        case Centering::lln_normal: return "lln-normal";
        case Centering::degenerate_shift: return "degenerate-shift";
        case Centering::degenerate_full: return "degenerate-full";
    }
    return "unknown";
}

double gaussian_variance(const SpectralKernel& kernel, const QuadratureRule& rule) {
    const auto& phi = kernel.top_eigenfunction();
    const double m2 = integrate_1d([&](double x) { const double v = phi.value_unchecked(x); return v * v; }, rule);
    const double m4 = integrate_1d([&](double x) { const double v = phi.value_unchecked(x); return v * v * v * v; }, rule);
    const double l1 = kernel.lambda1();
    return l1 * l1 * (m4 - m2 * m2);
}

std::vector<double> chi_squared_weights(const SpectralKernel& kernel) {
    const double l1 = kernel.lambda1();
    std::vector<double> weights;
    for (double lambda : kernel.non_leading_eigenvalues()) {
        weights.push_back(l1 * lambda / (l1 - lambda));
    }
    return weights;
}

double zeta_shift(const SpectralKernel& kernel) {
    const double l1 = kernel.lambda1();
    double shift = 0.0;
    for (double lambda : kernel.non_leading_eigenvalues()) {
        shift += lambda * lambda / (l1 - lambda);
    }
    return shift;
}

LawWithStatistic kernel_limit_law(const SpectralKernel& kernel, DiagonalMode mode) {
    require_valid(kernel);
    if (!is_degenerate(kernel)) {
        return {GaussianLaw{0.0, gaussian_variance(kernel)}, {Centering::lln_normal}};
    }
    if (mode == DiagonalMode::zeroed) {
        return {zeta_law(kernel, true), {Centering::degenerate_shift}};
    }
    // With the diagonal kept the chi-squared terms are uncentered and the
    // eigenvalue is measured against n lambda_1(K).
    return {zeta_law(kernel, false), {Centering::degenerate_full}};
}

GraphLawParameters graph_law_parameters(const SpectralKernel& kernel, const QuadratureRule& rule) {
    const auto& phi = kernel.top_eigenfunction();
    auto phi_sq = [&](double x) {
        const double v = phi.value_unchecked(x);
        return v * v;
    };
    auto w_times_complement = [&](double x, double y) {
        const double w = kernel(x, y);
        return w * (1.0 - w);
    };
    const double alpha_integral = integrate_2d(
        [&](double x, double y) { return 0.5 * (phi_sq(x) + phi_sq(y)) * w_times_complement(x, y); }, rule);
    const double sigma_integral =
        integrate_2d([&](double x, double y) { return phi_sq(x) * phi_sq(y) * w_times_complement(x, y); }, rule);
    return {alpha_integral / kernel.lambda1(), 2.0 * sigma_integral};
}

LawWithStatistic graph_limit_law(const GraphonView& graphon) {
    if (graphon.mode() == RangeMode::strict && !graphon.grid_in_range()) {
        throw GraphonRangeError("graphon '" + graphon.kernel().name() + "' leaves [0,1] on the validation grid");
    }
    const auto& kernel = graphon.kernel();
    require_valid(kernel);
    if (!is_degenerate(kernel)) {
        return {GaussianLaw{0.0, gaussian_variance(kernel)}, {Centering::lln_normal}};
    }
    const auto params = graph_law_parameters(kernel);
    return {GraphDegenerateLaw{zeta_law(kernel, true), params.alpha, params.sigma2}, {Centering::degenerate_shift}};
}

std::string_view to_string(SamplingMode mode) noexcept {
    switch (mode) {
        case SamplingMode::kernel_zeroed: return "kernel-zeroed";
        case SamplingMode::kernel_diag: return "kernel-diag";
        case SamplingMode::graph: return "graph";
    }
    return "unknown";
}

SamplingMode parse_sampling_mode(std::string_view text) {
    if (text == "kernel-zeroed") return SamplingMode::kernel_zeroed;
    if (text == "kernel-diag") return SamplingMode::kernel_diag;
    if (text == "graph") return SamplingMode::graph;
    throw ParseError("unknown mode '" + std::string(text) + "' (expected kernel-zeroed, kernel-diag or graph)");
}

LawWithStatistic limit_law_for_mode(const SpectralKernel& kernel, SamplingMode mode, RangeMode range) {
    switch (mode) {
        case SamplingMode::kernel_zeroed: return kernel_limit_law(kernel, DiagonalMode::zeroed);
        case SamplingMode::kernel_diag: return kernel_limit_law(kernel, DiagonalMode::included);
        case SamplingMode::graph: return graph_limit_law(GraphonView(kernel, range));
    }
    throw ParseError("unknown sampling mode");
}

std::vector<double> sample_limit_law(const LimitLaw& law, std::size_t count, std::uint64_t seed) {
    if (count == 0) {
        throw SizeError("limit-law sample count must be positive");
    }
    std::vector<double> out(count);
    for (std::size_t s = 0; s < count; ++s) {
        out[s] = std::visit(
            [&](const auto& l) -> double {
                using T = std::decay_t<decltype(l)>;
                if constexpr (std::is_same_v<T, GaussianLaw>) {
                    return l.mean + std::sqrt(l.variance) * rng::normal(rng::kLimitLaw, seed, s, kGaussianSlot);
                } else if constexpr (std::is_same_v<T, WeightedChiSquaredLaw>) {
                    return chisq_draw(l, seed, s);
                } else {
                    return chisq_draw(l.chisq, seed, s) +
                           l.alpha + std::sqrt(l.sigma2) * rng::normal(rng::kLimitLaw, seed, s, kGaussianSlot);
                }
            },
            law);
    }
    return out;
}

double apply_statistic(const StatisticSpec& spec, double lambda1_raw, std::size_t n, double lambda1_kernel) {
    if (n < 2) {
        throw SizeError("statistic needs n >= 2");
    }
    const double nd = static_cast<double>(n);
    switch (spec.centering) {
        case Centering::lln_normal: return std::sqrt(nd) * (lambda1_raw / nd - lambda1_kernel);
        case Centering::degenerate_shift: return lambda1_raw - (nd - 1.0) * lambda1_kernel;
        case Centering::degenerate_full: return lambda1_raw - nd * lambda1_kernel;
    }
    return 0.0;
}

std::pair<double, double> law_moments(const LimitLaw& law) {
    auto chisq_moments = [](const WeightedChiSquaredLaw& l) {
        double sum = 0.0, sum_sq = 0.0;
        for (double w : l.weights) {
            sum += w;
            sum_sq += w * w;
        }
        return std::pair{l.centered ? l.shift : sum + l.shift, 2.0 * sum_sq};
    };
    return std::visit(
        [&](const auto& l) -> std::pair<double, double> {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, GaussianLaw>) {
                return {l.mean, l.variance};
            } else if constexpr (std::is_same_v<T, WeightedChiSquaredLaw>) {
                return chisq_moments(l);
            } else {
                const auto [m, v] = chisq_moments(l.chisq);
                return {m + l.alpha, v + l.sigma2};
            }
        },
        law);
}

WeightedChiSquaredLaw zeta_law_from_spectrum(std::vector<double> spectrum, DiagonalMode mode,
                                             std::size_t truncation) {
    if (spectrum.empty() || !(spectrum.front() > 0.0)) {
        throw InvalidKernelError("estimated spectrum needs a positive leading eigenvalue");
    }
    std::sort(spectrum.begin(), spectrum.end(), std::greater<>());
    const double l1 = spectrum.front();
    std::vector<double> rest(spectrum.begin() + 1, spectrum.end());
    std::stable_sort(rest.begin(), rest.end(), [](double a, double b) { return std::abs(a) > std::abs(b); });
    if (rest.size() + 1 > truncation) {
        rest.resize(truncation > 0 ? truncation - 1 : 0);
    }
    if (mode == DiagonalMode::included) {
        std::vector<double> kept{l1};
        kept.insert(kept.end(), rest.begin(), rest.end());
        if (!spectrum_summable(kept)) {
            throw InvalidKernelError("estimated spectrum is not visibly absolutely summable");
        }
    }
    WeightedChiSquaredLaw law{{}, 0.0, mode == DiagonalMode::zeroed};
    for (double lambda : rest) {
        if (!(lambda < l1)) {
            throw InvalidKernelError("estimated spectrum has no gap below its leading eigenvalue");
        }
        law.weights.push_back(l1 * lambda / (l1 - lambda));
        if (law.centered) {
            law.shift += lambda * lambda / (l1 - lambda);
        }
    }
    return law;
}

bool spectrum_summable(const std::vector<double>& eigenvalues, double tail_tol) {
    std::vector<double> mags;
    for (double v : eigenvalues) mags.push_back(std::abs(v));
    std::sort(mags.begin(), mags.end(), std::greater<>());
    const double total = std::accumulate(mags.begin(), mags.end(), 0.0);
    if (total == 0.0 || mags.size() < 8) {
        return true;
    }
    const std::size_t tail_start = mags.size() - mags.size() / 8;
    const double tail = std::accumulate(mags.begin() + static_cast<std::ptrdiff_t>(tail_start), mags.end(), 0.0);
    return tail / total <= tail_tol;
}

}  // namespace gspec
