#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "gspec/kernel.hpp"
#include "gspec/sampling.hpp"

namespace gspec {

struct GaussianLaw {
    double mean = 0.0;
    double variance = 0.0;
};

// sum_k w_k (Z_k^2 - 1) + shift when centered, sum_k w_k Z_k^2 otherwise.
struct WeightedChiSquaredLaw {
    std::vector<double> weights;
    double shift = 0.0;
    bool centered = true;
};

// Weighted chi-squared part plus an independent N(alpha, sigma2).
struct GraphDegenerateLaw {
    WeightedChiSquaredLaw chisq;
    double alpha = 0.0;
    double sigma2 = 0.0;
};

using LimitLaw = std::variant<GaussianLaw, WeightedChiSquaredLaw, GraphDegenerateLaw>;

std::string_view law_variant_name(const LimitLaw& law) noexcept;

// How a raw top eigenvalue at size n becomes the statistic a law describes.
enum class Centering {
    lln_normal,         // sqrt(n) (lambda1 / n - lambda1(K))
    degenerate_shift,   // lambda1 - (n - 1) lambda1(K)
    degenerate_full,    // lambda1 - n lambda1(K), used with the diagonal kept
};

std::string_view to_string(Centering c) noexcept;

struct StatisticSpec {
    Centering centering = Centering::lln_normal;
};

struct LawWithStatistic {
    LimitLaw law;
    StatisticSpec statistic;
};

// lambda_1^2 Var(phi_1^2(U)) with Var = int phi_1^4 - (int phi_1^2)^2 by
// quadrature.
double gaussian_variance(const SpectralKernel& kernel, const QuadratureRule& rule = default_rule());

// w = lambda_1 lambda / (lambda_1 - lambda) over sigma(K) \ {lambda_1}.
std::vector<double> chi_squared_weights(const SpectralKernel& kernel);

// sum lambda^2 / (lambda_1 - lambda) over sigma(K) \ {lambda_1}.
double zeta_shift(const SpectralKernel& kernel);

// Throws InvalidKernelError when the kernel fails the sup, Lipschitz, gap or
// orthonormality checks.
LawWithStatistic kernel_limit_law(const SpectralKernel& kernel, DiagonalMode mode);

struct GraphLawParameters {
    double alpha = 0.0;
    double sigma2 = 0.0;
};

// alpha = (1/lambda_1) int (phi_1^2(x) + phi_1^2(y))/2 W (1 - W),
// sigma2 = 2 int phi_1^2(x) phi_1^2(y) W (1 - W), by tensor quadrature.
GraphLawParameters graph_law_parameters(const SpectralKernel& kernel, const QuadratureRule& rule = default_rule());

// Throws GraphonRangeError for a strict graphon whose grid range leaves [0,1].
LawWithStatistic graph_limit_law(const GraphonView& graphon);

// Law that governs a sampling mode: kernel matrices with or without the
// diagonal, or adjacency matrices.
enum class SamplingMode { kernel_zeroed, kernel_diag, graph };

std::string_view to_string(SamplingMode mode) noexcept;
SamplingMode parse_sampling_mode(std::string_view text);

LawWithStatistic limit_law_for_mode(const SpectralKernel& kernel, SamplingMode mode, RangeMode range);

// Counter-based sampler: sample s draws its normals from keys (seed, s, k).
std::vector<double> sample_limit_law(const LimitLaw& law, std::size_t count, std::uint64_t seed);

double apply_statistic(const StatisticSpec& spec, double lambda1_raw, std::size_t n, double lambda1_kernel);

std::pair<double, double> law_moments(const LimitLaw& law);

inline constexpr std::size_t kDefaultTruncationRank = 64;

// zeta law built from an estimated spectrum (e.g. a Nystrom estimate) whose
// largest entry plays lambda_1; keeps the `truncation` largest-magnitude
// eigenvalues. With the diagonal kept the spectrum must pass
// spectrum_summable, else InvalidKernelError.
WeightedChiSquaredLaw zeta_law_from_spectrum(std::vector<double> spectrum, DiagonalMode mode,
                                             std::size_t truncation = kDefaultTruncationRank);

// Rejects a truncated spectrum whose absolute eigenvalue tail is not
// visibly summable: the last eighth of |lambda| must carry at most
// `tail_tol` of the total.
bool spectrum_summable(const std::vector<double>& eigenvalues, double tail_tol = 1e-3);

}  // namespace gspec
