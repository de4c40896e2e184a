#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gspec/asymptotics.hpp"
#include "gspec/kernel.hpp"
#include "gspec/sampling.hpp"

namespace gspec {

inline constexpr std::size_t kDefaultHistogramBins = 40;
inline constexpr std::size_t kDefaultLimitSamples = 100000;

struct ExperimentConfig {
    SpectralKernel kernel;
    std::string kernel_label;
    SamplingMode mode = SamplingMode::kernel_zeroed;
    std::size_t n = 100;
    std::size_t replications = 500;
    std::uint64_t master_seed = 1;
    std::size_t limit_samples = kDefaultLimitSamples;
    std::size_t bins = kDefaultHistogramBins;
    bool clamp = false;
    double ks_threshold = 0.15;

    // Throws ConfigError on n < 2, replications < 1, limit_samples < 1000,
    // bins < 1 or a non-positive KS threshold.
    void validate() const;
    RangeMode range_mode() const noexcept { return clamp ? RangeMode::clamp : RangeMode::strict; }
};

struct ExperimentRun {
    ExperimentConfig config;
    LawWithStatistic law;
    std::vector<std::uint64_t> seeds;  // per replication
    std::vector<double> lambda1_raw;
    std::vector<double> statistics;
    double wall_seconds = 0.0;
};

std::uint64_t replication_seed(std::uint64_t master_seed, std::size_t replication) noexcept;
// Seed for limit-law draws, disjoint from every replication seed domain.
std::uint64_t limit_seed(std::uint64_t master_seed) noexcept;

// Builds the matrix a replication seed produces under the configured mode.
DenseSymMatrix replication_matrix(const ExperimentConfig& config, std::uint64_t seed);

// Replications run on `workers` threads; the payload does not depend on the
// worker count. Errors surface as ReplicationError.
ExperimentRun run_experiment(const ExperimentConfig& config, unsigned workers = 1);

struct TStatistics {
    double t1 = 0.0;
    double t2 = 0.0;
};

// Diagnostic pair whose limits are sum(lambda) (t1, in probability) and a
// weighted chi-squared (t2). Throws DomainError for lambda1_raw <= 0.
TStatistics compute_T_statistics(const SpectralKernel& kernel, const SampleBatch& batch, double lambda1_raw);

// Two-sample Kolmogorov-Smirnov distance of two sorted samples.
double ks_distance(std::span<const double> a, std::span<const double> b);

struct Histogram {
    std::vector<double> edges;  // bins + 1 edges
    std::vector<std::size_t> empirical;
    std::vector<std::size_t> limit;

    std::vector<double> centers() const;
};

// Shared bins over the pooled [min, max] of both samples.
Histogram pooled_histogram(std::span<const double> empirical, std::span<const double> limit, std::size_t bins);

struct SampleMoments {
    double mean = 0.0;
    double variance = 0.0;  // unbiased
};

SampleMoments sample_moments(std::span<const double> xs);

struct ComparisonReport {
    double ks_distance = 0.0;
    SampleMoments empirical;
    SampleMoments limit_sample;
    double law_mean = 0.0;
    double law_variance = 0.0;
    Histogram histogram;
    std::size_t limit_samples = 0;
    double ks_threshold = 0.0;
    bool ks_pass = false;

    bool passed() const noexcept { return ks_pass; }
};

ComparisonReport compare(const ExperimentRun& run, const LimitLaw& law, std::uint64_t limit_seed);

}  // namespace gspec
