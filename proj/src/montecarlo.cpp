#include "gspec/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <tuple>

#include "gspec/error.hpp"
#include "gspec/rng.hpp"
#include "gspec/spectra.hpp"

namespace gspec {

void ExperimentConfig::validate() const {
    if (n < 2) throw ConfigError("n must be at least 2");
    if (replications < 1) throw ConfigError("replications must be at least 1");
    if (limit_samples < 1000) throw ConfigError("limit_samples must be at least 1000");
    if (bins < 1) throw ConfigError("histogram needs at least one bin");
    if (!(ks_threshold > 0.0)) throw ConfigError("ks_threshold must be positive");
}

std::uint64_t replication_seed(std::uint64_t master_seed, std::size_t replication) noexcept {
    return rng::hash(rng::kReplication, master_seed, replication);
}

std::uint64_t limit_seed(std::uint64_t master_seed) noexcept {
    return rng::hash(rng::kLimitLaw, master_seed);
}

DenseSymMatrix replication_matrix(const ExperimentConfig& config, std::uint64_t seed) {
    const SampleBatch batch = sample_uniform(config.n, seed);
    switch (config.mode) {
        case SamplingMode::kernel_zeroed: return build_kernel_matrix(config.kernel, batch, DiagonalMode::zeroed);
        case SamplingMode::kernel_diag: return build_kernel_matrix(config.kernel, batch, DiagonalMode::included);
        case SamplingMode::graph:
            return build_adjacency_matrix(GraphonView(config.kernel, config.range_mode()), batch,
                                          rng::hash(rng::kEdges, seed));
    }
    throw ConfigError("unknown sampling mode");
}

ExperimentRun run_experiment(const ExperimentConfig& config, unsigned workers) {
    config.validate();
    const auto started = std::chrono::steady_clock::now();

    ExperimentRun run{config, limit_law_for_mode(config.kernel, config.mode, config.range_mode()), {}, {}, {}, 0.0};
    const std::size_t reps = config.replications;
    run.seeds.resize(reps);
    run.lambda1_raw.resize(reps);
    run.statistics.resize(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        run.seeds[r] = replication_seed(config.master_seed, r);
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const double lambda1_kernel = config.kernel.lambda1();

    auto worker = [&] {
        while (!failed.load()) {
            const std::size_t r = next.fetch_add(1);
            if (r >= reps) {
                return;
            }
            try {
                const auto matrix = replication_matrix(config, run.seeds[r]);
                const double top = top_k_eigen(matrix, 1).front().value;
                run.lambda1_raw[r] = top;
                run.statistics[r] = apply_statistic(run.law.statistic, top, config.n, lambda1_kernel);
            } catch (const std::exception& e) {
                std::lock_guard lock(error_mutex);
                if (!first_error) {
                    first_error = std::make_exception_ptr(ReplicationError(r, e.what()));
                }
                failed.store(true);
            }
        }
    };

    const unsigned count = std::max(1u, workers);
    if (count == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(count);
        for (unsigned w = 0; w < count; ++w) {
            pool.emplace_back(worker);
        }
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
    run.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return run;
}

TStatistics compute_T_statistics(const SpectralKernel& kernel, const SampleBatch& batch, double lambda1_raw) {
    if (!(lambda1_raw > 0.0)) {
        throw DomainError("T statistics need a positive top eigenvalue, got " + std::to_string(lambda1_raw));
    }
    const std::size_t r = kernel.rank();
    const double l1 = kernel.lambda1();
    std::vector<double> eig;
    for (const auto& c : kernel.positive()) eig.push_back(c.eigenvalue);
    for (const auto& c : kernel.negative()) eig.push_back(c.eigenvalue);

    // Per component: sum_i phi1^2 phi_l^2 and sum_i phi1 phi_l.
    std::vector<double> fourth(r, 0.0);
    std::vector<double> cross(r, 0.0);
    std::vector<double> values(r);
    for (double u : batch.values) {
        kernel.basis_values(u, values);
        const double p1 = values[0];
        for (std::size_t l = 0; l < r; ++l) {
            fourth[l] += p1 * p1 * values[l] * values[l];
            cross[l] += p1 * values[l];
        }
    }
    const double scale = l1 / lambda1_raw;
    TStatistics t;
    for (std::size_t l = 0; l < r; ++l) {
        t.t1 += eig[l] * fourth[l];
        if (l > 0) {
            t.t2 += eig[l] * l1 / (l1 - eig[l]) * cross[l] * cross[l];
        }
    }
    t.t1 *= scale;
    t.t2 *= scale;
    return t;
}

double ks_distance(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) {
        throw SizeError("KS distance needs two non-empty samples");
    }
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double worst = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == x) ++i;
        while (j < b.size() && b[j] == x) ++j;
        worst = std::max(worst, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return worst;
}

std::vector<double> Histogram::centers() const {
    std::vector<double> out;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        out.push_back(0.5 * (edges[k] + edges[k + 1]));
    }
    return out;
}

Histogram pooled_histogram(std::span<const double> empirical, std::span<const double> limit, std::size_t bins) {
    if (bins == 0) {
        throw SizeError("histogram needs at least one bin");
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double v : empirical) lo = std::min(lo, v), hi = std::max(hi, v);
    for (double v : limit) lo = std::min(lo, v), hi = std::max(hi, v);
    if (!(lo < hi)) {
        const double centre = std::isfinite(lo) ? lo : 0.0;
        lo = centre - 0.5;
        hi = centre + 0.5;
    }
    Histogram h;
    h.edges.resize(bins + 1);
    for (std::size_t k = 0; k <= bins; ++k) {
        h.edges[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(bins);
    }
    auto fill = [&](std::span<const double> xs, std::vector<std::size_t>& counts) {
        counts.assign(bins, 0);
        for (double v : xs) {
            auto k = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(bins));
            ++counts[std::min(k, bins - 1)];
        }
    };
    fill(empirical, h.empirical);
    fill(limit, h.limit);
    return h;
}

SampleMoments sample_moments(std::span<const double> xs) {
    SampleMoments m;
    if (xs.empty()) {
        return m;
    }
    for (double v : xs) m.mean += v;
    m.mean /= static_cast<double>(xs.size());
    if (xs.size() > 1) {
        for (double v : xs) m.variance += (v - m.mean) * (v - m.mean);
        m.variance /= static_cast<double>(xs.size() - 1);
    }
    return m;
}

ComparisonReport compare(const ExperimentRun& run, const LimitLaw& law, std::uint64_t seed) {
    auto limit = sample_limit_law(law, run.config.limit_samples, seed);
    auto empirical = run.statistics;
    std::sort(empirical.begin(), empirical.end());
    std::sort(limit.begin(), limit.end());

    ComparisonReport report;
    report.ks_distance = ks_distance(empirical, limit);
    report.empirical = sample_moments(empirical);
    report.limit_sample = sample_moments(limit);
    std::tie(report.law_mean, report.law_variance) = law_moments(law);
    report.histogram = pooled_histogram(empirical, limit, run.config.bins);
    report.limit_samples = limit.size();
    report.ks_threshold = run.config.ks_threshold;
    report.ks_pass = report.ks_distance <= report.ks_threshold;
    return report;
}

}  // namespace gspec
