#include "gspec/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "gspec/error.hpp"
#include "gspec/rng.hpp"

namespace gspec {

namespace {

// Basis values of every sample point, row-major n x rank.
std::vector<double> tabulate_basis(const SpectralKernel& kernel, const SampleBatch& batch) {
    const std::size_t r = kernel.rank();
    std::vector<double> table(batch.n() * r);
    for (std::size_t i = 0; i < batch.n(); ++i) {
        const double u = batch.values[i];
        if (!(u >= 0.0 && u <= 1.0)) {
            throw DomainError("sample value " + std::to_string(u) + " outside [0,1]");
        }
        kernel.basis_values(u, std::span<double>(table.data() + i * r, r));
    }
    return table;
}

template <typename EntryFn>
std::vector<double> fill_lower(std::size_t n, bool with_diagonal, EntryFn&& entry) {
    std::vector<double> lower(DenseSymMatrix::packed_size(n), 0.0);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            lower[k++] = entry(i, j);
        }
        lower[k++] = with_diagonal ? entry(i, i) : 0.0;
    }
    return lower;
}

void require_range(const GraphonView& graphon) {
    if (graphon.mode() == RangeMode::strict && !graphon.grid_in_range()) {
        throw GraphonRangeError("graphon '" + graphon.kernel().name() + "' takes values in [" +
                                std::to_string(graphon.grid_min()) + ", " + std::to_string(graphon.grid_max()) +
                                "] on the validation grid; use clamp mode to clip");
    }
}

}  // namespace

SampleBatch sample_uniform(std::size_t n, std::uint64_t seed) {
    if (n < 2) {
        throw SizeError("sample size must be at least 2, got " + std::to_string(n));
    }
    SampleBatch batch;
    batch.seed = seed;
    batch.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        batch.values[i] = rng::uniform(rng::kUniformBatch, seed, i);
    }
    return batch;
}

std::vector<double> order_statistics(const SampleBatch& batch) {
    std::vector<double> sorted = batch.values;
    std::sort(sorted.begin(), sorted.end());
    return sorted;
}

double max_order_statistic_deviation(const SampleBatch& batch) {
    const auto sorted = order_statistics(batch);
    const double n = static_cast<double>(sorted.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        worst = std::max(worst, std::abs(sorted[k] - static_cast<double>(k + 1) / n));
    }
    return worst;
}

DenseSymMatrix::DenseSymMatrix(std::size_t n, std::vector<double> lower, MatrixKind kind, DiagonalMode mode,
                               double clipped_fraction)
    : n_(n), lower_(std::move(lower)), kind_(kind), mode_(mode), clipped_fraction_(clipped_fraction) {
    if (n_ == 0) {
        throw SizeError("matrix dimension must be positive");
    }
    if (lower_.size() != packed_size(n_)) {
        throw DimensionError("packed storage holds " + std::to_string(lower_.size()) + " values, expected " +
                             std::to_string(packed_size(n_)));
    }
}

void DenseSymMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != n_ || y.size() != n_) {
        throw DimensionError("matrix-vector dimension mismatch");
    }
    std::fill(y.begin(), y.end(), 0.0);
    const double* row = lower_.data();
    for (std::size_t i = 0; i < n_; ++i) {
        const double xi = x[i];
        double acc = 0.0;
        for (std::size_t j = 0; j < i; ++j) {
            acc += row[j] * x[j];
            y[j] += row[j] * xi;
        }
        y[i] += acc + row[i] * xi;
        row += i + 1;
    }
}

double DenseSymMatrix::frobenius_norm() const noexcept {
    double acc = 0.0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            acc += 2.0 * lower_[k] * lower_[k];
            ++k;
        }
        acc += lower_[k] * lower_[k];
        ++k;
    }
    return std::sqrt(acc);
}

DenseSymMatrix build_kernel_matrix(const SpectralKernel& kernel, const SampleBatch& batch, DiagonalMode mode) {
    if (batch.n() == 0) {
        throw SizeError("empty sample batch");
    }
    const std::size_t r = kernel.rank();
    const auto table = tabulate_basis(kernel, batch);
    auto lower = fill_lower(batch.n(), mode == DiagonalMode::included, [&](std::size_t i, std::size_t j) {
        return kernel.combine(std::span<const double>(table.data() + i * r, r),
                              std::span<const double>(table.data() + j * r, r));
    });
    return DenseSymMatrix(batch.n(), std::move(lower), MatrixKind::kernel, mode);
}

DenseSymMatrix build_probability_matrix(const GraphonView& graphon, const SampleBatch& batch) {
    require_range(graphon);
    const auto& kernel = graphon.kernel();
    const std::size_t r = kernel.rank();
    const auto table = tabulate_basis(kernel, batch);
    std::size_t clipped = 0;
    auto lower = fill_lower(batch.n(), false, [&](std::size_t i, std::size_t j) {
        const double raw = kernel.combine(std::span<const double>(table.data() + i * r, r),
                                          std::span<const double>(table.data() + j * r, r));
        const double p = graphon.probability(raw);
        if (p != raw) {
            ++clipped;
        }
        return p;
    });
    const double pairs = static_cast<double>(batch.n()) * static_cast<double>(batch.n() - 1) / 2.0;
    return DenseSymMatrix(batch.n(), std::move(lower), MatrixKind::probability, DiagonalMode::zeroed,
                          pairs > 0 ? static_cast<double>(clipped) / pairs : 0.0);
}

DenseSymMatrix build_adjacency_matrix(const GraphonView& graphon, const SampleBatch& batch, std::uint64_t edge_seed) {
    const DenseSymMatrix probs = build_probability_matrix(graphon, batch);
    auto lower = fill_lower(batch.n(), false, [&](std::size_t i, std::size_t j) {
        // Key by (smaller, larger) index so the draw names the unordered pair.
        return rng::uniform(rng::kEdges, edge_seed, j, i) < probs(i, j) ? 1.0 : 0.0;
    });
    return DenseSymMatrix(batch.n(), std::move(lower), MatrixKind::adjacency, DiagonalMode::zeroed,
                          probs.clipped_fraction());
}

DenseSymMatrix difference(const DenseSymMatrix& a, const DenseSymMatrix& b) {
    if (a.n() != b.n()) {
        throw DimensionError("cannot subtract matrices of different dimension");
    }
    std::vector<double> lower(a.packed().size());
    for (std::size_t k = 0; k < lower.size(); ++k) {
        lower[k] = a.packed()[k] - b.packed()[k];
    }
    const DiagonalMode mode = a.diagonal_mode() == DiagonalMode::zeroed && b.diagonal_mode() == DiagonalMode::zeroed
                                  ? DiagonalMode::zeroed
                                  : DiagonalMode::included;
    return DenseSymMatrix(a.n(), std::move(lower), MatrixKind::derived, mode);
}

}  // namespace gspec
