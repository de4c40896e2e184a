#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gspec/kernel.hpp"

namespace gspec {

// U_1..U_n i.i.d. Unif[0,1), reproducible from the seed.
struct SampleBatch {
    std::vector<double> values;
    std::uint64_t seed = 0;

    std::size_t n() const noexcept { return values.size(); }
};

// Counter-based draw keyed by (seed, index). Throws SizeError for n < 2.
SampleBatch sample_uniform(std::size_t n, std::uint64_t seed);

std::vector<double> order_statistics(const SampleBatch& batch);

// max_k |U_(k) - k/n|.
double max_order_statistic_deviation(const SampleBatch& batch);

enum class DiagonalMode { zeroed, included };
enum class MatrixKind { kernel, probability, adjacency, derived };

// Symmetric n x n matrix stored as the packed lower triangle, row-major:
// entry (i,j) with j <= i lives at i(i+1)/2 + j.
class DenseSymMatrix {
public:
    DenseSymMatrix(std::size_t n, std::vector<double> lower, MatrixKind kind, DiagonalMode mode,
                   double clipped_fraction = 0.0);

    static std::size_t packed_size(std::size_t n) noexcept { return n * (n + 1) / 2; }

    std::size_t n() const noexcept { return n_; }
    MatrixKind kind() const noexcept { return kind_; }
    DiagonalMode diagonal_mode() const noexcept { return mode_; }
    // Fraction of off-diagonal pairs whose graphon value was clipped into
    // [0,1]; zero outside clamp mode.
    double clipped_fraction() const noexcept { return clipped_fraction_; }
    std::span<const double> packed() const noexcept { return lower_; }

    double operator()(std::size_t i, std::size_t j) const noexcept {
        return i >= j ? lower_[i * (i + 1) / 2 + j] : lower_[j * (j + 1) / 2 + i];
    }

    // y = A x
    void multiply(std::span<const double> x, std::span<double> y) const;
    double frobenius_norm() const noexcept;

private:
    std::size_t n_;
    std::vector<double> lower_;
    MatrixKind kind_;
    DiagonalMode mode_;
    double clipped_fraction_;
};

DenseSymMatrix build_kernel_matrix(const SpectralKernel& kernel, const SampleBatch& batch, DiagonalMode mode);

// W_n with zero diagonal. Strict graphons outside [0,1] raise GraphonRangeError.
DenseSymMatrix build_probability_matrix(const GraphonView& graphon, const SampleBatch& batch);

// A_n(i,j) ~ Ber(W(U_i,U_j)) for i < j, each edge keyed by (edge_seed, i, j).
DenseSymMatrix build_adjacency_matrix(const GraphonView& graphon, const SampleBatch& batch, std::uint64_t edge_seed);

// a - b, tagged as a derived matrix.
DenseSymMatrix difference(const DenseSymMatrix& a, const DenseSymMatrix& b);

}  // namespace gspec
