#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "gspec/kernel.hpp"
#include "gspec/sampling.hpp"

namespace gspec {

struct EigenPair {
    double value = 0.0;
    std::vector<double> vector;  // unit norm
    double residual = 0.0;       // ||A v - value v||_2
};

struct SolverOptions {
    // Residual target relative to ||A||_F.
    double tol = 1e-10;
    // Matrix-vector product budget for the iterative path.
    int max_iter = 10000;
    // Matrices up to this size go through a full dense decomposition.
    std::size_t dense_crossover = 512;
};

// The k algebraically largest eigenpairs, descending. Dense decomposition up
// to the crossover, Lanczos with full reorthogonalization above it. Throws
// ConvergenceError when the iteration budget runs out.
std::vector<EigenPair> top_k_eigen(const DenseSymMatrix& matrix, std::size_t k, const SolverOptions& options = {});

// Every eigenvalue, ascending, from a full dense decomposition.
std::vector<double> dense_eigenvalues(const DenseSymMatrix& matrix);

// Recomputes ||A v - lambda v||_2.
double residual_check(const DenseSymMatrix& matrix, const EigenPair& pair);

// max(|lambda_max|, |lambda_min|).
double spectral_norm(const DenseSymMatrix& matrix, const SolverOptions& options = {});

enum class SpectrumMethod { exact_spectral, nystrom_grid };

std::string_view to_string(SpectrumMethod method) noexcept;

struct SpectrumEstimate {
    std::vector<double> eigenvalues;  // descending
    std::size_t grid_size = 0;
    SpectrumMethod method = SpectrumMethod::exact_spectral;
};

// The kernel's stored spectrum.
SpectrumEstimate exact_spectrum(const SpectralKernel& kernel);

// Top-k eigenvalues of f(x_i, x_j) on the midpoint grid x_i = (i - 1/2)/m,
// zero diagonal, divided by m.
SpectrumEstimate nystrom_spectrum(const SpectralKernel& kernel, std::size_t grid_size, std::size_t k);

}  // namespace gspec
