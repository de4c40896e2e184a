#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "gspec/error.hpp"
#include "gspec/kernel.hpp"
#include "gspec/rng.hpp"
#include "gspec/sampling.hpp"
#include "gspec/spectra.hpp"

using namespace gspec;
using doctest::Approx;

namespace {

DenseSymMatrix from_function(std::size_t n, auto f, DiagonalMode mode = DiagonalMode::included) {
    std::vector<double> lower(DenseSymMatrix::packed_size(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) lower[i * (i + 1) / 2 + j] = f(i, j);
    }
    return DenseSymMatrix(n, std::move(lower), MatrixKind::derived, mode);
}

DenseSymMatrix random_symmetric(std::size_t n, std::uint64_t seed) {
    return from_function(n, [&](std::size_t i, std::size_t j) { return rng::uniform(seed, i, j) - 0.5; });
}

}  // namespace

TEST_CASE("J - I spectrum") {
    const double c = 0.8;
    const auto m = from_function(4, [&](std::size_t i, std::size_t j) { return i == j ? 0.0 : c; },
                                 DiagonalMode::zeroed);
    const auto top = top_k_eigen(m, 2);
    CHECK(top[0].value == Approx(3 * c).epsilon(1e-13));
    CHECK(top[1].value == Approx(-c).epsilon(1e-13));
    for (const auto& p : top) CHECK(residual_check(m, p) <= 1e-12);
}

TEST_CASE("rank-one matrix") {
    const std::vector<double> v{1.0, -2.0, 0.5, 3.0, 0.25};
    double norm2 = 0.0;
    for (double x : v) norm2 += x * x;
    const auto m = from_function(5, [&](std::size_t i, std::size_t j) { return v[i] * v[j]; });
    const auto top = top_k_eigen(m, 2);
    CHECK(top[0].value == Approx(norm2).epsilon(1e-13));
    CHECK(std::abs(top[1].value) <= 1e-12);
    // sign convention: largest-magnitude entry positive
    const auto big = std::max_element(top[0].vector.begin(), top[0].vector.end(),
                                      [](double a, double b) { return std::abs(a) < std::abs(b); });
    CHECK(*big > 0.0);
}

TEST_CASE("top_k_eigen argument errors") {
    const auto m = random_symmetric(5, 1);
    CHECK_THROWS_AS(top_k_eigen(m, 0), SizeError);
    CHECK_THROWS_AS(top_k_eigen(m, 6), SizeError);
    EigenPair bad{1.0, {1.0, 0.0}, 0.0};
    CHECK_THROWS_AS(residual_check(m, bad), DimensionError);
}

TEST_CASE("dense and lanczos paths agree with a full decomposition") {
    SolverOptions lanczos;
    lanczos.dense_crossover = 0;
    for (std::uint64_t seed : {3u, 4u}) {
        const auto m = random_symmetric(150, seed);
        const auto all = dense_eigenvalues(m);
        const double anorm = m.frobenius_norm();
        for (const auto& opts : {SolverOptions{}, lanczos}) {
            const auto top = top_k_eigen(m, 4, opts);
            for (std::size_t i = 0; i < 4; ++i) {
                const double want = all[all.size() - 1 - i];
                CHECK(std::abs(top[i].value - want) <= 1e-8 * std::abs(want));
                CHECK(top[i].residual <= 1e-10 * anorm);
                CHECK(residual_check(m, top[i]) <= 1e-10 * anorm);
            }
        }
    }
}

TEST_CASE("lanczos on kernel matrices") {
    SolverOptions lanczos;
    lanczos.dense_crossover = 0;
    const auto k = make_paper_kernel(PaperKernel::W2);
    const auto m = build_kernel_matrix(k, sample_uniform(500, 8), DiagonalMode::zeroed);
    const auto all = dense_eigenvalues(m);
    const auto top = top_k_eigen(m, 3, lanczos);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(std::abs(top[i].value - all[all.size() - 1 - i]) <= 1e-8 * std::abs(all[all.size() - 1 - i]));
        CHECK(residual_check(m, top[i]) <= 1e-10 * m.frobenius_norm());
    }
    // above the crossover the default options pick the iterative solver
    const auto large = build_kernel_matrix(k, sample_uniform(700, 8), DiagonalMode::zeroed);
    const auto pair = top_k_eigen(large, 1).front();
    CHECK(residual_check(large, pair) <= 1e-10 * large.frobenius_norm());
    CHECK(pair.value == Approx(dense_eigenvalues(large).back()).epsilon(1e-10));
}

TEST_CASE("lanczos is deterministic") {
    SolverOptions lanczos;
    lanczos.dense_crossover = 0;
    const auto m = random_symmetric(80, 12);
    const auto a = top_k_eigen(m, 2, lanczos);
    const auto b = top_k_eigen(m, 2, lanczos);
    CHECK(a[0].value == b[0].value);
    CHECK(a[0].vector == b[0].vector);
}

TEST_CASE("zero matrix") {
    const auto m = from_function(10, [](std::size_t, std::size_t) { return 0.0; });
    const auto top = top_k_eigen(m, 2);
    CHECK(top[0].value == 0.0);
    CHECK(top[1].value == 0.0);
}

TEST_CASE("residual check examples") {
    const auto m = from_function(2, [](std::size_t i, std::size_t j) { return i == j ? 2.0 : 1.0; });
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(residual_check(m, EigenPair{3.0, {s, s}, 0.0}) <= 1e-14);
    const double eps = 1e-4;
    const auto diag = from_function(3, [](std::size_t i, std::size_t j) { return i == j ? double(i + 1) : 0.0; });
    std::vector<double> v{eps, 1.0, 0.0};
    // (A - 2) v = -eps e1
    CHECK(residual_check(diag, EigenPair{2.0, v, 0.0}) == Approx(eps).epsilon(1e-12));
    CHECK(residual_check(diag, EigenPair{2.0, {0.0, 1.0, 0.0}, 0.0}) == 0.0);
}

TEST_CASE("spectral norm") {
    const auto m = from_function(3, [](std::size_t i, std::size_t j) { return i == j ? (i == 0 ? -5.0 : 1.0) : 0.0; });
    CHECK(spectral_norm(m) == Approx(5.0));
}

TEST_CASE("nystrom spectra") {
    const auto w1 = nystrom_spectrum(make_paper_kernel(PaperKernel::W1), 2000, 3);
    CHECK(w1.method == SpectrumMethod::nystrom_grid);
    CHECK(w1.grid_size == 2000);
    CHECK(std::abs(w1.eigenvalues[0] - 0.5) <= 5e-3);
    CHECK(std::abs(w1.eigenvalues[1] - 1.0 / 9) <= 5e-3);
    CHECK(std::abs(w1.eigenvalues[2] - 1.0 / 30) <= 5e-3);
    const auto w2 = nystrom_spectrum(make_paper_kernel(PaperKernel::W2), 2000, 1);
    CHECK(std::abs(w2.eigenvalues[0] - 0.2) <= 5e-3);
    const double c = 0.45;
    const auto cst = nystrom_spectrum(make_constant_kernel(c), 100, 1);
    CHECK(cst.eigenvalues[0] == Approx(c * 99 / 100).epsilon(1e-12));
    CHECK_THROWS_AS(nystrom_spectrum(make_constant_kernel(c), 8, 1), SizeError);
    CHECK_THROWS_AS(nystrom_spectrum(make_constant_kernel(c), 32, 0), SizeError);

    const auto exact = exact_spectrum(make_paper_kernel(PaperKernel::W2));
    CHECK(exact.method == SpectrumMethod::exact_spectral);
    CHECK(exact.eigenvalues == std::vector<double>{0.2, 1.0 / 9, 1.0 / 30});
}

TEST_CASE("law of large numbers for the top eigenvalue") {
    const auto k = make_paper_kernel(PaperKernel::W2);
    const std::size_t n = 400;
    const double band = std::log(double(n)) / std::sqrt(double(n));
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const auto m = build_kernel_matrix(k, sample_uniform(n, seed), DiagonalMode::zeroed);
        CHECK(std::abs(top_k_eigen(m, 1)[0].value / double(n) - 0.2) <= band);
    }
}

TEST_CASE("Weyl bound between adjacency and probability matrices") {
    const GraphonView g(make_paper_kernel(PaperKernel::W2), RangeMode::strict);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto batch = sample_uniform(200, seed);
        const auto a = build_adjacency_matrix(g, batch, rng::hash(rng::kEdges, seed));
        const auto w = build_probability_matrix(g, batch);
        const double drift = std::abs(top_k_eigen(a, 1)[0].value - top_k_eigen(w, 1)[0].value);
        CHECK(drift <= spectral_norm(difference(a, w)) * (1 + 1e-9));
    }
}
