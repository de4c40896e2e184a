#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <doctest.h>

#include "gspec/error.hpp"
#include "gspec/kernel.hpp"
#include "gspec/rng.hpp"
#include "gspec/sampling.hpp"
#include "gspec/spectra.hpp"

using namespace gspec;
using doctest::Approx;

TEST_CASE("uniform batches are deterministic and uniform") {
    const auto a = sample_uniform(5, 7);
    const auto b = sample_uniform(5, 7);
    CHECK(a.values == b.values);
    CHECK(sample_uniform(5, 8).values != a.values);
    for (double u : a.values) {
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    for (std::uint64_t seed : {1u, 99u, 123456u}) {
        const auto big = sample_uniform(10000, seed);
        const double mean = std::accumulate(big.values.begin(), big.values.end(), 0.0) / 10000.0;
        CHECK(std::abs(mean - 0.5) <= 0.015);
    }
    CHECK_THROWS_AS(sample_uniform(1, 3), SizeError);
    CHECK_THROWS_AS(sample_uniform(0, 3), SizeError);
}

TEST_CASE("order statistics concentrate") {
    const std::size_t n = 10000;
    const double limit = std::log(double(n)) / std::sqrt(double(n));
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto batch = sample_uniform(n, seed);
        const auto sorted = order_statistics(batch);
        CHECK(std::is_sorted(sorted.begin(), sorted.end()));
        CHECK(max_order_statistic_deviation(batch) <= limit);
    }
}

TEST_CASE("order statistic deviation against a direct computation") {
    const auto batch = sample_uniform(50, 4);
    auto s = batch.values;
    std::sort(s.begin(), s.end());
    double worst = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) worst = std::max(worst, std::abs(s[k] - double(k + 1) / 50.0));
    CHECK(max_order_statistic_deviation(batch) == worst);
}

TEST_CASE("constant kernel matrix") {
    const double c = 0.37;
    const auto batch = sample_uniform(3, 2);
    const auto m = build_kernel_matrix(make_constant_kernel(c), batch, DiagonalMode::zeroed);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(m(i, j) == (i == j ? 0.0 : c));
        }
    }
    CHECK(top_k_eigen(m, 1)[0].value == Approx(2 * c).epsilon(1e-13));
    const auto diag = build_kernel_matrix(make_constant_kernel(c), batch, DiagonalMode::included);
    CHECK(diag(1, 1) == c);
}

TEST_CASE("kernel matrix entries match the kernel and stay in range") {
    const auto k = make_paper_kernel(PaperKernel::W2);
    const auto batch = sample_uniform(60, 11);
    const auto m = build_kernel_matrix(k, batch, DiagonalMode::zeroed);
    const auto report = validate_assumptions(k);
    for (std::size_t i = 0; i < 60; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            CHECK(m(i, j) == Approx(k(batch.values[i], batch.values[j])).epsilon(1e-14));
            CHECK(m(i, j) >= report.grid_min - 1e-12);
            CHECK(m(i, j) <= report.grid_max + 1e-12);
            CHECK(m(i, j) == m(j, i));
        }
        CHECK(m(i, i) == 0.0);
    }
    const auto again = build_kernel_matrix(k, batch, DiagonalMode::zeroed);
    CHECK(std::equal(m.packed().begin(), m.packed().end(), again.packed().begin()));
}

TEST_CASE("probability matrices") {
    const auto batch = sample_uniform(40, 5);
    const auto p2 = build_probability_matrix(GraphonView(make_paper_kernel(PaperKernel::W2), RangeMode::strict), batch);
    for (std::size_t i = 0; i < 40; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            CHECK(p2(i, j) >= 0.0);
            CHECK(p2(i, j) <= 1.0);
        }
    }
    CHECK_THROWS_AS(
        build_probability_matrix(GraphonView(make_paper_kernel(PaperKernel::W1), RangeMode::strict), batch),
        GraphonRangeError);
    const auto clamped =
        build_probability_matrix(GraphonView(make_paper_kernel(PaperKernel::W1), RangeMode::clamp), batch);
    CHECK(clamped.clipped_fraction() > 0.0);
    const auto half = build_probability_matrix(GraphonView(make_constant_kernel(0.5), RangeMode::strict), batch);
    CHECK(half(7, 3) == 0.5);
    CHECK(half(3, 3) == 0.0);
}

TEST_CASE("adjacency matrices") {
    const auto batch = sample_uniform(30, 9);
    const auto full = build_adjacency_matrix(GraphonView(make_constant_kernel(1.0), RangeMode::strict), batch, 1);
    for (std::size_t i = 0; i < 30; ++i) {
        for (std::size_t j = 0; j < 30; ++j) {
            CHECK(full(i, j) == (i == j ? 0.0 : 1.0));
        }
    }
    CHECK(top_k_eigen(full, 1)[0].value == Approx(29.0).epsilon(1e-12));
    // the zero kernel has no leading eigenvalue and is not a valid kernel
    CHECK_THROWS_AS(make_constant_kernel(0.0), InvalidKernelError);
}

TEST_CASE("W2 edge density") {
    const std::size_t n = 2000;
    const auto batch = sample_uniform(n, 17);
    const auto a = build_adjacency_matrix(GraphonView(make_paper_kernel(PaperKernel::W2), RangeMode::strict), batch, 3);
    double edges = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) edges += a(i, j);
    }
    const double pairs = double(n) * double(n - 1) / 2.0;
    CHECK(std::abs(edges / pairs - 0.2) <= 3.0 * std::sqrt(0.2 * 0.8 / pairs) + 0.01);
}

TEST_CASE("edges are conditionally independent given the batch") {
    const auto batch = sample_uniform(6, 21);
    const GraphonView g(make_paper_kernel(PaperKernel::W2), RangeMode::strict);
    const int draws = 2000;
    std::vector<double> x, y;
    for (int s = 0; s < draws; ++s) {
        const auto a = build_adjacency_matrix(g, batch, rng::hash(std::uint64_t(s), std::uint64_t(77)));
        x.push_back(a(1, 0));
        y.push_back(a(4, 2));
    }
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / draws;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / draws;
    double sxy = 0, sxx = 0, syy = 0;
    for (int s = 0; s < draws; ++s) {
        sxy += (x[s] - mx) * (y[s] - my);
        sxx += (x[s] - mx) * (x[s] - mx);
        syy += (y[s] - my) * (y[s] - my);
    }
    CHECK(std::abs(sxy / std::sqrt(sxx * syy)) <= 0.05);
    // the edge frequency follows the kernel value
    CHECK(mx == Approx(g.kernel()(batch.values[1], batch.values[0])).epsilon(0.1));
}

TEST_CASE("spectrum is invariant under permuting the batch") {
    const auto k = make_paper_kernel(PaperKernel::W1);
    auto batch = sample_uniform(120, 31);
    const double before = top_k_eigen(build_kernel_matrix(k, batch, DiagonalMode::zeroed), 1)[0].value;
    std::mt19937_64 gen(5);
    for (int t = 0; t < 5; ++t) {
        std::shuffle(batch.values.begin(), batch.values.end(), gen);
        const double after = top_k_eigen(build_kernel_matrix(k, batch, DiagonalMode::zeroed), 1)[0].value;
        CHECK(std::abs(after - before) <= 1e-10);
    }
}

TEST_CASE("difference and matrix-vector product") {
    const auto batch = sample_uniform(25, 3);
    const auto k = build_kernel_matrix(make_paper_kernel(PaperKernel::W2), batch, DiagonalMode::zeroed);
    const auto d = difference(k, k);
    CHECK(d.frobenius_norm() == 0.0);
    CHECK(d.kind() == MatrixKind::derived);

    std::vector<double> x(25), y(25);
    for (std::size_t i = 0; i < 25; ++i) x[i] = std::sin(double(i));
    k.multiply(x, y);
    for (std::size_t i = 0; i < 25; ++i) {
        double want = 0.0;
        for (std::size_t j = 0; j < 25; ++j) want += k(i, j) * x[j];
        CHECK(y[i] == Approx(want).epsilon(1e-13));
    }
    const auto other = build_kernel_matrix(make_paper_kernel(PaperKernel::W2), sample_uniform(26, 3),
                                           DiagonalMode::zeroed);
    CHECK_THROWS_AS(difference(k, other), DimensionError);
}
