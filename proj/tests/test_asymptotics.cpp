#include <cmath>
#include <variant>
#include <vector>

#include <doctest.h>

#include "gspec/asymptotics.hpp"
#include "gspec/error.hpp"
#include "gspec/kernel.hpp"
#include "gspec/montecarlo.hpp"

using namespace gspec;
using doctest::Approx;

namespace {

SpectralKernel w1() { return make_paper_kernel(PaperKernel::W1); }
SpectralKernel w2() { return make_paper_kernel(PaperKernel::W2); }

// W2 closed forms: phi1 = 1 so every integral reduces to sums of eigenvalues.
constexpr double kW2Lambda1 = 0.2;
constexpr double kW2Rest[] = {1.0 / 9, 1.0 / 30};
const double kW2IntW1mW = 1.0 / 5 - (1.0 / 25 + 1.0 / 81 + 1.0 / 900);

void check_moments_match_samples(const LimitLaw& law, std::uint64_t seed) {
    const std::size_t count = 100000;
    const auto xs = sample_limit_law(law, count, seed);
    REQUIRE(xs.size() == count);
    const auto [mean, var] = law_moments(law);
    const auto m = sample_moments(xs);
    double m4 = 0.0;
    for (double x : xs) m4 += std::pow(x - m.mean, 4);
    m4 /= double(count);
    const double se_mean = std::sqrt(var / double(count));
    const double se_var = std::sqrt(std::max(m4 - var * var, 0.0) / double(count));
    CHECK(std::abs(m.mean - mean) <= 5 * se_mean + 1e-12);
    CHECK(std::abs(m.variance - var) <= 5 * se_var + 1e-12);
}

}  // namespace

TEST_CASE("gaussian variance for W1") {
    // Var(3 (2U-1)^2) = 9 E(2U-1)^4 - 1 = 9/5 - 1
    CHECK(std::abs(gaussian_variance(w1()) - 0.25 * 0.8) <= 1e-12);
    CHECK(std::abs(gaussian_variance(w1()) / 0.25 - 0.8) <= 1e-8);
}

TEST_CASE("gaussian variance collapses for degenerate kernels") {
    CHECK(std::abs(gaussian_variance(w2())) <= 1e-12);
    CHECK(std::abs(gaussian_variance(make_constant_kernel(0.6))) <= 1e-12);
}

TEST_CASE("chi-squared weights and shift for W2") {
    const auto w = chi_squared_weights(w2());
    REQUIRE(w.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        const double l = kW2Rest[i];
        CHECK(std::abs(w[i] - kW2Lambda1 * l / (kW2Lambda1 - l)) <= 1e-12);
    }
    CHECK(std::abs(w[0] - 0.25) <= 1e-12);
    CHECK(std::abs(w[1] - 0.04) <= 1e-12);
    const double shift = 5.0 / 36 + 1.0 / 150;
    CHECK(std::abs(zeta_shift(w2()) - shift) <= 1e-12);
    CHECK(std::abs(zeta_shift(w2()) - 0.1455556) <= 1e-7);
}

TEST_CASE("kernel limit laws") {
    const auto g = kernel_limit_law(w1(), DiagonalMode::zeroed);
    REQUIRE(std::holds_alternative<GaussianLaw>(g.law));
    CHECK(std::get<GaussianLaw>(g.law).mean == 0.0);
    CHECK(std::get<GaussianLaw>(g.law).variance == Approx(0.2).epsilon(1e-12));
    CHECK(g.statistic.centering == Centering::lln_normal);

    const auto z = kernel_limit_law(w2(), DiagonalMode::zeroed);
    REQUIRE(std::holds_alternative<WeightedChiSquaredLaw>(z.law));
    const auto& zz = std::get<WeightedChiSquaredLaw>(z.law);
    CHECK(zz.centered);
    CHECK(zz.shift == Approx(0.1455556).epsilon(1e-6));
    CHECK(z.statistic.centering == Centering::degenerate_shift);

    const auto d = kernel_limit_law(w2(), DiagonalMode::included);
    const auto& dd = std::get<WeightedChiSquaredLaw>(d.law);
    CHECK_FALSE(dd.centered);
    CHECK(dd.shift == 0.0);
    CHECK(dd.weights == zz.weights);
    CHECK(d.statistic.centering == Centering::degenerate_full);

    const auto c = kernel_limit_law(make_constant_kernel(0.4), DiagonalMode::zeroed);
    const auto& cc = std::get<WeightedChiSquaredLaw>(c.law);
    CHECK(cc.weights.empty());
    CHECK(cc.shift == 0.0);
}

TEST_CASE("dichotomy is exclusive") {
    auto comp = [](double l, int d) { return SpectralComponent{l, BasisFunction::shifted_legendre(d)}; };
    const std::vector<SpectralKernel> kernels{w1(), w2(), make_constant_kernel(0.1),
                                              SpectralKernel({comp(0.3, 2), comp(0.1, 0)}, {comp(-0.05, 1)}),
                                              SpectralKernel({comp(0.3, 0)}, {comp(-0.2, 3)})};
    for (const auto& k : kernels) {
        const auto law = kernel_limit_law(k, DiagonalMode::zeroed);
        CHECK(std::holds_alternative<GaussianLaw>(law.law) == !is_degenerate(k));
    }
}

TEST_CASE("graph law parameters for W2") {
    const auto p = graph_law_parameters(w2());
    // alpha = int W(1-W) / lambda1, sigma2 = 2 int W(1-W)
    CHECK(std::abs(p.alpha - kW2IntW1mW / kW2Lambda1) <= 1e-8);
    CHECK(std::abs(p.sigma2 - 2 * kW2IntW1mW) <= 1e-8);
    CHECK(std::abs(p.alpha - 0.7327160) <= 1e-6);
    CHECK(std::abs(p.sigma2 - 0.2930864) <= 1e-6);
}

TEST_CASE("graph limit laws") {
    const auto law = graph_limit_law(GraphonView(w2(), RangeMode::strict));
    REQUIRE(std::holds_alternative<GraphDegenerateLaw>(law.law));
    CHECK(law.statistic.centering == Centering::degenerate_shift);
    const auto [mean, var] = law_moments(law.law);
    CHECK(std::abs(mean - (0.1455556 + 0.7327160)) <= 1e-6);
    CHECK(std::abs(var - (2 * (1.0 / 16 + 1.0 / 625) + 0.2930864)) <= 1e-6);

    const double p = 0.35;
    const auto cst = graph_limit_law(GraphonView(make_constant_kernel(p), RangeMode::strict));
    const auto& cg = std::get<GraphDegenerateLaw>(cst.law);
    CHECK(cg.chisq.weights.empty());
    CHECK(cg.alpha == Approx(1 - p).epsilon(1e-12));
    CHECK(cg.sigma2 == Approx(2 * p * (1 - p)).epsilon(1e-12));

    const auto g1 = graph_limit_law(GraphonView(w1(), RangeMode::clamp));
    REQUIRE(std::holds_alternative<GaussianLaw>(g1.law));
    CHECK(std::get<GaussianLaw>(g1.law).variance == Approx(0.2).epsilon(1e-12));
    CHECK_THROWS_AS(graph_limit_law(GraphonView(w1(), RangeMode::strict)), GraphonRangeError);
}

TEST_CASE("law moments") {
    const auto [m1, v1] = law_moments(kernel_limit_law(w2(), DiagonalMode::zeroed).law);
    CHECK(m1 == Approx(5.0 / 36 + 1.0 / 150).epsilon(1e-12));
    CHECK(v1 == Approx(2 * (1.0 / 16 + 1.0 / 625)).epsilon(1e-12));
    const auto [m2, v2] = law_moments(kernel_limit_law(w2(), DiagonalMode::included).law);
    CHECK(m2 == Approx(0.29).epsilon(1e-12));
    CHECK(v2 == Approx(v1).epsilon(1e-12));
    const auto [m3, v3] = law_moments(GaussianLaw{0.0, 0.2});
    CHECK(m3 == 0.0);
    CHECK(v3 == 0.2);
}

TEST_CASE("limit law sampling") {
    const auto g = sample_limit_law(GaussianLaw{0.0, 0.2}, 100000, 1);
    CHECK(std::abs(sample_moments(g).variance - 0.2) <= 0.006);
    const auto z = sample_limit_law(kernel_limit_law(w2(), DiagonalMode::zeroed).law, 100000, 2);
    CHECK(std::abs(sample_moments(z).mean - 0.1455556) <= 0.01);
    for (double x : sample_limit_law(WeightedChiSquaredLaw{{}, 0.7, true}, 50, 3)) CHECK(x == 0.7);
    CHECK(sample_limit_law(GaussianLaw{0, 1}, 10, 4) == sample_limit_law(GaussianLaw{0, 1}, 10, 4));
    CHECK(sample_limit_law(GaussianLaw{0, 1}, 10, 4) != sample_limit_law(GaussianLaw{0, 1}, 10, 5));
    CHECK_THROWS_AS(sample_limit_law(GaussianLaw{0, 1}, 0, 4), SizeError);
}

TEST_CASE("sampled moments agree with the law for every constructor") {
    check_moments_match_samples(kernel_limit_law(w1(), DiagonalMode::zeroed).law, 10);
    check_moments_match_samples(kernel_limit_law(w2(), DiagonalMode::zeroed).law, 11);
    check_moments_match_samples(kernel_limit_law(w2(), DiagonalMode::included).law, 12);
    check_moments_match_samples(graph_limit_law(GraphonView(w2(), RangeMode::strict)).law, 13);
    check_moments_match_samples(graph_limit_law(GraphonView(make_constant_kernel(0.3), RangeMode::strict)).law, 14);
}

TEST_CASE("statistics") {
    CHECK(apply_statistic({Centering::lln_normal}, 100 * 0.5, 100, 0.5) == 0.0);
    CHECK(apply_statistic({Centering::degenerate_shift}, 99 * 0.2, 100, 0.2) == Approx(0.0).epsilon(1e-12));
    CHECK(apply_statistic({Centering::degenerate_shift}, 20.1455, 100, 0.2) == Approx(0.3455).epsilon(1e-12));
    CHECK(apply_statistic({Centering::degenerate_full}, 20.29, 100, 0.2) == Approx(0.29).epsilon(1e-12));
    CHECK(apply_statistic({Centering::lln_normal}, 51, 100, 0.5) == Approx(0.1).epsilon(1e-12));
    CHECK_THROWS_AS(apply_statistic({Centering::lln_normal}, 1, 1, 0.5), SizeError);
}

TEST_CASE("sampling modes") {
    CHECK(parse_sampling_mode("kernel-zeroed") == SamplingMode::kernel_zeroed);
    CHECK(parse_sampling_mode("kernel-diag") == SamplingMode::kernel_diag);
    CHECK(parse_sampling_mode("graph") == SamplingMode::graph);
    CHECK_THROWS(parse_sampling_mode("other"));
    for (auto m : {SamplingMode::kernel_zeroed, SamplingMode::kernel_diag, SamplingMode::graph}) {
        CHECK(parse_sampling_mode(to_string(m)) == m);
    }
}

TEST_CASE("laws from an estimated spectrum") {
    const auto law = zeta_law_from_spectrum({1.0 / 30, 0.2, 1.0 / 9}, DiagonalMode::zeroed);
    REQUIRE(law.weights.size() == 2);
    CHECK(law.weights[0] == Approx(0.25).epsilon(1e-12));
    CHECK(law.weights[1] == Approx(0.04).epsilon(1e-12));
    CHECK(law.shift == Approx(zeta_shift(w2())).epsilon(1e-12));

    std::vector<double> many{1.0};
    for (int i = 2; i <= 200; ++i) many.push_back(1.0 / (i * i));
    CHECK(zeta_law_from_spectrum(many, DiagonalMode::zeroed, 64).weights.size() == 63);
    CHECK(spectrum_summable({1.0, 0.5, 0.25, 0.125, 0.06, 0.03, 0.01, 0.005, 0.001}));

    std::vector<double> flat{1.0};
    for (int i = 0; i < 63; ++i) flat.push_back(0.5);
    CHECK_FALSE(spectrum_summable(flat));
    CHECK_THROWS_AS(zeta_law_from_spectrum(flat, DiagonalMode::included), InvalidKernelError);
    CHECK_THROWS_AS(zeta_law_from_spectrum({-0.1}, DiagonalMode::zeroed), InvalidKernelError);
}

TEST_CASE("invalid kernels are rejected") {
    auto comp = [](double l, int d) { return SpectralComponent{l, BasisFunction::shifted_legendre(d)}; };
    // a callable basis that is not orthonormal fails validation
    auto wobble = BasisFunction::callable([](double x) { return 1.0 + x; }, "1+x");
    const SpectralKernel bad({SpectralComponent{0.3, wobble}, comp(0.1, 1)}, {}, 10.0, 10.0);
    CHECK_THROWS_AS(kernel_limit_law(bad, DiagonalMode::zeroed), InvalidKernelError);
}
