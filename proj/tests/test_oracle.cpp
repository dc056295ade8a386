#include "doctest.h"

#include <cmath>
#include <numbers>

#include "credal_cert/error.hpp"
#include "credal_cert/experiments.hpp"
#include "credal_cert/oracle.hpp"
#include "support.hpp"

using namespace credal_cert;
using namespace credal_cert::oracle;
using test_support::mat;

namespace {
ShiftScenario scenario(std::size_t d, double offset, double var_s = 1.0, double var_t = 1.0,
                       double gamma = 0.5) {
    ShiftScenario s;
    s.d = d;
    s.mean_s.assign(d, 0.0);
    s.mean_t.assign(d, offset);
    s.var_s = var_s;
    s.var_t = var_t;
    s.gamma = gamma;
    s.seed = 77;
    return s;
}
}  // namespace

TEST_CASE("sampling is seeded") {
    const auto s = scenario(3, 1.0);
    const auto [a1, b1] = sample_scenario(s, 20, 15);
    const auto [a2, b2] = sample_scenario(s, 20, 15);
    CHECK(a1 == a2);
    CHECK(b1 == b2);
    CHECK(a1.rows() == 20);
    CHECK(b1.rows() == 15);
    CHECK_FALSE(a1 == b1.select(std::vector<std::size_t>(20, 0)));
}

TEST_CASE("near-degenerate variance collapses to the mean") {
    const auto x = sample_gaussian({{1.5, -2.0}, 1e-12}, 50, 3);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        CHECK(x.row(i)[0] == doctest::Approx(1.5).epsilon(1e-5));
        CHECK(x.row(i)[1] == doctest::Approx(-2.0).epsilon(1e-5));
    }
}

TEST_CASE("sample mean obeys the CLT") {
    const std::size_t n = 100000;
    const auto x = sample_gaussian({{0.3, -0.7}, 2.0}, n, 5);
    for (std::size_t j = 0; j < 2; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += x.row(i)[j];
        const double expected = j == 0 ? 0.3 : -0.7;
        CHECK(std::abs(sum / n - expected) <= 4.0 * std::sqrt(2.0 / n));
    }
}

TEST_CASE("analytic MMD basics") {
    CHECK(analytic_mmd2(scenario(2, 0.0)) == 0.0);
    // point masses one unit apart
    const IsotropicGaussian p{{0.0}, 0.0}, q{{1.0}, 0.0};
    const double two_point = gaussian_kernel_expectation(p, p, 1.0) +
                             gaussian_kernel_expectation(q, q, 1.0) -
                             2.0 * gaussian_kernel_expectation(p, q, 1.0);
    CHECK(two_point == doctest::Approx(1.264241117657115).epsilon(1e-15));

    auto s = scenario(3, 0.8, 0.5, 1.7);
    auto swapped = s;
    std::swap(swapped.mean_s, swapped.mean_t);
    std::swap(swapped.var_s, swapped.var_t);
    CHECK(analytic_mmd2(s) == doctest::Approx(analytic_mmd2(swapped)).epsilon(1e-15));

    double prev = -1.0;
    for (int i = 0; i <= 20; ++i) {
        const double v = analytic_mmd2(scenario(2, 0.2 * i));
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("analytic MMD agrees with Monte Carlo of the bilinear form") {
    for (double offset : {0.0, 0.5, 1.5}) {
        const auto o = experiments::unbiasedness(scenario(2, offset), 20, 20, 20, 200000);
        CHECK(std::abs(o.mc_estimate - o.analytic) <= 3.0 * o.mc_std_error + 1e-15);
    }
}

TEST_CASE("mixture MMD reduces to the single-component case") {
    const auto s = scenario(2, 0.7, 0.8, 1.2);
    const std::vector<MixtureComponent> p{{1.0, s.source()}}, q{{1.0, s.target()}};
    CHECK(analytic_mixture_mmd2(p, q, s.gamma) ==
          doctest::Approx(analytic_mmd2(s)).epsilon(1e-14));
    const std::vector<MixtureComponent> split{{0.5, s.target()}, {0.5, s.target()}};
    CHECK(analytic_mixture_mmd2(p, split, s.gamma) ==
          doctest::Approx(analytic_mmd2(s)).epsilon(1e-13));
}

TEST_CASE("brute-force oracle") {
    const KernelSpec k(1.0);
    CHECK(brute_force_mmd2(mat({{0}}), mat({{1}}), k, MmdKind::Biased) ==
          doctest::Approx(1.264241117657115).epsilon(1e-15));
    CHECK(brute_force_mmd2(mat({{0}, {0}}), mat({{1}, {1}}), k, MmdKind::Unbiased) ==
          doctest::Approx(1.264241117657115).epsilon(1e-15));
    const auto x = mat({{0.1, 0.2}, {1.0, -1.0}, {0.5, 0.5}});
    CHECK(brute_force_mmd2(x, x, k, MmdKind::Biased) == 0.0);

    const auto big = sample_gaussian({{0.0}, 1.0}, 101, 1);
    CHECK_THROWS_AS(brute_force_mmd2(big, big, k, MmdKind::Biased), InputError);
}

TEST_CASE("estimator equivalence on random instances") {
    const auto o = experiments::estimator_equivalence(100, 30, 5, 123);
    CHECK(o.instances == 100);
    CHECK(o.max_abs_diff_unbiased <= 1e-12);
    CHECK(o.max_abs_diff_biased <= 1e-12);
}

TEST_CASE("true target risk") {
    auto s = scenario(1, 0.4, 1.0, 0.6, 0.8);
    KernelExpansion zero{mat({{0.0}}), {0.0}};
    CHECK(true_target_risk(s, zero, 10000, 1).mean == 0.0);

    auto point = scenario(1, 0.4, 1.0, 1e-12, 0.8);
    KernelExpansion centered{mat({{0.4}}), {1.0}};
    CHECK(true_target_risk(point, centered, 10000, 1).mean == doctest::Approx(1.0).epsilon(1e-9));

    // 1-D quadrature of E L(x), x ~ N(0.4, 0.6)
    KernelExpansion loss{mat({{-0.5}, {0.3}, {1.2}}), {0.2, 0.5, 0.3}};
    const double sd = std::sqrt(s.var_t);
    const int steps = 20000;
    const double lo = 0.4 - 12 * sd, hi = 0.4 + 12 * sd, h = (hi - lo) / steps;
    double quad = 0.0;
    for (int i = 0; i <= steps; ++i) {
        const double x = lo + i * h;
        const double w = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        const double pdf = std::exp(-0.5 * (x - 0.4) * (x - 0.4) / s.var_t) /
                           (sd * std::sqrt(2.0 * std::numbers::pi));
        const std::vector<double> pt{x};
        quad += w * pdf * evaluate_expansion(loss, pt, s.gamma);
    }
    quad *= h / 3.0;
    const RiskEstimate mc = true_target_risk(s, loss, 40000, 9);
    CHECK(std::abs(mc.mean - quad) <= 3.0 * mc.std_error);
    CHECK(analytic_expansion_risk(s.target(), loss, s.gamma) == doctest::Approx(quad).epsilon(1e-9));
    CHECK_THROWS_AS(true_target_risk(s, loss, 9999, 1), InputError);
}

TEST_CASE("expansion norm") {
    KernelExpansion single{mat({{0.3, 0.3}}), {2.0}};
    CHECK(expansion_rkhs_norm(single, 0.7) == doctest::Approx(2.0));
    KernelExpansion pair{mat({{0.0}, {1.0}}), {1.0, -1.0}};
    CHECK(expansion_rkhs_norm(pair, 1.0) ==
          doctest::Approx(std::sqrt(2.0 - 2.0 * std::exp(-1.0))).epsilon(1e-14));
}

TEST_CASE("ks distance") {
    std::vector<double> grid;
    for (int i = 0; i < 100; ++i) grid.push_back((i + 0.5) / 100.0);
    CHECK(experiments::ks_distance_uniform(grid) == doctest::Approx(0.005));
    CHECK(experiments::ks_distance_uniform({0.0, 0.0}) == doctest::Approx(1.0));
}

TEST_CASE("scenario validation") {
    auto s = scenario(2, 1.0);
    s.mean_t = {1.0};
    CHECK_THROWS_AS(s.validate(), InputError);
    s = scenario(2, 1.0);
    s.gamma = 0.0;
    CHECK_THROWS_AS(s.validate(), InputError);
}
