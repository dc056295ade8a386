#include "doctest.h"

#include <cmath>
#include <random>

#include "credal_cert/error.hpp"
#include "credal_cert/kernel.hpp"
#include "credal_cert/oracle.hpp"
#include "credal_cert/rkhs_norm.hpp"
#include "support.hpp"

using namespace credal_cert;
using test_support::mat;
using test_support::random_matrix;

namespace {
std::vector<double> evaluate(const oracle::KernelExpansion& loss, const FeatureMatrix& x,
                             double gamma) {
    std::vector<double> out;
    for (std::size_t i = 0; i < x.rows(); ++i)
        out.push_back(oracle::evaluate_expansion(loss, x.row(i), gamma));
    return out;
}
}  // namespace

TEST_CASE("zero losses give zero norm") {
    std::mt19937_64 rng(2);
    const auto x = random_matrix(rng, 10, 2);
    const std::vector<double> zeros(10, 0.0);
    const NormEstimate e = estimate_rkhs_norm(x, zeros, KernelSpec(1.0));
    CHECK(e.l_h == 0.0);
    CHECK(e.n_fit == 10);
}

TEST_CASE("single point with unit loss") {
    const std::vector<double> one{1.0};
    const NormEstimate e = estimate_rkhs_norm(mat({{0.4, -2.0}}), one, KernelSpec(3.0), 1e-9);
    CHECK(e.l_h == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(e.lambda == 1e-9);
}

TEST_CASE("default lambda scales with the trace") {
    std::mt19937_64 rng(4);
    const auto x = random_matrix(rng, 12, 3);
    const auto k = gram_matrix(x, x, KernelSpec(0.5));
    CHECK(default_ridge_lambda(k) == doctest::Approx(1e-6));
}

TEST_CASE("in-span norm recovery") {
    std::mt19937_64 rng(6);
    const double gamma = 0.5;
    for (int t = 0; t < 10; ++t) {
        auto points = random_matrix(rng, 50, 2);
        std::vector<std::size_t> first{0, 1, 2, 3};
        oracle::KernelExpansion loss{points.select(first), {0.7, -0.4, 1.1, 0.3}};
        const NormEstimate e =
            estimate_rkhs_norm(points, evaluate(loss, points, gamma), KernelSpec(gamma), 1e-8);
        const double truth = oracle::expansion_rkhs_norm(loss, gamma);
        CHECK(std::abs(e.l_h - truth) / truth < 0.02);
        CHECK(e.residual_rms < 1e-5);
    }
}

TEST_CASE("ridge path is monotone in lambda") {
    std::mt19937_64 rng(9);
    const auto x = random_matrix(rng, 30, 2);
    std::vector<double> losses;
    for (std::size_t i = 0; i < x.rows(); ++i) losses.push_back(std::sin(x.row(i)[0]) + 0.5);
    double prev = INFINITY;
    for (double lambda : {1e-6, 1e-4, 1e-2, 1e-1, 1.0, 10.0}) {
        const double l_h = estimate_rkhs_norm(x, losses, KernelSpec(0.5), lambda).l_h;
        CHECK(l_h <= prev);
        prev = l_h;
    }
}

TEST_CASE("norm is equivariant to loss scaling") {
    std::mt19937_64 rng(10);
    const auto x = random_matrix(rng, 25, 3);
    std::vector<double> losses, scaled;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        losses.push_back(std::cos(x.row(i)[1]));
        scaled.push_back(3.0 * losses.back());
    }
    const double a = estimate_rkhs_norm(x, losses, KernelSpec(0.4), 1e-4).l_h;
    const double b = estimate_rkhs_norm(x, scaled, KernelSpec(0.4), 1e-4).l_h;
    CHECK(b == doctest::Approx(3.0 * a).epsilon(1e-9));
}

TEST_CASE("ill-posed systems are refused") {
    const auto dup = mat({{1.0}, {1.0}, {1.0}});
    const std::vector<double> losses{0.1, 0.2, 0.3};
    CHECK_THROWS_AS(estimate_rkhs_norm(dup, losses, KernelSpec(1.0), 1e-18), NumericalError);
    CHECK_THROWS_AS(estimate_rkhs_norm(dup, losses, KernelSpec(1.0), -1.0), InputError);
    const std::vector<double> short_losses{0.1};
    CHECK_THROWS_AS(estimate_rkhs_norm(dup, short_losses, KernelSpec(1.0)), InputError);
}

TEST_CASE("posterior average") {
    std::vector<NormEstimate> one(1);
    one[0].l_h = 2.5;
    CHECK(posterior_average_norm(one) == 2.5);
    std::vector<NormEstimate> two(2);
    two[0].l_h = 1.0;
    two[1].l_h = 3.0;
    CHECK(posterior_average_norm(two) == 2.0);
    CHECK_THROWS_AS(posterior_average_norm({}), InputError);

    std::mt19937_64 rng(14);
    const auto x = random_matrix(rng, 20, 2);
    std::normal_distribution<double> noise(0.0, 0.05);
    std::vector<NormEstimate> many;
    for (int k = 0; k < 20; ++k) {
        std::vector<double> losses;
        for (std::size_t i = 0; i < x.rows(); ++i) losses.push_back(x.row(i)[0] + noise(rng));
        many.push_back(estimate_rkhs_norm(x, losses, KernelSpec(0.5), 1e-3));
    }
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& e : many) {
        lo = std::min(lo, e.l_h);
        hi = std::max(hi, e.l_h);
    }
    const double avg = posterior_average_norm(many);
    CHECK(avg >= lo);
    CHECK(avg <= hi);
}
