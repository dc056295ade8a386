#include "doctest.h"

#include <cmath>
#include <random>

#include "credal_cert/error.hpp"
#include "credal_cert/geometry.hpp"
#include "credal_cert/mmd.hpp"
#include "credal_cert/oracle.hpp"
#include "support.hpp"

using namespace credal_cert;
using test_support::mat;
using test_support::random_matrix;

TEST_CASE("expected feature distance") {
    const std::vector<double> a{1.0, 2.0};
    CHECK(expected_feature_distance(a, mat({{1.0, 2.0}})) == 0.0);
    const std::vector<double> z{0.0};
    CHECK(expected_feature_distance(z, mat({{3.0}, {4.0}})) == 3.5);
    const std::vector<double> o{0.5, -0.5};
    const double d1 = expected_feature_distance(o, mat({{1, 2}, {3, 4}, {-1, 0}}));
    const double d2 = expected_feature_distance(o, mat({{-1, 0}, {1, 2}, {3, 4}}));
    CHECK(d1 == doctest::Approx(d2).epsilon(1e-15));
    CHECK_THROWS_AS(expected_feature_distance(z, mat({{1, 2}})), InputError);
}

TEST_CASE("geodesic distortion hand value") {
    const std::vector<double> anchor{0.0};
    const auto r = geodesic_distortion(anchor, mat({{0.1}, {0.1}, {0.1}}),
                                       mat({{0.2}, {0.2}, {0.2}}), KernelSpec(1.0), 1.0);
    CHECK(r.lhs_estimate == doctest::Approx(0.141421356237310).epsilon(1e-13));
    CHECK(r.epsilon_bar == doctest::Approx(0.2));
}

TEST_CASE("no shift means no distortion") {
    std::mt19937_64 rng(3);
    const auto x = random_matrix(rng, 40, 2);
    const auto r = geodesic_distortion(x.row(0), x, x, KernelSpec(0.5), 1.0);
    CHECK(r.lhs_estimate == 0.0);
    CHECK(r.rhs_bound >= 0.0);
    CHECK(r.slack == r.rhs_bound);
    CHECK_THROWS_AS(geodesic_distortion(x.row(0), x, x, KernelSpec(0.5), -1.0), InputError);
}

TEST_CASE("synthetic shift respects the bound with remainder") {
    oracle::ShiftScenario s;
    s.d = 2;
    s.mean_s = {0.0, 0.0};
    s.mean_t = {0.5, 0.5};
    s.gamma = 0.5;
    std::size_t ok = 0;
    for (std::uint64_t t = 0; t < 20; ++t) {
        s.seed = 1000 + t;
        const auto [xs, xt] = oracle::sample_scenario(s, 300, 300);
        const auto r = geodesic_distortion(xs.row(0), xs, xt, KernelSpec(s.gamma), 1.0);
        if (r.slack >= -0.05 * r.epsilon_bar * r.epsilon_bar) ++ok;
    }
    CHECK(ok >= 19);
}

TEST_CASE("rare-class report") {
    std::mt19937_64 rng(5);
    const auto xs = random_matrix(rng, 40, 2);
    const auto xt = random_matrix(rng, 40, 2, 0.3);
    const KernelSpec k(0.5);

    const std::vector<std::string> one{"a"};
    const auto anchor = mat({{0.2, 0.1}});
    const auto single = rare_class_report(anchor, one, xs, xt, k, 1.0);
    REQUIRE(single.size() == 1);
    const double lhs = geodesic_distortion(anchor.row(0), xs, xt, k, 1.0).lhs_estimate;
    CHECK(single[0].mean_distortion == doctest::Approx(lhs).epsilon(1e-15));
    CHECK(single[0].max_distortion == doctest::Approx(lhs).epsilon(1e-15));

    const std::vector<std::string> two{"cat", "dog"};
    const auto same = rare_class_report(mat({{0, 0}, {0, 0}}), two, xs, xs, k, 1.0);
    REQUIRE(same.size() == 2);
    for (const auto& c : same) {
        CHECK(c.mean_distortion == 0.0);
        CHECK(c.max_distortion == 0.0);
    }

    // 95/5 imbalance: both classes stay under the shared bound plus remainder
    std::vector<std::string> labels;
    for (int i = 0; i < 40; ++i) labels.push_back(i < 38 ? "common" : "rare");
    const auto report = rare_class_report(xs, labels, xs, xt, k, 1.0);
    REQUIRE(report.size() == 2);
    CHECK(report[0].class_label == "rare");
    CHECK(report[0].sample_count == 2);
    CHECK(report[1].sample_count == 38);
    const double rhs = std::sqrt(2.0 * k.gamma()) * mmd2_unbiased(xs, xt, k).mmd;
    double eps_bar = 0.0;
    for (std::size_t i = 0; i < xs.rows(); ++i)
        eps_bar = std::max(eps_bar, geodesic_distortion(xs.row(i), xs, xt, k, 1.0).epsilon_bar);
    for (const auto& c : report) {
        CHECK(c.mean_distortion <= c.max_distortion);
        CHECK(c.max_distortion <= rhs + 0.05 * eps_bar * eps_bar);
    }
    const std::vector<std::string> wrong{"a"};
    CHECK_THROWS_AS(rare_class_report(xs, wrong, xs, xt, k, 1.0), InputError);
}
