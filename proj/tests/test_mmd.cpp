#include "doctest.h"

#include <cmath>

#include "credal_cert/error.hpp"
#include "credal_cert/mmd.hpp"
#include "credal_cert/oracle.hpp"
#include "support.hpp"

using namespace credal_cert;
using test_support::mat;
using test_support::random_matrix;

namespace {
constexpr double kTwoPoint = 1.264241117657115;  // 2 - 2 exp(-1)
}

TEST_CASE("unbiased estimator hand values") {
    const KernelSpec spec(1.0);
    const auto zeros = mat({{0}, {0}});
    const auto est0 = mmd2_unbiased(zeros, zeros, spec);
    CHECK(est0.mmd2 == 0.0);
    CHECK(est0.mmd == 0.0);
    CHECK(est0.m == 2);
    CHECK(est0.n == 2);
    CHECK(est0.kind == MmdKind::Unbiased);

    const auto est = mmd2_unbiased(zeros, mat({{1}, {1}}), spec);
    CHECK(est.mmd2 == doctest::Approx(kTwoPoint).epsilon(1e-15));
    CHECK(est.mmd == doctest::Approx(std::sqrt(kTwoPoint)).epsilon(1e-15));
}

TEST_CASE("biased estimator hand values") {
    const KernelSpec spec(1.0);
    const auto est = mmd2_biased(mat({{0}}), mat({{1}}), spec);
    CHECK(est.mmd2 == doctest::Approx(kTwoPoint).epsilon(1e-15));
    CHECK(est.kind == MmdKind::Biased);
    std::mt19937_64 rng(3);
    const auto x = random_matrix(rng, 7, 3);
    CHECK(mmd2_biased(x, x, spec).mmd2 == 0.0);
}

TEST_CASE("estimators agree with the brute-force oracle") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 25; ++t) {
        const auto xs = random_matrix(rng, 5, 2);
        const auto xt = random_matrix(rng, 4, 2, 0.5);
        const KernelSpec spec(0.4);
        CHECK(std::abs(mmd2_unbiased(xs, xt, spec).mmd2 -
                       oracle::brute_force_mmd2(xs, xt, spec, MmdKind::Unbiased)) <= 1e-12);
        CHECK(std::abs(mmd2_biased(xs, xt, spec).mmd2 -
                       oracle::brute_force_mmd2(xs, xt, spec, MmdKind::Biased)) <= 1e-12);
    }
}

TEST_CASE("biased equals unbiased plus the diagonal correction") {
    std::mt19937_64 rng(23);
    const auto xs = random_matrix(rng, 6, 2);
    const auto xt = random_matrix(rng, 9, 2);
    const KernelSpec spec(0.8);
    // With k(x, x) = 1, V = (1/m^2)(m + S_s) + (1/n^2)(n + S_t) - 2 C and
    // U = S_s / (m(m-1)) + S_t / (n(n-1)) - 2 C, where S are off-diagonal sums.
    auto offdiag = [&](const FeatureMatrix& x) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.rows(); ++i)
            for (std::size_t j = 0; j < x.rows(); ++j)
                if (i != j) s += rbf_kernel(x.row(i), x.row(j), spec);
        return s;
    };
    const double m = 6, n = 9;
    const double ss = offdiag(xs), st = offdiag(xt);
    const double correction = (m + ss) / (m * m) - ss / (m * (m - 1)) + (n + st) / (n * n) -
                              st / (n * (n - 1));
    const double u = mmd2_unbiased(xs, xt, spec).mmd2;
    const double v = mmd2_biased(xs, xt, spec).mmd2;
    CHECK(v == doctest::Approx(u + correction).epsilon(1e-12));
}

TEST_CASE("unbiased estimator is exactly symmetric and can be negative") {
    std::mt19937_64 rng(29);
    bool saw_negative = false;
    for (int t = 0; t < 40; ++t) {
        const auto xs = random_matrix(rng, 8, 2);
        const auto xt = random_matrix(rng, 11, 2);
        const KernelSpec spec(0.5);
        const auto a = mmd2_unbiased(xs, xt, spec);
        const auto b = mmd2_unbiased(xt, xs, spec);
        CHECK(a.mmd2 == b.mmd2);
        if (a.mmd2 < 0.0) {
            saw_negative = true;
            CHECK(a.mmd == 0.0);
        }
    }
    CHECK(saw_negative);
}

TEST_CASE("unbiased estimator input validation") {
    const KernelSpec spec(1.0);
    CHECK_THROWS_AS(mmd2_unbiased(mat({{0}}), mat({{1}, {2}}), spec), InputError);
    CHECK_THROWS_AS(mmd2_unbiased(mat({{0}, {1}}), mat({{1, 0}, {2, 0}}), spec), InputError);
}

TEST_CASE("source reference matches the free function bitwise") {
    std::mt19937_64 rng(31);
    const auto xs = random_matrix(rng, 30, 3);
    const KernelSpec spec(0.25);
    const SourceReference ref(xs, spec);
    for (int t = 0; t < 5; ++t) {
        const auto xt = random_matrix(rng, 10 + t, 3, 0.3 * t);
        CHECK(ref.mmd2_unbiased(xt).mmd2 == mmd2_unbiased(xs, xt, spec).mmd2);
    }
}

TEST_CASE("concentration width values") {
    CHECK(concentration_width(200, 200, 0.05) ==
          doctest::Approx(0.192064558263984).epsilon(1e-14));
    CHECK(concentration_width(50, 100, 0.1) ==
          doctest::Approx(0.346163676520457).epsilon(1e-14));
    CHECK(concentration_width(8, 8, 0.2) == doctest::Approx(0.758713564692573).epsilon(1e-14));
    CHECK(concentration_width(800, 800, 0.05) < concentration_width(200, 200, 0.05));
    CHECK_THROWS_AS(concentration_width(10, 10, 0.0), InputError);
    CHECK_THROWS_AS(concentration_width(10, 10, 1.0), InputError);
    CHECK_THROWS_AS(concentration_width(0, 10, 0.5), InputError);
}

TEST_CASE("upper confidence composes additively") {
    MmdEstimate est;
    est.m = est.n = 200;
    CHECK(mmd_upper_confidence(est, 0.05) == doctest::Approx(0.192064558263984).epsilon(1e-14));
    est.mmd = 0.3;
    CHECK(mmd_upper_confidence(est, 0.05) == doctest::Approx(0.492064558263984).epsilon(1e-14));
    est.kind = MmdKind::Biased;
    CHECK_THROWS_AS(mmd_upper_confidence(est, 0.05), InputError);
}

TEST_CASE("permutation calibration is seeded and well formed") {
    std::mt19937_64 rng(37);
    const auto xs = random_matrix(rng, 30, 2);
    const auto xt = random_matrix(rng, 25, 2);
    const KernelSpec spec(0.5);
    const auto a = permutation_calibrate(xs, xt, spec, 200, 0.05, 99);
    const auto b = permutation_calibrate(xs, xt, spec, 200, 0.05, 99);
    CHECK(a.epsilon_alpha == b.epsilon_alpha);
    CHECK(a.p_value == b.p_value);
    CHECK(a.observed_mmd2 == doctest::Approx(mmd2_unbiased(xs, xt, spec).mmd2).epsilon(1e-12));
    CHECK(a.p_value > 0.0);
    CHECK(a.p_value <= 1.0);
    CHECK(a.epsilon_alpha >= 0.0);
    CHECK(a.num_permutations == 200);
    CHECK(a.seed == 99);

    const auto c = permutation_calibrate(xs, xt, spec, 200, 0.05, 100);
    CHECK(c.epsilon_alpha != a.epsilon_alpha);

    // looser level, smaller quantile
    const auto loose = permutation_calibrate(xs, xt, spec, 200, 0.5, 99);
    CHECK(loose.epsilon_alpha <= a.epsilon_alpha);

    CHECK_THROWS_AS(permutation_calibrate(xs, xt, spec, 99, 0.05, 1), InputError);
    CHECK_THROWS_AS(permutation_calibrate(xs, xt, spec, 100, 1.5, 1), InputError);
}

TEST_CASE("permutation test detects a strong shift") {
    std::mt19937_64 rng(41);
    const auto xs = random_matrix(rng, 50, 2);
    const auto xt = random_matrix(rng, 50, 2, 3.0);
    const auto r = permutation_calibrate(xs, xt, median_heuristic(xs, xt), 200, 0.05, 5);
    CHECK(r.p_value < 0.01);
    CHECK(std::sqrt(r.observed_mmd2) > r.epsilon_alpha);
}
