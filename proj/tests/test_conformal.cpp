#include "doctest.h"

#include "credal_cert/conformal.hpp"
#include "credal_cert/error.hpp"

using namespace credal_cert;

TEST_CASE("coverage increment at zero shift") {
    CoveragePolicy p{0.1, 0.25, 2.0, 100, 1.0};
    CHECK(coverage_increment(p, 0.0) == 0.25);
    p.emp_risk = 0.95;
    CHECK(coverage_increment(p, 0.0) == doctest::Approx(0.9));
    p.emp_risk = -0.2;
    CHECK(coverage_increment(p, 0.0) == 0.0);
    p.emp_risk = 0.3;
    p.l_h = 0.0;
    for (double eps : {0.0, 0.1, 1.0, 10.0}) CHECK(coverage_increment(p, eps) == 0.3);
}

TEST_CASE("coverage cap binds") {
    const CoveragePolicy p{0.1, 0.1, 2.0, 100, 1.0};
    // (0.1 + 0.2 / 0.1) / 1.2 = 1.75, capped at 0.9
    CHECK(coverage_increment(p, 0.2) == doctest::Approx(0.9));
    CHECK(adaptive_alpha(p, 0.2) == doctest::Approx(1.0));
    CHECK(adaptive_alpha(p, 0.2) <= 1.0);
}

TEST_CASE("adaptive alpha without shift or risk") {
    const CoveragePolicy p{0.1, 0.0, 2.0, 100, 0.0};
    CHECK(adaptive_alpha(p, 0.5) == 0.1);
}

TEST_CASE("coverage increment is bounded and monotone on a grid") {
    for (double kl : {0.5, 2.0, 10.0}) {
        for (double emp : {0.0, 0.1, 0.4}) {
            for (double l_h : {0.5, 1.0, 2.0}) {
                const CoveragePolicy p{0.1, emp, kl, 200, l_h};
                double prev = -1.0;
                for (int i = 0; i <= 100; ++i) {
                    const double g = coverage_increment(p, 0.01 * i);
                    CHECK(g >= 0.0);
                    CHECK(g <= 0.9);
                    CHECK(g >= prev);
                    prev = g;
                }
            }
        }
    }
}

TEST_CASE("shift-only mode") {
    const CoveragePolicy p{0.2, 0.5, 0.0, 100, 2.0};
    CHECK(coverage_increment(p, 0.1, CoverageMode::ShiftOnly) == doctest::Approx(0.2));
    CHECK(coverage_increment(p, 1.0, CoverageMode::ShiftOnly) == doctest::Approx(0.8));
    CHECK(coverage_increment(p, 0.0, CoverageMode::ShiftOnly) == 0.0);
    CHECK(to_string(CoverageMode::ShiftOnly) == "shift_only");
}

TEST_CASE("coverage errors") {
    const CoveragePolicy p{0.1, 0.1, 0.0, 100, 1.0};
    CHECK_THROWS_AS(coverage_increment(p, 0.1), NumericalError);
    CHECK_THROWS_AS(adaptive_alpha(p, 0.1), NumericalError);
    CoveragePolicy bad{1.0, 0.1, 1.0, 100, 1.0};
    CHECK_THROWS_AS(coverage_increment(bad, 0.1), InputError);
    bad.alpha0 = 0.1;
    CHECK_THROWS_AS(coverage_increment(bad, -0.1), InputError);
}
