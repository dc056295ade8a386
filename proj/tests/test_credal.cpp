#include "doctest.h"

#include <cmath>
#include <random>

#include "credal_cert/credal.hpp"
#include "credal_cert/error.hpp"
#include "support.hpp"

using namespace credal_cert;
using test_support::random_matrix;

namespace {
const PosteriorComplexity kBase{0.0, 100, 0.05};

RiskInterval interval_of(double lower, double upper) {
    RiskInterval r;
    r.lower = lower;
    r.upper = upper;
    r.width = upper - lower;
    return r;
}
}  // namespace

TEST_CASE("worst-case risk") {
    CHECK(worst_case_risk(0.1, kBase, 2.0, {0.1, RadiusSource::UserFixed}) ==
          doctest::Approx(0.473081838260229).epsilon(1e-14));
    CHECK(worst_case_risk(0.1, kBase, 2.0, {0.0, RadiusSource::UserFixed}) ==
          classical_bound(0.1, kBase).upper_risk);
    const double a = worst_case_risk(0.1, kBase, 2.0, {0.1, RadiusSource::UserFixed});
    const double b = worst_case_risk(0.1, kBase, 2.0, {0.2, RadiusSource::UserFixed});
    CHECK(b - a == doctest::Approx(0.2).epsilon(1e-12));
    CHECK_THROWS_AS(worst_case_risk(0.1, kBase, 2.0, {-0.1, RadiusSource::UserFixed}), InputError);
}

TEST_CASE("risk interval hand values") {
    const RiskInterval r = risk_interval(0.3, kBase, 1.0, {0.05, RadiusSource::UserFixed});
    CHECK(r.lower == doctest::Approx(0.076918161739771).epsilon(1e-13));
    CHECK(r.upper == doctest::Approx(0.523081838260229).epsilon(1e-14));
    CHECK(r.width == doctest::Approx(0.446163676520457).epsilon(1e-14));
    CHECK(r.epsilon == 0.05);
    CHECK(r.components.shift_penalty == 0.05);
}

TEST_CASE("risk interval identities on random draws") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const PosteriorComplexity c{5.0 * u(rng), 10 + static_cast<std::size_t>(1000 * u(rng)),
                                    0.01 + 0.9 * u(rng)};
        const double l_h = 3.0 * u(rng);
        const double eps = u(rng);
        const RiskInterval r = risk_interval(u(rng), c, l_h, {eps, RadiusSource::UserFixed});
        CHECK(r.width == 2.0 * complexity_term(c) + 2.0 * (l_h * eps));
        CHECK(std::abs((r.upper - r.lower) - r.width) <= 4.0 * std::ldexp(1.0, -52) * 
                                                             std::max({std::abs(r.upper), std::abs(r.lower), r.width}));
        CHECK(r.lower <= r.upper);
    }
}

TEST_CASE("risk intervals nest as epsilon grows") {
    RiskInterval prev = risk_interval(0.2, kBase, 1.5, {0.0, RadiusSource::UserFixed});
    for (int i = 1; i <= 10; ++i) {
        const RiskInterval next = risk_interval(0.2, kBase, 1.5, {0.05 * i, RadiusSource::UserFixed});
        CHECK(next.lower <= prev.lower);
        CHECK(next.upper >= prev.upper);
        prev = next;
    }
    // collapses toward a point with no shift and many labels
    const RiskInterval tight = risk_interval(0.2, {0.0, 100000000, 0.05}, 1.0,
                                             {0.0, RadiusSource::UserFixed});
    CHECK(tight.width < 1e-3);
}

TEST_CASE("membership upper confidence") {
    std::mt19937_64 rng(12);
    const auto xs = random_matrix(rng, 60, 2);
    const KernelSpec k(0.5);
    CHECK(membership_upper_confidence(xs, xs, k, {concentration_width(60, 60, 0.05), RadiusSource::UserFixed}, 0.05));
    CHECK_FALSE(membership_upper_confidence(xs, xs, k, {0.0, RadiusSource::UserFixed}, 0.05));
    for (int t = 0; t < 10; ++t) {
        const auto src = random_matrix(rng, 200, 2);
        const auto far = random_matrix(rng, 200, 2, 5.0);
        CHECK_FALSE(membership_upper_confidence(far, src, k, {0.1, RadiusSource::UserFixed}, 0.05));
    }
}

TEST_CASE("adaptation decision rule") {
    CHECK(decide_adaptation(interval_of(0.1, 0.3), 0.2).verdict ==
          AdaptationVerdict::AdaptationWarranted);
    CHECK(decide_adaptation(interval_of(0.1, 0.3), 0.35).verdict ==
          AdaptationVerdict::NoAdaptationNeeded);
    CHECK(decide_adaptation(interval_of(0.25, 0.3), 0.2).verdict ==
          AdaptationVerdict::AdaptationFutile);
    // ties: upper == r_max certifies, lower == r_max is still warranted
    CHECK(decide_adaptation(interval_of(0.1, 0.3), 0.3).verdict ==
          AdaptationVerdict::NoAdaptationNeeded);
    CHECK(decide_adaptation(interval_of(0.2, 0.3), 0.2).verdict ==
          AdaptationVerdict::AdaptationWarranted);
    CHECK_THROWS_AS(decide_adaptation(interval_of(0.1, 0.3), NAN), InputError);
    CHECK(to_string(AdaptationVerdict::AdaptationFutile) == "adaptation_futile");
}
