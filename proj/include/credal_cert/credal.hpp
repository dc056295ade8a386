#pragma once

#include <string_view>

#include "credal_cert/feature_matrix.hpp"
#include "credal_cert/kernel.hpp"
#include "credal_cert/pac_bayes.hpp"

namespace credal_cert {

enum class RadiusSource { UserFixed, PermutationCalibrated, UpperConfidence };

std::string_view to_string(RadiusSource source);

// MMD ball of radius epsilon around the source distribution.
struct CredalSpec {
    double epsilon = 0.0;
    RadiusSource source = RadiusSource::UserFixed;

    void validate() const;
};

// Lower/upper risk over the credal set. `width` is 2 * complexity +
// 2 * L_H * epsilon evaluated in closed form; upper - lower reproduces it up to
// the rounding of the two endpoints.
struct RiskInterval {
    double lower = 0.0;
    double upper = 0.0;
    double width = 0.0;
    double epsilon = 0.0;
    BoundReport components;
};

enum class AdaptationVerdict { NoAdaptationNeeded, AdaptationWarranted, AdaptationFutile };

std::string_view to_string(AdaptationVerdict verdict);

struct AdaptationDecision {
    AdaptationVerdict verdict = AdaptationVerdict::NoAdaptationNeeded;
    double r_max = 0.0;
    RiskInterval interval;
};

/// Upper risk over every distribution in the ball: emp + complexity + L_H * epsilon.
double worst_case_risk(double emp_risk, const PosteriorComplexity& c, double l_h,
                       const CredalSpec& spec);

RiskInterval risk_interval(double emp_risk, const PosteriorComplexity& c, double l_h,
                           const CredalSpec& spec);

/// One-sided membership certificate: true iff the MMD upper confidence bound
/// between the query and source samples lies inside the ball. A false result
/// does not certify non-membership.
bool membership_upper_confidence(const FeatureMatrix& query, const FeatureMatrix& source,
                                 const KernelSpec& kernel, const CredalSpec& spec, double alpha);

/// upper <= r_max: no adaptation; lower > r_max: futile; otherwise warranted.
AdaptationDecision decide_adaptation(const RiskInterval& interval, double r_max);

}  // namespace credal_cert
