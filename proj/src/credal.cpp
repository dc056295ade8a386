#include "credal_cert/credal.hpp"

#include <cmath>
#include <string>

#include "credal_cert/error.hpp"
#include "credal_cert/mmd.hpp"

namespace credal_cert {

std::string_view to_string(RadiusSource source) {
    switch (source) {
        case RadiusSource::UserFixed: return "user_fixed";
        case RadiusSource::PermutationCalibrated: return "permutation_calibrated";
        case RadiusSource::UpperConfidence: return "upper_confidence";
    }
    return "unknown";
}

std::string_view to_string(AdaptationVerdict verdict) {
    switch (verdict) {
        case AdaptationVerdict::NoAdaptationNeeded: return "no_adaptation_needed";
        case AdaptationVerdict::AdaptationWarranted: return "adaptation_warranted";
        case AdaptationVerdict::AdaptationFutile: return "adaptation_futile";
    }
    return "unknown";
}

void CredalSpec::validate() const {
    if (!std::isfinite(epsilon) || epsilon < 0.0) {
        throw InputError("credal radius must be finite and nonnegative, got " +
                         std::to_string(epsilon));
    }
}

double worst_case_risk(double emp_risk, const PosteriorComplexity& c, double l_h,
                       const CredalSpec& spec) {
    spec.validate();
    return population_bound(emp_risk, c, l_h, spec.epsilon).upper_risk;
}

RiskInterval risk_interval(double emp_risk, const PosteriorComplexity& c, double l_h,
                           const CredalSpec& spec) {
    spec.validate();
    RiskInterval interval;
    interval.components = population_bound(emp_risk, c, l_h, spec.epsilon);
    interval.upper = interval.components.upper_risk;
    interval.lower = interval.components.lower_risk;
    interval.width = 2.0 * interval.components.complexity_term +
                     2.0 * interval.components.shift_penalty;
    interval.epsilon = spec.epsilon;
    return interval;
}

bool membership_upper_confidence(const FeatureMatrix& query, const FeatureMatrix& source,
                                 const KernelSpec& kernel, const CredalSpec& spec, double alpha) {
    spec.validate();
    const MmdEstimate est = mmd2_unbiased(source, query, kernel);
    return mmd_upper_confidence(est, alpha) <= spec.epsilon;
}

AdaptationDecision decide_adaptation(const RiskInterval& interval, double r_max) {
    if (!std::isfinite(r_max)) throw InputError("r_max must be finite");
    AdaptationDecision decision;
    decision.r_max = r_max;
    decision.interval = interval;
    if (interval.upper <= r_max) {
        decision.verdict = AdaptationVerdict::NoAdaptationNeeded;
    } else if (interval.lower > r_max) {
        decision.verdict = AdaptationVerdict::AdaptationFutile;
    } else {
        decision.verdict = AdaptationVerdict::AdaptationWarranted;
    }
    return decision;
}

}  // namespace credal_cert
