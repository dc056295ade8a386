#include "credal_cert/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "credal_cert/error.hpp"

namespace credal_cert {

std::string_view to_string(CoverageMode mode) {
    return mode == CoverageMode::BoundRatio ? "bound_ratio" : "shift_only";
}

void CoveragePolicy::validate() const {
    if (!(alpha0 > 0.0 && alpha0 < 1.0)) {
        throw InputError("alpha0 must lie in (0, 1), got " + std::to_string(alpha0));
    }
    if (!std::isfinite(emp_risk)) throw InputError("empirical risk must be finite");
    if (!std::isfinite(kl) || kl < 0.0) throw InputError("KL must be finite and nonnegative");
    if (n_labeled < 1) throw InputError("n_labeled must be at least 1");
    if (!std::isfinite(l_h) || l_h < 0.0) throw InputError("L_H must be finite and nonnegative");
}

double coverage_increment(const CoveragePolicy& policy, double epsilon, CoverageMode mode) {
    policy.validate();
    if (!std::isfinite(epsilon) || epsilon < 0.0) {
        throw InputError("epsilon must be finite and nonnegative, got " + std::to_string(epsilon));
    }
    const double cap = 1.0 - policy.alpha0;
    const double shift = policy.l_h * epsilon;

    double raw = 0.0;
    if (mode == CoverageMode::ShiftOnly) {
        raw = shift;
    } else {
        if (policy.kl == 0.0) {
            throw NumericalError(
                "coverage increment is singular at KL = 0 (division by sqrt(KL / 2n)); "
                "use the shift_only mode or supply a positive KL");
        }
        const double scale = std::sqrt(policy.kl / (2.0 * static_cast<double>(policy.n_labeled)));
        raw = (policy.emp_risk + shift / scale) / (1.0 + shift);
    }
    return std::max(0.0, std::min(cap, raw));
}

double adaptive_alpha(const CoveragePolicy& policy, double epsilon, CoverageMode mode) {
    const double alpha = policy.alpha0 + coverage_increment(policy, epsilon, mode);
    return std::min(alpha, 1.0);
}

}  // namespace credal_cert
