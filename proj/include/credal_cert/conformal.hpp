#pragma once

#include <cstddef>
#include <string_view>

namespace credal_cert {

struct CoveragePolicy {
    double alpha0 = 0.1;  // base miscoverage level, in (0, 1)
    double emp_risk = 0.0;
    double kl = 0.0;
    std::size_t n_labeled = 1;
    double l_h = 0.0;

    void validate() const;
};

// BoundRatio:  g(eps) = min{1 - alpha0, (emp + L_H eps / sqrt(kl / 2n)) / (1 + L_H eps)}
// ShiftOnly:   g(eps) = min{1 - alpha0, L_H eps}
// Both are clamped below at zero.
enum class CoverageMode { BoundRatio, ShiftOnly };

std::string_view to_string(CoverageMode mode);

/// Coverage increment g(eps) in [0, 1 - alpha0].
///
/// BoundRatio divides by sqrt(kl / 2n) and throws NumericalError when kl == 0.
/// Note that BoundRatio gives g(0) = min{1 - alpha0, emp_risk}, which is not
/// zero for a nonzero empirical risk.
double coverage_increment(const CoveragePolicy& policy, double epsilon,
                          CoverageMode mode = CoverageMode::BoundRatio);

/// alpha0 + coverage_increment(policy, epsilon, mode); never exceeds 1.
double adaptive_alpha(const CoveragePolicy& policy, double epsilon,
                      CoverageMode mode = CoverageMode::BoundRatio);

}  // namespace credal_cert
