#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "credal_cert/mmd.hpp"

namespace credal_cert {

// KL(rho || pi) in nats, the labeled source count entering the PAC term, and
// the total failure probability.
struct PosteriorComplexity {
    double kl = 0.0;
    std::size_t n_labeled = 1;
    double delta = 0.05;

    // Throws InputError unless kl >= 0, n_labeled >= 1 and 0 < delta < 1.
    void validate() const;
};

enum class BoundKind { Population, FiniteSample, LowerOnly };

std::string_view to_string(BoundKind kind);

// upper_risk is always computed as (empirical_risk + complexity_term) +
// shift_penalty, and lower_risk as (empirical_risk - complexity_term) -
// shift_penalty, so the decomposition can be re-checked bit for bit.
struct BoundReport {
    double empirical_risk = 0.0;
    double complexity_term = 0.0;
    double shift_penalty = 0.0;
    double upper_risk = 0.0;
    double lower_risk = 0.0;
    BoundKind kind = BoundKind::Population;
};

/// Closed-form KL(N(mu_p, diag var_p) || N(mu_q, diag var_q)).
double kl_diag_gaussians(std::span<const double> mu_p, std::span<const double> var_p,
                         std::span<const double> mu_q, std::span<const double> var_q);

/// sqrt((kl + ln(2 sqrt(n) / delta)) / (2 n)).
double complexity_term(const PosteriorComplexity& c);

/// Same with the ln(4 sqrt(n) / delta) factor used when half of delta is
/// spent on MMD concentration.
double finite_sample_complexity_term(const PosteriorComplexity& c);

/// Target-risk bound with the population MMD as shift penalty.
BoundReport population_bound(double emp_risk, const PosteriorComplexity& c, double l_h, double mmd);

/// Fully empirical bound: the MMD is replaced by est.mmd plus its
/// concentration width at level delta / 2. Requires delta < 1/2 and an
/// unbiased estimate.
BoundReport finite_sample_bound(double emp_risk, const PosteriorComplexity& c, double l_h,
                                const MmdEstimate& est);

/// emp_risk - complexity_term(c).
double pac_lower_bound(double emp_risk, const PosteriorComplexity& c);

// Two-sided classical interval without any shift term.
BoundReport classical_bound(double emp_risk, const PosteriorComplexity& c);

}  // namespace credal_cert
