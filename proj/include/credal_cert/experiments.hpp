#pragma once

// Monte-Carlo and closed-form experiments over oracle scenarios. Each runner
// returns raw measurements; pass/fail thresholds are applied by the caller.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "credal_cert/oracle.hpp"

namespace credal_cert::experiments {

struct EquivalenceOutcome {
    std::size_t instances = 0;
    double max_abs_diff_unbiased = 0.0;
    double max_abs_diff_biased = 0.0;
};

// Random instances with 2 <= m, n <= max_count and 1 <= d <= max_dim.
EquivalenceOutcome estimator_equivalence(std::size_t instances, std::size_t max_count,
                                         std::size_t max_dim, std::uint64_t seed);

struct UnbiasednessOutcome {
    double analytic = 0.0;
    double mc_estimate = 0.0;     // pairwise Monte-Carlo of the bilinear form
    double mc_std_error = 0.0;
    double mean_unbiased = 0.0;   // mean of mmd2_unbiased over resamples
    double unbiased_std_error = 0.0;
    std::size_t resamples = 0;
};

UnbiasednessOutcome unbiasedness(const oracle::ShiftScenario& scenario, std::size_t m,
                                 std::size_t n, std::size_t resamples, std::size_t mc_pairs);

struct ConcentrationOutcome {
    std::size_t trials = 0;
    std::size_t exceedances = 0;  // |MMD_u - MMD| > width(m, n, alpha)
    double width = 0.0;
    double analytic_mmd = 0.0;
};

ConcentrationOutcome concentration(const oracle::ShiftScenario& scenario, std::size_t m,
                                   std::size_t n, double alpha, std::size_t trials);

struct CoverageOutcome {
    std::size_t trials = 0;
    std::size_t covered = 0;  // population bound >= Monte-Carlo target risk
    double mean_upper = 0.0;
    double mean_true_risk = 0.0;
};

// Per trial: a random in-RKHS loss (centers near the source mean, convex
// weights so L takes values in [0, 1]), n_labeled source draws for the
// empirical risk, exact L_H and analytic MMD.
CoverageOutcome bound_coverage(const oracle::ShiftScenario& scenario, std::size_t n_labeled,
                               double delta, std::size_t num_centers, std::size_t mc_samples,
                               std::size_t trials);

struct IntervalIdentityOutcome {
    std::size_t draws = 0;
    std::size_t width_identity_exact = 0;  // width == 2 c + 2 L eps bitwise
    // |(upper - lower) - width| <= 4 ulp of the largest of |upper|, |lower|, width
    std::size_t endpoints_consistent = 0;
};

IntervalIdentityOutcome interval_identity(std::size_t draws, std::uint64_t seed);

struct PermutationOutcome {
    std::size_t trials = 0;
    std::size_t rejections = 0;       // p <= alpha
    std::size_t strong_rejections = 0;  // p < 0.01
    std::vector<double> p_values;
};

PermutationOutcome permutation_test(const oracle::ShiftScenario& scenario, std::size_t m,
                                    std::size_t n, std::size_t num_permutations, double alpha,
                                    std::size_t trials);

struct NormRecoveryOutcome {
    std::size_t expansions = 0;
    double max_relative_error = 0.0;
};

// Losses sum_j beta_j k(z_j, x) evaluated at n fit points whose first rows
// are the centers z_j, fitted at ridge lambda.
NormRecoveryOutcome norm_recovery(std::size_t expansions, std::size_t n_fit,
                                  std::size_t num_centers, std::size_t d, double gamma,
                                  double lambda, std::uint64_t seed);

struct GeometryOutcome {
    std::size_t trials = 0;
    std::size_t within_tolerance = 0;  // lhs <= rhs + c eps_bar^2
    double min_slack = 0.0;
};

GeometryOutcome geodesic_bound(const oracle::ShiftScenario& scenario, std::size_t m,
                               std::size_t n, double c_w, double remainder_coef,
                               std::size_t trials);

struct ConvexityOutcome {
    std::size_t pairs = 0;
    std::size_t checks = 0;
    std::size_t violations = 0;
    double max_ratio = 0.0;  // max MMD(P_s, Q_lambda) / epsilon
};

ConvexityOutcome credal_convexity(std::size_t pairs, std::size_t d, double gamma,
                                  std::uint64_t seed);

// One-sample Kolmogorov-Smirnov distance to Uniform(0, 1).
double ks_distance_uniform(std::vector<double> values);

}  // namespace credal_cert::experiments
