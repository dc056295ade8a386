#pragma once

// Synthetic isotropic-Gaussian shift scenarios with closed-form kernel
// expectations, plus literal reference estimators. Nothing here reuses the
// Gram or MMD code paths of the main library, so agreement between the two is
// a meaningful check.

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "credal_cert/feature_matrix.hpp"
#include "credal_cert/kernel.hpp"
#include "credal_cert/mmd.hpp"

namespace credal_cert::oracle {

struct IsotropicGaussian {
    std::vector<double> mean;
    double var = 1.0;  // covariance var * I
};

struct ShiftScenario {
    std::size_t d = 1;
    std::vector<double> mean_s;
    std::vector<double> mean_t;
    double var_s = 1.0;
    double var_t = 1.0;
    double gamma = 1.0;
    std::uint64_t seed = 0;

    void validate() const;
    IsotropicGaussian source() const { return {mean_s, var_s}; }
    IsotropicGaussian target() const { return {mean_t, var_t}; }
};

// m draws from N(mean_s, var_s I) and n from N(mean_t, var_t I), seeded by s.seed.
std::pair<FeatureMatrix, FeatureMatrix> sample_scenario(const ShiftScenario& s, std::size_t m,
                                                        std::size_t n);

// count draws from one Gaussian with an explicit seed.
FeatureMatrix sample_gaussian(const IsotropicGaussian& g, std::size_t count, std::uint64_t seed);

/// E k(x, y) for independent x ~ a, y ~ b under the RBF kernel:
/// (1 + 2 gamma (va + vb))^(-d/2) exp(-gamma |ma - mb|^2 / (1 + 2 gamma (va + vb))).
/// Variances may be zero (point masses).
double gaussian_kernel_expectation(const IsotropicGaussian& a, const IsotropicGaussian& b,
                                   double gamma);

double analytic_mmd2(const ShiftScenario& s);

struct MixtureComponent {
    double weight = 1.0;
    IsotropicGaussian component;
};

// Closed-form MMD^2 between two finite Gaussian mixtures (weights sum to 1).
double analytic_mixture_mmd2(const std::vector<MixtureComponent>& p,
                             const std::vector<MixtureComponent>& q, double gamma);

/// Literal transcription of the U- or V-statistic with direct differences and
/// no shared Gram matrix. Limited to m + n <= 200.
double brute_force_mmd2(const FeatureMatrix& source, const FeatureMatrix& target,
                        const KernelSpec& kernel, MmdKind kind);

// Loss L(x) = sum_j weights_j k(centers_j, x), an element of the RKHS with
// norm sqrt(beta^T K_zz beta).
struct KernelExpansion {
    FeatureMatrix centers;
    std::vector<double> weights;
};

double evaluate_expansion(const KernelExpansion& loss, std::span<const double> x, double gamma);
double expansion_rkhs_norm(const KernelExpansion& loss, double gamma);

struct RiskEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

/// Monte-Carlo target risk E_{x ~ P_t} L(x). Requires mc_samples >= 10^4.
RiskEstimate true_target_risk(const ShiftScenario& s, const KernelExpansion& loss,
                              std::size_t mc_samples, std::uint64_t seed);

// Exact E_{x ~ g} L(x) via gaussian_kernel_expectation, used to cross-check
// the Monte-Carlo path.
double analytic_expansion_risk(const IsotropicGaussian& g, const KernelExpansion& loss,
                               double gamma);

}  // namespace credal_cert::oracle
