#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "credal_cert/feature_matrix.hpp"
#include "credal_cert/kernel.hpp"

namespace credal_cert {

enum class MmdKind { Biased, Unbiased };

std::string_view to_string(MmdKind kind);

struct MmdEstimate {
    double mmd2 = 0.0;  // raw estimate; the unbiased kind may be negative
    double mmd = 0.0;   // sqrt(max(mmd2, 0))
    MmdKind kind = MmdKind::Unbiased;
    std::size_t m = 0;  // source count
    std::size_t n = 0;  // target count
};

/// U-statistic estimate of MMD^2 (diagonal terms excluded). Requires m, n >= 2.
///
/// The result is bitwise symmetric in (source, target).
MmdEstimate mmd2_unbiased(const FeatureMatrix& source, const FeatureMatrix& target,
                          const KernelSpec& spec);

/// V-statistic (plug-in) estimate |mu_s - mu_t|^2 with 1/m^2, 1/n^2
/// normalization, clamped at zero against rounding.
MmdEstimate mmd2_biased(const FeatureMatrix& source, const FeatureMatrix& target,
                        const KernelSpec& spec);

/// Deviation width sqrt(2 ln(2/alpha) / min(m, n)) bounding |MMD_u - MMD|
/// with probability at least 1 - alpha.
double concentration_width(std::size_t m, std::size_t n, double alpha);

/// est.mmd + concentration_width(est.m, est.n, alpha). Only defined for the
/// unbiased estimator.
double mmd_upper_confidence(const MmdEstimate& est, double alpha);

// Source-side kernel sums cached across many target batches.
class SourceReference {
public:
    SourceReference(FeatureMatrix source, KernelSpec spec);

    const FeatureMatrix& source() const { return source_; }
    const KernelSpec& kernel() const { return spec_; }

    // Identical (bitwise) to mmd2_unbiased(source(), target, kernel()).
    MmdEstimate mmd2_unbiased(const FeatureMatrix& target) const;

private:
    FeatureMatrix source_;
    KernelSpec spec_;
    double self_sum_;  // sum over i != j of k(x_i, x_j)
};

struct CalibrationResult {
    double epsilon_alpha = 0.0;  // credal radius, in MMD (not squared) units
    double p_value = 1.0;
    double observed_mmd2 = 0.0;
    std::size_t num_permutations = 0;
    double alpha = 0.05;
    std::uint64_t seed = 0;
};

// Permutation two-sample test on the unbiased statistic. epsilon_alpha is the
// square root of the (1 - alpha) empirical quantile of the permuted MMD^2
// values (order statistic ceil((1 - alpha) P), clamped at zero); the p-value
// uses the add-one convention. Each permutation draws from its own seeded
// stream, so the result is independent of the thread count.
CalibrationResult permutation_calibrate(const FeatureMatrix& source, const FeatureMatrix& target,
                                        const KernelSpec& spec, std::size_t num_permutations,
                                        double alpha, std::uint64_t seed);

}  // namespace credal_cert
