#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "credal_cert/feature_matrix.hpp"
#include "credal_cert/kernel.hpp"

namespace credal_cert {

// Local geodesic distortion at one anchor. In the linearized regime the
// kernel geodesic distance is sqrt(2 gamma) times the feature distance, so
//   lhs = sqrt(2 gamma) |E_s |a - y| - E_t |a - y||
//   rhs = sqrt(2 gamma) C_W MMD_u(source, target)
// and the bound lhs <= rhs holds up to an O(epsilon_bar^2) remainder.
struct DistortionReport {
    std::size_t anchor_index = 0;
    double lhs_estimate = 0.0;
    double rhs_bound = 0.0;
    double slack = 0.0;        // rhs - lhs
    double epsilon_bar = 0.0;  // max distance from the anchor to any used point
};

struct ClassDistortionSummary {
    std::string class_label;
    std::size_t sample_count = 0;
    double mean_distortion = 0.0;
    double max_distortion = 0.0;
};

/// Mean Euclidean distance from `anchor` to the rows of `x`.
double expected_feature_distance(std::span<const double> anchor, const FeatureMatrix& x);

DistortionReport geodesic_distortion(std::span<const double> anchor, const FeatureMatrix& source,
                                     const FeatureMatrix& target, const KernelSpec& kernel,
                                     double c_w, std::size_t anchor_index = 0);

/// Per-label mean and max of lhs_estimate over the anchors carrying that label,
/// sorted by ascending sample_count (ties by label) so rare classes come first.
std::vector<ClassDistortionSummary> rare_class_report(const FeatureMatrix& anchors,
                                                      std::span<const std::string> labels,
                                                      const FeatureMatrix& source,
                                                      const FeatureMatrix& target,
                                                      const KernelSpec& kernel, double c_w);

}  // namespace credal_cert
