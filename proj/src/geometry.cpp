#include "credal_cert/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "credal_cert/error.hpp"
#include "credal_cert/mmd.hpp"

namespace credal_cert {

namespace {

double euclidean(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

void require_dim(std::span<const double> anchor, const FeatureMatrix& x) {
    if (anchor.size() != x.dim()) {
        throw InputError("anchor has dimension " + std::to_string(anchor.size()) +
                         ", features have " + std::to_string(x.dim()));
    }
}

double max_distance(std::span<const double> anchor, const FeatureMatrix& x) {
    double best = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) best = std::max(best, euclidean(anchor, x.row(i)));
    return best;
}

double linearized_gap(std::span<const double> anchor, const FeatureMatrix& source,
                      const FeatureMatrix& target, double scale) {
    return scale * std::abs(expected_feature_distance(anchor, source) -
                            expected_feature_distance(anchor, target));
}

}  // namespace

double expected_feature_distance(std::span<const double> anchor, const FeatureMatrix& x) {
    require_dim(anchor, x);
    double acc = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) acc += euclidean(anchor, x.row(i));
    return acc / static_cast<double>(x.rows());
}

DistortionReport geodesic_distortion(std::span<const double> anchor, const FeatureMatrix& source,
                                     const FeatureMatrix& target, const KernelSpec& kernel,
                                     double c_w, std::size_t anchor_index) {
    if (!std::isfinite(c_w) || c_w < 0.0) {
        throw InputError("C_W must be finite and nonnegative");
    }
    require_dim(anchor, source);
    require_dim(anchor, target);

    const double scale = std::sqrt(2.0 * kernel.gamma());
    DistortionReport report;
    report.anchor_index = anchor_index;
    report.lhs_estimate = linearized_gap(anchor, source, target, scale);
    report.rhs_bound = scale * c_w * mmd2_unbiased(source, target, kernel).mmd;
    report.slack = report.rhs_bound - report.lhs_estimate;
    report.epsilon_bar = std::max(max_distance(anchor, source), max_distance(anchor, target));
    return report;
}

std::vector<ClassDistortionSummary> rare_class_report(const FeatureMatrix& anchors,
                                                      std::span<const std::string> labels,
                                                      const FeatureMatrix& source,
                                                      const FeatureMatrix& target,
                                                      const KernelSpec& kernel, double c_w) {
    if (labels.size() != anchors.rows()) {
        throw InputError("label count " + std::to_string(labels.size()) +
                         " does not match anchor count " + std::to_string(anchors.rows()));
    }
    if (!std::isfinite(c_w) || c_w < 0.0) {
        throw InputError("C_W must be finite and nonnegative");
    }
    require_dim(anchors.row(0), source);
    require_dim(anchors.row(0), target);

    // The rhs does not depend on the anchor, so only lhs is evaluated per anchor.
    const double scale = std::sqrt(2.0 * kernel.gamma());
    std::map<std::string, ClassDistortionSummary> by_label;
    for (std::size_t i = 0; i < anchors.rows(); ++i) {
        const double lhs = linearized_gap(anchors.row(i), source, target, scale);
        auto& summary = by_label[labels[i]];
        summary.class_label = labels[i];
        summary.sample_count += 1;
        summary.mean_distortion += lhs;
        summary.max_distortion = std::max(summary.max_distortion, lhs);
    }

    std::vector<ClassDistortionSummary> out;
    out.reserve(by_label.size());
    for (auto& [label, summary] : by_label) {
        summary.mean_distortion /= static_cast<double>(summary.sample_count);
        // Rounding in the mean must not exceed the max it averages.
        summary.mean_distortion = std::min(summary.mean_distortion, summary.max_distortion);
        out.push_back(summary);
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.sample_count < b.sample_count;
    });
    return out;
}

}  // namespace credal_cert
