#pragma once

#include <cmath>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "credal_cert/feature_matrix.hpp"

namespace credal_cert {

enum class BandwidthSource { Fixed, MedianHeuristic };

std::string_view to_string(BandwidthSource source);

/// RBF kernel k(x, y) = exp(-gamma * |x - y|^2) on feature vectors.
///
/// gamma is the inverse squared length-scale and must be positive and finite.
class KernelSpec {
public:
    explicit KernelSpec(double gamma, BandwidthSource source = BandwidthSource::Fixed);

    double gamma() const { return gamma_; }
    BandwidthSource source() const { return source_; }

    // Same source, new bandwidth.
    KernelSpec with_gamma(double gamma) const { return KernelSpec(gamma, source_); }

private:
    double gamma_;
    BandwidthSource source_;
};

// <x, y> accumulated left to right.
double dot(std::span<const double> x, std::span<const double> y);

// |x|^2 + |y|^2 - 2<x, y>, clamped at zero. Symmetric in its arguments bit
// for bit, and exactly zero when x == y.
double squared_distance(std::span<const double> x, std::span<const double> y);

double rbf_kernel(std::span<const double> x, std::span<const double> y, const KernelSpec& spec);

/// Dense kernel matrix with entry (i, j) = rbf_kernel(X_i, Y_j).
Eigen::MatrixXd gram_matrix(const FeatureMatrix& x, const FeatureMatrix& y, const KernelSpec& spec);

/// Bandwidth from the pooled sample: gamma = 1 / (2 * median |a - b|^2) over
/// distinct pairs a != b (index-distinct). An even number of pairs takes the
/// mean of the two central values.
///
/// Throws NumericalError when the median distance is zero.
KernelSpec median_heuristic(const FeatureMatrix& x, const FeatureMatrix& y);

// Single-sample variant used when only one pool is available.
KernelSpec median_heuristic(const FeatureMatrix& pooled);

namespace detail {

// Squared row norms, used to evaluate many kernel entries against the same rows.
std::vector<double> row_squared_norms(const FeatureMatrix& x);

inline double rbf_from_parts(double gamma, double norm_x, double norm_y, double inner) {
    const double sq = (norm_x + norm_y) - 2.0 * inner;
    return std::exp(-gamma * (sq > 0.0 ? sq : 0.0));
}

}  // namespace detail

}  // namespace credal_cert
