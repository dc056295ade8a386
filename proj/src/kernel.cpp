#include "credal_cert/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "credal_cert/error.hpp"
#include "credal_cert/parallel.hpp"

namespace credal_cert {

std::string_view to_string(BandwidthSource source) {
    switch (source) {
        case BandwidthSource::Fixed: return "fixed";
        case BandwidthSource::MedianHeuristic: return "median_heuristic";
    }
    return "unknown";
}

KernelSpec::KernelSpec(double gamma, BandwidthSource source) : gamma_(gamma), source_(source) {
    if (!std::isfinite(gamma) || gamma <= 0.0) {
        throw InputError("kernel gamma must be positive and finite, got " + std::to_string(gamma));
    }
}

double dot(std::span<const double> x, std::span<const double> y) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
    return acc;
}

double squared_distance(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw InputError("dimension mismatch: " + std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()));
    }
    const double sq = (dot(x, x) + dot(y, y)) - 2.0 * dot(x, y);
    return sq > 0.0 ? sq : 0.0;
}

double rbf_kernel(std::span<const double> x, std::span<const double> y, const KernelSpec& spec) {
    if (x.size() != y.size()) {
        throw InputError("dimension mismatch: " + std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()));
    }
    for (double v : x) {
        if (!std::isfinite(v)) throw InputError("non-finite kernel argument");
    }
    for (double v : y) {
        if (!std::isfinite(v)) throw InputError("non-finite kernel argument");
    }
    return detail::rbf_from_parts(spec.gamma(), dot(x, x), dot(y, y), dot(x, y));
}

namespace detail {

std::vector<double> row_squared_norms(const FeatureMatrix& x) {
    std::vector<double> norms(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) norms[i] = dot(x.row(i), x.row(i));
    return norms;
}

}  // namespace detail

Eigen::MatrixXd gram_matrix(const FeatureMatrix& x, const FeatureMatrix& y, const KernelSpec& spec) {
    if (x.dim() != y.dim()) {
        throw InputError("dimension mismatch: " + std::to_string(x.dim()) + " vs " +
                         std::to_string(y.dim()));
    }
    const auto nx = detail::row_squared_norms(x);
    const auto ny = detail::row_squared_norms(y);
    Eigen::MatrixXd gram(static_cast<Eigen::Index>(x.rows()), static_cast<Eigen::Index>(y.rows()));
    parallel_for(0, x.rows(), [&](std::size_t i) {
        const auto xi = x.row(i);
        for (std::size_t j = 0; j < y.rows(); ++j) {
            gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                detail::rbf_from_parts(spec.gamma(), nx[i], ny[j], dot(xi, y.row(j)));
        }
    });
    return gram;
}

KernelSpec median_heuristic(const FeatureMatrix& pooled) {
    const std::size_t total = pooled.rows();
    if (total < 2) {
        throw InputError("median heuristic needs at least two pooled samples");
    }
    const auto norms = detail::row_squared_norms(pooled);
    std::vector<double> distances;
    distances.reserve(total * (total - 1) / 2);
    for (std::size_t i = 0; i < total; ++i) {
        for (std::size_t j = i + 1; j < total; ++j) {
            const double sq = (norms[i] + norms[j]) - 2.0 * dot(pooled.row(i), pooled.row(j));
            distances.push_back(sq > 0.0 ? sq : 0.0);
        }
    }

    const std::size_t mid = distances.size() / 2;
    std::nth_element(distances.begin(), distances.begin() + static_cast<std::ptrdiff_t>(mid),
                     distances.end());
    double median = distances[mid];
    if (distances.size() % 2 == 0) {
        const double below = *std::max_element(distances.begin(),
                                               distances.begin() + static_cast<std::ptrdiff_t>(mid));
        median = 0.5 * (below + median);
    }
    if (!(median > 0.0)) {
        throw NumericalError("degenerate bandwidth: median pairwise squared distance is zero");
    }
    return KernelSpec(1.0 / (2.0 * median), BandwidthSource::MedianHeuristic);
}

KernelSpec median_heuristic(const FeatureMatrix& x, const FeatureMatrix& y) {
    return median_heuristic(FeatureMatrix::stack(x, y));
}

}  // namespace credal_cert
