#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include <Eigen/Dense>

#include "credal_cert/feature_matrix.hpp"
#include "credal_cert/kernel.hpp"

namespace credal_cert {

struct NormEstimate {
    double l_h = 0.0;           // sqrt(alpha^T K alpha) of the ridge fit
    double lambda = 0.0;        // ridge regularizer actually used
    std::size_t n_fit = 0;
    double residual_rms = 0.0;  // rms(K alpha - losses); large values suggest the loss is not in the RKHS
};

// 1e-6 * trace(K) / n.
double default_ridge_lambda(const Eigen::MatrixXd& gram);

/// Kernel ridge regression of `losses` on `features`: solves
/// (K + lambda I) alpha = losses by Cholesky and reports the RKHS norm of the
/// fitted function. Uses default_ridge_lambda when lambda is not given.
///
/// Throws InputError on length mismatch, non-finite losses or lambda <= 0, and
/// NumericalError when the regularized system is not numerically positive
/// definite (reciprocal condition estimate below 1e-14).
NormEstimate estimate_rkhs_norm(const FeatureMatrix& features, std::span<const double> losses,
                                const KernelSpec& kernel,
                                std::optional<double> lambda = std::nullopt);

// Mean of l_h over fits for posterior samples w ~ rho.
double posterior_average_norm(std::span<const NormEstimate> estimates);

}  // namespace credal_cert
