#include "credal_cert/rkhs_norm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "credal_cert/error.hpp"

namespace credal_cert {

namespace {
constexpr double kMinReciprocalCondition = 1e-14;
}

double default_ridge_lambda(const Eigen::MatrixXd& gram) {
    return 1e-6 * gram.trace() / static_cast<double>(gram.rows());
}

NormEstimate estimate_rkhs_norm(const FeatureMatrix& features, std::span<const double> losses,
                                const KernelSpec& kernel, std::optional<double> lambda) {
    const std::size_t n = features.rows();
    if (losses.size() != n) {
        throw InputError("loss vector has " + std::to_string(losses.size()) +
                         " entries but there are " + std::to_string(n) + " feature rows");
    }
    Eigen::VectorXd target(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(losses[i])) {
            throw InputError("non-finite loss at row " + std::to_string(i));
        }
        target(static_cast<Eigen::Index>(i)) = losses[i];
    }

    const Eigen::MatrixXd gram = gram_matrix(features, features, kernel);
    const double ridge = lambda.value_or(default_ridge_lambda(gram));
    if (!std::isfinite(ridge) || ridge <= 0.0) {
        throw InputError("ridge lambda must be positive and finite, got " + std::to_string(ridge));
    }

    Eigen::MatrixXd system = gram;
    system.diagonal().array() += ridge;
    const Eigen::LLT<Eigen::MatrixXd> llt(system);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("kernel ridge system is not positive definite (lambda=" +
                             std::to_string(ridge) + ")");
    }
    const double rcond = llt.rcond();
    if (!(rcond >= kMinReciprocalCondition)) {
        throw NumericalError("kernel ridge system is ill-conditioned (rcond=" +
                             std::to_string(rcond) + ", lambda=" + std::to_string(ridge) + ")");
    }

    const Eigen::VectorXd coef = llt.solve(target);
    const Eigen::VectorXd fitted = gram * coef;
    const double norm2 = coef.dot(fitted);

    NormEstimate est;
    est.l_h = std::sqrt(std::max(norm2, 0.0));
    est.lambda = ridge;
    est.n_fit = n;
    est.residual_rms = std::sqrt((fitted - target).squaredNorm() / static_cast<double>(n));
    return est;
}

double posterior_average_norm(std::span<const NormEstimate> estimates) {
    if (estimates.empty()) throw InputError("posterior average needs at least one norm estimate");
    double acc = 0.0;
    for (const auto& e : estimates) acc += e.l_h;
    return acc / static_cast<double>(estimates.size());
}

}  // namespace credal_cert
