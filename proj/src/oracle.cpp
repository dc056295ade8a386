#include "credal_cert/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "credal_cert/error.hpp"
#include "credal_cert/random.hpp"

namespace credal_cert::oracle {

namespace {

double direct_sq_distance(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

double direct_kernel(std::span<const double> a, std::span<const double> b, double gamma) {
    return std::exp(-gamma * direct_sq_distance(a, b));
}

void require_mean(const std::vector<double>& mean, std::size_t d, const char* which) {
    if (mean.size() != d) {
        throw InputError(std::string("scenario ") + which + " has dimension " +
                         std::to_string(mean.size()) + ", expected " + std::to_string(d));
    }
    for (double v : mean) {
        if (!std::isfinite(v)) throw InputError(std::string("scenario ") + which + " is not finite");
    }
}

}  // namespace

void ShiftScenario::validate() const {
    if (d < 1) throw InputError("scenario dimension must be at least 1");
    require_mean(mean_s, d, "mean_s");
    require_mean(mean_t, d, "mean_t");
    if (!(var_s > 0.0) || !(var_t > 0.0) || !std::isfinite(var_s) || !std::isfinite(var_t)) {
        throw InputError("scenario variances must be positive and finite");
    }
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw InputError("scenario gamma must be positive and finite");
    }
}

FeatureMatrix sample_gaussian(const IsotropicGaussian& g, std::size_t count, std::uint64_t seed) {
    if (count < 1) throw InputError("sample count must be at least 1");
    const std::size_t d = g.mean.size();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double sd = std::sqrt(g.var);
    FeatureMatrix::Storage data(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
        for (Eigen::Index j = 0; j < data.cols(); ++j) {
            data(i, j) = g.mean[static_cast<std::size_t>(j)] + sd * normal(rng);
        }
    }
    return FeatureMatrix(std::move(data));
}

std::pair<FeatureMatrix, FeatureMatrix> sample_scenario(const ShiftScenario& s, std::size_t m,
                                                        std::size_t n) {
    s.validate();
    return {sample_gaussian(s.source(), m, derive_seed(s.seed, 0)),
            sample_gaussian(s.target(), n, derive_seed(s.seed, 1))};
}

double gaussian_kernel_expectation(const IsotropicGaussian& a, const IsotropicGaussian& b,
                                   double gamma) {
    if (a.mean.size() != b.mean.size()) throw InputError("Gaussian dimension mismatch");
    if (a.var < 0.0 || b.var < 0.0) throw InputError("Gaussian variance must be nonnegative");
    const double d = static_cast<double>(a.mean.size());
    const double spread = 1.0 + 2.0 * gamma * (a.var + b.var);
    return std::pow(spread, -d / 2.0) *
           std::exp(-gamma * direct_sq_distance(a.mean, b.mean) / spread);
}

double analytic_mmd2(const ShiftScenario& s) {
    s.validate();
    const auto p = s.source();
    const auto q = s.target();
    const double value = gaussian_kernel_expectation(p, p, s.gamma) +
                         gaussian_kernel_expectation(q, q, s.gamma) -
                         2.0 * gaussian_kernel_expectation(p, q, s.gamma);
    return std::max(value, 0.0);
}

double analytic_mixture_mmd2(const std::vector<MixtureComponent>& p,
                             const std::vector<MixtureComponent>& q, double gamma) {
    auto cross = [gamma](const std::vector<MixtureComponent>& a,
                         const std::vector<MixtureComponent>& b) {
        double acc = 0.0;
        for (const auto& ca : a) {
            for (const auto& cb : b) {
                acc += ca.weight * cb.weight *
                       gaussian_kernel_expectation(ca.component, cb.component, gamma);
            }
        }
        return acc;
    };
    return std::max(cross(p, p) + cross(q, q) - 2.0 * cross(p, q), 0.0);
}

double brute_force_mmd2(const FeatureMatrix& source, const FeatureMatrix& target,
                        const KernelSpec& kernel, MmdKind kind) {
    const std::size_t m = source.rows();
    const std::size_t n = target.rows();
    if (m + n > 200) throw InputError("brute-force oracle is limited to m + n <= 200");
    if (source.dim() != target.dim()) throw InputError("dimension mismatch");
    const double g = kernel.gamma();

    double ss = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (kind == MmdKind::Biased || i != j) ss += direct_kernel(source.row(i), source.row(j), g);
    double tt = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (kind == MmdKind::Biased || i != j) tt += direct_kernel(target.row(i), target.row(j), g);
    double st = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) st += direct_kernel(source.row(i), target.row(j), g);

    const double md = static_cast<double>(m);
    const double nd = static_cast<double>(n);
    if (kind == MmdKind::Biased) {
        return ss / (md * md) + tt / (nd * nd) - 2.0 * st / (md * nd);
    }
    if (m < 2 || n < 2) throw InputError("unbiased statistic needs m, n >= 2");
    return ss / (md * (md - 1.0)) + tt / (nd * (nd - 1.0)) - 2.0 * st / (md * nd);
}

double evaluate_expansion(const KernelExpansion& loss, std::span<const double> x, double gamma) {
    double acc = 0.0;
    for (std::size_t j = 0; j < loss.weights.size(); ++j) {
        acc += loss.weights[j] * direct_kernel(loss.centers.row(j), x, gamma);
    }
    return acc;
}

double expansion_rkhs_norm(const KernelExpansion& loss, double gamma) {
    if (loss.weights.size() != loss.centers.rows()) {
        throw InputError("expansion weights and centers differ in length");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < loss.weights.size(); ++i)
        for (std::size_t j = 0; j < loss.weights.size(); ++j)
            acc += loss.weights[i] * loss.weights[j] *
                   direct_kernel(loss.centers.row(i), loss.centers.row(j), gamma);
    return std::sqrt(std::max(acc, 0.0));
}

RiskEstimate true_target_risk(const ShiftScenario& s, const KernelExpansion& loss,
                              std::size_t mc_samples, std::uint64_t seed) {
    s.validate();
    if (mc_samples < 10000) throw InputError("true_target_risk needs at least 10^4 samples");
    if (loss.centers.dim() != s.d) throw InputError("expansion dimension differs from scenario");

    const FeatureMatrix draws = sample_gaussian(s.target(), mc_samples, seed);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < mc_samples; ++i) {
        const double v = evaluate_expansion(loss, draws.row(i), s.gamma);
        sum += v;
        sum_sq += v * v;
    }
    const double count = static_cast<double>(mc_samples);
    const double mean = sum / count;
    const double var = std::max(sum_sq / count - mean * mean, 0.0) * count / (count - 1.0);
    return {mean, std::sqrt(var / count)};
}

double analytic_expansion_risk(const IsotropicGaussian& g, const KernelExpansion& loss,
                               double gamma) {
    double acc = 0.0;
    for (std::size_t j = 0; j < loss.weights.size(); ++j) {
        const auto center = loss.centers.row(j);
        const IsotropicGaussian point{{center.begin(), center.end()}, 0.0};
        acc += loss.weights[j] * gaussian_kernel_expectation(g, point, gamma);
    }
    return acc;
}

}  // namespace credal_cert::oracle
