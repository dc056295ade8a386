#include "credal_cert/pac_bayes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "credal_cert/error.hpp"

namespace credal_cert {

void PosteriorComplexity::validate() const {
    if (!std::isfinite(kl) || kl < 0.0) {
        throw InputError("KL divergence must be finite and nonnegative, got " + std::to_string(kl));
    }
    if (n_labeled < 1) throw InputError("n_labeled must be at least 1");
    if (!(delta > 0.0 && delta < 1.0)) {
        throw InputError("delta must lie in (0, 1), got " + std::to_string(delta));
    }
}

std::string_view to_string(BoundKind kind) {
    switch (kind) {
        case BoundKind::Population: return "population";
        case BoundKind::FiniteSample: return "finite_sample";
        case BoundKind::LowerOnly: return "lower_only";
    }
    return "unknown";
}

double kl_diag_gaussians(std::span<const double> mu_p, std::span<const double> var_p,
                         std::span<const double> mu_q, std::span<const double> var_q) {
    const std::size_t d = mu_p.size();
    if (var_p.size() != d || mu_q.size() != d || var_q.size() != d) {
        throw InputError("KL: parameter vectors must have matching dimensions");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        if (!(var_p[i] > 0.0) || !(var_q[i] > 0.0) || !std::isfinite(var_p[i]) ||
            !std::isfinite(var_q[i])) {
            throw InputError("KL: variances must be positive and finite (index " +
                             std::to_string(i) + ")");
        }
        if (!std::isfinite(mu_p[i]) || !std::isfinite(mu_q[i])) {
            throw InputError("KL: means must be finite (index " + std::to_string(i) + ")");
        }
        const double diff = mu_p[i] - mu_q[i];
        acc += std::log(var_q[i] / var_p[i]) + (var_p[i] + diff * diff) / var_q[i] - 1.0;
    }
    // Each summand is >= 0 in exact arithmetic; rounding may leave -1e-17.
    return std::max(0.5 * acc, 0.0);
}

namespace {

double pac_term(const PosteriorComplexity& c, double log_factor) {
    c.validate();
    const double n = static_cast<double>(c.n_labeled);
    return std::sqrt((c.kl + std::log(log_factor * std::sqrt(n) / c.delta)) / (2.0 * n));
}

void require_risk_inputs(double emp_risk, double l_h) {
    if (!std::isfinite(emp_risk)) throw InputError("empirical risk must be finite");
    if (!std::isfinite(l_h) || l_h < 0.0) {
        throw InputError("L_H must be finite and nonnegative, got " + std::to_string(l_h));
    }
}

BoundReport assemble(double emp_risk, double complexity, double shift, BoundKind kind) {
    BoundReport r;
    r.empirical_risk = emp_risk;
    r.complexity_term = complexity;
    r.shift_penalty = shift;
    r.upper_risk = (emp_risk + complexity) + shift;
    r.lower_risk = (emp_risk - complexity) - shift;
    r.kind = kind;
    return r;
}

}  // namespace

double complexity_term(const PosteriorComplexity& c) { return pac_term(c, 2.0); }

double finite_sample_complexity_term(const PosteriorComplexity& c) { return pac_term(c, 4.0); }

BoundReport population_bound(double emp_risk, const PosteriorComplexity& c, double l_h,
                             double mmd) {
    require_risk_inputs(emp_risk, l_h);
    if (!std::isfinite(mmd) || mmd < 0.0) {
        throw InputError("MMD must be finite and nonnegative, got " + std::to_string(mmd));
    }
    return assemble(emp_risk, complexity_term(c), l_h * mmd, BoundKind::Population);
}

BoundReport finite_sample_bound(double emp_risk, const PosteriorComplexity& c, double l_h,
                                const MmdEstimate& est) {
    require_risk_inputs(emp_risk, l_h);
    c.validate();
    if (c.delta >= 0.5) {
        throw InputError("finite-sample bound requires delta < 1/2, got " +
                         std::to_string(c.delta));
    }
    if (est.kind != MmdKind::Unbiased) {
        throw InputError("finite-sample bound requires the unbiased MMD estimator");
    }
    const double shift = l_h * (est.mmd + concentration_width(est.m, est.n, c.delta / 2.0));
    return assemble(emp_risk, finite_sample_complexity_term(c), shift, BoundKind::FiniteSample);
}

double pac_lower_bound(double emp_risk, const PosteriorComplexity& c) {
    if (!std::isfinite(emp_risk)) throw InputError("empirical risk must be finite");
    return emp_risk - complexity_term(c);
}

BoundReport classical_bound(double emp_risk, const PosteriorComplexity& c) {
    if (!std::isfinite(emp_risk)) throw InputError("empirical risk must be finite");
    return assemble(emp_risk, complexity_term(c), 0.0, BoundKind::LowerOnly);
}

}  // namespace credal_cert
