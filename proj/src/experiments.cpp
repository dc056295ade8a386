#include "credal_cert/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "credal_cert/credal.hpp"
#include "credal_cert/error.hpp"
#include "credal_cert/geometry.hpp"
#include "credal_cert/mmd.hpp"
#include "credal_cert/pac_bayes.hpp"
#include "credal_cert/random.hpp"
#include "credal_cert/rkhs_norm.hpp"

namespace credal_cert::experiments {

namespace {

oracle::ShiftScenario with_seed(oracle::ShiftScenario s, std::uint64_t seed) {
    s.seed = seed;
    return s;
}

FeatureMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
    std::normal_distribution<double> normal(0.0, 1.0);
    FeatureMatrix::Storage data(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < data.size(); ++i) data.data()[i] = normal(rng);
    return FeatureMatrix(std::move(data));
}

double ulp(double x) {
    const double a = std::abs(x);
    return std::nextafter(a, std::numeric_limits<double>::infinity()) - a;
}

void require_trials(std::size_t trials) {
    if (trials == 0) throw InputError("experiment needs at least one trial");
}

}  // namespace

EquivalenceOutcome estimator_equivalence(std::size_t instances, std::size_t max_count,
                                         std::size_t max_dim, std::uint64_t seed) {
    require_trials(instances);
    EquivalenceOutcome out;
    out.instances = instances;
    for (std::size_t t = 0; t < instances; ++t) {
        std::mt19937_64 rng(derive_seed(seed, t));
        std::uniform_int_distribution<std::size_t> count(2, max_count);
        std::uniform_int_distribution<std::size_t> dim(1, max_dim);
        std::uniform_real_distribution<double> log_gamma(std::log(0.05), std::log(2.0));
        const std::size_t m = count(rng);
        const std::size_t n = count(rng);
        const std::size_t d = dim(rng);
        const KernelSpec kernel(std::exp(log_gamma(rng)));
        const FeatureMatrix xs = random_matrix(rng, m, d);
        const FeatureMatrix xt = random_matrix(rng, n, d);

        const double u = mmd2_unbiased(xs, xt, kernel).mmd2;
        const double u_ref = oracle::brute_force_mmd2(xs, xt, kernel, MmdKind::Unbiased);
        const double b = mmd2_biased(xs, xt, kernel).mmd2;
        const double b_ref =
            std::max(oracle::brute_force_mmd2(xs, xt, kernel, MmdKind::Biased), 0.0);
        out.max_abs_diff_unbiased = std::max(out.max_abs_diff_unbiased, std::abs(u - u_ref));
        out.max_abs_diff_biased = std::max(out.max_abs_diff_biased, std::abs(b - b_ref));
    }
    return out;
}

UnbiasednessOutcome unbiasedness(const oracle::ShiftScenario& scenario, std::size_t m,
                                 std::size_t n, std::size_t resamples, std::size_t mc_pairs) {
    require_trials(resamples);
    scenario.validate();
    UnbiasednessOutcome out;
    out.analytic = oracle::analytic_mmd2(scenario);
    out.resamples = resamples;
    const KernelSpec kernel(scenario.gamma);

    // h = k(x, x') + k(y, y') - k(x, y') - k(x', y) has mean MMD^2 and is
    // i.i.d. across pairs.
    if (mc_pairs > 0) {
        const std::uint64_t base = derive_seed(scenario.seed, 0xC0FFEE);
        const auto x1 = oracle::sample_gaussian(scenario.source(), mc_pairs, derive_seed(base, 0));
        const auto x2 = oracle::sample_gaussian(scenario.source(), mc_pairs, derive_seed(base, 1));
        const auto y1 = oracle::sample_gaussian(scenario.target(), mc_pairs, derive_seed(base, 2));
        const auto y2 = oracle::sample_gaussian(scenario.target(), mc_pairs, derive_seed(base, 3));
        double sum = 0.0;
        double sum_sq = 0.0;
        for (std::size_t i = 0; i < mc_pairs; ++i) {
            const double h = rbf_kernel(x1.row(i), x2.row(i), kernel) +
                             rbf_kernel(y1.row(i), y2.row(i), kernel) -
                             rbf_kernel(x1.row(i), y2.row(i), kernel) -
                             rbf_kernel(x2.row(i), y1.row(i), kernel);
            sum += h;
            sum_sq += h * h;
        }
        const double count = static_cast<double>(mc_pairs);
        out.mc_estimate = sum / count;
        const double var = std::max(sum_sq / count - out.mc_estimate * out.mc_estimate, 0.0);
        out.mc_std_error = std::sqrt(var / (count - 1.0));
    }

    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t r = 0; r < resamples; ++r) {
        const auto [xs, xt] =
            oracle::sample_scenario(with_seed(scenario, derive_seed(scenario.seed, r + 1)), m, n);
        const double v = mmd2_unbiased(xs, xt, kernel).mmd2;
        sum += v;
        sum_sq += v * v;
    }
    const double count = static_cast<double>(resamples);
    out.mean_unbiased = sum / count;
    const double var = std::max(sum_sq / count - out.mean_unbiased * out.mean_unbiased, 0.0);
    out.unbiased_std_error = std::sqrt(var / std::max(count - 1.0, 1.0));
    return out;
}

ConcentrationOutcome concentration(const oracle::ShiftScenario& scenario, std::size_t m,
                                   std::size_t n, double alpha, std::size_t trials) {
    require_trials(trials);
    ConcentrationOutcome out;
    out.trials = trials;
    out.width = concentration_width(m, n, alpha);
    out.analytic_mmd = std::sqrt(oracle::analytic_mmd2(scenario));
    const KernelSpec kernel(scenario.gamma);
    for (std::size_t t = 0; t < trials; ++t) {
        const auto [xs, xt] =
            oracle::sample_scenario(with_seed(scenario, derive_seed(scenario.seed, t)), m, n);
        const double est = mmd2_unbiased(xs, xt, kernel).mmd;
        if (std::abs(est - out.analytic_mmd) > out.width) ++out.exceedances;
    }
    return out;
}

CoverageOutcome bound_coverage(const oracle::ShiftScenario& scenario, std::size_t n_labeled,
                               double delta, std::size_t num_centers, std::size_t mc_samples,
                               std::size_t trials) {
    require_trials(trials);
    scenario.validate();
    CoverageOutcome out;
    out.trials = trials;
    const double mmd = std::sqrt(oracle::analytic_mmd2(scenario));
    const PosteriorComplexity complexity{0.0, n_labeled, delta};

    for (std::size_t t = 0; t < trials; ++t) {
        const std::uint64_t trial_seed = derive_seed(scenario.seed, t);
        std::mt19937_64 rng(derive_seed(trial_seed, 0));
        std::uniform_real_distribution<double> unit(0.0, 1.0);

        // Centers spread over both distributions so the loss actually moves
        // under the shift.
        oracle::IsotropicGaussian center_law{scenario.mean_s, scenario.var_s + 1.0};
        for (std::size_t k = 0; k < scenario.d; ++k) {
            center_law.mean[k] = 0.5 * (scenario.mean_s[k] + scenario.mean_t[k]);
        }
        oracle::KernelExpansion loss{
            oracle::sample_gaussian(center_law, num_centers, derive_seed(trial_seed, 1)), {}};
        double total = 0.0;
        for (std::size_t j = 0; j < num_centers; ++j) {
            loss.weights.push_back(unit(rng) + 1e-3);
            total += loss.weights.back();
        }
        for (double& w : loss.weights) w /= total;

        const FeatureMatrix labeled =
            oracle::sample_gaussian(scenario.source(), n_labeled, derive_seed(trial_seed, 2));
        double emp = 0.0;
        for (std::size_t i = 0; i < n_labeled; ++i) {
            emp += oracle::evaluate_expansion(loss, labeled.row(i), scenario.gamma);
        }
        emp /= static_cast<double>(n_labeled);

        const double l_h = oracle::expansion_rkhs_norm(loss, scenario.gamma);
        const double upper = population_bound(emp, complexity, l_h, mmd).upper_risk;
        const double truth =
            oracle::true_target_risk(scenario, loss, mc_samples, derive_seed(trial_seed, 3)).mean;
        if (upper >= truth) ++out.covered;
        out.mean_upper += upper;
        out.mean_true_risk += truth;
    }
    out.mean_upper /= static_cast<double>(trials);
    out.mean_true_risk /= static_cast<double>(trials);
    return out;
}

IntervalIdentityOutcome interval_identity(std::size_t draws, std::uint64_t seed) {
    require_trials(draws);
    IntervalIdentityOutcome out;
    out.draws = draws;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> count(1, 100000);
    for (std::size_t i = 0; i < draws; ++i) {
        const double emp = 2.0 * unit(rng) - 0.5;
        const PosteriorComplexity c{50.0 * unit(rng), count(rng), 0.001 + 0.998 * unit(rng)};
        const double l_h = 5.0 * unit(rng);
        const CredalSpec spec{2.0 * unit(rng), RadiusSource::UserFixed};
        const RiskInterval iv = risk_interval(emp, c, l_h, spec);

        const double expected = 2.0 * complexity_term(c) + 2.0 * (l_h * spec.epsilon);
        if (iv.width == expected) ++out.width_identity_exact;
        const double scale = std::max({std::abs(iv.upper), std::abs(iv.lower), iv.width});
        if (std::abs((iv.upper - iv.lower) - iv.width) <= 4.0 * ulp(scale)) {
            ++out.endpoints_consistent;
        }
    }
    return out;
}

PermutationOutcome permutation_test(const oracle::ShiftScenario& scenario, std::size_t m,
                                    std::size_t n, std::size_t num_permutations, double alpha,
                                    std::size_t trials) {
    require_trials(trials);
    PermutationOutcome out;
    out.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        const std::uint64_t trial_seed = derive_seed(scenario.seed, t);
        const auto [xs, xt] = oracle::sample_scenario(with_seed(scenario, trial_seed), m, n);
        const KernelSpec kernel = median_heuristic(xs, xt);
        const auto result = permutation_calibrate(xs, xt, kernel, num_permutations, alpha,
                                                  derive_seed(trial_seed, 7));
        out.p_values.push_back(result.p_value);
        if (result.p_value <= alpha) ++out.rejections;
        if (result.p_value < 0.01) ++out.strong_rejections;
    }
    return out;
}

NormRecoveryOutcome norm_recovery(std::size_t expansions, std::size_t n_fit,
                                  std::size_t num_centers, std::size_t d, double gamma,
                                  double lambda, std::uint64_t seed) {
    require_trials(expansions);
    if (num_centers > n_fit) throw InputError("more centers than fit points");
    NormRecoveryOutcome out;
    out.expansions = expansions;
    const KernelSpec kernel(gamma);
    for (std::size_t e = 0; e < expansions; ++e) {
        std::mt19937_64 rng(derive_seed(seed, e));
        std::normal_distribution<double> normal(0.0, 1.0);
        const FeatureMatrix points = random_matrix(rng, n_fit, d);
        std::vector<std::size_t> first(num_centers);
        for (std::size_t j = 0; j < num_centers; ++j) first[j] = j;
        oracle::KernelExpansion loss{points.select(first), {}};
        for (std::size_t j = 0; j < num_centers; ++j) loss.weights.push_back(normal(rng));

        std::vector<double> losses(n_fit);
        for (std::size_t i = 0; i < n_fit; ++i) {
            losses[i] = oracle::evaluate_expansion(loss, points.row(i), gamma);
        }
        const double truth = oracle::expansion_rkhs_norm(loss, gamma);
        const double fitted = estimate_rkhs_norm(points, losses, kernel, lambda).l_h;
        out.max_relative_error = std::max(out.max_relative_error, std::abs(fitted - truth) / truth);
    }
    return out;
}

GeometryOutcome geodesic_bound(const oracle::ShiftScenario& scenario, std::size_t m,
                               std::size_t n, double c_w, double remainder_coef,
                               std::size_t trials) {
    require_trials(trials);
    GeometryOutcome out;
    out.trials = trials;
    out.min_slack = std::numeric_limits<double>::infinity();
    const KernelSpec kernel(scenario.gamma);
    for (std::size_t t = 0; t < trials; ++t) {
        const auto [xs, xt] =
            oracle::sample_scenario(with_seed(scenario, derive_seed(scenario.seed, t)), m, n);
        const DistortionReport r = geodesic_distortion(xs.row(0), xs, xt, kernel, c_w, 0);
        if (r.lhs_estimate <= r.rhs_bound + remainder_coef * r.epsilon_bar * r.epsilon_bar) {
            ++out.within_tolerance;
        }
        out.min_slack = std::min(out.min_slack, r.slack);
    }
    return out;
}

ConvexityOutcome credal_convexity(std::size_t pairs, std::size_t d, double gamma,
                                  std::uint64_t seed) {
    require_trials(pairs);
    ConvexityOutcome out;
    out.pairs = pairs;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> variance(0.3, 2.0);
    std::uniform_real_distribution<double> margin(0.0, 0.1);

    auto random_gaussian = [&](double spread) {
        oracle::IsotropicGaussian g{std::vector<double>(d), variance(rng)};
        for (double& v : g.mean) v = spread * normal(rng);
        return g;
    };

    for (std::size_t p = 0; p < pairs; ++p) {
        const oracle::IsotropicGaussian source = random_gaussian(0.5);
        const oracle::IsotropicGaussian q1 = random_gaussian(1.0);
        const oracle::IsotropicGaussian q2 = random_gaussian(1.0);
        const std::vector<oracle::MixtureComponent> ps{{1.0, source}};
        const double d1 = std::sqrt(oracle::analytic_mixture_mmd2(ps, {{1.0, q1}}, gamma));
        const double d2 = std::sqrt(oracle::analytic_mixture_mmd2(ps, {{1.0, q2}}, gamma));
        const double epsilon = std::max(d1, d2) + margin(rng);
        for (double lambda : {0.25, 0.5, 0.75}) {
            const double mixed = std::sqrt(oracle::analytic_mixture_mmd2(
                ps, {{lambda, q1}, {1.0 - lambda, q2}}, gamma));
            ++out.checks;
            if (mixed > epsilon) ++out.violations;
            out.max_ratio = std::max(out.max_ratio, mixed / epsilon);
        }
    }
    return out;
}

double ks_distance_uniform(std::vector<double> values) {
    if (values.empty()) throw InputError("KS distance needs at least one value");
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = std::clamp(values[i], 0.0, 1.0);
        worst = std::max({worst, static_cast<double>(i + 1) / n - v, v - static_cast<double>(i) / n});
    }
    return worst;
}

}  // namespace credal_cert::experiments
