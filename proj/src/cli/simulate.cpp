#include "credal_cert/cli/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>

#include "credal_cert/experiments.hpp"
#include "credal_cert/mmd.hpp"

namespace credal_cert::cli {

namespace ex = credal_cert::experiments;

namespace {

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

double rate(std::size_t count, std::size_t total) {
    return static_cast<double>(count) / static_cast<double>(total);
}

bool means_equal(const oracle::ShiftScenario& s) { return s.mean_s == s.mean_t; }

}  // namespace

bool SimulationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

SimulationReport run_simulation(const SimulateConfig& cfg) {
    SimulationReport report;
    report.experiment = cfg.experiment;
    report.trials = cfg.trials;
    auto& checks = report.checks;
    const auto& s = cfg.scenario;

    if (cfg.experiment == "coverage") {
        const auto o = ex::bound_coverage(s, cfg.n_labeled, cfg.delta, cfg.num_centers,
                                          cfg.mc_samples, cfg.trials);
        const double r = rate(o.covered, o.trials);
        checks.push_back({"coverage_rate", r, ">= " + fmt(1.0 - cfg.delta), r >= 1.0 - cfg.delta});
    } else if (cfg.experiment == "unbiasedness") {
        const auto o = ex::unbiasedness(s, cfg.m, cfg.n, cfg.trials, cfg.mc_pairs);
        const double z_mc = std::abs(o.mc_estimate - o.analytic) / o.mc_std_error;
        const double z_u = std::abs(o.mean_unbiased - o.analytic) / o.unbiased_std_error;
        checks.push_back({"analytic_vs_monte_carlo_se", z_mc, "<= 3", z_mc <= 3.0});
        checks.push_back({"estimator_bias_se", z_u, "<= 3", z_u <= 3.0});
    } else if (cfg.experiment == "concentration") {
        const auto o = ex::concentration(s, cfg.m, cfg.n, cfg.alpha, cfg.trials);
        const double r = rate(o.exceedances, o.trials);
        checks.push_back({"exceedance_rate", r, "<= " + fmt(cfg.alpha), r <= cfg.alpha});
    } else if (cfg.experiment == "geometry") {
        const auto o = ex::geodesic_bound(s, cfg.m, cfg.n, cfg.c_w, cfg.remainder_coef, cfg.trials);
        const double r = rate(o.within_tolerance, o.trials);
        checks.push_back({"within_tolerance_rate", r, ">= 0.95", r >= 0.95});
    } else if (cfg.experiment == "permutation") {
        const auto o = ex::permutation_test(s, cfg.m, cfg.n, cfg.num_permutations, cfg.alpha,
                                            cfg.trials);
        const double r = rate(o.rejections, o.trials);
        if (means_equal(s) && s.var_s == s.var_t) {
            const double band = 3.0 * std::sqrt(cfg.alpha * (1.0 - cfg.alpha) / cfg.trials);
            const double lo = std::max(0.0, cfg.alpha - band);
            const double hi = cfg.alpha + band;
            checks.push_back({"null_rejection_rate", r, "in [" + fmt(lo) + ", " + fmt(hi) + "]",
                              r >= lo && r <= hi});
        } else {
            checks.push_back({"power", r, ">= 0.99", r >= 0.99});
        }
    } else if (cfg.experiment == "norm_recovery") {
        const auto o = ex::norm_recovery(cfg.trials, cfg.n, cfg.num_centers, s.d, s.gamma,
                                         cfg.lambda, cfg.seed);
        checks.push_back({"max_relative_error", o.max_relative_error, "< 0.02",
                          o.max_relative_error < 0.02});
    } else if (cfg.experiment == "convexity") {
        const auto o = ex::credal_convexity(cfg.trials, s.d, s.gamma, cfg.seed);
        checks.push_back({"violations", static_cast<double>(o.violations), "== 0",
                          o.violations == 0});
    } else if (cfg.experiment == "equivalence") {
        const auto o = ex::estimator_equivalence(cfg.trials, std::min<std::size_t>(cfg.m, 100), 8,
                                                 cfg.seed);
        checks.push_back({"max_abs_diff_unbiased", o.max_abs_diff_unbiased, "<= 1e-12",
                          o.max_abs_diff_unbiased <= 1e-12});
        checks.push_back({"max_abs_diff_biased", o.max_abs_diff_biased, "<= 1e-12",
                          o.max_abs_diff_biased <= 1e-12});
    } else if (cfg.experiment == "interval_identity") {
        const auto o = ex::interval_identity(cfg.trials, cfg.seed);
        checks.push_back({"width_identity_exact", rate(o.width_identity_exact, o.draws), "== 1",
                          o.width_identity_exact == o.draws});
        checks.push_back({"endpoints_consistent", rate(o.endpoints_consistent, o.draws), "== 1",
                          o.endpoints_consistent == o.draws});
    }
    return report;
}

void print_report(const SimulationReport& report, std::ostream& out) {
    out << "experiment: " << report.experiment << "  trials: " << report.trials << "\n";
    out << std::left << std::setw(30) << "check" << std::setw(16) << "measured"
        << std::setw(26) << "requirement" << "result\n";
    for (const auto& c : report.checks) {
        out << std::left << std::setw(30) << c.name << std::setw(16) << fmt(c.measured)
            << std::setw(26) << c.requirement << (c.passed ? "PASS" : "FAIL") << "\n";
    }
    out << "overall: " << (report.passed() ? "PASS" : "FAIL") << "\n";
}

}  // namespace credal_cert::cli
