#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

#include "credal_cert/conformal.hpp"
#include "credal_cert/oracle.hpp"

namespace credal_cert::cli {

enum class EpsilonMode { UpperConfidence, Fixed, Calibrate };

// Parsed certify/monitor configuration. Unknown keys are rejected.
//
//   gamma            number > 0 | "median"                     (required)
//   delta            number in (0, 1/2)                        (required)
//   kl               number >= 0 | {"posterior": csv, "prior": csv}  (required)
//   n_labeled        integer >= 1               (default: number of loss rows)
//   l_h              number >= 0 | "estimate"                  (required)
//   lambda           number > 0, only with l_h = "estimate"
//   c_w              number >= 0                               (default 1)
//   r_max            number
//   alpha0           number in (0, 1)
//   coverage_mode    "bound_ratio" | "shift_only"              (default bound_ratio)
//   epsilon          number >= 0 | "calibrate"   (default: upper confidence at delta/2)
//   num_permutations integer >= 100, only with epsilon = "calibrate" (default 1000)
//   alpha            number in (0, 1), only with epsilon = "calibrate" (default 0.05)
//   seed             unsigned integer                          (default 0)
struct CertifyConfig {
    std::optional<double> gamma;  // nullopt: median heuristic
    double delta = 0.05;
    double kl = 0.0;
    std::string kl_source = "user";
    std::optional<std::size_t> n_labeled;
    std::optional<double> l_h;  // nullopt: kernel ridge estimate
    std::optional<double> lambda;
    double c_w = 1.0;
    std::optional<double> r_max;
    std::optional<double> alpha0;
    CoverageMode coverage_mode = CoverageMode::BoundRatio;
    EpsilonMode epsilon_mode = EpsilonMode::UpperConfidence;
    double epsilon = 0.0;
    std::size_t num_permutations = 1000;
    double calibration_alpha = 0.05;
    std::uint64_t seed = 0;
};

// Relative file references (kl posterior/prior) resolve against base_dir.
CertifyConfig parse_certify_config(const nlohmann::json& doc, const std::string& base_dir);
CertifyConfig load_certify_config(const std::string& path);

struct SimulateConfig {
    std::string experiment;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    oracle::ShiftScenario scenario;
    std::size_t m = 100;
    std::size_t n = 100;
    double alpha = 0.05;
    double delta = 0.1;
    std::size_t n_labeled = 200;
    std::size_t num_centers = 5;
    std::size_t mc_samples = 10000;
    std::size_t mc_pairs = 1000000;
    std::size_t num_permutations = 500;
    double c_w = 1.0;
    double remainder_coef = 0.05;
    double lambda = 1e-8;
};

SimulateConfig parse_simulate_config(const nlohmann::json& doc);
SimulateConfig load_simulate_config(const std::string& path);

}  // namespace credal_cert::cli
