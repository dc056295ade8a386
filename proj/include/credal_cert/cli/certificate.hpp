#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

namespace credal_cert::cli {

// Flat record emitted by `certify` and, one per batch, by `monitor`. Every key
// is always serialized; inapplicable optional values appear as null.
struct Certificate {
    std::string tool = "credal-cert";
    std::string tool_version;

    std::string source_digest;
    std::string losses_digest;
    std::string target_digest;
    std::string config_digest;

    std::size_t dim = 0;
    std::size_t m = 0;
    std::size_t n = 0;
    double gamma = 0.0;
    std::string gamma_source;

    std::string mmd_kind;
    double mmd2 = 0.0;
    double mmd = 0.0;
    double mmd_width = 0.0;
    double mmd_width_alpha = 0.0;

    double delta = 0.0;
    double kl = 0.0;
    std::string kl_source;
    std::size_t n_labeled = 0;

    double l_h = 0.0;
    std::string l_h_source;
    std::optional<double> l_h_lambda;
    std::optional<double> l_h_residual_rms;

    std::string bound_kind;
    double empirical_risk = 0.0;
    double complexity_term = 0.0;
    double shift_penalty = 0.0;
    double upper_risk = 0.0;
    double lower_risk = 0.0;

    double epsilon = 0.0;
    std::string epsilon_source;
    std::optional<double> calibration_p_value;
    std::optional<double> calibration_alpha;
    std::optional<std::size_t> num_permutations;
    std::optional<std::uint64_t> seed;

    double interval_lower = 0.0;
    double interval_upper = 0.0;
    double interval_width = 0.0;
    double interval_complexity_term = 0.0;
    double interval_shift_penalty = 0.0;

    std::optional<double> r_max;
    std::optional<std::string> verdict;
    std::optional<double> alpha0;
    std::optional<std::string> coverage_mode;
    std::optional<double> adaptive_alpha;

    std::optional<double> display_upper_risk;
    std::optional<double> display_lower_risk;

    std::optional<std::size_t> batch_seq;  // monitor records only; omitted otherwise

    friend bool operator==(const Certificate&, const Certificate&) = default;
};

nlohmann::ordered_json to_json(const Certificate& cert);
Certificate certificate_from_json(const nlohmann::ordered_json& doc);

// Pretty-printed (certify) or single-line (monitor) text, newline-terminated.
std::string render_certificate(const Certificate& cert, bool single_line);

// Description of every certificate field, for --help.
std::string certificate_field_help();

}  // namespace credal_cert::cli
