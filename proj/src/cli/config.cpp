#include "credal_cert/cli/config.hpp"

#include <cmath>
#include <filesystem>
#include <set>

#include "credal_cert/cli/csv.hpp"
#include "credal_cert/error.hpp"
#include "credal_cert/pac_bayes.hpp"

namespace credal_cert::cli {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& doc, const std::set<std::string>& allowed,
                         const std::string& where) {
    if (!doc.is_object()) throw InputError(where + ": expected a JSON object");
    for (const auto& item : doc.items()) {
        if (!allowed.count(item.key())) {
            throw InputError(where + ": unknown key '" + item.key() + "'");
        }
    }
}

double number(const json& v, const std::string& key) {
    if (!v.is_number()) throw InputError("config: '" + key + "' must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw InputError("config: '" + key + "' must be finite");
    return x;
}

std::uint64_t count(const json& v, const std::string& key) {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)) {
        throw InputError("config: '" + key + "' must be a nonnegative integer");
    }
    return v.get<std::uint64_t>();
}

double probability(const json& v, const std::string& key) {
    const double x = number(v, key);
    if (!(x > 0.0 && x < 1.0)) throw InputError("config: '" + key + "' must lie in (0, 1)");
    return x;
}

std::string resolve(const std::string& base_dir, const std::string& path) {
    const std::filesystem::path p(path);
    if (p.is_absolute() || base_dir.empty()) return path;
    return (std::filesystem::path(base_dir) / p).string();
}

// Two-column CSV (mean, variance) per parameter.
void read_gaussian_params(const std::string& path, std::vector<double>& mean,
                          std::vector<double>& var) {
    const NumericTable table = parse_numeric_csv(read_file_bytes(path), path);
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        if (table.rows[i].size() != 2) {
            throw InputError(path + ":" + std::to_string(table.line_numbers[i]) +
                             ":1: expected two columns (mean, variance)");
        }
        mean.push_back(table.rows[i][0]);
        var.push_back(table.rows[i][1]);
    }
    if (mean.empty()) throw InputError(path + ": no parameters");
}

json parse_json_file(const std::string& path) {
    const std::string text = read_file_bytes(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

}  // namespace

CertifyConfig parse_certify_config(const json& doc, const std::string& base_dir) {
    reject_unknown_keys(doc,
                        {"gamma", "delta", "kl", "n_labeled", "l_h", "lambda", "c_w", "r_max",
                         "alpha0", "coverage_mode", "epsilon", "num_permutations", "alpha", "seed"},
                        "config");
    CertifyConfig cfg;

    if (!doc.contains("gamma")) throw InputError("config: missing required key 'gamma'");
    const json& gamma = doc.at("gamma");
    if (gamma.is_string()) {
        if (gamma.get<std::string>() != "median") {
            throw InputError("config: 'gamma' must be a positive number or \"median\"");
        }
    } else {
        cfg.gamma = number(gamma, "gamma");
        if (*cfg.gamma <= 0.0) throw InputError("config: 'gamma' must be positive");
    }

    if (!doc.contains("delta")) throw InputError("config: missing required key 'delta'");
    cfg.delta = probability(doc.at("delta"), "delta");

    if (!doc.contains("kl")) throw InputError("config: missing required key 'kl'");
    const json& kl = doc.at("kl");
    if (kl.is_object()) {
        reject_unknown_keys(kl, {"posterior", "prior"}, "config.kl");
        if (!kl.contains("posterior") || !kl.contains("prior") || !kl.at("posterior").is_string() ||
            !kl.at("prior").is_string()) {
            throw InputError("config.kl: expected {\"posterior\": file, \"prior\": file}");
        }
        std::vector<double> mu_p, var_p, mu_q, var_q;
        read_gaussian_params(resolve(base_dir, kl.at("posterior").get<std::string>()), mu_p, var_p);
        read_gaussian_params(resolve(base_dir, kl.at("prior").get<std::string>()), mu_q, var_q);
        cfg.kl = kl_diag_gaussians(mu_p, var_p, mu_q, var_q);
        cfg.kl_source = "diag_gaussian";
    } else {
        cfg.kl = number(kl, "kl");
        if (cfg.kl < 0.0) throw InputError("config: 'kl' must be nonnegative");
    }

    if (doc.contains("n_labeled")) {
        cfg.n_labeled = count(doc.at("n_labeled"), "n_labeled");
        if (*cfg.n_labeled < 1) throw InputError("config: 'n_labeled' must be at least 1");
    }

    if (!doc.contains("l_h")) throw InputError("config: missing required key 'l_h'");
    const json& l_h = doc.at("l_h");
    if (l_h.is_string()) {
        if (l_h.get<std::string>() != "estimate") {
            throw InputError("config: 'l_h' must be a nonnegative number or \"estimate\"");
        }
    } else {
        cfg.l_h = number(l_h, "l_h");
        if (*cfg.l_h < 0.0) throw InputError("config: 'l_h' must be nonnegative");
    }
    if (doc.contains("lambda")) {
        if (cfg.l_h) throw InputError("config: 'lambda' is only valid with l_h = \"estimate\"");
        cfg.lambda = number(doc.at("lambda"), "lambda");
        if (*cfg.lambda <= 0.0) throw InputError("config: 'lambda' must be positive");
    }

    if (doc.contains("c_w")) {
        cfg.c_w = number(doc.at("c_w"), "c_w");
        if (cfg.c_w < 0.0) throw InputError("config: 'c_w' must be nonnegative");
    }
    if (doc.contains("r_max")) cfg.r_max = number(doc.at("r_max"), "r_max");
    if (doc.contains("alpha0")) cfg.alpha0 = probability(doc.at("alpha0"), "alpha0");
    if (doc.contains("coverage_mode")) {
        const json& mode = doc.at("coverage_mode");
        if (mode == "bound_ratio") {
            cfg.coverage_mode = CoverageMode::BoundRatio;
        } else if (mode == "shift_only") {
            cfg.coverage_mode = CoverageMode::ShiftOnly;
        } else {
            throw InputError("config: 'coverage_mode' must be \"bound_ratio\" or \"shift_only\"");
        }
    }

    if (doc.contains("epsilon")) {
        const json& eps = doc.at("epsilon");
        if (eps.is_string()) {
            if (eps.get<std::string>() != "calibrate") {
                throw InputError("config: 'epsilon' must be a nonnegative number or \"calibrate\"");
            }
            cfg.epsilon_mode = EpsilonMode::Calibrate;
        } else {
            cfg.epsilon = number(eps, "epsilon");
            if (cfg.epsilon < 0.0) throw InputError("config: 'epsilon' must be nonnegative");
            cfg.epsilon_mode = EpsilonMode::Fixed;
        }
    }
    const bool calibrating = cfg.epsilon_mode == EpsilonMode::Calibrate;
    if (doc.contains("num_permutations")) {
        if (!calibrating) {
            throw InputError("config: 'num_permutations' is only valid with epsilon = \"calibrate\"");
        }
        cfg.num_permutations = count(doc.at("num_permutations"), "num_permutations");
        if (cfg.num_permutations < 100) {
            throw InputError("config: 'num_permutations' must be at least 100");
        }
    }
    if (doc.contains("alpha")) {
        if (!calibrating) throw InputError("config: 'alpha' is only valid with epsilon = \"calibrate\"");
        cfg.calibration_alpha = probability(doc.at("alpha"), "alpha");
    }
    if (doc.contains("seed")) cfg.seed = count(doc.at("seed"), "seed");
    return cfg;
}

CertifyConfig load_certify_config(const std::string& path) {
    const json doc = parse_json_file(path);
    const auto parent = std::filesystem::path(path).parent_path().string();
    try {
        return parse_certify_config(doc, parent);
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

namespace {

oracle::ShiftScenario parse_scenario(const json& doc) {
    reject_unknown_keys(doc, {"d", "mean_s", "mean_t", "var_s", "var_t", "gamma"}, "scenario");
    oracle::ShiftScenario s;
    for (const char* key : {"d", "mean_s", "mean_t", "gamma"}) {
        if (!doc.contains(key)) throw InputError(std::string("scenario: missing key '") + key + "'");
    }
    s.d = count(doc.at("d"), "d");
    auto vec = [&](const char* key) {
        const json& v = doc.at(key);
        if (!v.is_array()) throw InputError(std::string("scenario: '") + key + "' must be an array");
        std::vector<double> out;
        for (const auto& x : v) out.push_back(number(x, key));
        return out;
    };
    s.mean_s = vec("mean_s");
    s.mean_t = vec("mean_t");
    if (doc.contains("var_s")) s.var_s = number(doc.at("var_s"), "var_s");
    if (doc.contains("var_t")) s.var_t = number(doc.at("var_t"), "var_t");
    s.gamma = number(doc.at("gamma"), "gamma");
    s.validate();
    return s;
}

}  // namespace

SimulateConfig parse_simulate_config(const json& doc) {
    reject_unknown_keys(doc,
                        {"experiment", "trials", "seed", "scenario", "m", "n", "alpha", "delta",
                         "n_labeled", "num_centers", "mc_samples", "mc_pairs",
                         "num_permutations", "c_w", "remainder_coef", "lambda"},
                        "simulate config");
    SimulateConfig cfg;
    if (!doc.contains("experiment") || !doc.at("experiment").is_string()) {
        throw InputError("simulate config: missing string key 'experiment'");
    }
    cfg.experiment = doc.at("experiment").get<std::string>();
    static const std::set<std::string> known{"coverage",  "unbiasedness", "concentration",
                                             "geometry",  "permutation",  "norm_recovery",
                                             "convexity", "equivalence",  "interval_identity"};
    if (!known.count(cfg.experiment)) {
        throw InputError("simulate config: unknown experiment '" + cfg.experiment + "'");
    }
    if (!doc.contains("trials")) throw InputError("simulate config: missing key 'trials'");
    cfg.trials = count(doc.at("trials"), "trials");
    if (cfg.trials == 0) throw InputError("simulate config: 'trials' must be positive");
    if (doc.contains("seed")) cfg.seed = count(doc.at("seed"), "seed");

    const bool needs_scenario =
        cfg.experiment != "equivalence" && cfg.experiment != "interval_identity";
    if (doc.contains("scenario")) {
        cfg.scenario = parse_scenario(doc.at("scenario"));
    } else if (needs_scenario) {
        throw InputError("simulate config: experiment '" + cfg.experiment + "' needs a 'scenario'");
    }
    cfg.scenario.seed = cfg.seed;

    if (doc.contains("m")) cfg.m = count(doc.at("m"), "m");
    if (doc.contains("n")) cfg.n = count(doc.at("n"), "n");
    if (doc.contains("alpha")) cfg.alpha = probability(doc.at("alpha"), "alpha");
    if (doc.contains("delta")) cfg.delta = probability(doc.at("delta"), "delta");
    if (doc.contains("n_labeled")) cfg.n_labeled = count(doc.at("n_labeled"), "n_labeled");
    if (doc.contains("num_centers")) cfg.num_centers = count(doc.at("num_centers"), "num_centers");
    if (doc.contains("mc_samples")) cfg.mc_samples = count(doc.at("mc_samples"), "mc_samples");
    if (doc.contains("mc_pairs")) cfg.mc_pairs = count(doc.at("mc_pairs"), "mc_pairs");
    if (doc.contains("num_permutations")) {
        cfg.num_permutations = count(doc.at("num_permutations"), "num_permutations");
    }
    if (doc.contains("c_w")) cfg.c_w = number(doc.at("c_w"), "c_w");
    if (doc.contains("remainder_coef")) {
        cfg.remainder_coef = number(doc.at("remainder_coef"), "remainder_coef");
    }
    if (doc.contains("lambda")) cfg.lambda = number(doc.at("lambda"), "lambda");
    return cfg;
}

SimulateConfig load_simulate_config(const std::string& path) {
    const json doc = parse_json_file(path);
    try {
        return parse_simulate_config(doc);
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

}  // namespace credal_cert::cli
