#include "credal_cert/cli/commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "credal_cert/cli/config.hpp"
#include "credal_cert/cli/csv.hpp"
#include "credal_cert/cli/digest.hpp"
#include "credal_cert/cli/simulate.hpp"
#include "credal_cert/conformal.hpp"
#include "credal_cert/credal.hpp"
#include "credal_cert/error.hpp"
#include "credal_cert/geometry.hpp"
#include "credal_cert/mmd.hpp"
#include "credal_cert/pac_bayes.hpp"
#include "credal_cert/parallel.hpp"
#include "credal_cert/random.hpp"
#include "credal_cert/rkhs_norm.hpp"

#ifndef CREDAL_CERT_VERSION
#define CREDAL_CERT_VERSION "0.0.0"
#endif

namespace credal_cert::cli {

using nlohmann::ordered_json;

namespace {

struct SourceSide {
    CertifyConfig cfg;
    FeatureMatrix features;
    std::vector<double> losses;
    std::string source_digest;
    std::string losses_digest;
    std::string config_digest;
    std::uint64_t seed;
    bool clamp_risk;
};

struct LossModel {
    double l_h = 0.0;
    std::string source;
    std::optional<double> lambda;
    std::optional<double> residual_rms;
};

SourceSide load_source(const std::string& source_path, const std::string& losses_path,
                       const std::string& config_path, std::optional<std::uint64_t> seed,
                       bool clamp_risk) {
    CertifyConfig cfg = load_certify_config(config_path);
    const std::string config_bytes = read_file_bytes(config_path);
    const std::string source_bytes = read_file_bytes(source_path);
    FeatureMatrix features = features_from_table(parse_numeric_csv(source_bytes, source_path),
                                                 source_path);
    if (features.rows() < 2) throw InputError(source_path + ": need at least two source rows");
    std::vector<double> losses = read_loss_file(losses_path, features.rows());
    return SourceSide{cfg,
                      std::move(features),
                      std::move(losses),
                      sha256_digest(source_bytes),
                      sha256_digest(read_file_bytes(losses_path)),
                      sha256_digest(config_bytes),
                      seed.value_or(cfg.seed),
                      clamp_risk};
}

LossModel loss_model(const SourceSide& side, const KernelSpec& kernel) {
    LossModel lm;
    if (side.cfg.l_h) {
        lm.l_h = *side.cfg.l_h;
        lm.source = "user";
        return lm;
    }
    const NormEstimate est = estimate_rkhs_norm(side.features, side.losses, kernel, side.cfg.lambda);
    lm.l_h = est.l_h;
    lm.source = "kernel_ridge";
    lm.lambda = est.lambda;
    lm.residual_rms = est.residual_rms;
    return lm;
}

double mean(const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

void require_same_dim(const FeatureMatrix& source, const FeatureMatrix& target,
                      const std::string& target_name) {
    if (source.dim() != target.dim()) {
        throw InputError(target_name + ": expected " + std::to_string(source.dim()) +
                         " columns to match the source features, found " +
                         std::to_string(target.dim()));
    }
}

Certificate build_certificate(const SourceSide& side, const KernelSpec& kernel,
                              const LossModel& lm, const FeatureMatrix& target,
                              const MmdEstimate& est, std::string target_digest,
                              std::uint64_t calibration_seed) {
    const CertifyConfig& cfg = side.cfg;
    Certificate cert;
    cert.tool_version = CREDAL_CERT_VERSION;
    cert.source_digest = side.source_digest;
    cert.losses_digest = side.losses_digest;
    cert.target_digest = std::move(target_digest);
    cert.config_digest = side.config_digest;

    cert.dim = side.features.dim();
    cert.m = est.m;
    cert.n = est.n;
    cert.gamma = kernel.gamma();
    cert.gamma_source = std::string(to_string(kernel.source()));

    cert.mmd_kind = std::string(to_string(est.kind));
    cert.mmd2 = est.mmd2;
    cert.mmd = est.mmd;
    cert.mmd_width_alpha = cfg.delta / 2.0;
    cert.mmd_width = concentration_width(est.m, est.n, cert.mmd_width_alpha);

    const PosteriorComplexity complexity{cfg.kl, cfg.n_labeled.value_or(side.losses.size()),
                                         cfg.delta};
    cert.delta = cfg.delta;
    cert.kl = cfg.kl;
    cert.kl_source = cfg.kl_source;
    cert.n_labeled = complexity.n_labeled;

    cert.l_h = lm.l_h;
    cert.l_h_source = lm.source;
    cert.l_h_lambda = lm.lambda;
    cert.l_h_residual_rms = lm.residual_rms;

    const double emp = mean(side.losses);
    const BoundReport bound = finite_sample_bound(emp, complexity, lm.l_h, est);
    cert.bound_kind = std::string(to_string(bound.kind));
    cert.empirical_risk = bound.empirical_risk;
    cert.complexity_term = bound.complexity_term;
    cert.shift_penalty = bound.shift_penalty;
    cert.upper_risk = bound.upper_risk;
    cert.lower_risk = bound.lower_risk;

    CredalSpec credal;
    switch (cfg.epsilon_mode) {
        case EpsilonMode::Fixed:
            credal = {cfg.epsilon, RadiusSource::UserFixed};
            break;
        case EpsilonMode::Calibrate: {
            const CalibrationResult cal =
                permutation_calibrate(side.features, target, kernel, cfg.num_permutations,
                                      cfg.calibration_alpha, calibration_seed);
            credal = {cal.epsilon_alpha, RadiusSource::PermutationCalibrated};
            cert.calibration_p_value = cal.p_value;
            cert.calibration_alpha = cal.alpha;
            cert.num_permutations = cal.num_permutations;
            cert.seed = cal.seed;
            break;
        }
        case EpsilonMode::UpperConfidence:
            credal = {mmd_upper_confidence(est, cfg.delta / 2.0), RadiusSource::UpperConfidence};
            break;
    }
    cert.epsilon = credal.epsilon;
    cert.epsilon_source = std::string(to_string(credal.source));

    const RiskInterval interval = risk_interval(emp, complexity, lm.l_h, credal);
    cert.interval_lower = interval.lower;
    cert.interval_upper = interval.upper;
    cert.interval_width = interval.width;
    cert.interval_complexity_term = interval.components.complexity_term;
    cert.interval_shift_penalty = interval.components.shift_penalty;

    if (cfg.r_max) {
        cert.r_max = *cfg.r_max;
        cert.verdict = std::string(to_string(decide_adaptation(interval, *cfg.r_max).verdict));
    }
    if (cfg.alpha0) {
        const CoveragePolicy policy{*cfg.alpha0, emp, cfg.kl, complexity.n_labeled, lm.l_h};
        cert.alpha0 = *cfg.alpha0;
        cert.coverage_mode = std::string(to_string(cfg.coverage_mode));
        cert.adaptive_alpha = adaptive_alpha(policy, credal.epsilon, cfg.coverage_mode);
    }
    if (side.clamp_risk) {
        cert.display_upper_risk = std::clamp(cert.upper_risk, 0.0, 1.0);
        cert.display_lower_risk = std::clamp(cert.lower_risk, 0.0, 1.0);
    }
    return cert;
}

// "median" or a positive number.
std::optional<double> parse_gamma(const std::string& text) {
    if (text == "median") return std::nullopt;
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || !(value > 0.0) || !std::isfinite(value)) {
        throw InputError("--gamma must be a positive number or \"median\", got '" + text + "'");
    }
    return value;
}

void write_output(const std::string& text, const std::string& out_path, std::ostream& out) {
    if (out_path.empty() || out_path == "-") {
        out << text;
        out.flush();
        return;
    }
    std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
    if (!file) throw InputError(out_path + ": cannot open for writing");
    file << text;
    if (!file.flush()) throw InputError(out_path + ": write failed");
}

std::string trim_cr(const std::string& line) {
    if (!line.empty() && line.back() == '\r') return line.substr(0, line.size() - 1);
    return line;
}

bool is_blank(const std::string& text) {
    return std::all_of(text.begin(), text.end(),
                       [](unsigned char c) { return std::isspace(c) != 0; });
}

}  // namespace

Certificate certify(const CertifyRequest& request) {
    const SourceSide side = load_source(request.source_path, request.losses_path,
                                        request.config_path, request.seed, request.clamp_risk);
    const std::string target_bytes = read_file_bytes(request.target_path);
    const FeatureMatrix target = features_from_table(
        parse_numeric_csv(target_bytes, request.target_path), request.target_path);
    require_same_dim(side.features, target, request.target_path);
    if (target.rows() < 2) throw InputError(request.target_path + ": need at least two target rows");

    const KernelSpec kernel = side.cfg.gamma ? KernelSpec(*side.cfg.gamma)
                                             : median_heuristic(side.features, target);
    const LossModel lm = loss_model(side, kernel);
    const MmdEstimate est = mmd2_unbiased(side.features, target, kernel);
    return build_certificate(side, kernel, lm, target, est, sha256_digest(target_bytes),
                             side.seed);
}

std::size_t monitor(const MonitorRequest& request, std::istream& stream, std::ostream& out) {
    if (request.window < 1) throw InputError("--window must be at least 1");
    const SourceSide side = load_source(request.source_path, request.losses_path,
                                        request.config_path, request.seed, request.clamp_risk);
    // The bandwidth depends on the source only so the cached source structures
    // stay valid for every batch.
    const KernelSpec kernel = side.cfg.gamma ? KernelSpec(*side.cfg.gamma)
                                             : median_heuristic(side.features);
    const LossModel lm = loss_model(side, kernel);
    const SourceReference reference(side.features, kernel);

    std::deque<FeatureMatrix> window;
    std::size_t batch_seq = 0;
    std::size_t errors = 0;

    auto process = [&](const std::string& text) {
        const std::string name = "batch " + std::to_string(batch_seq);
        std::string line;
        try {
            FeatureMatrix batch = features_from_table(parse_numeric_csv(text, name), name);
            require_same_dim(side.features, batch, name);
            if (batch.rows() < 2) throw InputError(name + ": need at least two rows");
            window.push_back(std::move(batch));
            if (window.size() > request.window) window.pop_front();
            FeatureMatrix pooled = window.front();
            for (std::size_t i = 1; i < window.size(); ++i) {
                pooled = FeatureMatrix::stack(pooled, window[i]);
            }
            const MmdEstimate est = reference.mmd2_unbiased(pooled);
            Certificate cert = build_certificate(side, kernel, lm, pooled, est,
                                                 sha256_digest(text),
                                                 derive_seed(side.seed, batch_seq));
            cert.batch_seq = batch_seq;
            line = render_certificate(cert, true);
        } catch (const InputError& e) {
            ordered_json rec{{"batch_seq", batch_seq}, {"error", e.what()}, {"error_kind", "input"}};
            line = rec.dump() + "\n";
            ++errors;
        } catch (const NumericalError& e) {
            ordered_json rec{
                {"batch_seq", batch_seq}, {"error", e.what()}, {"error_kind", "numerical"}};
            line = rec.dump() + "\n";
            ++errors;
        }
        out << line;
        out.flush();
        ++batch_seq;
    };

    std::string batch;
    std::string raw;
    while (std::getline(stream, raw)) {
        const std::string line = trim_cr(raw);
        if (line == "---") {
            process(batch);
            batch.clear();
        } else {
            batch += line;
            batch += '\n';
        }
    }
    if (!is_blank(batch)) process(batch);
    return errors;
}

namespace {

struct GlobalOptions {
    std::optional<std::uint64_t> seed;
    std::string out_path;
    std::size_t threads = 1;
    bool clamp_risk = false;
};

std::size_t default_threads() {
    const char* env = std::getenv("CREDAL_CERT_THREADS");
    if (env == nullptr || *env == '\0') return 1;
    char* end = nullptr;
    const unsigned long long value = std::strtoull(env, &end, 10);
    if (*end != '\0' || value == 0) {
        throw InputError(std::string("CREDAL_CERT_THREADS must be a positive integer, got '") +
                         env + "'");
    }
    return static_cast<std::size_t>(value);
}

std::string file_footer() {
    return "\nInput files: comma-separated numeric rows, one sample per row; a non-numeric\n"
           "first row is treated as a header. Loss files have a single column.\n"
           "Bandwidth: k(x, y) = exp(-gamma |x - y|^2); gamma \"median\" uses\n"
           "gamma = 1 / (2 median |x - y|^2) over distinct pairs of the pooled sample\n"
           "(the source sample alone in monitor mode).\n"
           "Exit codes: 0 success, 1 input or parse error, 2 numerical error.\n\n" +
           certificate_field_help();
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
    CLI::App app{"Distribution-shift risk certificates from source losses and target features",
                 "credal-cert"};
    app.set_version_flag("--version", std::string(CREDAL_CERT_VERSION));
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions global;
    std::uint64_t seed_value = 0;
    auto* seed_opt = app.add_option("--seed", seed_value, "Seed for randomized steps");
    app.add_option("--out", global.out_path, "Write output to this file instead of stdout");
    auto* threads_opt = app.add_option("--threads", global.threads,
                                       "Worker threads (default: $CREDAL_CERT_THREADS or 1)")
                            ->check(CLI::PositiveNumber);
    app.add_flag("--clamp-risk", global.clamp_risk,
                 "Add display_* risk fields clamped to [0, 1]; raw values are kept");

    CertifyRequest cert_req;
    auto* certify_cmd = app.add_subcommand("certify", "Compute a risk certificate");
    certify_cmd->add_option("--source", cert_req.source_path, "Source feature CSV")->required();
    certify_cmd->add_option("--losses", cert_req.losses_path, "Source loss CSV")->required();
    certify_cmd->add_option("--target", cert_req.target_path, "Target feature CSV")->required();
    certify_cmd->add_option("--config", cert_req.config_path, "JSON config")->required();
    certify_cmd->footer(
        "\nConfig keys: gamma, delta, kl, n_labeled, l_h, lambda, c_w, r_max, alpha0,\n"
        "coverage_mode, epsilon, num_permutations, alpha, seed. Unknown keys are errors.\n" +
        file_footer());

    MonitorRequest mon_req;
    std::string stream_path = "-";
    auto* monitor_cmd = app.add_subcommand("monitor", "Certify each batch of a target stream");
    monitor_cmd->add_option("--source", mon_req.source_path, "Source feature CSV")->required();
    monitor_cmd->add_option("--losses", mon_req.losses_path, "Source loss CSV")->required();
    monitor_cmd->add_option("--config", mon_req.config_path, "JSON config")->required();
    monitor_cmd->add_option("--stream", stream_path, "Batch stream file, '-' for stdin")
        ->capture_default_str();
    monitor_cmd->add_option("--window", mon_req.window, "Batches pooled per target sample")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    monitor_cmd->footer(
        "\nBatches are separated by lines containing only \"---\". Each batch emits one\n"
        "JSON line with batch_seq, or an error record {batch_seq, error, error_kind}.\n" +
        file_footer());

    std::string sim_path;
    auto* simulate_cmd = app.add_subcommand("simulate", "Run a synthetic validation experiment");
    simulate_cmd->add_option("--config", sim_path, "Experiment JSON config")->required();
    simulate_cmd->footer(
        "\nExperiments: coverage, unbiasedness, concentration, geometry, permutation,\n"
        "norm_recovery, convexity, equivalence, interval_identity.\n"
        "Exit codes: 0 all checks pass, 1 config error, 2 numerical error, 3 a check failed.\n");

    std::string cal_source, cal_target, cal_gamma = "median";
    std::size_t cal_permutations = 1000;
    double cal_alpha = 0.05;
    auto* calibrate_cmd = app.add_subcommand("calibrate", "Permutation two-sample test");
    calibrate_cmd->add_option("--source", cal_source, "Source feature CSV")->required();
    calibrate_cmd->add_option("--target", cal_target, "Target feature CSV")->required();
    calibrate_cmd->add_option("--gamma", cal_gamma, "Bandwidth or \"median\"")
        ->capture_default_str();
    calibrate_cmd->add_option("--permutations", cal_permutations, "Permutation count (>= 100)")
        ->capture_default_str();
    calibrate_cmd->add_option("--alpha", cal_alpha, "Test level")->capture_default_str();

    std::string norm_features, norm_losses, norm_gamma = "median";
    std::optional<double> norm_lambda;
    auto* norm_cmd = app.add_subcommand("norm", "Kernel ridge estimate of the loss RKHS norm");
    norm_cmd->add_option("--features", norm_features, "Feature CSV")->required();
    norm_cmd->add_option("--losses", norm_losses, "Loss CSV")->required();
    norm_cmd->add_option("--gamma", norm_gamma, "Bandwidth or \"median\"")->capture_default_str();
    norm_cmd->add_option("--lambda", norm_lambda, "Ridge regularizer (default 1e-6 tr(K)/n)");

    std::string geo_source, geo_target, geo_gamma = "median", geo_anchors, geo_labels;
    double geo_c_w = 1.0;
    std::size_t geo_anchor_index = 0;
    auto* geometry_cmd = app.add_subcommand("geometry", "Geodesic distortion diagnostics");
    geometry_cmd->add_option("--source", geo_source, "Source feature CSV")->required();
    geometry_cmd->add_option("--target", geo_target, "Target feature CSV")->required();
    geometry_cmd->add_option("--gamma", geo_gamma, "Bandwidth or \"median\"")->capture_default_str();
    geometry_cmd->add_option("--c-w", geo_c_w, "Distortion constant")->capture_default_str();
    auto* anchor_opt = geometry_cmd->add_option("--anchor-index", geo_anchor_index,
                                                "Source row used as the anchor")
                           ->capture_default_str();
    auto* anchors_opt =
        geometry_cmd->add_option("--anchors", geo_anchors, "Anchor CSV for a per-class report");
    auto* labels_opt = geometry_cmd->add_option("--labels", geo_labels, "Class label per anchor");
    anchors_opt->needs(labels_opt);
    labels_opt->needs(anchors_opt);
    anchors_opt->excludes(anchor_opt);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        global.seed = *seed_opt ? std::optional<std::uint64_t>(seed_value) : std::nullopt;
        set_thread_count(*threads_opt ? global.threads : default_threads());

        if (certify_cmd->parsed()) {
            cert_req.seed = global.seed;
            cert_req.clamp_risk = global.clamp_risk;
            const Certificate cert = certify(cert_req);
            write_output(render_certificate(cert, false), global.out_path, out);
            return kExitOk;
        }
        if (monitor_cmd->parsed()) {
            mon_req.seed = global.seed;
            mon_req.clamp_risk = global.clamp_risk;
            std::ifstream file;
            std::istream* stream = &in;
            if (stream_path != "-") {
                file.open(stream_path, std::ios::binary);
                if (!file) throw InputError(stream_path + ": cannot open file");
                stream = &file;
            }
            if (global.out_path.empty() || global.out_path == "-") {
                monitor(mon_req, *stream, out);
            } else {
                std::ostringstream buffer;
                monitor(mon_req, *stream, buffer);
                write_output(buffer.str(), global.out_path, out);
            }
            return kExitOk;
        }
        if (simulate_cmd->parsed()) {
            SimulateConfig cfg = load_simulate_config(sim_path);
            if (global.seed) {
                cfg.seed = *global.seed;
                cfg.scenario.seed = *global.seed;
            }
            const SimulationReport report = run_simulation(cfg);
            std::ostringstream text;
            print_report(report, text);
            write_output(text.str(), global.out_path, out);
            return report.passed() ? kExitOk : kExitSimulationFailed;
        }
        if (calibrate_cmd->parsed()) {
            const FeatureMatrix xs = read_feature_file(cal_source);
            const FeatureMatrix xt = read_feature_file(cal_target);
            require_same_dim(xs, xt, cal_target);
            const auto gamma = parse_gamma(cal_gamma);
            const KernelSpec kernel = gamma ? KernelSpec(*gamma) : median_heuristic(xs, xt);
            const std::uint64_t seed = global.seed.value_or(0);
            const CalibrationResult r =
                permutation_calibrate(xs, xt, kernel, cal_permutations, cal_alpha, seed);
            ordered_json doc{{"gamma", kernel.gamma()},
                             {"gamma_source", to_string(kernel.source())},
                             {"m", xs.rows()},
                             {"n", xt.rows()},
                             {"mmd2", r.observed_mmd2},
                             {"epsilon_alpha", r.epsilon_alpha},
                             {"p_value", r.p_value},
                             {"alpha", r.alpha},
                             {"reject", r.p_value <= r.alpha},
                             {"num_permutations", r.num_permutations},
                             {"seed", r.seed}};
            write_output(doc.dump(2) + "\n", global.out_path, out);
            return kExitOk;
        }
        if (norm_cmd->parsed()) {
            const FeatureMatrix x = read_feature_file(norm_features);
            const std::vector<double> losses = read_loss_file(norm_losses, x.rows());
            const auto gamma = parse_gamma(norm_gamma);
            const KernelSpec kernel = gamma ? KernelSpec(*gamma) : median_heuristic(x);
            const NormEstimate est = estimate_rkhs_norm(x, losses, kernel, norm_lambda);
            ordered_json doc{{"gamma", kernel.gamma()},
                             {"gamma_source", to_string(kernel.source())},
                             {"l_h", est.l_h},
                             {"lambda", est.lambda},
                             {"n_fit", est.n_fit},
                             {"residual_rms", est.residual_rms}};
            write_output(doc.dump(2) + "\n", global.out_path, out);
            return kExitOk;
        }
        if (geometry_cmd->parsed()) {
            const FeatureMatrix xs = read_feature_file(geo_source);
            const FeatureMatrix xt = read_feature_file(geo_target);
            require_same_dim(xs, xt, geo_target);
            const auto gamma = parse_gamma(geo_gamma);
            const KernelSpec kernel = gamma ? KernelSpec(*gamma) : median_heuristic(xs, xt);
            ordered_json doc{{"gamma", kernel.gamma()},
                             {"gamma_source", to_string(kernel.source())},
                             {"c_w", geo_c_w}};
            if (!geo_anchors.empty()) {
                const FeatureMatrix anchors = read_feature_file(geo_anchors);
                require_same_dim(xs, anchors, geo_anchors);
                const std::vector<std::string> labels = read_label_file(geo_labels);
                if (labels.size() != anchors.rows()) {
                    throw InputError(geo_labels + ": expected " + std::to_string(anchors.rows()) +
                                     " labels, found " + std::to_string(labels.size()));
                }
                ordered_json classes = ordered_json::array();
                for (const auto& s : rare_class_report(anchors, labels, xs, xt, kernel, geo_c_w)) {
                    classes.push_back({{"class_label", s.class_label},
                                       {"sample_count", s.sample_count},
                                       {"mean_distortion", s.mean_distortion},
                                       {"max_distortion", s.max_distortion}});
                }
                doc["classes"] = classes;
            } else {
                if (geo_anchor_index >= xs.rows()) {
                    throw InputError("--anchor-index " + std::to_string(geo_anchor_index) +
                                     " is out of range for " + std::to_string(xs.rows()) +
                                     " source rows");
                }
                const DistortionReport r = geodesic_distortion(xs.row(geo_anchor_index), xs, xt,
                                                               kernel, geo_c_w, geo_anchor_index);
                doc["anchor_index"] = r.anchor_index;
                doc["lhs_estimate"] = r.lhs_estimate;
                doc["rhs_bound"] = r.rhs_bound;
                doc["slack"] = r.slack;
                doc["epsilon_bar"] = r.epsilon_bar;
            }
            write_output(doc.dump(2) + "\n", global.out_path, out);
            return kExitOk;
        }
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitInput;
}

}  // namespace credal_cert::cli
