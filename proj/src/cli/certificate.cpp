#include "credal_cert/cli/certificate.hpp"

#include "credal_cert/error.hpp"

namespace credal_cert::cli {

using nlohmann::ordered_json;

namespace {

// Single table drives serialization, parsing and the --help text so the three
// cannot drift apart.
template <typename Visitor>
void visit_fields(Certificate& c, Visitor&& v) {
    v("tool", c.tool, "program name");
    v("tool_version", c.tool_version, "program version");
    v("source_digest", c.source_digest, "sha256 of the source feature file");
    v("losses_digest", c.losses_digest, "sha256 of the source loss file");
    v("target_digest", c.target_digest, "sha256 of the target features (batch bytes in monitor mode)");
    v("config_digest", c.config_digest, "sha256 of the config file");
    v("dim", c.dim, "feature dimension");
    v("m", c.m, "source sample count");
    v("n", c.n, "target sample count");
    v("gamma", c.gamma, "RBF bandwidth, k(x,y) = exp(-gamma |x-y|^2)");
    v("gamma_source", c.gamma_source, "fixed | median_heuristic");
    v("mmd_kind", c.mmd_kind, "estimator used for the shift estimate (unbiased)");
    v("mmd2", c.mmd2, "unbiased MMD^2 estimate (may be negative)");
    v("mmd", c.mmd, "sqrt(max(mmd2, 0))");
    v("mmd_width", c.mmd_width, "concentration width sqrt(2 ln(2/a) / min(m, n))");
    v("mmd_width_alpha", c.mmd_width_alpha, "level a of mmd_width (delta / 2)");
    v("delta", c.delta, "confidence parameter");
    v("kl", c.kl, "KL(posterior || prior)");
    v("kl_source", c.kl_source, "user | diag_gaussian");
    v("n_labeled", c.n_labeled, "labeled sample count in the complexity term");
    v("l_h", c.l_h, "RKHS norm bound of the loss");
    v("l_h_source", c.l_h_source, "user | kernel_ridge");
    v("l_h_lambda", c.l_h_lambda, "ridge regularizer of the norm estimate, or null");
    v("l_h_residual_rms", c.l_h_residual_rms, "rms residual of the ridge fit, or null");
    v("bound_kind", c.bound_kind, "finite_sample");
    v("empirical_risk", c.empirical_risk, "mean source loss");
    v("complexity_term", c.complexity_term, "sqrt((kl + ln(4 sqrt(n)/delta)) / (2 n))");
    v("shift_penalty", c.shift_penalty, "l_h * (mmd + mmd_width)");
    v("upper_risk", c.upper_risk, "(empirical_risk + complexity_term) + shift_penalty");
    v("lower_risk", c.lower_risk, "(empirical_risk - complexity_term) - shift_penalty");
    v("epsilon", c.epsilon, "credal radius in MMD units");
    v("epsilon_source", c.epsilon_source, "user_fixed | permutation_calibrated | upper_confidence");
    v("calibration_p_value", c.calibration_p_value, "permutation p-value, or null");
    v("calibration_alpha", c.calibration_alpha, "permutation level, or null");
    v("num_permutations", c.num_permutations, "permutation count, or null");
    v("seed", c.seed, "permutation seed, or null");
    v("interval_lower", c.interval_lower, "lower end of the credal risk interval");
    v("interval_upper", c.interval_upper, "upper end of the credal risk interval");
    v("interval_width", c.interval_width, "2 interval_complexity_term + 2 interval_shift_penalty");
    v("interval_complexity_term", c.interval_complexity_term, "sqrt((kl + ln(2 sqrt(n)/delta)) / (2 n))");
    v("interval_shift_penalty", c.interval_shift_penalty, "l_h * epsilon");
    v("r_max", c.r_max, "risk tolerance, or null");
    v("verdict", c.verdict,
      "no_adaptation_needed | adaptation_warranted | adaptation_futile, or null");
    v("alpha0", c.alpha0, "base miscoverage level, or null");
    v("coverage_mode", c.coverage_mode, "bound_ratio | shift_only, or null");
    v("adaptive_alpha", c.adaptive_alpha, "alpha0 + coverage increment, or null");
    v("display_upper_risk", c.display_upper_risk, "upper_risk clamped to [0, 1] with --clamp-risk, or null");
    v("display_lower_risk", c.display_lower_risk, "lower_risk clamped to [0, 1] with --clamp-risk, or null");
}

template <typename T>
void write_value(ordered_json& doc, const char* key, const T& value) {
    doc[key] = value;
}

template <typename T>
void write_value(ordered_json& doc, const char* key, const std::optional<T>& value) {
    if (value) {
        doc[key] = *value;
    } else {
        doc[key] = nullptr;
    }
}

template <typename T>
void read_value(const ordered_json& doc, const char* key, T& out) {
    if (!doc.contains(key)) throw InputError(std::string("certificate: missing key '") + key + "'");
    try {
        out = doc.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw InputError(std::string("certificate: bad value for '") + key + "'");
    }
}

template <typename T>
void read_value(const ordered_json& doc, const char* key, std::optional<T>& out) {
    if (!doc.contains(key)) throw InputError(std::string("certificate: missing key '") + key + "'");
    if (doc.at(key).is_null()) {
        out.reset();
        return;
    }
    T value{};
    read_value(doc, key, value);
    out = value;
}

}  // namespace

ordered_json to_json(const Certificate& cert) {
    ordered_json doc = ordered_json::object();
    if (cert.batch_seq) doc["batch_seq"] = *cert.batch_seq;
    Certificate copy = cert;
    visit_fields(copy, [&](const char* key, const auto& value, const char*) {
        write_value(doc, key, value);
    });
    return doc;
}

Certificate certificate_from_json(const ordered_json& doc) {
    if (!doc.is_object()) throw InputError("certificate: expected a JSON object");
    Certificate cert;
    if (doc.contains("batch_seq")) read_value(doc, "batch_seq", cert.batch_seq);
    visit_fields(cert, [&](const char* key, auto& value, const char*) {
        read_value(doc, key, value);
    });
    return cert;
}

std::string render_certificate(const Certificate& cert, bool single_line) {
    return to_json(cert).dump(single_line ? -1 : 2) + "\n";
}

std::string certificate_field_help() {
    std::string text = "Certificate fields (JSON, every key always present, null if not applicable):\n";
    Certificate scratch;
    visit_fields(scratch, [&](const char* key, const auto&, const char* description) {
        std::string line = "  ";
        line += key;
        if (line.size() < 28) line.resize(28, ' ');
        text += line + " " + description + "\n";
    });
    text += "  batch_seq                  monitor records only: 0-based batch index\n";
    return text;
}

}  // namespace credal_cert::cli
