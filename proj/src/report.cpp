#include "hdmt/report.hpp"

#include <stdexcept>

namespace hdmt {

namespace {

template <typename T>
Json optional_json(const std::optional<T>& value) {
    return value ? Json(*value) : Json(nullptr);
}

template <typename T>
std::optional<T> read_optional(const Json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<T>();
}

}  // namespace

Mode parse_mode(const std::string& text) {
    if (text == "one") return Mode::OneSample;
    if (text == "two") return Mode::TwoSample;
    throw std::invalid_argument("mode must be 'one' or 'two', got '" + text + "'");
}

Setting parse_setting(const std::string& kind, std::optional<double> bound) {
    if (kind == "gaussian") return Setting::gaussian();
    if (kind == "bounded") {
        if (!bound) throw std::invalid_argument("the bounded setting needs a bound L");
        return Setting::bounded(*bound);
    }
    throw std::invalid_argument("setting must be 'gaussian' or 'bounded', got '" + kind + "'");
}

void to_json(Json& j, const Setting& s) {
    j = Json{{"kind", to_string(s)}, {"bound", s.is_bounded() ? Json(s.bound()) : Json(nullptr)}};
}

void from_json(const Json& j, Setting& s) {
    s = parse_setting(j.at("kind").get<std::string>(), read_optional<double>(j, "bound"));
}

void to_json(Json& j, const QuantilePair& q) {
    j = Json{{"q1", q.q1}, {"q2", q.q2}, {"source", to_string(q.source)}, {"u", q.u}};
}

void from_json(const Json& j, QuantilePair& q) {
    const std::string source = j.at("source").get<std::string>();
    if (source != "oracle" && source != "plugin") throw std::invalid_argument("unknown quantile source " + source);
    q = make_quantile_pair(j.at("q1").get<double>(), j.at("q2").get<double>(),
                           source == "oracle" ? QuantileSource::Oracle : QuantileSource::PlugIn,
                           j.at("u").get<double>());
}

void to_json(Json& j, const TestReport& r) {
    j = Json{{"u_stat", r.u_stat},
             {"threshold", r.threshold},
             {"reject", r.reject},
             {"q1", r.q1_used},
             {"q2", r.q2_used},
             {"d_e_hat", optional_json(r.d_e_hat)},
             {"d_star_hat", optional_json(r.d_star_hat)},
             {"warnings", r.warnings}};
}

void from_json(const Json& j, TestReport& r) {
    r.u_stat = j.at("u_stat").get<double>();
    r.threshold = j.at("threshold").get<double>();
    r.reject = j.at("reject").get<bool>();
    r.q1_used = j.at("q1").get<double>();
    r.q2_used = j.at("q2").get<double>();
    r.d_e_hat = read_optional<double>(j, "d_e_hat");
    r.d_star_hat = read_optional<double>(j, "d_star_hat");
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
}

void to_json(Json& j, const SeparationBounds& b) {
    // delta_upper and delta_lower carry an unspecified universal constant, set to 1.
    j = Json{{"delta_upper", b.delta_upper},
             {"bounds_up_to_constant", true},
             {"delta_lower", optional_json(b.delta_lower)},
             {"delta_guaranteed", b.delta_guaranteed},
             {"sigma", b.sigma},
             {"d_star", b.d_star},
             {"d_e", b.d_e}};
}

void from_json(const Json& j, SeparationBounds& b) {
    b.delta_upper = j.at("delta_upper").get<double>();
    b.delta_lower = read_optional<double>(j, "delta_lower");
    b.delta_guaranteed = j.at("delta_guaranteed").get<double>();
    b.sigma = j.at("sigma").get<double>();
    b.d_star = j.at("d_star").get<double>();
    b.d_e = j.at("d_e").get<double>();
}

void to_json(Json& j, const EffectiveDims& e) {
    j = Json{{"d_e", e.d_e}, {"d_star", e.d_star}, {"sigma_sq", e.sigma_sq}};
}

void from_json(const Json& j, EffectiveDims& e) {
    e.d_e = j.at("d_e").get<double>();
    e.d_star = j.at("d_star").get<double>();
    e.sigma_sq = j.at("sigma_sq").get<double>();
}

void to_json(Json& j, const McResult& r) {
    j = Json{{"trials", r.trials},
             {"type1_hat", optional_json(r.type1_hat)},
             {"type2_hat", optional_json(r.type2_hat)},
             {"ci_halfwidth", r.ci_halfwidth},
             {"seed", r.seed}};
}

void from_json(const Json& j, McResult& r) {
    r.trials = j.at("trials").get<std::size_t>();
    r.type1_hat = read_optional<double>(j, "type1_hat");
    r.type2_hat = read_optional<double>(j, "type2_hat");
    r.ci_halfwidth = j.at("ci_halfwidth").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
}

Json test_report_document(const TestReport& r, const TestConfig& cfg, const std::optional<std::string>& kernel) {
    Json doc = r;
    doc["alpha"] = cfg.alpha();
    doc["eta"] = cfg.eta();
    doc["setting"] = to_string(cfg.setting());
    doc["bound"] = cfg.setting().is_bounded() ? Json(cfg.setting().bound()) : Json(nullptr);
    doc["mode"] = to_string(cfg.mode());
    doc["quantile_source"] = cfg.uses_oracle() ? "oracle" : "plugin";
    doc["kernel"] = kernel ? Json(*kernel) : Json(nullptr);
    return doc;
}

}  // namespace hdmt
