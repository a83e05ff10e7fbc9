#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "hdmt/model.hpp"
#include "hdmt/quantiles.hpp"
#include "hdmt/simulate.hpp"
#include "hdmt/testing.hpp"

namespace hdmt {

using Json = nlohmann::json;

// Field-by-field JSON mappings. Absent optionals are written as null and read
// back as absent; doubles keep their exact value.
void to_json(Json& j, const Setting& s);
void from_json(const Json& j, Setting& s);
void to_json(Json& j, const QuantilePair& q);
void from_json(const Json& j, QuantilePair& q);
void to_json(Json& j, const TestReport& r);
void from_json(const Json& j, TestReport& r);
void to_json(Json& j, const SeparationBounds& b);
void from_json(const Json& j, SeparationBounds& b);
void to_json(Json& j, const EffectiveDims& e);
void from_json(const Json& j, EffectiveDims& e);
void to_json(Json& j, const McResult& r);
void from_json(const Json& j, McResult& r);

Mode parse_mode(const std::string& text);
Setting parse_setting(const std::string& kind, std::optional<double> bound);

/// The report printed by `hdmt test`: the TestReport fields under the names
/// u_stat, threshold, reject, q1, q2, d_e_hat, d_star_hat, warnings, plus the
/// configuration (alpha, eta, setting, bound, mode, quantile_source, kernel).
Json test_report_document(const TestReport& r, const TestConfig& cfg, const std::optional<std::string>& kernel);

}  // namespace hdmt
