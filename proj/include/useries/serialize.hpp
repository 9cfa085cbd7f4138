#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "useries/lemma.hpp"
#include "useries/rearrange.hpp"
#include "useries/universal.hpp"

namespace useries {

using json = nlohmann::json;

json to_json(const IntervalSet& s);
IntervalSet interval_set_from_json(const json& j);

json to_json(const StepFunction& f);
StepFunction step_function_from_json(const json& j);

json to_json(const Modulus& m);
Modulus modulus_from_json(const json& j);

json to_json(const std::vector<CoeffBlock>& bands);
std::vector<CoeffBlock> bands_from_json(const json& j);

json to_json(const LemmaOutput& out, const LemmaParams& params, const StepFunction& f,
             int grid_log2);
json to_json(const UniversalSeries& series);
UniversalSeries series_from_json(const json& j);
json to_json(const WeightSpec& w);
WeightSpec weight_from_json(const json& j);
json to_json(const RearrangeResult& r);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);
json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

// Two-column CSV (header included).
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::pair<double, double>>& rows);
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows);

// Re-checks stored artifacts without rebuilding; returns a list of failed
// check names (empty means everything verified).
std::vector<std::string> verify_lemma_artifact(const json& artifact);
std::vector<std::string> verify_series_artifact(const json& artifact);
std::vector<std::string> verify_weight_artifact(const json& weight, const json& series);
std::vector<std::string> verify_rearrange_artifact(const json& run, const json& series);

} // namespace useries
