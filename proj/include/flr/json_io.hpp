#pragma once

#include <string>

#include <json.hpp>

#include "flr/experiment.hpp"
#include "flr/types.hpp"

namespace flr {

/// Parses an ExperimentConfig from a JSON document; unknown keys are an
/// error so typos fail loudly. Every field has a default.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

nlohmann::json to_json(const ExperimentConfig& cfg);
nlohmann::json to_json(const ModelParams& params, const std::vector<std::string>& feature_names);
nlohmann::json to_json(const EvalResult& result);
nlohmann::json to_json(const MetricsReport& report);
nlohmann::json to_json(const FeatureImportanceReport& report);
nlohmann::json to_json(const VifReport& report);
nlohmann::json to_json(const BoxTidwellReport& report);
nlohmann::json to_json(const SampleSizeCheck& check);
nlohmann::json to_json(const ScreenResult& result);

std::string rule_name(const AggregationRule& rule);
AggregationRule rule_from_name(const std::string& name, double alpha);
std::string regime_name(Regime regime);
Regime regime_from_name(const std::string& name);

void write_json(const nlohmann::json& j, const std::string& path);
void write_round_trace(const std::vector<RoundLog>& logs, const std::string& path);
void write_correlation_csv(const Matrix& corr, const std::vector<std::string>& names,
                           const std::string& path);

}  // namespace flr
