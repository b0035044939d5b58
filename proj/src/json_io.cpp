#include "flr/json_io.hpp"

#include <fstream>
#include <set>

namespace flr {
namespace {

using nlohmann::json;

void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) {
      throw config_error("unknown key '" + key + "' in " + where);
    }
  }
}

TrainingHyperparams hp_from_json(const json& j) {
  check_keys(j, {"eta", "lambda", "local_iters"}, "hyperparams");
  TrainingHyperparams hp;
  hp.eta = j.value("eta", hp.eta);
  hp.lambda = j.value("lambda", hp.lambda);
  hp.local_iters = j.value("local_iters", hp.local_iters);
  return hp;
}

AdversaryModel adversary_from_json(const json& j) {
  check_keys(j, {"kind", "magnitude"}, "adversary");
  AdversaryModel model;
  const std::string kind = j.value("kind", "gaussian_blast");
  if (kind == "gaussian_blast") model.kind = AdversaryKind::gaussian_blast;
  else if (kind == "sign_flip") model.kind = AdversaryKind::sign_flip;
  else throw config_error("unknown adversary kind: " + kind);
  model.magnitude = j.value("magnitude", model.magnitude);
  return model;
}

FederationConfig fed_from_json(const json& j) {
  check_keys(j, {"rounds", "gamma", "reselect_every", "rule", "alpha", "hyperparams", "adversary"},
             "federation");
  FederationConfig cfg;
  cfg.rounds = j.value("rounds", cfg.rounds);
  cfg.gamma = j.value("gamma", cfg.gamma);
  cfg.reselect_every = j.value("reselect_every", cfg.reselect_every);
  cfg.rule = rule_from_name(j.value("rule", "mean"), j.value("alpha", 0.1));
  if (j.contains("hyperparams")) cfg.hp = hp_from_json(j.at("hyperparams"));
  if (j.contains("adversary")) cfg.adversary = adversary_from_json(j.at("adversary"));
  return cfg;
}

PartitionPlan plan_from_json(const json& j) {
  check_keys(j, {"regime", "clients", "sample_size", "outlier_frac"}, "partition");
  PartitionPlan plan;
  plan.regime = regime_from_name(j.value("regime", "iid_full"));
  plan.clients = j.value("clients", plan.clients);
  plan.sample_size = j.value("sample_size", plan.sample_size);
  plan.outlier_frac = j.value("outlier_frac", plan.outlier_frac);
  return plan;
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  check_keys(j,
             {"dataset", "target", "features", "delimiter", "test_fraction", "seeds", "mode",
              "screen_prune", "partition", "federation", "out_dir", "trace"},
             "config");
  ExperimentConfig cfg;
  cfg.dataset_path = j.value("dataset", "");
  cfg.target_column = j.value("target", "");
  cfg.feature_columns = j.value("features", cfg.feature_columns);
  const std::string delim = j.value("delimiter", ",");
  if (delim.size() != 1) throw config_error("delimiter must be a single character");
  cfg.delimiter = delim[0];
  cfg.test_fraction = j.value("test_fraction", cfg.test_fraction);
  cfg.seeds = j.value("seeds", cfg.seeds);
  const std::string mode = j.value("mode", "federated");
  if (mode == "federated") cfg.mode = Mode::federated;
  else if (mode == "centralized") cfg.mode = Mode::centralized;
  else throw config_error("unknown mode: " + mode);
  cfg.screen_prune = j.value("screen_prune", false);
  if (j.contains("partition")) cfg.plan = plan_from_json(j.at("partition"));
  if (j.contains("federation")) cfg.fed = fed_from_json(j.at("federation"));
  cfg.out_dir = j.value("out_dir", "");
  cfg.trace = j.value("trace", false);
  if (cfg.seeds.empty()) throw config_error("seeds must be non-empty");
  std::set<std::uint64_t> unique(cfg.seeds.begin(), cfg.seeds.end());
  if (unique.size() != cfg.seeds.size()) throw config_error("seeds must be distinct");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw config_error("config parse error in " + path + ": " + e.what());
  }
  return config_from_json(j);
}

json to_json(const ExperimentConfig& cfg) {
  return json{
      {"dataset", cfg.dataset_path},
      {"target", cfg.target_column},
      {"features", cfg.feature_columns},
      {"delimiter", std::string(1, cfg.delimiter)},
      {"test_fraction", cfg.test_fraction},
      {"seeds", cfg.seeds},
      {"mode", cfg.mode == Mode::federated ? "federated" : "centralized"},
      {"screen_prune", cfg.screen_prune},
      {"partition",
       {{"regime", regime_name(cfg.plan.regime)},
        {"clients", cfg.plan.clients},
        {"sample_size", cfg.plan.sample_size},
        {"outlier_frac", cfg.plan.outlier_frac}}},
      {"federation",
       {{"rounds", cfg.fed.rounds},
        {"gamma", cfg.fed.gamma},
        {"reselect_every", cfg.fed.reselect_every},
        {"rule", rule_name(cfg.fed.rule)},
        {"alpha", cfg.fed.rule.alpha},
        {"hyperparams",
         {{"eta", cfg.fed.hp.eta},
          {"lambda", cfg.fed.hp.lambda},
          {"local_iters", cfg.fed.hp.local_iters}}},
        {"adversary",
         {{"kind", cfg.fed.adversary.kind == AdversaryKind::gaussian_blast ? "gaussian_blast"
                                                                           : "sign_flip"},
          {"magnitude", cfg.fed.adversary.magnitude}}}}},
  };
}

json to_json(const ModelParams& params, const std::vector<std::string>& feature_names) {
  json coefs = json::object();
  for (Eigen::Index i = 0; i < params.weights.size(); ++i) {
    coefs[feature_names[static_cast<std::size_t>(i)]] = params.weights[i];
  }
  return json{{"coefficients", coefs}, {"intercept", params.intercept}};
}

json to_json(const EvalResult& result) {
  json j{{"acc", result.acc}, {"f1", result.f1}, {"auc", result.auc}};
  if (!result.per_class.empty()) {
    json per_class = json::array();
    for (const auto& c : result.per_class) {
      per_class.push_back({{"class", c.class_id}, {"f1", c.f1}, {"auc", c.auc}});
    }
    j["per_class"] = per_class;
  }
  return j;
}

json to_json(const MetricsReport& report) {
  json per_seed = json::array();
  for (std::size_t i = 0; i < report.per_seed.size(); ++i) {
    json entry = to_json(report.per_seed[i]);
    entry["seed"] = report.seeds[i];
    per_seed.push_back(std::move(entry));
  }
  json summary = json::object();
  for (const auto& [metric, s] : report.summary) {
    summary[metric] = {{"mean", s.mean}, {"half_width", s.half_width}};
  }
  return json{{"per_seed", per_seed}, {"summary", summary}};
}

json to_json(const FeatureImportanceReport& report) {
  json j = json::object();
  for (const auto& [cls, entries] : report.per_class) {
    json list = json::array();
    for (const auto& e : entries) {
      list.push_back({{"feature", e.feature},
                      {"coef_mean", e.coef_mean},
                      {"coef_half_width", e.coef_half_width}});
    }
    j[cls] = list;
  }
  return j;
}

json to_json(const VifReport& report) {
  auto value_json = [](const VifValue& v) {
    json j{{"feature", v.feature}};
    if (v.is_infinite) j["vif"] = "inf";
    else j["vif"] = v.value;
    return j;
  };
  json retained = json::array();
  for (const auto& v : report.retained) retained.push_back(value_json(v));
  json removed = json::array();
  for (const auto& v : report.removal_order) removed.push_back(value_json(v));
  return json{{"threshold", report.threshold}, {"retained", retained}, {"removed", removed}};
}

json to_json(const BoxTidwellReport& report) {
  json entries = json::array();
  for (const auto& e : report.entries) {
    entries.push_back({{"feature", e.feature},
                       {"shift", e.shift},
                       {"aux_coef", e.aux_coef},
                       {"p_value", e.p_value},
                       {"reject", e.reject},
                       {"fit_ok", e.fit_ok}});
  }
  return json{{"significance", report.significance}, {"entries", entries}};
}

json to_json(const SampleSizeCheck& check) {
  return json{{"pass", check.pass},
              {"min_class_count", check.min_class_count},
              {"required", check.required},
              {"num_features", check.num_features}};
}

json to_json(const ScreenResult& result) {
  json j{{"vif", to_json(result.vif.report)}, {"sample_size", to_json(result.sample_size)}};
  if (result.box_tidwell) j["box_tidwell"] = to_json(*result.box_tidwell);
  else j["box_tidwell_note"] = result.box_tidwell_note;
  return j;
}

std::string rule_name(const AggregationRule& rule) {
  switch (rule.kind) {
    case AggregationKind::mean: return "mean";
    case AggregationKind::median: return "median";
    case AggregationKind::trimmed_mean: return "trim_mean";
  }
  return "unknown";
}

AggregationRule rule_from_name(const std::string& name, double alpha) {
  if (name == "mean") return AggregationRule::Mean();
  if (name == "median") return AggregationRule::Median();
  if (name == "trim_mean" || name == "trimmed_mean") return AggregationRule::TrimmedMean(alpha);
  throw config_error("unknown aggregation rule: " + name);
}

std::string regime_name(Regime regime) {
  switch (regime) {
    case Regime::iid_full: return "iid_full";
    case Regime::noniid_full: return "noniid_full";
    case Regime::iid_sampled: return "iid_sampled";
    case Regime::noniid_sampled: return "noniid_sampled";
  }
  return "unknown";
}

Regime regime_from_name(const std::string& name) {
  if (name == "iid_full") return Regime::iid_full;
  if (name == "noniid_full") return Regime::noniid_full;
  if (name == "iid_sampled") return Regime::iid_sampled;
  if (name == "noniid_sampled") return Regime::noniid_sampled;
  throw config_error("unknown regime: " + name);
}

void write_json(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

void write_round_trace(const std::vector<RoundLog>& logs, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write " + path);
  for (const auto& log : logs) {
    json record{{"round", log.round},
                {"selected", log.selected},
                {"update_norms", log.update_norms},
                {"intercept", log.global.intercept}};
    record["weights"] = std::vector<double>(log.global.weights.begin(),
                                            log.global.weights.end());
    out << record.dump() << "\n";
  }
}

void write_correlation_csv(const Matrix& corr, const std::vector<std::string>& names,
                           const std::string& path) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write " + path);
  out << "feature";
  for (const auto& name : names) out << "," << name;
  out << "\n";
  out.precision(17);
  for (Eigen::Index i = 0; i < corr.rows(); ++i) {
    out << names[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < corr.cols(); ++j) out << "," << corr(i, j);
    out << "\n";
  }
}

}  // namespace flr
