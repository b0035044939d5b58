// Command-line experiment runner: screen | run | sweep | importance.
//
// Exit codes: 0 success, 1 config error, 2 data error, 3 runtime error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flr/experiment.hpp"
#include "flr/json_io.hpp"

namespace {

struct CliOverrides {
  std::string config_path;
  std::string dataset;
  std::string target;
  std::vector<std::string> features;
  std::string delimiter;
  std::string rule;
  std::optional<double> alpha;
  std::optional<int> clients;
  std::optional<int> sample_size;
  std::optional<double> outlier_frac;
  std::string regime;
  std::vector<std::uint64_t> seeds;
  std::string out_dir;
  bool trace = false;
  std::string mode;
  std::optional<double> test_fraction;
  std::optional<int> rounds;
  std::optional<double> gamma;
  std::optional<double> eta;
  std::optional<double> lambda;
  std::optional<int> local_iters;
  std::string adversary;
  std::optional<double> magnitude;
  bool screen_prune = false;
};

void add_common_flags(CLI::App* cmd, CliOverrides& o) {
  cmd->add_option("--config", o.config_path, "JSON config file; flags override its fields");
  cmd->add_option("--dataset", o.dataset, "CSV dataset path");
  cmd->add_option("--target", o.target, "target column name");
  cmd->add_option("--features", o.features, "feature column names")->delimiter(',');
  cmd->add_option("--delimiter", o.delimiter, "CSV delimiter (default ,)");
  cmd->add_option("--rule", o.rule, "aggregation rule: mean|median|trim_mean");
  cmd->add_option("--alpha", o.alpha, "trim fraction per side for trim_mean");
  cmd->add_option("--clients", o.clients, "number of clients M");
  cmd->add_option("--sample-size", o.sample_size, "per-client sample size s");
  cmd->add_option("--outlier-frac", o.outlier_frac, "adversarial client fraction p_out");
  cmd->add_option("--regime", o.regime,
                  "iid_full|noniid_full|iid_sampled|noniid_sampled");
  cmd->add_option("--seeds", o.seeds, "comma-separated seeds")->delimiter(',');
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_flag("--trace", o.trace, "emit per-round trace and shard manifests");
  cmd->add_option("--mode", o.mode, "federated|centralized");
  cmd->add_option("--test-fraction", o.test_fraction, "held-out test fraction");
  cmd->add_option("--rounds", o.rounds, "federation rounds T");
  cmd->add_option("--gamma", o.gamma, "client selection ratio");
  cmd->add_option("--eta", o.eta, "learning rate");
  cmd->add_option("--lambda", o.lambda, "l2 strength");
  cmd->add_option("--local-iters", o.local_iters, "local gradient steps per round");
  cmd->add_option("--adversary", o.adversary, "gaussian_blast|sign_flip");
  cmd->add_option("--magnitude", o.magnitude, "adversary magnitude");
  cmd->add_flag("--screen-prune", o.screen_prune, "VIF-prune features before training");
}

flr::ExperimentConfig resolve_config(const CliOverrides& o) {
  flr::ExperimentConfig cfg;
  if (!o.config_path.empty()) cfg = flr::load_config(o.config_path);
  if (!o.dataset.empty()) cfg.dataset_path = o.dataset;
  if (!o.target.empty()) cfg.target_column = o.target;
  if (!o.features.empty()) cfg.feature_columns = o.features;
  if (!o.delimiter.empty()) {
    if (o.delimiter.size() != 1) throw flr::config_error("delimiter must be one character");
    cfg.delimiter = o.delimiter[0];
  }
  if (!o.rule.empty() || o.alpha) {
    const std::string name = o.rule.empty() ? flr::rule_name(cfg.fed.rule) : o.rule;
    cfg.fed.rule = flr::rule_from_name(name, o.alpha.value_or(cfg.fed.rule.alpha));
  }
  if (o.clients) cfg.plan.clients = *o.clients;
  if (o.sample_size) cfg.plan.sample_size = *o.sample_size;
  if (o.outlier_frac) cfg.plan.outlier_frac = *o.outlier_frac;
  if (!o.regime.empty()) cfg.plan.regime = flr::regime_from_name(o.regime);
  if (!o.seeds.empty()) cfg.seeds = o.seeds;
  if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
  if (o.trace) cfg.trace = true;
  if (!o.mode.empty()) {
    if (o.mode == "federated") cfg.mode = flr::Mode::federated;
    else if (o.mode == "centralized") cfg.mode = flr::Mode::centralized;
    else throw flr::config_error("unknown mode: " + o.mode);
  }
  if (o.test_fraction) cfg.test_fraction = *o.test_fraction;
  if (o.rounds) cfg.fed.rounds = *o.rounds;
  if (o.gamma) cfg.fed.gamma = *o.gamma;
  if (o.eta) cfg.fed.hp.eta = *o.eta;
  if (o.lambda) cfg.fed.hp.lambda = *o.lambda;
  if (o.local_iters) cfg.fed.hp.local_iters = *o.local_iters;
  if (!o.adversary.empty()) {
    if (o.adversary == "gaussian_blast") cfg.fed.adversary.kind = flr::AdversaryKind::gaussian_blast;
    else if (o.adversary == "sign_flip") cfg.fed.adversary.kind = flr::AdversaryKind::sign_flip;
    else throw flr::config_error("unknown adversary: " + o.adversary);
  }
  if (o.magnitude) cfg.fed.adversary.magnitude = *o.magnitude;
  if (o.screen_prune) cfg.screen_prune = true;
  if (cfg.dataset_path.empty()) throw flr::config_error("no dataset given (--dataset or config)");
  if (cfg.target_column.empty()) throw flr::config_error("no target column given");
  if (cfg.feature_columns.empty()) throw flr::config_error("no feature columns given");
  return cfg;
}

void print_summary(const flr::MetricsReport& report) {
  for (const auto& [metric, s] : report.summary) {
    std::printf("%-4s %.4f +/- %.4f\n", metric.c_str(), s.mean, s.half_width);
  }
}

int run_command(const flr::ExperimentConfig& cfg) {
  const flr::ExperimentResult result = flr::run_experiment(cfg);
  print_summary(result.report);
  if (!cfg.out_dir.empty()) {
    std::cout << "report written to " << cfg.out_dir << "/report.json\n";
  }
  return 0;
}

int sweep_command(const flr::ExperimentConfig& cfg, const std::string& axis_name,
                  const std::vector<double>& values, const std::vector<std::string>& rule_names,
                  double alpha) {
  flr::SweepAxis axis;
  if (axis_name == "s") axis = flr::SweepAxis::sample_size;
  else if (axis_name == "p_out") axis = flr::SweepAxis::outlier_frac;
  else if (axis_name == "M") axis = flr::SweepAxis::clients;
  else throw flr::config_error("unknown sweep axis: " + axis_name + " (expected s, p_out, or M)");

  std::vector<flr::AggregationRule> rules;
  for (const auto& name : rule_names) rules.push_back(flr::rule_from_name(name, alpha));
  if (rules.empty()) rules.push_back(cfg.fed.rule);

  std::string curve_path;
  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    curve_path = cfg.out_dir + "/curve.csv";
  }
  const auto points = flr::run_sweep(cfg, axis, values, rules, curve_path);
  for (const auto& p : points) {
    std::printf("%s=%g rule=%s auc %.4f +/- %.4f\n", axis_name.c_str(), p.value,
                flr::rule_name(p.rule).c_str(), p.report.summary.at("auc").mean,
                p.report.summary.at("auc").half_width);
  }
  if (!curve_path.empty()) std::cout << "curve written to " << curve_path << "\n";
  return 0;
}

int importance_command(const flr::ExperimentConfig& cfg) {
  const flr::ExperimentResult result = flr::run_experiment(cfg);
  std::vector<std::string> class_labels;
  if (result.per_seed_params.front().per_class.size() == 1) {
    class_labels = {result.class_names.back()};  // binary: the positive class
  } else {
    class_labels = result.class_names;
  }
  const flr::FeatureImportanceReport report =
      flr::feature_importance(result.per_seed_params, result.feature_names, class_labels);
  for (const auto& [cls, entries] : report.per_class) {
    std::cout << cls << " vs rest:\n";
    for (const auto& e : entries) {
      std::printf("  %-24s %+.4f +/- %.4f\n", e.feature.c_str(), e.coef_mean,
                  e.coef_half_width);
    }
  }
  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    flr::write_json(flr::to_json(report), cfg.out_dir + "/importance.json");
    std::cout << "report written to " << cfg.out_dir << "/importance.json\n";
  }
  return 0;
}

int screen_command(const flr::ExperimentConfig& cfg) {
  const flr::ScreenResult result = flr::screen(cfg);
  std::cout << "VIF: " << result.vif.report.removal_order.size() << " feature(s) removed, "
            << result.vif.report.retained.size() << " retained\n";
  for (const auto& v : result.vif.report.removal_order) {
    std::cout << "  removed " << v.feature << " (VIF "
              << (v.is_infinite ? std::string("inf") : std::to_string(v.value)) << ")\n";
  }
  std::cout << "sample size: " << (result.sample_size.pass ? "pass" : "FAIL") << " (min class "
            << result.sample_size.min_class_count << ", required " << result.sample_size.required
            << ")\n";
  if (result.box_tidwell) {
    for (const auto& e : result.box_tidwell->entries) {
      std::printf("  box-tidwell %-24s p=%.4g %s%s\n", e.feature.c_str(), e.p_value,
                  e.reject ? "reject linearity" : "linearity not rejected",
                  e.fit_ok ? "" : " (fit failed)");
    }
  } else {
    std::cout << result.box_tidwell_note << "\n";
  }
  if (!cfg.out_dir.empty()) {
    std::cout << "reports written to " << cfg.out_dir << "/screen.json and correlation.csv\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Federated logistic regression experiment runner"};
  app.require_subcommand(1);

  CliOverrides o;
  std::string axis_name = "p_out";
  std::vector<double> axis_values;
  std::vector<std::string> sweep_rules;

  CLI::App* screen_cmd = app.add_subcommand("screen", "assumption screening reports");
  CLI::App* run_cmd = app.add_subcommand("run", "train and evaluate over seeds");
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "sweep s, p_out, or M");
  CLI::App* importance_cmd = app.add_subcommand("importance", "coefficient stability report");
  for (CLI::App* cmd : {screen_cmd, run_cmd, sweep_cmd, importance_cmd}) {
    add_common_flags(cmd, o);
  }
  sweep_cmd->add_option("--axis", axis_name, "sweep axis: s | p_out | M");
  sweep_cmd->add_option("--values", axis_values, "axis values")->delimiter(',');
  sweep_cmd->add_option("--rules", sweep_rules, "rules to sweep")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    const flr::ExperimentConfig cfg = resolve_config(o);
    if (screen_cmd->parsed()) return screen_command(cfg);
    if (run_cmd->parsed()) return run_command(cfg);
    if (importance_cmd->parsed()) return importance_command(cfg);
    if (sweep_cmd->parsed()) {
      if (axis_values.empty()) {
        if (axis_name == "p_out") axis_values = {0.0, 0.05, 0.1, 0.15, 0.2};
        else if (axis_name == "s") axis_values = {25, 50, 100, 150, 200};
        else axis_values = {10, 50, 100, 150, 200};
      }
      return sweep_command(cfg, axis_name, axis_values, sweep_rules,
                           o.alpha.value_or(cfg.fed.rule.alpha));
    }
    return 1;
  } catch (const flr::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const flr::data_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
