#include "flr/experiment.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "flr/dataset.hpp"
#include "flr/federation.hpp"
#include "flr/json_io.hpp"
#include "flr/model.hpp"
#include "flr/partition.hpp"
#include "flr/seeding.hpp"

namespace flr {
namespace {

FeatureMatrix keep_columns(const FeatureMatrix& features,
                           const std::vector<Eigen::Index>& columns) {
  FeatureMatrix out;
  out.values.resize(features.rows(), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    out.values.col(static_cast<Eigen::Index>(j)) = features.values.col(columns[j]);
    out.feature_names.push_back(features.feature_names[static_cast<std::size_t>(columns[j])]);
  }
  return out;
}

std::vector<ClientShard> build_shards(const LabeledDataset& train,
                                      const ExperimentConfig& cfg, std::uint64_t seed) {
  if (cfg.mode == Mode::centralized) {
    // Single honest client holding the whole training set; aggregation of
    // one submission is the identity, so this is plain gradient descent.
    std::vector<Eigen::Index> all(static_cast<std::size_t>(train.num_samples()));
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<Eigen::Index>(i);
    ClientShard shard;
    shard.client_id = 0;
    shard.honest = true;
    shard.data = train;
    shard.source_rows = std::move(all);
    return {shard};
  }
  PartitionPlan plan = cfg.plan;
  plan.seed = seed;
  return make_partition(train, plan);
}

}  // namespace

EvalResult evaluate_binary(const ModelParams& params, const LabeledDataset& test) {
  const Vector scores = predict_proba(params, test.features.values);
  IntVector pred(scores.size());
  for (Eigen::Index i = 0; i < scores.size(); ++i) pred[i] = scores[i] >= 0.5 ? 1 : 0;
  EvalResult result;
  result.acc = accuracy(pred, test.labels);
  result.f1 = f1_binary(pred, test.labels);
  result.auc = auc_binary(scores, test.labels);
  return result;
}

EvalResult evaluate_multiclass(const MulticlassParams& params, const LabeledDataset& test) {
  const Matrix scores = class_scores(params, test.features.values);
  IntVector pred(scores.rows());
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < scores.cols(); ++c) {
      if (scores(i, c) > scores(i, best)) best = c;
    }
    pred[i] = static_cast<int>(best);
  }
  const int num_classes = static_cast<int>(params.per_class.size());
  EvalResult result;
  result.acc = accuracy(pred, test.labels);
  result.f1 = f1_macro(pred, test.labels, num_classes);
  for (int c = 0; c < num_classes; ++c) {
    IntVector truth_c(test.labels.size()), pred_c(test.labels.size());
    for (Eigen::Index i = 0; i < test.labels.size(); ++i) {
      truth_c[i] = test.labels[i] == c ? 1 : 0;
      pred_c[i] = pred[i] == c ? 1 : 0;
    }
    ClassMetrics cm;
    cm.class_id = c;
    cm.f1 = f1_binary(pred_c, truth_c);
    cm.auc = auc_binary(scores.col(c), truth_c);
    result.per_class.push_back(cm);
  }
  result.auc = auc_macro(scores, test.labels);
  return result;
}

MetricSummary summarize_metric(const std::vector<double>& values) {
  MetricSummary s;
  const auto n = static_cast<double>(values.size());
  for (double v : values) s.mean += v;
  s.mean /= n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.half_width = 1.96 * std::sqrt(ss / (n - 1.0));
  }
  return s;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  if (cfg.seeds.empty()) throw config_error("run_experiment: no seeds");
  const LoadResult loaded = load_csv(cfg.dataset_path, cfg.target_column,
                                     cfg.feature_columns, cfg.delimiter);
  LabeledDataset data = loaded.data;
  if (cfg.screen_prune) {
    const VifPruneResult pruned = vif_prune(data.features);
    data.features = keep_columns(data.features, pruned.kept_columns);
  }

  const bool multiclass = data.num_classes() > 2;
  if (!cfg.out_dir.empty()) std::filesystem::create_directories(cfg.out_dir);

  ExperimentResult result;
  result.feature_names = data.features.feature_names;
  result.class_names = data.class_names;
  result.report.seeds = cfg.seeds;

  for (std::uint64_t seed : cfg.seeds) {
    auto [train, test] = train_test_split(data, cfg.test_fraction,
                                          derive_seed(seed, "split"));
    const std::vector<ClientShard> shards =
        build_shards(train, cfg, derive_seed(seed, "partition"));

    FederationConfig fed = cfg.fed;
    fed.seed = derive_seed(seed, "federation");
    if (cfg.mode == Mode::centralized) {
      fed.gamma = 1.0;
      fed.rule = AggregationRule::Mean();
    }

    MulticlassParams seed_params;
    EvalResult eval;
    if (multiclass) {
      const MulticlassTrainingResult trained = train_multiclass(shards, fed);
      const LabeledDataset test_std = standardize(test, trained.stats);
      eval = evaluate_multiclass(trained.params, test_std);
      seed_params = trained.params;
      if (cfg.trace && !cfg.out_dir.empty()) {
        for (std::size_t c = 0; c < trained.logs_per_class.size(); ++c) {
          write_round_trace(trained.logs_per_class[c],
                            cfg.out_dir + "/trace_seed" + std::to_string(seed) + "_class" +
                                std::to_string(c) + ".jsonl");
        }
      }
    } else {
      const TrainingResult trained = train_binary(shards, fed);
      const LabeledDataset test_std = standardize(test, trained.stats);
      eval = evaluate_binary(trained.params, test_std);
      seed_params.per_class = {trained.params};
      if (cfg.trace && !cfg.out_dir.empty()) {
        write_round_trace(trained.logs,
                          cfg.out_dir + "/trace_seed" + std::to_string(seed) + ".jsonl");
      }
    }
    if (cfg.trace && !cfg.out_dir.empty()) {
      write_shard_manifest(shards,
                           cfg.out_dir + "/manifest_seed" + std::to_string(seed) + ".json");
    }
    result.report.per_seed.push_back(eval);
    result.per_seed_params.push_back(std::move(seed_params));
  }

  std::vector<double> accs, f1s, aucs;
  for (const auto& e : result.report.per_seed) {
    accs.push_back(e.acc);
    f1s.push_back(e.f1);
    aucs.push_back(e.auc);
  }
  result.report.summary["acc"] = summarize_metric(accs);
  result.report.summary["f1"] = summarize_metric(f1s);
  result.report.summary["auc"] = summarize_metric(aucs);

  if (!cfg.out_dir.empty()) {
    nlohmann::json j = to_json(result.report);
    j["config"] = to_json(cfg);
    nlohmann::json models = nlohmann::json::array();
    for (std::size_t s = 0; s < result.per_seed_params.size(); ++s) {
      nlohmann::json per_class = nlohmann::json::object();
      const auto& params = result.per_seed_params[s];
      for (std::size_t c = 0; c < params.per_class.size(); ++c) {
        const std::string label = params.per_class.size() == 1
                                      ? result.class_names.back()
                                      : result.class_names[c];
        per_class[label] = to_json(params.per_class[c], result.feature_names);
      }
      models.push_back({{"seed", cfg.seeds[s]}, {"models", per_class}});
    }
    j["models"] = models;
    write_json(j, cfg.out_dir + "/report.json");
  }
  return result;
}

std::vector<SweepPoint> run_sweep(const ExperimentConfig& base, SweepAxis axis,
                                  const std::vector<double>& values,
                                  const std::vector<AggregationRule>& rules,
                                  const std::string& curve_csv_path) {
  if (values.empty()) throw config_error("run_sweep: no axis values");
  if (rules.empty()) throw config_error("run_sweep: no rules");

  std::vector<SweepPoint> points;
  for (const AggregationRule& rule : rules) {
    for (double value : values) {
      ExperimentConfig cfg = base;
      cfg.fed.rule = rule;
      cfg.out_dir.clear();  // sweep points write only into the curve file
      switch (axis) {
        case SweepAxis::sample_size:
          if (value < 1 || value != std::floor(value)) {
            throw config_error("run_sweep: sample size values must be positive integers");
          }
          cfg.plan.sample_size = static_cast<int>(value);
          break;
        case SweepAxis::outlier_frac:
          if (!(value >= 0.0 && value < 0.5)) {
            throw config_error("run_sweep: outlier fractions must lie in [0, 0.5)");
          }
          cfg.plan.outlier_frac = value;
          break;
        case SweepAxis::clients:
          if (value < 1 || value != std::floor(value)) {
            throw config_error("run_sweep: client counts must be positive integers");
          }
          cfg.plan.clients = static_cast<int>(value);
          break;
      }
      SweepPoint point;
      point.value = value;
      point.rule = rule;
      point.report = run_experiment(cfg).report;
      points.push_back(std::move(point));
    }
  }

  if (!curve_csv_path.empty()) {
    std::ofstream out(curve_csv_path);
    if (!out) throw data_error("cannot write " + curve_csv_path);
    out << "value,rule,metric,mean,half_width\n";
    out.precision(10);
    for (const auto& p : points) {
      for (const auto& [metric, s] : p.report.summary) {
        out << p.value << "," << rule_name(p.rule) << "," << metric << "," << s.mean << ","
            << s.half_width << "\n";
      }
    }
  }
  return points;
}

FeatureImportanceReport feature_importance(const std::vector<MulticlassParams>& per_seed,
                                           const std::vector<std::string>& feature_names,
                                           const std::vector<std::string>& class_labels) {
  if (per_seed.size() < 2) throw data_error("feature_importance: need at least 2 seeds");
  const std::size_t num_models = per_seed.front().per_class.size();
  const auto d = static_cast<Eigen::Index>(feature_names.size());
  for (const auto& params : per_seed) {
    if (params.per_class.size() != num_models) {
      throw data_error("feature_importance: model count differs across seeds");
    }
    for (const auto& m : params.per_class) {
      if (m.dimension() != d) throw data_error("feature_importance: dimension mismatch");
    }
  }

  FeatureImportanceReport report;
  for (std::size_t c = 0; c < num_models; ++c) {
    std::vector<FeatureImportance> entries;
    for (Eigen::Index j = 0; j < d; ++j) {
      std::vector<double> coefs;
      coefs.reserve(per_seed.size());
      for (const auto& params : per_seed) coefs.push_back(params.per_class[c].weights[j]);
      const MetricSummary s = summarize_metric(coefs);
      entries.push_back({feature_names[static_cast<std::size_t>(j)], s.mean, s.half_width});
    }
    std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
      return std::abs(a.coef_mean) > std::abs(b.coef_mean);
    });
    report.per_class.emplace_back(class_labels[c], std::move(entries));
  }
  return report;
}

ScreenResult screen(const ExperimentConfig& cfg) {
  const LoadResult loaded = load_csv(cfg.dataset_path, cfg.target_column,
                                     cfg.feature_columns, cfg.delimiter);
  const LabeledDataset& data = loaded.data;

  ScreenResult result;
  result.vif = vif_prune(data.features);
  result.correlation = correlation_matrix(result.vif.pruned);
  result.correlation_features = result.vif.pruned.feature_names;
  const auto counts = data.class_counts();
  result.sample_size = sample_size_check(std::vector<long>(counts.begin(), counts.end()),
                                         result.vif.pruned.cols());

  if (data.num_classes() == 2) {
    result.box_tidwell = box_tidwell(result.vif.pruned, data.labels);
  } else {
    result.box_tidwell_note =
        "Box-Tidwell test omitted: it is defined for binary targets and this "
        "dataset has " + std::to_string(data.num_classes()) + " classes.";
  }

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    write_json(to_json(result), cfg.out_dir + "/screen.json");
    write_correlation_csv(result.correlation, result.correlation_features,
                          cfg.out_dir + "/correlation.csv");
  }
  return result;
}

}  // namespace flr
