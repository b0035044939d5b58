#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flr/metrics.hpp"
#include "flr/screening.hpp"
#include "flr/types.hpp"

namespace flr {

enum class Mode { federated, centralized };

struct ExperimentConfig {
  std::string dataset_path;
  std::string target_column;
  std::vector<std::string> feature_columns;
  char delimiter = ',';

  double test_fraction = 0.2;
  std::vector<std::uint64_t> seeds = {0, 100, 200, 300, 400, 500, 600, 700, 800, 900};
  Mode mode = Mode::federated;
  bool screen_prune = false;  // VIF-prune features before splitting

  PartitionPlan plan;
  FederationConfig fed;

  std::string out_dir;  // empty: no files written
  bool trace = false;   // also emit per-round logs and shard manifests
};

struct MetricSummary {
  double mean = 0.0;
  double half_width = 0.0;  // 1.96 * sample standard deviation over seeds
};

struct MetricsReport {
  std::vector<std::uint64_t> seeds;
  std::vector<EvalResult> per_seed;
  std::map<std::string, MetricSummary> summary;  // keys: acc, f1, auc
};

MetricSummary summarize_metric(const std::vector<double>& values);

struct ExperimentResult {
  MetricsReport report;
  std::vector<MulticlassParams> per_seed_params;  // binary runs hold one slot
  std::vector<std::string> feature_names;
  std::vector<std::string> class_names;
};

/// One full experiment: for every seed, load -> optional prune -> split ->
/// partition -> train -> evaluate on the held-out test set, then reduce
/// the per-seed metrics to mean +/- 1.96 sigma.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

enum class SweepAxis { sample_size, outlier_frac, clients };

struct SweepPoint {
  double value = 0.0;
  AggregationRule rule;
  MetricsReport report;
};

/// Runs the base experiment once per (axis value, rule) pair and collects
/// the resulting reports; `curve_csv_path`, when set, receives one row
/// per (value, rule, metric).
std::vector<SweepPoint> run_sweep(const ExperimentConfig& base, SweepAxis axis,
                                  const std::vector<double>& values,
                                  const std::vector<AggregationRule>& rules,
                                  const std::string& curve_csv_path = "");

struct FeatureImportance {
  std::string feature;
  double coef_mean = 0.0;
  double coef_half_width = 0.0;
};

struct FeatureImportanceReport {
  // One entry per class, sorted by |mean coefficient| descending.
  std::vector<std::pair<std::string, std::vector<FeatureImportance>>> per_class;
};

FeatureImportanceReport feature_importance(const std::vector<MulticlassParams>& per_seed,
                                           const std::vector<std::string>& feature_names,
                                           const std::vector<std::string>& class_labels);

struct ScreenResult {
  VifPruneResult vif;
  std::optional<BoxTidwellReport> box_tidwell;  // binary targets only
  std::string box_tidwell_note;
  SampleSizeCheck sample_size;
  Matrix correlation;  // over the VIF-pruned features
  std::vector<std::string> correlation_features;
};

/// Assumption screening on the full dataset: VIF pruning, then the
/// Box-Tidwell test (binary targets), the events-per-variable rule, and
/// the correlation matrix of the surviving features.
ScreenResult screen(const ExperimentConfig& cfg);

/// Model evaluation helpers shared by the runner and the tests.
EvalResult evaluate_binary(const ModelParams& params, const LabeledDataset& test);
EvalResult evaluate_multiclass(const MulticlassParams& params, const LabeledDataset& test);

}  // namespace flr
