#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace flr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntVector = Eigen::VectorXi;

/// floor(fraction * count) for quantities like trim counts and outlier
/// counts, tolerating representation error in decimal fractions
/// (0.3 * 10 evaluates below 3 in binary floating point).
inline long floored_count(double fraction, long count) {
  return static_cast<long>(fraction * static_cast<double>(count) + 1e-9);
}

// Invalid configuration or CLI arguments.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unusable or inconsistent input data.
struct data_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dense feature block, one row per sample, one named column per feature.
struct FeatureMatrix {
  Matrix values;                           // N x d
  std::vector<std::string> feature_names;  // size d

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }
};

/// Feature matrix plus integer class labels in {0, ..., C-1}.
struct LabeledDataset {
  FeatureMatrix features;
  IntVector labels;                      // length N
  std::vector<std::string> class_names;  // size C

  Eigen::Index num_samples() const { return features.rows(); }
  Eigen::Index num_features() const { return features.cols(); }
  int num_classes() const { return static_cast<int>(class_names.size()); }

  std::vector<Eigen::Index> class_counts() const {
    std::vector<Eigen::Index> counts(class_names.size(), 0);
    for (Eigen::Index i = 0; i < labels.size(); ++i) {
      counts[static_cast<std::size_t>(labels[i])]++;
    }
    return counts;
  }
};

/// Per-feature location/scale used to center and rescale client data.
/// Scale entries are strictly positive; constant features carry scale 1.
struct StandardizationStats {
  Vector mean;
  Vector std_dev;
};

/// What a client transmits for the standardization handshake:
/// sample count plus per-feature first and second raw moments.
struct MomentSummary {
  std::int64_t count = 0;
  Vector sum;
  Vector sum_squares;
};

/// Coefficients and intercept of one binary logistic model.
struct ModelParams {
  Vector weights;
  double intercept = 0.0;

  Eigen::Index dimension() const { return weights.size(); }
};

/// One-vs-rest bundle: one binary model per class, class-indexed.
struct MulticlassParams {
  std::vector<ModelParams> per_class;
};

struct TrainingHyperparams {
  double eta = 0.1;      // learning rate
  double lambda = 1e-4;  // l2 strength
  int local_iters = 10;  // gradient steps per federation round
};

/// One client's slice of the data. Adversarial clients fabricate
/// parameters rather than holding data, so their dataset may be empty.
struct ClientShard {
  int client_id = 0;
  LabeledDataset data;
  bool honest = true;
  std::vector<Eigen::Index> source_rows;  // row indices into the source dataset
};

enum class Regime { iid_full, noniid_full, iid_sampled, noniid_sampled };

struct PartitionPlan {
  Regime regime = Regime::iid_full;
  int clients = 100;        // M
  int sample_size = 100;    // s, sampled regimes only
  double outlier_frac = 0;  // p_out in [0, 0.5), zero for *_full regimes
  std::uint64_t seed = 0;
};

enum class AggregationKind { mean, median, trimmed_mean };

struct AggregationRule {
  AggregationKind kind = AggregationKind::mean;
  double alpha = 0.0;  // trim fraction per side, trimmed_mean only

  static AggregationRule Mean() { return {AggregationKind::mean, 0.0}; }
  static AggregationRule Median() { return {AggregationKind::median, 0.0}; }
  static AggregationRule TrimmedMean(double alpha) {
    return {AggregationKind::trimmed_mean, alpha};
  }
};

enum class AdversaryKind { gaussian_blast, sign_flip };

struct AdversaryModel {
  AdversaryKind kind = AdversaryKind::gaussian_blast;
  double magnitude = 100.0;  // gaussian std, or sign-flip scale
};

struct FederationConfig {
  int rounds = 100;         // T
  double gamma = 1.0;       // client-selection ratio in (0, 1]
  int reselect_every = 10;  // rounds between selection re-draws
  AggregationRule rule;
  TrainingHyperparams hp;
  AdversaryModel adversary;
  std::uint64_t seed = 0;
};

/// Per-round diagnostics emitted by the trainer.
struct RoundLog {
  int round = 0;
  ModelParams global;
  std::vector<int> selected;
  std::vector<double> update_norms;  // per selected client, submission vs broadcast
};

}  // namespace flr
