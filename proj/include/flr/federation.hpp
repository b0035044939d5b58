#pragma once

#include <random>
#include <vector>

#include "flr/types.hpp"

namespace flr {

struct TrainingResult {
  ModelParams params;
  StandardizationStats stats;  // pooled over honest clients at round 0
  std::vector<RoundLog> logs;  // one entry per aggregation round
};

struct MulticlassTrainingResult {
  MulticlassParams params;
  StandardizationStats stats;
  std::vector<std::vector<RoundLog>> logs_per_class;
};

/// Runs the federated training loop on binary-labeled shards: round 0
/// pools standardization stats and zero-initializes the global model;
/// every later round broadcasts, collects local updates (honest) or
/// fabricated parameters (adversarial) from the selected clients, and
/// aggregates them under the configured rule. Clients are re-selected
/// every `reselect_every` rounds. Deterministic given (shards, cfg).
TrainingResult train_binary(const std::vector<ClientShard>& shards,
                            const FederationConfig& cfg);

/// One-vs-rest extension: one binary federation per class, all sharing
/// the same per-round client selection and per-client adversarial draws,
/// so relabeling classes permutes the resulting models. Requires C >= 3.
MulticlassTrainingResult train_multiclass(const std::vector<ClientShard>& shards,
                                          const FederationConfig& cfg);

/// argmax over classes of sigma(w_c . x + b_c); ties break to the lowest
/// class id.
int predict_multiclass(const MulticlassParams& params, const Vector& x);
IntVector predict_multiclass(const MulticlassParams& params, const Matrix& X);

/// Per-class sigmoid scores, one row per sample, one column per class.
Matrix class_scores(const MulticlassParams& params, const Matrix& X);

/// What a compromised client sends instead of an honest update:
/// gaussian_blast draws every coordinate i.i.d. Normal(0, magnitude^2);
/// sign_flip returns -magnitude times the broadcast parameters.
ModelParams fabricate_adversarial(const ModelParams& global, const AdversaryModel& model,
                                  std::mt19937_64& rng);

}  // namespace flr
