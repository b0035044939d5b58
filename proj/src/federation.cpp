#include "flr/federation.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>

#include "flr/aggregate.hpp"
#include "flr/dataset.hpp"
#include "flr/model.hpp"
#include "flr/seeding.hpp"

namespace flr {
namespace {

struct ClientState {
  int client_id = 0;
  bool honest = true;
  Matrix features;  // standardized, honest clients only
};

void check_config(const FederationConfig& cfg, std::size_t num_clients) {
  if (cfg.rounds < 1) throw config_error("federation: rounds must be >= 1");
  if (!(cfg.gamma > 0.0 && cfg.gamma <= 1.0)) {
    throw config_error("federation: gamma must lie in (0, 1]");
  }
  if (cfg.reselect_every < 1) throw config_error("federation: reselect_every must be >= 1");
  if (cfg.hp.local_iters < 1) throw config_error("federation: local_iters must be >= 1");
  if (!(cfg.hp.eta > 0.0)) throw config_error("federation: eta must be positive");
  if (cfg.hp.lambda < 0.0) throw config_error("federation: lambda must be >= 0");
  if (!(cfg.adversary.magnitude > 0.0)) {
    throw config_error("federation: adversary magnitude must be positive");
  }
  if (num_clients == 0) throw config_error("federation: no clients");
}

std::vector<int> select_clients(std::size_t num_clients, double gamma, std::uint64_t seed) {
  const auto take = static_cast<std::size_t>(
      std::ceil(gamma * static_cast<double>(num_clients) - 1e-9));
  std::vector<int> ids(num_clients);
  std::iota(ids.begin(), ids.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(ids.begin(), ids.end(), rng);
  ids.resize(std::max<std::size_t>(take, 1));
  std::sort(ids.begin(), ids.end());  // aggregation input order fixed by id
  return ids;
}

double update_norm(const ModelParams& submitted, const ModelParams& broadcast) {
  return std::sqrt((submitted.weights - broadcast.weights).squaredNorm() +
                   (submitted.intercept - broadcast.intercept) *
                       (submitted.intercept - broadcast.intercept));
}

// One one-vs-rest run over pre-standardized client features. Selection
// and adversarial draws derive from (seed, round, client) only, shared
// across class slots.
std::pair<ModelParams, std::vector<RoundLog>> run_rounds(
    const std::vector<ClientState>& clients, const std::vector<Vector>& targets,
    Eigen::Index dimension, const FederationConfig& cfg) {
  ModelParams global;
  global.weights = Vector::Zero(dimension);
  global.intercept = 0.0;

  std::vector<RoundLog> logs;
  logs.reserve(static_cast<std::size_t>(cfg.rounds));
  std::vector<int> selected;
  for (int t = 0; t <= cfg.rounds; ++t) {
    if (t % cfg.reselect_every == 0) {
      selected = select_clients(clients.size(), cfg.gamma,
                                derive_seed(cfg.seed, "select", static_cast<std::uint64_t>(t)));
    }
    if (t == 0) continue;  // initialization round: no aggregation

    std::vector<ModelParams> submissions;
    submissions.reserve(selected.size());
    for (int id : selected) {
      const auto& client = clients[static_cast<std::size_t>(id)];
      if (client.honest) {
        submissions.push_back(local_update(global, client.features,
                                           targets[static_cast<std::size_t>(id)], cfg.hp));
      } else {
        std::mt19937_64 rng(derive_seed(cfg.seed, "adversary", static_cast<std::uint64_t>(t),
                                        static_cast<std::uint64_t>(id)));
        submissions.push_back(fabricate_adversarial(global, cfg.adversary, rng));
      }
    }

    RoundLog log;
    log.round = t;
    log.selected = selected;
    log.update_norms.reserve(submissions.size());
    for (const auto& s : submissions) log.update_norms.push_back(update_norm(s, global));

    global = aggregate(submissions, cfg.rule);
    log.global = global;
    logs.push_back(std::move(log));
  }
  return {global, std::move(logs)};
}

struct PreparedClients {
  std::vector<ClientState> clients;
  StandardizationStats stats;
  Eigen::Index dimension = 0;
};

PreparedClients prepare_clients(const std::vector<ClientShard>& shards,
                                const FederationConfig& cfg) {
  check_config(cfg, shards.size());
  std::vector<MomentSummary> summaries;
  Eigen::Index dimension = -1;
  for (const auto& shard : shards) {
    if (!shard.honest) continue;
    if (shard.data.num_samples() < 1) {
      throw data_error("federation: honest client with no data");
    }
    if (dimension < 0) dimension = shard.data.num_features();
    if (shard.data.num_features() != dimension) {
      throw data_error("federation: shard feature dimensions differ");
    }
    summaries.push_back(summarize(shard.data.features.values));
  }
  if (dimension < 0) throw data_error("federation: no honest clients");

  PreparedClients prepared;
  prepared.dimension = dimension;
  prepared.stats = pooled_stats(summaries);
  prepared.clients.reserve(shards.size());
  for (const auto& shard : shards) {
    ClientState state;
    state.client_id = shard.client_id;
    state.honest = shard.honest;
    if (shard.honest) {
      state.features = standardize(shard.data.features.values, prepared.stats);
    }
    prepared.clients.push_back(std::move(state));
  }
  return prepared;
}

}  // namespace

TrainingResult train_binary(const std::vector<ClientShard>& shards,
                            const FederationConfig& cfg) {
  PreparedClients prepared = prepare_clients(shards, cfg);
  std::vector<Vector> targets(shards.size());
  for (std::size_t i = 0; i < shards.size(); ++i) {
    if (shards[i].honest) targets[i] = binary_targets(shards[i].data);
  }

  TrainingResult result;
  result.stats = prepared.stats;
  auto [params, logs] = run_rounds(prepared.clients, targets, prepared.dimension, cfg);
  result.params = std::move(params);
  result.logs = std::move(logs);
  return result;
}

MulticlassTrainingResult train_multiclass(const std::vector<ClientShard>& shards,
                                          const FederationConfig& cfg) {
  PreparedClients prepared = prepare_clients(shards, cfg);

  int num_classes = 0;
  for (const auto& shard : shards) {
    if (shard.honest) {
      num_classes = shard.data.num_classes();
      break;
    }
  }
  if (num_classes == 2) {
    throw config_error("train_multiclass: two classes; use train_binary");
  }
  if (num_classes < 3) throw data_error("train_multiclass: need at least 3 classes");

  auto run_class = [&](int cls) {
    std::vector<Vector> targets(shards.size());
    for (std::size_t i = 0; i < shards.size(); ++i) {
      if (!shards[i].honest) continue;
      const IntVector& labels = shards[i].data.labels;
      Vector y(labels.size());
      for (Eigen::Index k = 0; k < labels.size(); ++k) y[k] = labels[k] == cls ? 1.0 : 0.0;
      targets[i] = std::move(y);
    }
    return run_rounds(prepared.clients, targets, prepared.dimension, cfg);
  };

  // Class runs are independent and identically seeded, so they can run
  // concurrently without affecting the result.
  std::vector<std::future<std::pair<ModelParams, std::vector<RoundLog>>>> futures;
  futures.reserve(static_cast<std::size_t>(num_classes));
  for (int c = 0; c < num_classes; ++c) {
    futures.push_back(std::async(std::launch::async, run_class, c));
  }

  MulticlassTrainingResult result;
  result.stats = prepared.stats;
  for (auto& f : futures) {
    auto [params, logs] = f.get();
    result.params.per_class.push_back(std::move(params));
    result.logs_per_class.push_back(std::move(logs));
  }
  return result;
}

int predict_multiclass(const MulticlassParams& params, const Vector& x) {
  if (params.per_class.empty()) throw data_error("predict_multiclass: no models");
  int best = 0;
  double best_score = predict_proba(params.per_class.front(), x);
  for (std::size_t c = 1; c < params.per_class.size(); ++c) {
    const double score = predict_proba(params.per_class[c], x);
    if (score > best_score) {
      best_score = score;
      best = static_cast<int>(c);
    }
  }
  return best;
}

IntVector predict_multiclass(const MulticlassParams& params, const Matrix& X) {
  IntVector out(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    out[i] = predict_multiclass(params, Vector(X.row(i).transpose()));
  }
  return out;
}

Matrix class_scores(const MulticlassParams& params, const Matrix& X) {
  if (params.per_class.empty()) throw data_error("class_scores: no models");
  Matrix scores(X.rows(), static_cast<Eigen::Index>(params.per_class.size()));
  for (std::size_t c = 0; c < params.per_class.size(); ++c) {
    scores.col(static_cast<Eigen::Index>(c)) = predict_proba(params.per_class[c], X);
  }
  return scores;
}

ModelParams fabricate_adversarial(const ModelParams& global, const AdversaryModel& model,
                                  std::mt19937_64& rng) {
  ModelParams fake;
  switch (model.kind) {
    case AdversaryKind::gaussian_blast: {
      std::normal_distribution<double> noise(0.0, model.magnitude);
      fake.weights.resize(global.dimension());
      for (Eigen::Index i = 0; i < fake.weights.size(); ++i) fake.weights[i] = noise(rng);
      fake.intercept = noise(rng);
      return fake;
    }
    case AdversaryKind::sign_flip:
      fake.weights = -model.magnitude * global.weights;
      fake.intercept = -model.magnitude * global.intercept;
      return fake;
  }
  throw config_error("fabricate_adversarial: unknown adversary kind");
}

}  // namespace flr
