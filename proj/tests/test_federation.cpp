#include <doctest.h>

#include <cmath>
#include <random>

#include "flr/dataset.hpp"
#include "flr/federation.hpp"
#include "flr/model.hpp"
#include "flr/partition.hpp"
#include "test_helpers.hpp"

using namespace flr;

namespace {

std::vector<ClientShard> equal_binary_shards(const LabeledDataset& ds, int clients,
                                             std::uint64_t seed) {
  return partition_iid_full(ds, clients, seed);
}

FederationConfig small_config() {
  FederationConfig cfg;
  cfg.rounds = 20;
  cfg.gamma = 1.0;
  cfg.reselect_every = 10;
  cfg.rule = AggregationRule::Mean();
  cfg.hp.eta = 0.1;
  cfg.hp.lambda = 0.0;
  cfg.hp.local_iters = 1;
  cfg.seed = 42;
  return cfg;
}

LabeledDataset two_blobs(Eigen::Index per_class, std::uint64_t seed) {
  return test::gaussian_blobs({Vector::Constant(2, -1.5), Vector::Constant(2, 1.5)},
                              per_class, seed);
}

}  // namespace

TEST_SUITE("federation") {

TEST_CASE("single client training equals chained local updates") {
  const LabeledDataset ds = two_blobs(60, 1);
  std::vector<ClientShard> shard = equal_binary_shards(ds, 1, 0);
  FederationConfig cfg = small_config();
  cfg.rounds = 15;
  cfg.hp.local_iters = 3;

  const TrainingResult result = train_binary(shard, cfg);

  // oracle: the same steps applied directly to the standardized data
  const StandardizationStats stats =
      pooled_stats({summarize(shard[0].data.features.values)});
  const Matrix X = standardize(shard[0].data.features.values, stats);
  const Vector y = binary_targets(shard[0].data);
  ModelParams params;
  params.weights = Vector::Zero(2);
  for (int t = 0; t < cfg.rounds; ++t) params = local_update(params, X, y, cfg.hp);

  CHECK((result.params.weights - params.weights).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(result.params.intercept == params.intercept);

  // aggregation of a single submission is the identity under every rule
  for (const auto& rule : {AggregationRule::Median(), AggregationRule::TrimmedMean(0.0)}) {
    FederationConfig alt = cfg;
    alt.rule = rule;
    const TrainingResult same = train_binary(shard, alt);
    CHECK((same.params.weights.array() == result.params.weights.array()).all());
    CHECK(same.params.intercept == result.params.intercept);
  }
}

TEST_CASE("federated averaging of equal shards equals centralized descent") {
  const LabeledDataset ds = two_blobs(100, 2);  // 200 samples
  const auto shards = equal_binary_shards(ds, 5, 3);
  FederationConfig cfg = small_config();
  cfg.rounds = 40;

  const TrainingResult fed = train_binary(shards, cfg);

  // centralized oracle on the pooled standardized data
  std::vector<MomentSummary> summaries;
  for (const auto& s : shards) summaries.push_back(summarize(s.data.features.values));
  const StandardizationStats stats = pooled_stats(summaries);
  Matrix X(ds.num_samples(), ds.num_features());
  Vector y(ds.num_samples());
  Eigen::Index row = 0;
  for (const auto& s : shards) {
    X.middleRows(row, s.data.num_samples()) =
        standardize(s.data.features.values, stats);
    for (Eigen::Index i = 0; i < s.data.num_samples(); ++i, ++row) {
      y[row] = s.data.labels[i];
    }
  }
  ModelParams central;
  central.weights = Vector::Zero(2);
  std::vector<RoundLog> expected;
  for (int t = 0; t < cfg.rounds; ++t) {
    central = local_update(central, X, y, cfg.hp);
    CHECK((fed.logs[static_cast<std::size_t>(t)].global.weights - central.weights)
              .lpNorm<Eigen::Infinity>() < 1e-9);
    CHECK(std::abs(fed.logs[static_cast<std::size_t>(t)].global.intercept -
                   central.intercept) < 1e-9);
  }
}

TEST_CASE("round accounting: exactly T aggregation events") {
  const LabeledDataset ds = two_blobs(40, 4);
  const auto shards = equal_binary_shards(ds, 4, 1);
  FederationConfig cfg = small_config();
  cfg.rounds = 23;
  const TrainingResult result = train_binary(shards, cfg);
  REQUIRE(result.logs.size() == 23);
  for (std::size_t i = 0; i < result.logs.size(); ++i) {
    CHECK(result.logs[i].round == static_cast<int>(i) + 1);
  }
}

TEST_CASE("client selection respects gamma and the reselection cadence") {
  const LabeledDataset ds = two_blobs(100, 5);
  const auto shards = equal_binary_shards(ds, 10, 2);
  FederationConfig cfg = small_config();
  cfg.rounds = 25;
  cfg.gamma = 0.3;
  cfg.reselect_every = 10;
  const TrainingResult result = train_binary(shards, cfg);
  for (const auto& log : result.logs) {
    CHECK(log.selected.size() == 3);  // ceil(0.3 * 10)
  }
  // selection is constant within a cadence window
  CHECK(result.logs[0].selected == result.logs[8].selected);
  CHECK(result.logs[9].selected == result.logs[18].selected);   // rounds 10..19
  CHECK(result.logs[19].selected == result.logs[24].selected);  // rounds 20..25
}

TEST_CASE("training is bit-reproducible") {
  const LabeledDataset ds = two_blobs(50, 6);
  auto shards = equal_binary_shards(ds, 5, 3);
  shards[2].honest = false;
  shards[2].data = LabeledDataset{};
  shards[2].source_rows.clear();
  FederationConfig cfg = small_config();
  cfg.rounds = 12;
  cfg.rule = AggregationRule::Median();
  const TrainingResult a = train_binary(shards, cfg);
  const TrainingResult b = train_binary(shards, cfg);
  CHECK((a.params.weights.array() == b.params.weights.array()).all());
  CHECK(a.params.intercept == b.params.intercept);
}

TEST_CASE("median aggregation stays inside the honest submission range") {
  const LabeledDataset ds = two_blobs(80, 7);
  auto shards = equal_binary_shards(ds, 9, 4);
  for (int id : {1, 4, 6}) {  // 3 of 9 adversarial, below half
    shards[static_cast<std::size_t>(id)].honest = false;
    shards[static_cast<std::size_t>(id)].data = LabeledDataset{};
    shards[static_cast<std::size_t>(id)].source_rows.clear();
  }
  FederationConfig cfg = small_config();
  cfg.rounds = 10;
  cfg.rule = AggregationRule::Median();
  cfg.adversary = {AdversaryKind::gaussian_blast, 100.0};
  const TrainingResult result = train_binary(shards, cfg);

  // recompute honest submissions per round from the logged trajectory
  std::vector<MomentSummary> summaries;
  for (const auto& s : shards) {
    if (s.honest) summaries.push_back(summarize(s.data.features.values));
  }
  const StandardizationStats stats = pooled_stats(summaries);
  ModelParams prev;
  prev.weights = Vector::Zero(2);
  for (const auto& log : result.logs) {
    Matrix honest_w(0, 0);
    std::vector<ModelParams> honest_subs;
    for (int id : log.selected) {
      const auto& s = shards[static_cast<std::size_t>(id)];
      if (!s.honest) continue;
      honest_subs.push_back(local_update(prev, standardize(s.data.features.values, stats),
                                         binary_targets(s.data), cfg.hp));
    }
    REQUIRE(!honest_subs.empty());
    for (Eigen::Index j = 0; j < 2; ++j) {
      double lo = honest_subs[0].weights[j], hi = lo;
      for (const auto& p : honest_subs) {
        lo = std::min(lo, p.weights[j]);
        hi = std::max(hi, p.weights[j]);
      }
      CHECK(log.global.weights[j] >= lo - 1e-12);
      CHECK(log.global.weights[j] <= hi + 1e-12);
    }
    prev = log.global;
  }
}

TEST_CASE("fabricate_adversarial mechanisms") {
  ModelParams global;
  global.weights = Vector(2);
  global.weights << 1.0, -2.0;
  global.intercept = 0.5;

  std::mt19937_64 rng(1);
  const ModelParams flipped =
      fabricate_adversarial(global, {AdversaryKind::sign_flip, 10.0}, rng);
  CHECK(flipped.weights[0] == -10.0);
  CHECK(flipped.weights[1] == 20.0);
  CHECK(flipped.intercept == -5.0);

  std::mt19937_64 r1(7), r2(7);
  const ModelParams g1 =
      fabricate_adversarial(global, {AdversaryKind::gaussian_blast, 100.0}, r1);
  const ModelParams g2 =
      fabricate_adversarial(global, {AdversaryKind::gaussian_blast, 100.0}, r2);
  CHECK((g1.weights.array() == g2.weights.array()).all());
  CHECK(g1.intercept == g2.intercept);

  // magnitude-100 noise dwarfs unit-scale honest parameters
  int dominant = 0;
  std::mt19937_64 rng_many(3);
  for (int i = 0; i < 100; ++i) {
    const ModelParams fake =
        fabricate_adversarial(global, {AdversaryKind::gaussian_blast, 100.0}, rng_many);
    const double norm = std::sqrt(fake.weights.squaredNorm() +
                                  fake.intercept * fake.intercept);
    if (norm > 10.0 * std::sqrt(global.weights.squaredNorm() +
                                global.intercept * global.intercept)) {
      ++dominant;
    }
  }
  CHECK(dominant >= 95);
}

TEST_CASE("predict_multiclass follows the highest score with low-id ties") {
  MulticlassParams params;
  for (double b : {1.0, 0.0, -1.0}) {
    ModelParams p;
    p.weights = Vector::Zero(2);
    p.intercept = b;
    params.per_class.push_back(p);
  }
  CHECK(predict_multiclass(params, Vector(Vector::Zero(2))) == 0);

  MulticlassParams ties;
  for (int c = 0; c < 3; ++c) {
    ModelParams p;
    p.weights = Vector::Zero(2);
    ties.per_class.push_back(p);
  }
  CHECK(predict_multiclass(ties, Vector(Vector::Ones(2))) == 0);

  MulticlassParams dominant = ties;
  dominant.per_class[2].intercept = 5.0;
  CHECK(predict_multiclass(dominant, Vector(Vector::Ones(2))) == 2);
}

TEST_CASE("train_multiclass rejects binary problems") {
  const LabeledDataset ds = two_blobs(40, 8);
  const auto shards = equal_binary_shards(ds, 2, 0);
  CHECK_THROWS_AS(train_multiclass(shards, small_config()), config_error);
}

TEST_CASE("one-vs-rest models specialize to their own class") {
  const std::vector<Vector> centers = {
      (Vector(2) << -3.0, 0.0).finished(),
      (Vector(2) << 3.0, 0.0).finished(),
      (Vector(2) << 0.0, 3.0).finished(),
  };
  const LabeledDataset ds = test::gaussian_blobs(centers, 200, 9);
  const auto shards = partition_iid_full(ds, 5, 1);
  FederationConfig cfg = small_config();
  cfg.rounds = 50;
  cfg.hp.local_iters = 5;
  const MulticlassTrainingResult result = train_multiclass(shards, cfg);
  REQUIRE(result.params.per_class.size() == 3);
  REQUIRE(result.logs_per_class.size() == 3);

  for (int c = 0; c < 3; ++c) {
    const Vector center =
        standardize(Matrix(centers[static_cast<std::size_t>(c)].transpose()), result.stats)
            .row(0)
            .transpose();
    CHECK(predict_multiclass(result.params, center) == c);
  }
}

TEST_CASE("relabeling classes permutes the learned models") {
  const std::vector<Vector> centers = {
      (Vector(2) << -3.0, 0.0).finished(),
      (Vector(2) << 3.0, 0.0).finished(),
      (Vector(2) << 0.0, 3.0).finished(),
  };
  LabeledDataset ds = test::gaussian_blobs(centers, 150, 10);
  auto shards = partition_iid_full(ds, 4, 2);
  shards[1].honest = false;  // include an adversary to exercise shared draws
  shards[1].data = LabeledDataset{};
  shards[1].source_rows.clear();

  FederationConfig cfg = small_config();
  cfg.rounds = 10;
  cfg.rule = AggregationRule::Median();

  const MulticlassTrainingResult base = train_multiclass(shards, cfg);

  // apply the cycle 0 -> 1 -> 2 -> 0 to the labels of every honest shard
  auto permuted = shards;
  const int perm[3] = {1, 2, 0};
  for (auto& s : permuted) {
    for (Eigen::Index i = 0; i < s.data.labels.size(); ++i) {
      s.data.labels[i] = perm[s.data.labels[i]];
    }
  }
  const MulticlassTrainingResult cycled = train_multiclass(permuted, cfg);

  for (int c = 0; c < 3; ++c) {
    const ModelParams& original = base.params.per_class[static_cast<std::size_t>(c)];
    const ModelParams& renamed = cycled.params.per_class[static_cast<std::size_t>(perm[c])];
    CHECK((original.weights.array() == renamed.weights.array()).all());
    CHECK(original.intercept == renamed.intercept);
  }
}

TEST_CASE("config validation happens at entry") {
  const LabeledDataset ds = two_blobs(30, 11);
  const auto shards = equal_binary_shards(ds, 2, 0);
  FederationConfig cfg = small_config();
  cfg.gamma = 0.0;
  CHECK_THROWS_AS(train_binary(shards, cfg), config_error);
  cfg = small_config();
  cfg.rounds = 0;
  CHECK_THROWS_AS(train_binary(shards, cfg), config_error);
  cfg = small_config();
  cfg.hp.eta = -1.0;
  CHECK_THROWS_AS(train_binary(shards, cfg), config_error);

  std::vector<ClientShard> none;
  CHECK_THROWS_AS(train_binary(none, small_config()), config_error);

  auto all_adversarial = equal_binary_shards(ds, 2, 0);
  for (auto& s : all_adversarial) s.honest = false;
  CHECK_THROWS_AS(train_binary(all_adversarial, small_config()), data_error);
}

}  // TEST_SUITE
