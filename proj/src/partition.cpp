#include "flr/partition.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>

#include <json.hpp>

#include "flr/dataset.hpp"

namespace flr {
namespace {

constexpr Eigen::Index kNonIidBasePerClass = 100;

std::vector<std::vector<Eigen::Index>> shuffled_class_pools(const LabeledDataset& data,
                                                            std::mt19937_64& rng) {
  std::vector<std::vector<Eigen::Index>> pools(static_cast<std::size_t>(data.num_classes()));
  for (Eigen::Index i = 0; i < data.labels.size(); ++i) {
    pools[static_cast<std::size_t>(data.labels[i])].push_back(i);
  }
  for (auto& pool : pools) std::shuffle(pool.begin(), pool.end(), rng);
  return pools;
}

ClientShard make_shard(const LabeledDataset& data, int id, bool honest,
                       std::vector<Eigen::Index> rows) {
  std::sort(rows.begin(), rows.end());
  ClientShard shard;
  shard.client_id = id;
  shard.honest = honest;
  shard.data = honest ? subset(data, rows) : LabeledDataset{};
  if (!honest) {
    shard.data.features.feature_names = data.features.feature_names;
    shard.data.class_names = data.class_names;
    rows.clear();
  }
  shard.source_rows = std::move(rows);
  return shard;
}

// Deals each class's shuffled indices round-robin over `bins`, which keeps
// per-bin class counts within one of an exact proportional share.
std::vector<std::vector<Eigen::Index>> stratified_bins(
    const std::vector<std::vector<Eigen::Index>>& pools, std::size_t bins) {
  std::vector<std::vector<Eigen::Index>> out(bins);
  for (const auto& pool : pools) {
    for (std::size_t i = 0; i < pool.size(); ++i) out[i % bins].push_back(pool[i]);
  }
  return out;
}

// Per-class quotas for a stratified sample of `s` points matching the
// global class proportions, exact totals via largest remainders.
std::vector<Eigen::Index> proportional_quotas(const std::vector<Eigen::Index>& class_totals,
                                              Eigen::Index total, Eigen::Index s) {
  const std::size_t num_classes = class_totals.size();
  std::vector<Eigen::Index> quota(num_classes);
  std::vector<std::pair<double, std::size_t>> remainders(num_classes);
  Eigen::Index assigned = 0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    const double exact = static_cast<double>(s) * static_cast<double>(class_totals[c]) /
                         static_cast<double>(total);
    quota[c] = static_cast<Eigen::Index>(exact);
    remainders[c] = {exact - static_cast<double>(quota[c]), c};
    assigned += quota[c];
  }
  std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (std::size_t k = 0; assigned < s; ++k, ++assigned) quota[remainders[k].second]++;
  return quota;
}

std::vector<bool> draw_adversaries(int clients, double outlier_frac, std::mt19937_64& rng) {
  const long num_adversarial = floored_count(outlier_frac, clients);
  if (num_adversarial >= clients) {
    throw config_error("partition: no honest clients would remain");
  }
  std::vector<int> ids(static_cast<std::size_t>(clients));
  std::iota(ids.begin(), ids.end(), 0);
  std::shuffle(ids.begin(), ids.end(), rng);
  std::vector<bool> adversarial(static_cast<std::size_t>(clients), false);
  for (long k = 0; k < num_adversarial; ++k) adversarial[static_cast<std::size_t>(ids[static_cast<std::size_t>(k)])] = true;
  return adversarial;
}

// Class assignment for clients grouped by class: floor(count / C) per
// group, remainder clients assigned round-robin.
std::vector<int> grouped_class_assignment(int count, int num_classes) {
  const int per_group = count / num_classes;
  std::vector<int> assignment(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    assignment[static_cast<std::size_t>(i)] =
        (per_group > 0 && i < per_group * num_classes) ? i / per_group
                                                       : (i - per_group * num_classes) % num_classes;
  }
  return assignment;
}

void check_plan(const PartitionPlan& plan, Regime expected) {
  if (plan.regime != expected) throw config_error("partition: plan regime mismatch");
  if (plan.clients < 1) throw config_error("partition: need at least one client");
  if (!(plan.outlier_frac >= 0.0 && plan.outlier_frac < 0.5)) {
    throw config_error("partition: outlier fraction must lie in [0, 0.5)");
  }
  if (plan.sample_size < 1) throw config_error("partition: sample size must be positive");
}

}  // namespace

std::vector<ClientShard> partition_iid_full(const LabeledDataset& data, int clients,
                                            std::uint64_t seed) {
  if (clients < 1) throw config_error("partition: need at least one client");
  const auto counts = data.class_counts();
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] < clients) {
      throw data_error("partition_iid_full: class " + data.class_names[c] +
                       " has fewer samples than clients");
    }
  }
  std::mt19937_64 rng(seed);
  const auto pools = shuffled_class_pools(data, rng);
  const auto bins = stratified_bins(pools, static_cast<std::size_t>(clients));

  std::vector<ClientShard> shards;
  shards.reserve(static_cast<std::size_t>(clients));
  for (int m = 0; m < clients; ++m) {
    shards.push_back(make_shard(data, m, true, bins[static_cast<std::size_t>(m)]));
  }
  return shards;
}

std::vector<ClientShard> partition_noniid_full(const LabeledDataset& data, int clients,
                                               std::uint64_t seed) {
  if (clients < 1) throw config_error("partition: need at least one client");
  const int num_classes = data.num_classes();
  const auto counts = data.class_counts();
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] < kNonIidBasePerClass * clients) {
      throw data_error("partition_noniid_full: class " + data.class_names[c] +
                       " is too small for the 100-per-client base allocation");
    }
  }

  std::mt19937_64 rng(seed);
  const auto pools = shuffled_class_pools(data, rng);
  std::vector<std::size_t> cursor(pools.size(), 0);

  // Base allocation: every client draws 100 of every class.
  std::vector<std::vector<Eigen::Index>> rows(static_cast<std::size_t>(clients));
  for (int m = 0; m < clients; ++m) {
    for (std::size_t c = 0; c < pools.size(); ++c) {
      for (Eigen::Index k = 0; k < kNonIidBasePerClass; ++k) {
        rows[static_cast<std::size_t>(m)].push_back(pools[c][cursor[c]++]);
      }
    }
  }

  // Group clients by class and split each class's leftovers evenly within
  // its group. Groups of floor(M/C); remainder clients join round-robin.
  const std::vector<int> assignment = grouped_class_assignment(clients, num_classes);
  std::vector<Eigen::Index> group_size(static_cast<std::size_t>(num_classes), 0);
  for (int g : assignment) group_size[static_cast<std::size_t>(g)]++;
  for (int m = 0; m < clients; ++m) {
    const auto g = static_cast<std::size_t>(assignment[static_cast<std::size_t>(m)]);
    const Eigen::Index leftover = static_cast<Eigen::Index>(pools[g].size()) -
                                  kNonIidBasePerClass * clients;
    const Eigen::Index extra = leftover / group_size[g];
    for (Eigen::Index k = 0; k < extra; ++k) {
      rows[static_cast<std::size_t>(m)].push_back(pools[g][cursor[g]++]);
    }
  }

  std::vector<ClientShard> shards;
  shards.reserve(static_cast<std::size_t>(clients));
  for (int m = 0; m < clients; ++m) {
    shards.push_back(make_shard(data, m, true, std::move(rows[static_cast<std::size_t>(m)])));
  }
  return shards;
}

std::vector<ClientShard> partition_iid_sampled(const LabeledDataset& data,
                                               const PartitionPlan& plan) {
  check_plan(plan, Regime::iid_sampled);
  std::mt19937_64 rng(plan.seed);
  const std::vector<bool> adversarial = draw_adversaries(plan.clients, plan.outlier_frac, rng);
  const auto num_honest = static_cast<std::size_t>(
      std::count(adversarial.begin(), adversarial.end(), false));

  const auto pools = shuffled_class_pools(data, rng);
  const auto bins = stratified_bins(pools, num_honest);
  const auto counts = data.class_counts();
  const std::vector<Eigen::Index> quota =
      proportional_quotas(counts, data.num_samples(), plan.sample_size);

  std::vector<ClientShard> shards;
  shards.reserve(static_cast<std::size_t>(plan.clients));
  std::size_t next_bin = 0;
  for (int m = 0; m < plan.clients; ++m) {
    if (adversarial[static_cast<std::size_t>(m)]) {
      shards.push_back(make_shard(data, m, false, {}));
      continue;
    }
    const auto& bin = bins[next_bin++];
    std::vector<std::vector<Eigen::Index>> by_class(counts.size());
    for (Eigen::Index row : bin) by_class[static_cast<std::size_t>(data.labels[row])].push_back(row);
    std::vector<Eigen::Index> chosen;
    chosen.reserve(static_cast<std::size_t>(plan.sample_size));
    for (std::size_t c = 0; c < by_class.size(); ++c) {
      if (static_cast<Eigen::Index>(by_class[c].size()) < quota[c]) {
        throw data_error("partition_iid_sampled: subset cannot supply the per-class quota");
      }
      chosen.insert(chosen.end(), by_class[c].begin(), by_class[c].begin() + quota[c]);
    }
    shards.push_back(make_shard(data, m, true, std::move(chosen)));
  }
  return shards;
}

std::vector<ClientShard> partition_noniid_sampled(const LabeledDataset& data,
                                                  const PartitionPlan& plan) {
  check_plan(plan, Regime::noniid_sampled);
  const int num_classes = data.num_classes();
  std::mt19937_64 rng(plan.seed);
  const std::vector<bool> adversarial = draw_adversaries(plan.clients, plan.outlier_frac, rng);
  const auto num_honest = static_cast<int>(
      std::count(adversarial.begin(), adversarial.end(), false));

  const Eigen::Index own = plan.sample_size;
  const Eigen::Index other = floored_count(0.1, plan.sample_size);

  const std::vector<int> assignment = grouped_class_assignment(num_honest, num_classes);
  std::vector<Eigen::Index> demand(static_cast<std::size_t>(num_classes), 0);
  for (int h = 0; h < num_honest; ++h) {
    for (int c = 0; c < num_classes; ++c) {
      demand[static_cast<std::size_t>(c)] +=
          (assignment[static_cast<std::size_t>(h)] == c) ? own : other;
    }
  }
  const auto counts = data.class_counts();
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] < demand[c]) {
      throw data_error("partition_noniid_sampled: class " + data.class_names[c] +
                       " cannot supply the requested samples");
    }
  }

  const auto pools = shuffled_class_pools(data, rng);
  std::vector<std::size_t> cursor(pools.size(), 0);

  std::vector<ClientShard> shards;
  shards.reserve(static_cast<std::size_t>(plan.clients));
  int next_honest = 0;
  for (int m = 0; m < plan.clients; ++m) {
    if (adversarial[static_cast<std::size_t>(m)]) {
      shards.push_back(make_shard(data, m, false, {}));
      continue;
    }
    const int own_class = assignment[static_cast<std::size_t>(next_honest++)];
    std::vector<Eigen::Index> chosen;
    for (int c = 0; c < num_classes; ++c) {
      const Eigen::Index take = (c == own_class) ? own : other;
      for (Eigen::Index k = 0; k < take; ++k) {
        chosen.push_back(pools[static_cast<std::size_t>(c)][cursor[static_cast<std::size_t>(c)]++]);
      }
    }
    shards.push_back(make_shard(data, m, true, std::move(chosen)));
  }
  return shards;
}

std::vector<ClientShard> make_partition(const LabeledDataset& data,
                                        const PartitionPlan& plan) {
  if ((plan.regime == Regime::iid_full || plan.regime == Regime::noniid_full) &&
      plan.outlier_frac != 0.0) {
    throw config_error("partition: full regimes take no adversarial clients");
  }
  switch (plan.regime) {
    case Regime::iid_full:
      return partition_iid_full(data, plan.clients, plan.seed);
    case Regime::noniid_full:
      return partition_noniid_full(data, plan.clients, plan.seed);
    case Regime::iid_sampled:
      return partition_iid_sampled(data, plan);
    case Regime::noniid_sampled:
      return partition_noniid_sampled(data, plan);
  }
  throw config_error("partition: unknown regime");
}

void write_shard_manifest(const std::vector<ClientShard>& shards,
                          const std::string& path) {
  nlohmann::json manifest = nlohmann::json::array();
  for (const auto& shard : shards) {
    manifest.push_back({{"client_id", shard.client_id},
                        {"honest", shard.honest},
                        {"rows", shard.source_rows}});
  }
  std::ofstream out(path);
  if (!out) throw data_error("cannot write manifest: " + path);
  out << manifest.dump(2) << "\n";
}

}  // namespace flr
