#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flr/types.hpp"

namespace flr {

/// Stratified partition of the full dataset into M honest shards whose
/// class proportions match the global proportions up to one sample.
std::vector<ClientShard> partition_iid_full(const LabeledDataset& data, int clients,
                                            std::uint64_t seed);

/// Label-skew partition of the full dataset: every client gets a base of
/// 100 samples per class, then clients are grouped by class and each
/// group member receives an equal share of its class's leftovers.
std::vector<ClientShard> partition_noniid_full(const LabeledDataset& data, int clients,
                                               std::uint64_t seed);

/// Per-client stratified samples of size s; floor(M * p_out) clients are
/// adversarial and carry no data.
std::vector<ClientShard> partition_iid_sampled(const LabeledDataset& data,
                                               const PartitionPlan& plan);

/// Label-skew samples: an honest client assigned class c holds s samples
/// of c plus floor(0.1 * s) samples of every other class; floor(M * p_out)
/// clients are adversarial and carry no data.
std::vector<ClientShard> partition_noniid_sampled(const LabeledDataset& data,
                                                  const PartitionPlan& plan);

std::vector<ClientShard> make_partition(const LabeledDataset& data,
                                        const PartitionPlan& plan);

/// Provenance manifest (client id, honesty, source row indices) as JSON.
void write_shard_manifest(const std::vector<ClientShard>& shards,
                          const std::string& path);

}  // namespace flr
