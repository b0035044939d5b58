#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "flr/types.hpp"

namespace flr {

struct LoadResult {
  LabeledDataset data;
  std::size_t rows_dropped = 0;
};

/// Loads selected numeric columns and a target column from a CSV file.
/// Labels are encoded 0..C-1 in lexicographic order of the raw label
/// strings. Rows with missing or non-parseable values in any selected
/// column are dropped and counted.
LoadResult load_csv(const std::string& path, const std::string& target_column,
                    const std::vector<std::string>& numeric_columns,
                    char delimiter = ',');

/// First and second raw moments of each feature column.
MomentSummary summarize(const Matrix& features);

/// Pools per-client moment summaries into global standardization stats.
/// Uses the population standard deviation; zero-variance features get
/// scale 1 so constant columns pass through the pipeline unchanged.
StandardizationStats pooled_stats(const std::vector<MomentSummary>& summaries);

Matrix standardize(const Matrix& features, const StandardizationStats& stats);
LabeledDataset standardize(const LabeledDataset& data,
                           const StandardizationStats& stats);

/// Stratified split: each class contributes round(count * test_fraction)
/// test samples. Deterministic for a given seed.
std::pair<LabeledDataset, LabeledDataset> train_test_split(
    const LabeledDataset& data, double test_fraction, std::uint64_t seed);

/// Dataset restricted to the given rows; class names are preserved.
LabeledDataset subset(const LabeledDataset& data,
                      std::span<const Eigen::Index> rows);

}  // namespace flr
