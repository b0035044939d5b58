#pragma once

#include <vector>

#include "flr/types.hpp"

namespace flr {

/// Reduces one coordinate's submitted values by the rule. The input is
/// sorted in place; mean sums in sorted order so that all three rules are
/// exactly permutation invariant and trimmed_mean(0) equals mean.
double aggregate_coordinate(std::vector<double>& values, const AggregationRule& rule);

/// Coordinate-wise server aggregation of client parameters. The intercept
/// is reduced by the same rule as each weight coordinate.
ModelParams aggregate(const std::vector<ModelParams>& params_list,
                      const AggregationRule& rule);

}  // namespace flr
