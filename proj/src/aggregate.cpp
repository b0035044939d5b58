#include "flr/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace flr {
namespace {

void validate(const std::vector<ModelParams>& params_list, const AggregationRule& rule) {
  if (params_list.empty()) throw data_error("aggregate: empty parameter list");
  const Eigen::Index d = params_list.front().dimension();
  for (const auto& p : params_list) {
    if (p.dimension() != d) throw data_error("aggregate: dimension mismatch");
  }
  if (rule.kind == AggregationKind::trimmed_mean) {
    if (!(rule.alpha >= 0.0 && rule.alpha < 0.5)) {
      throw config_error("trimmed_mean alpha must lie in [0, 0.5)");
    }
    const auto m = static_cast<long>(params_list.size());
    if (2 * floored_count(rule.alpha, m) >= m) {
      throw config_error("trimmed_mean: trimming would discard all values");
    }
  }
}

}  // namespace

double aggregate_coordinate(std::vector<double>& values, const AggregationRule& rule) {
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size();
  switch (rule.kind) {
    case AggregationKind::median: {
      const std::size_t mid = m / 2;
      if (m % 2 == 1) return values[mid];
      // clamping keeps the midpoint inside [lo, hi] despite rounding
      return std::clamp(0.5 * (values[mid - 1] + values[mid]), values[mid - 1], values[mid]);
    }
    case AggregationKind::mean:
    case AggregationKind::trimmed_mean: {
      const std::size_t k =
          rule.kind == AggregationKind::trimmed_mean
              ? static_cast<std::size_t>(floored_count(rule.alpha, static_cast<long>(m)))
              : 0;
      const double sum = std::accumulate(values.begin() + static_cast<long>(k),
                                         values.end() - static_cast<long>(k), 0.0);
      return std::clamp(sum / static_cast<double>(m - 2 * k), values[k], values[m - k - 1]);
    }
  }
  throw config_error("aggregate: unknown rule");
}

ModelParams aggregate(const std::vector<ModelParams>& params_list,
                      const AggregationRule& rule) {
  validate(params_list, rule);
  const Eigen::Index d = params_list.front().dimension();
  const std::size_t m = params_list.size();

  ModelParams out;
  out.weights.resize(d);
  std::vector<double> column(m);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < m; ++i) column[i] = params_list[i].weights[j];
    out.weights[j] = aggregate_coordinate(column, rule);
  }
  for (std::size_t i = 0; i < m; ++i) column[i] = params_list[i].intercept;
  out.intercept = aggregate_coordinate(column, rule);
  return out;
}

}  // namespace flr
