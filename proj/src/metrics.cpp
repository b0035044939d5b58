#include "flr/metrics.hpp"

#include <algorithm>
#include <numeric>

namespace flr {
namespace {

void check_lengths(Eigen::Index a, Eigen::Index b) {
  if (a != b) throw data_error("metrics: prediction/truth length mismatch");
  if (a == 0) throw data_error("metrics: empty input");
}

IntVector indicator(const IntVector& labels, int cls) {
  IntVector out(labels.size());
  for (Eigen::Index i = 0; i < labels.size(); ++i) out[i] = labels[i] == cls ? 1 : 0;
  return out;
}

}  // namespace

double accuracy(const IntVector& pred, const IntVector& truth) {
  check_lengths(pred.size(), truth.size());
  Eigen::Index hits = 0;
  for (Eigen::Index i = 0; i < pred.size(); ++i) hits += pred[i] == truth[i];
  return static_cast<double>(hits) / static_cast<double>(pred.size());
}

double f1_binary(const IntVector& pred, const IntVector& truth) {
  check_lengths(pred.size(), truth.size());
  long tp = 0, fp = 0, fn = 0;
  for (Eigen::Index i = 0; i < pred.size(); ++i) {
    if (pred[i] == 1 && truth[i] == 1) ++tp;
    if (pred[i] == 1 && truth[i] == 0) ++fp;
    if (pred[i] == 0 && truth[i] == 1) ++fn;
  }
  if (tp + fp == 0 || tp + fn == 0) return 0.0;
  const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  const double recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

double f1_macro(const IntVector& pred, const IntVector& truth, int num_classes) {
  check_lengths(pred.size(), truth.size());
  if (num_classes < 2) throw data_error("f1_macro: need at least 2 classes");
  double total = 0.0;
  for (int c = 0; c < num_classes; ++c) {
    total += f1_binary(indicator(pred, c), indicator(truth, c));
  }
  return total / static_cast<double>(num_classes);
}

double auc_binary(const Eigen::Ref<const Vector>& scores, const IntVector& truth) {
  check_lengths(scores.size(), truth.size());
  long num_pos = 0, num_neg = 0;
  for (Eigen::Index i = 0; i < truth.size(); ++i) {
    (truth[i] == 1 ? num_pos : num_neg)++;
  }
  if (num_pos == 0 || num_neg == 0) {
    throw data_error("auc_binary: need at least one positive and one negative");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(scores.size()));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return scores[a] > scores[b]; });

  // Sweep thresholds from high to low; tied scores advance TP and FP
  // together, so each trapezoid charges ties half credit.
  double area = 0.0;
  long tp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    long dtp = 0, dfp = 0;
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      (truth[order[j]] == 1 ? dtp : dfp)++;
      ++j;
    }
    area += static_cast<double>(dfp) * (static_cast<double>(tp) + 0.5 * static_cast<double>(dtp));
    tp += dtp;
    i = j;
  }
  return area / (static_cast<double>(num_pos) * static_cast<double>(num_neg));
}

double auc_macro(const Eigen::Ref<const Matrix>& score_matrix, const IntVector& truth) {
  check_lengths(score_matrix.rows(), truth.size());
  const Eigen::Index num_classes = score_matrix.cols();
  if (num_classes < 2) throw data_error("auc_macro: need at least 2 score columns");
  double total = 0.0;
  for (Eigen::Index c = 0; c < num_classes; ++c) {
    const IntVector ind = indicator(truth, static_cast<int>(c));
    if (ind.sum() == 0) {
      throw data_error("auc_macro: class absent from truth");
    }
    total += auc_binary(score_matrix.col(c), ind);
  }
  return total / static_cast<double>(num_classes);
}

}  // namespace flr
