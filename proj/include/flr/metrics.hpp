#pragma once

#include <vector>

#include "flr/types.hpp"

namespace flr {

double accuracy(const IntVector& pred, const IntVector& truth);

/// Positive-class F1 with the zero-division convention: returns 0 when
/// precision, recall, or their sum is undefined or zero.
double f1_binary(const IntVector& pred, const IntVector& truth);

/// Unweighted mean of one-vs-rest F1 over classes 0..num_classes-1.
double f1_macro(const IntVector& pred, const IntVector& truth, int num_classes);

/// Trapezoidal area under the ROC curve over all distinct score
/// thresholds; equals the Mann-Whitney statistic with ties counted 1/2.
double auc_binary(const Eigen::Ref<const Vector>& scores, const IntVector& truth);

/// Unweighted mean of one-vs-rest AUC, scoring class c by column c.
double auc_macro(const Eigen::Ref<const Matrix>& score_matrix, const IntVector& truth);

struct ClassMetrics {
  int class_id = 0;
  double f1 = 0.0;
  double auc = 0.0;
};

struct EvalResult {
  double acc = 0.0;
  double f1 = 0.0;
  double auc = 0.0;
  std::vector<ClassMetrics> per_class;  // multi-class only
};

}  // namespace flr
