#pragma once

#include <string>
#include <vector>

#include "flr/types.hpp"

namespace flr {

/// One feature's variance inflation factor. Exact collinearity (R^2 = 1)
/// is carried as a flag, never as a floating-point overflow.
struct VifValue {
  std::string feature;
  double value = 1.0;
  bool is_infinite = false;
};

struct VifReport {
  std::vector<VifValue> retained;       // final VIFs, all at or below threshold
  std::vector<VifValue> removal_order;  // features removed, with VIF at removal
  double threshold = 10.0;
};

/// VIF_i = 1 / (1 - R^2_i), with R^2_i from the ordinary-least-squares
/// regression of feature i on all other features plus an intercept.
std::vector<VifValue> vif(const FeatureMatrix& features);

struct VifPruneResult {
  VifReport report;
  FeatureMatrix pruned;
  std::vector<Eigen::Index> kept_columns;  // indices into the input matrix
};

/// Repeatedly removes the highest-VIF feature (ties to the lower column
/// index) until all VIFs are at or below the threshold or one feature
/// remains.
VifPruneResult vif_prune(const FeatureMatrix& features, double threshold = 10.0);

struct BoxTidwellEntry {
  std::string feature;
  double shift = 0.0;     // added to make the feature strictly positive
  double aux_coef = 0.0;  // coefficient on x * ln(x)
  double p_value = 1.0;
  bool reject = false;    // linearity rejected at the significance level
  bool fit_ok = true;     // false when the auxiliary fit failed to converge
};

struct BoxTidwellReport {
  std::vector<BoxTidwellEntry> entries;
  double significance = 0.01;
};

/// Linearity-of-the-logit test. Each feature is fit jointly with its
/// auxiliary term x*ln(x) in a binary logistic regression; the Wald
/// p-value of the auxiliary coefficient decides rejection. Features with
/// non-positive values are shifted by (1 - min) unless shifting is
/// disabled, in which case they are an error.
BoxTidwellReport box_tidwell(const FeatureMatrix& features, const IntVector& labels,
                             double significance = 0.01, bool allow_shift = true);

struct SampleSizeCheck {
  bool pass = false;
  long min_class_count = 0;
  long required = 0;
  Eigen::Index num_features = 0;
};

/// Events-per-variable rule: the least frequent class must supply at
/// least 10 observations per feature.
SampleSizeCheck sample_size_check(const std::vector<long>& class_counts,
                                  Eigen::Index num_features);
SampleSizeCheck sample_size_check(const LabeledDataset& data);

/// Pearson correlations; symmetric with unit diagonal. Constant features
/// are an error.
Matrix correlation_matrix(const FeatureMatrix& features);

}  // namespace flr
