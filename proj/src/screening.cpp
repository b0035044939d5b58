#include "flr/screening.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "flr/model.hpp"

namespace flr {
namespace {

constexpr double kCollinearR2 = 1.0 - 1e-12;

// Spread at or below rounding noise relative to the column's own scale
// counts as constant.
bool is_constant_column(const Vector& column) {
  const double mean = column.mean();
  const double norm = (column.array() - mean).matrix().norm();
  const double rms = column.norm() / std::sqrt(static_cast<double>(column.size()));
  return norm <= 1e-12 * std::sqrt(static_cast<double>(column.size())) * rms;
}

// R^2 of regressing `target` on `predictors` plus an intercept.
// Returns 1 for a target that the intercept alone explains.
double r_squared(const Matrix& predictors, const Vector& target) {
  if (is_constant_column(target)) return 1.0;
  const Eigen::Index n = target.size();
  Matrix design(n, predictors.cols() + 1);
  design.leftCols(predictors.cols()) = predictors;
  design.col(predictors.cols()).setOnes();
  const Vector coef = design.colPivHouseholderQr().solve(target);
  const double sse = (target - design * coef).squaredNorm();
  const double sst = (target.array() - target.mean()).matrix().squaredNorm();
  if (sst <= 0.0) return 1.0;
  return std::clamp(1.0 - sse / sst, 0.0, 1.0);
}

Matrix drop_column(const Matrix& m, Eigen::Index col) {
  Matrix out(m.rows(), m.cols() - 1);
  out.leftCols(col) = m.leftCols(col);
  out.rightCols(m.cols() - 1 - col) = m.rightCols(m.cols() - 1 - col);
  return out;
}

VifValue vif_of(const Matrix& values, const std::vector<std::string>& names,
                Eigen::Index i) {
  const double r2 = r_squared(drop_column(values, i), values.col(i));
  VifValue v;
  v.feature = names[static_cast<std::size_t>(i)];
  if (r2 >= kCollinearR2) {
    v.is_infinite = true;
    v.value = std::numeric_limits<double>::max();
  } else {
    v.value = 1.0 / (1.0 - r2);
  }
  return v;
}

void check_vif_pre(Eigen::Index n, Eigen::Index d) {
  if (d < 2) throw data_error("vif: need at least 2 features");
  if (n <= d + 1) throw data_error("vif: need more samples than features + 1");
}

// Two-sided normal tail probability for a Wald statistic.
double wald_p_value(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

struct IrlsFit {
  Vector coef;
  Vector std_err;
  bool converged = false;
};

// Newton-Raphson logistic fit of y on `design` (intercept included by the
// caller). Local, centralized fit independent of the federated trainer.
IrlsFit fit_logistic_irls(const Matrix& design, const Vector& y,
                          double tol = 1e-8, int max_iters = 100) {
  const Eigen::Index p = design.cols();
  IrlsFit fit;
  fit.coef = Vector::Zero(p);
  for (int iter = 0; iter < max_iters; ++iter) {
    const Eigen::ArrayXd probs = sigmoid((design * fit.coef).array());
    const Eigen::ArrayXd w = (probs * (1.0 - probs)).max(1e-10);
    const Matrix hessian = design.transpose() * w.matrix().asDiagonal() * design;
    const Vector score = design.transpose() * (y.array() - probs).matrix();
    const Vector step = hessian.ldlt().solve(score);
    if (!step.allFinite()) return fit;
    fit.coef += step;
    if (fit.coef.lpNorm<Eigen::Infinity>() > 1e6) return fit;  // separation
    if (step.lpNorm<Eigen::Infinity>() < tol) {
      const Matrix cov = hessian.inverse();
      fit.std_err = cov.diagonal().array().max(0.0).sqrt();
      fit.converged = fit.std_err.allFinite();
      return fit;
    }
  }
  return fit;
}

}  // namespace

std::vector<VifValue> vif(const FeatureMatrix& features) {
  check_vif_pre(features.rows(), features.cols());
  std::vector<VifValue> out;
  out.reserve(static_cast<std::size_t>(features.cols()));
  for (Eigen::Index i = 0; i < features.cols(); ++i) {
    out.push_back(vif_of(features.values, features.feature_names, i));
  }
  return out;
}

VifPruneResult vif_prune(const FeatureMatrix& features, double threshold) {
  check_vif_pre(features.rows(), features.cols());
  VifPruneResult result;
  result.report.threshold = threshold;
  result.pruned = features;
  result.kept_columns.resize(static_cast<std::size_t>(features.cols()));
  for (Eigen::Index i = 0; i < features.cols(); ++i) result.kept_columns[static_cast<std::size_t>(i)] = i;

  while (result.pruned.cols() >= 2) {
    const std::vector<VifValue> vifs = vif(result.pruned);
    Eigen::Index worst = 0;
    for (Eigen::Index i = 1; i < result.pruned.cols(); ++i) {
      const auto& a = vifs[static_cast<std::size_t>(i)];
      const auto& b = vifs[static_cast<std::size_t>(worst)];
      const bool greater = (a.is_infinite && !b.is_infinite) ||
                           (a.is_infinite == b.is_infinite && a.value > b.value);
      if (greater) worst = i;  // ties keep the lower index
    }
    const VifValue& worst_vif = vifs[static_cast<std::size_t>(worst)];
    if (!worst_vif.is_infinite && worst_vif.value <= threshold) {
      result.report.retained = vifs;
      return result;
    }
    result.report.removal_order.push_back(worst_vif);
    result.pruned.values = drop_column(result.pruned.values, worst);
    result.pruned.feature_names.erase(result.pruned.feature_names.begin() + worst);
    result.kept_columns.erase(result.kept_columns.begin() + worst);
  }

  // Down to a single feature: no auxiliary regression is possible.
  VifValue lone;
  lone.feature = result.pruned.feature_names.front();
  lone.value = 1.0;
  result.report.retained = {lone};
  return result;
}

BoxTidwellReport box_tidwell(const FeatureMatrix& features, const IntVector& labels,
                             double significance, bool allow_shift) {
  if (labels.size() != features.rows()) {
    throw data_error("box_tidwell: label/feature length mismatch");
  }
  bool has0 = false, has1 = false;
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    if (labels[i] == 0) has0 = true;
    else if (labels[i] == 1) has1 = true;
    else throw data_error("box_tidwell: labels must be binary");
  }
  if (!has0 || !has1) {
    throw data_error("box_tidwell: labels are constant; fit is undefined");
  }
  Vector y(labels.size());
  for (Eigen::Index i = 0; i < labels.size(); ++i) y[i] = labels[i];

  BoxTidwellReport report;
  report.significance = significance;
  for (Eigen::Index j = 0; j < features.cols(); ++j) {
    BoxTidwellEntry entry;
    entry.feature = features.feature_names[static_cast<std::size_t>(j)];

    Vector x = features.values.col(j);
    const double min_val = x.minCoeff();
    if (min_val <= 0.0) {
      if (!allow_shift) {
        throw data_error("box_tidwell: feature " + entry.feature +
                         " is not strictly positive and shifting is disabled");
      }
      entry.shift = 1.0 - min_val;
      x.array() += entry.shift;
    }

    Matrix design(x.size(), 3);
    design.col(0) = x;
    design.col(1) = x.array() * x.array().log();
    design.col(2).setOnes();

    const IrlsFit fit = fit_logistic_irls(design, y);
    if (!fit.converged || fit.std_err[1] <= 0.0) {
      entry.fit_ok = false;  // separation or divergence; not fatal
      report.entries.push_back(entry);
      continue;
    }
    entry.aux_coef = fit.coef[1];
    entry.p_value = wald_p_value(fit.coef[1] / fit.std_err[1]);
    entry.reject = entry.p_value < significance;
    report.entries.push_back(entry);
  }
  return report;
}

SampleSizeCheck sample_size_check(const std::vector<long>& class_counts,
                                  Eigen::Index num_features) {
  if (class_counts.empty()) throw data_error("sample_size_check: no classes");
  SampleSizeCheck check;
  check.num_features = num_features;
  check.min_class_count = *std::min_element(class_counts.begin(), class_counts.end());
  check.required = 10 * static_cast<long>(num_features);
  check.pass = check.min_class_count >= check.required;
  return check;
}

SampleSizeCheck sample_size_check(const LabeledDataset& data) {
  const auto counts = data.class_counts();
  std::vector<long> long_counts(counts.begin(), counts.end());
  return sample_size_check(long_counts, data.num_features());
}

Matrix correlation_matrix(const FeatureMatrix& features) {
  const Eigen::Index n = features.rows();
  const Eigen::Index d = features.cols();
  if (n < 2) throw data_error("correlation_matrix: need at least 2 samples");

  const Matrix centered = features.values.rowwise() - features.values.colwise().mean();
  const Vector norms = centered.colwise().norm();
  for (Eigen::Index j = 0; j < d; ++j) {
    if (is_constant_column(features.values.col(j))) {
      throw data_error("correlation_matrix: constant feature " +
                       features.feature_names[static_cast<std::size_t>(j)]);
    }
  }

  Matrix corr(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    corr(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const double rho = std::clamp(
          centered.col(i).dot(centered.col(j)) / (norms[i] * norms[j]), -1.0, 1.0);
      corr(i, j) = rho;
      corr(j, i) = rho;
    }
  }
  return corr;
}

}  // namespace flr
