#include "flr/model.hpp"

#include <algorithm>

namespace flr {
namespace {

constexpr double kProbClamp = 1e-12;

void check_dims(const ModelParams& params, const Eigen::Ref<const Matrix>& X) {
  if (params.weights.size() != X.cols()) {
    throw data_error("model: parameter/feature dimension mismatch");
  }
}

}  // namespace

double loss(const ModelParams& params, const Eigen::Ref<const Matrix>& X,
            const Eigen::Ref<const Vector>& y, double lambda) {
  check_dims(params, X);
  const Eigen::ArrayXd p = predict_proba(params, X)
                               .array()
                               .max(kProbClamp)
                               .min(1.0 - kProbClamp);
  const double ce =
      -(y.array() * p.log() + (1.0 - y.array()) * (1.0 - p).log()).mean();
  return ce + 0.5 * lambda * params.weights.squaredNorm();
}

double loss(const ModelParams& params, const LabeledDataset& data, double lambda) {
  return loss(params, data.features.values, binary_targets(data), lambda);
}

Gradient gradient(const ModelParams& params, const Eigen::Ref<const Matrix>& X,
                  const Eigen::Ref<const Vector>& y, double lambda) {
  check_dims(params, X);
  const Vector residual = predict_proba(params, X) - y;
  const double inv_n = 1.0 / static_cast<double>(X.rows());
  Gradient g;
  g.dw = inv_n * (X.transpose() * residual) + lambda * params.weights;
  g.db = inv_n * residual.sum();
  return g;
}

Gradient gradient(const ModelParams& params, const LabeledDataset& data, double lambda) {
  return gradient(params, data.features.values, binary_targets(data), lambda);
}

ModelParams local_update(const ModelParams& start, const Eigen::Ref<const Matrix>& X,
                         const Eigen::Ref<const Vector>& y, const TrainingHyperparams& hp) {
  if (hp.local_iters < 1) throw config_error("local_iters must be >= 1");
  if (!std::isfinite(hp.eta) || hp.eta < 0.0) throw config_error("eta must be nonnegative");
  ModelParams params = start;
  for (int t = 0; t < hp.local_iters; ++t) {
    const Gradient g = gradient(params, X, y, hp.lambda);
    params.weights -= hp.eta * g.dw;
    params.intercept -= hp.eta * g.db;
  }
  return params;
}

ModelParams local_update(const ModelParams& start, const LabeledDataset& data,
                         const TrainingHyperparams& hp) {
  return local_update(start, data.features.values, binary_targets(data), hp);
}

Vector binary_targets(const LabeledDataset& data) {
  Vector y(data.labels.size());
  for (Eigen::Index i = 0; i < data.labels.size(); ++i) {
    const int label = data.labels[i];
    if (label != 0 && label != 1) {
      throw data_error("expected binary labels in {0, 1}");
    }
    y[i] = static_cast<double>(label);
  }
  return y;
}

}  // namespace flr
