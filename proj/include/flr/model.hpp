#pragma once

#include <cmath>

#include "flr/types.hpp"

namespace flr {

/// Numerically stable logistic function: never overflows, and stays
/// strictly positive down to the underflow limit of double.
inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

/// Coefficient-wise stable sigmoid over any Eigen array expression.
template <typename Derived>
auto sigmoid(const Eigen::ArrayBase<Derived>& z) {
  return z.derived().unaryExpr([](double v) { return sigmoid(v); });
}

/// Positive-class probability sigma(w.x + b) for one sample.
template <typename Derived>
  requires(Derived::ColsAtCompileTime == 1)
double predict_proba(const ModelParams& params, const Eigen::MatrixBase<Derived>& x) {
  if (params.weights.size() != x.size()) {
    throw data_error("model: parameter/feature dimension mismatch");
  }
  return sigmoid(params.weights.dot(x.derived()) + params.intercept);
}

/// Row-wise positive-class probabilities for a whole feature matrix.
template <typename Derived>
  requires(Derived::ColsAtCompileTime != 1)
Vector predict_proba(const ModelParams& params, const Eigen::MatrixBase<Derived>& X) {
  if (params.weights.size() != X.cols()) {
    throw data_error("model: parameter/feature dimension mismatch");
  }
  return sigmoid(((X.derived() * params.weights).array() + params.intercept)).matrix();
}

/// Mean cross-entropy plus (lambda/2)*||w||^2. Probabilities are clamped
/// to [1e-12, 1 - 1e-12] before the logs.
double loss(const ModelParams& params, const Eigen::Ref<const Matrix>& X,
            const Eigen::Ref<const Vector>& y, double lambda);
double loss(const ModelParams& params, const LabeledDataset& data, double lambda);

struct Gradient {
  Vector dw;
  double db = 0.0;
};

/// dw = (1/n) X^T (p - y) + lambda * w,  db = mean(p - y).
Gradient gradient(const ModelParams& params, const Eigen::Ref<const Matrix>& X,
                  const Eigen::Ref<const Vector>& y, double lambda);
Gradient gradient(const ModelParams& params, const LabeledDataset& data, double lambda);

/// local_iters full-batch gradient-descent steps from `start`.
ModelParams local_update(const ModelParams& start, const Eigen::Ref<const Matrix>& X,
                         const Eigen::Ref<const Vector>& y, const TrainingHyperparams& hp);
ModelParams local_update(const ModelParams& start, const LabeledDataset& data,
                         const TrainingHyperparams& hp);

/// Labels as a 0/1 double vector; rejects anything non-binary.
Vector binary_targets(const LabeledDataset& data);

}  // namespace flr
