#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "flr/metrics.hpp"

using namespace flr;

namespace {

IntVector iv(std::initializer_list<int> values) {
  IntVector out(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (int v : values) out[i++] = v;
  return out;
}

Vector dv(std::initializer_list<double> values) {
  Vector out(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) out[i++] = v;
  return out;
}

// Exhaustive pairwise Mann-Whitney statistic, the AUC oracle: every
// positive/negative pair scores 1, 1/2 on ties, 0 otherwise.
double mann_whitney_auc(const Vector& scores, const IntVector& truth) {
  double total = 0.0;
  long pairs = 0;
  for (Eigen::Index i = 0; i < truth.size(); ++i) {
    if (truth[i] != 1) continue;
    for (Eigen::Index j = 0; j < truth.size(); ++j) {
      if (truth[j] != 0) continue;
      ++pairs;
      if (scores[i] > scores[j]) total += 1.0;
      else if (scores[i] == scores[j]) total += 0.5;
    }
  }
  return total / static_cast<double>(pairs);
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("accuracy counts agreements") {
  CHECK(accuracy(iv({1, 0, 1}), iv({1, 0, 1})) == 1.0);
  CHECK(accuracy(iv({1, 0}), iv({0, 1})) == 0.0);
  CHECK(accuracy(iv({1, 0, 1, 1}), iv({1, 0, 1, 0})) == 0.75);
  CHECK_THROWS_AS(accuracy(iv({1}), iv({1, 0})), data_error);
  CHECK_THROWS_AS(accuracy(IntVector(), IntVector()), data_error);
}

TEST_CASE("f1_binary including zero-division conventions") {
  // TP=1, FP=1, FN=1: precision = recall = 0.5
  CHECK(f1_binary(iv({1, 1, 0}), iv({1, 0, 1})) == doctest::Approx(0.5));
  CHECK(f1_binary(iv({1, 0, 1}), iv({1, 0, 1})) == 1.0);
  CHECK(f1_binary(iv({0, 0, 0}), iv({1, 1, 0})) == 0.0);  // nothing predicted positive
  CHECK(f1_binary(iv({1, 1}), iv({0, 0})) == 0.0);        // no positives exist
}

TEST_CASE("f1_macro averages the per-class one-vs-rest scores") {
  CHECK(f1_macro(iv({0, 1, 2}), iv({0, 1, 2}), 3) == 1.0);

  // C=2 differs from the positive-class F1 by averaging in the negative class
  const IntVector pred = iv({1, 1, 0, 0});
  const IntVector truth = iv({1, 0, 1, 0});
  const double pos = f1_binary(pred, truth);
  const IntVector pred_neg = iv({0, 0, 1, 1});
  const IntVector truth_neg = iv({0, 1, 0, 1});
  const double neg = f1_binary(pred_neg, truth_neg);
  CHECK(f1_macro(pred, truth, 2) == doctest::Approx(0.5 * (pos + neg)));
}

TEST_CASE("f1_macro of uniform random predictions on balanced classes") {
  std::mt19937_64 rng(77);
  const Eigen::Index n = 3000;
  IntVector truth(n), pred(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    truth[i] = static_cast<int>(i % 3);
    pred[i] = static_cast<int>(rng() % 3);
  }
  CHECK(f1_macro(pred, truth, 3) == doctest::Approx(1.0 / 3.0).epsilon(0.15));
}

TEST_CASE("auc_binary on ranked and tied scores") {
  CHECK(auc_binary(dv({0.9, 0.8, 0.2, 0.1}), iv({1, 1, 0, 0})) == 1.0);
  CHECK(auc_binary(dv({0.1, 0.2, 0.8, 0.9}), iv({1, 1, 0, 0})) == 0.0);
  // pos = {0.8, 0.6}, neg = {0.3, 0.6}: pairwise (1 + 1 + 1 + 0.5) / 4
  CHECK(auc_binary(dv({0.8, 0.6, 0.3, 0.6}), iv({1, 1, 0, 0})) == doctest::Approx(0.875));
  CHECK_THROWS_AS(auc_binary(dv({0.5, 0.6}), iv({1, 1})), data_error);
}

TEST_CASE("auc_binary equals the pairwise Mann-Whitney oracle") {
  std::mt19937_64 rng(555);
  std::uniform_int_distribution<int> level(0, 9);  // coarse scores force ties
  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng() % 49);
    Vector scores(n);
    IntVector truth(n);
    bool pos = false, neg = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      scores[i] = level(rng) / 10.0;
      truth[i] = static_cast<int>(rng() % 2);
      (truth[i] == 1 ? pos : neg) = true;
    }
    if (!pos || !neg) {
      truth[0] = 1;
      truth[n - 1] = 0;
    }
    CHECK(std::abs(auc_binary(scores, truth) - mann_whitney_auc(scores, truth)) <= 1e-12);
  }
}

TEST_CASE("auc_binary symmetry and monotone-transform invariance") {
  std::mt19937_64 rng(556);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 4 + static_cast<Eigen::Index>(rng() % 30);
    Vector scores(n);
    IntVector truth(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      scores[i] = static_cast<double>(rng() % 7) / 7.0;
      truth[i] = static_cast<int>(rng() % 2);
    }
    truth[0] = 1;
    truth[n - 1] = 0;
    const double auc = auc_binary(scores, truth);
    CHECK(auc + auc_binary(-scores, truth) == 1.0);
    const Vector transformed = (3.0 * scores).array().exp() + 1.0;
    CHECK(auc_binary(transformed, truth) == auc);
  }
}

TEST_CASE("auc_macro on one-hot and constant scores") {
  const IntVector truth = iv({0, 1, 2, 0, 1, 2});
  Matrix one_hot = Matrix::Zero(6, 3);
  for (Eigen::Index i = 0; i < 6; ++i) one_hot(i, truth[i]) = 1.0;
  CHECK(auc_macro(one_hot, truth) == 1.0);

  const Matrix constant = Matrix::Constant(6, 3, 0.4);
  CHECK(auc_macro(constant, truth) == 0.5);

  Matrix bad = Matrix::Zero(6, 3);
  CHECK_THROWS_AS(auc_macro(bad, iv({0, 1, 0, 1, 0, 1})), data_error);  // class 2 absent
}

TEST_CASE("auc_macro of random scores is near one half") {
  std::mt19937_64 rng(888);
  const Eigen::Index n = 3000;
  Matrix scores(n, 3);
  IntVector truth(n);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    truth[i] = static_cast<int>(i % 3);
    for (Eigen::Index c = 0; c < 3; ++c) scores(i, c) = uniform(rng);
  }
  CHECK(auc_macro(scores, truth) == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("metrics are permutation consistent") {
  std::mt19937_64 rng(321);
  const Eigen::Index n = 40;
  Vector scores(n);
  IntVector truth(n), pred(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    scores[i] = static_cast<double>(rng() % 11) / 10.0;
    truth[i] = static_cast<int>(rng() % 2);
    pred[i] = static_cast<int>(rng() % 2);
  }
  truth[0] = 1;
  truth[1] = 0;
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Vector ps(n);
  IntVector pt(n), pp(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    ps[i] = scores[perm[static_cast<std::size_t>(i)]];
    pt[i] = truth[perm[static_cast<std::size_t>(i)]];
    pp[i] = pred[perm[static_cast<std::size_t>(i)]];
  }
  CHECK(accuracy(pp, pt) == accuracy(pred, truth));
  CHECK(f1_binary(pp, pt) == f1_binary(pred, truth));
  CHECK(auc_binary(ps, pt) == auc_binary(scores, truth));
}

}  // TEST_SUITE
