#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "flr/types.hpp"

namespace flr::test {

inline LabeledDataset make_dataset(const std::vector<std::vector<double>>& rows,
                                   const std::vector<int>& labels,
                                   int num_classes = 0) {
  LabeledDataset ds;
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto d = static_cast<Eigen::Index>(rows.front().size());
  ds.features.values.resize(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      ds.features.values(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  for (Eigen::Index j = 0; j < d; ++j) ds.features.feature_names.push_back("f" + std::to_string(j));
  ds.labels.resize(n);
  int max_label = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    ds.labels[i] = labels[static_cast<std::size_t>(i)];
    max_label = std::max(max_label, labels[static_cast<std::size_t>(i)]);
  }
  const int c = num_classes > 0 ? num_classes : max_label + 1;
  for (int k = 0; k < c; ++k) ds.class_names.push_back("class" + std::to_string(k));
  return ds;
}

/// Gaussian blobs: class c has mean `centers[c]`, unit isotropic noise.
inline LabeledDataset gaussian_blobs(const std::vector<Vector>& centers,
                                     Eigen::Index per_class, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  const auto num_classes = static_cast<int>(centers.size());
  const Eigen::Index d = centers.front().size();
  LabeledDataset ds;
  ds.features.values.resize(per_class * num_classes, d);
  ds.labels.resize(per_class * num_classes);
  Eigen::Index row = 0;
  for (int c = 0; c < num_classes; ++c) {
    for (Eigen::Index i = 0; i < per_class; ++i, ++row) {
      for (Eigen::Index j = 0; j < d; ++j) {
        ds.features.values(row, j) = centers[static_cast<std::size_t>(c)][j] + noise(rng);
      }
      ds.labels[row] = c;
    }
  }
  for (Eigen::Index j = 0; j < d; ++j) ds.features.feature_names.push_back("f" + std::to_string(j));
  for (int c = 0; c < num_classes; ++c) ds.class_names.push_back("class" + std::to_string(c));
  return ds;
}

class TempFile {
 public:
  TempFile(const std::string& name, const std::string& content) {
    path_ = (std::filesystem::temp_directory_path() / name).string();
    std::ofstream out(path_);
    out << content;
  }
  ~TempFile() { std::filesystem::remove(path_); }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace flr::test
