#include "flr/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

namespace flr {
namespace {

// RFC-4180-ish field splitting: quotes may wrap a field and escape the
// delimiter; doubled quotes inside a quoted field collapse to one.
std::vector<std::string> split_csv_line(const std::string& line, char delim) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == delim) {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

bool parse_double(const std::string& s, double& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

}  // namespace

LoadResult load_csv(const std::string& path, const std::string& target_column,
                    const std::vector<std::string>& numeric_columns,
                    char delimiter) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open file: " + path);
  if (numeric_columns.empty()) throw data_error("no numeric columns selected");

  std::string line;
  if (!std::getline(in, line)) throw data_error("empty file: " + path);
  if (line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);  // UTF-8 BOM
  const std::vector<std::string> header = split_csv_line(line, delimiter);

  auto column_index = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (trim(header[i]) == name) return static_cast<long>(i);
    }
    throw data_error("column not found in header: " + name);
  };

  const long target_idx = column_index(target_column);
  std::vector<long> feature_idx;
  feature_idx.reserve(numeric_columns.size());
  for (const auto& name : numeric_columns) feature_idx.push_back(column_index(name));

  std::vector<std::vector<double>> rows;
  std::vector<std::string> raw_labels;
  std::size_t dropped = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line, delimiter);
    bool ok = static_cast<long>(fields.size()) == static_cast<long>(header.size());
    std::vector<double> row(feature_idx.size());
    if (ok) {
      for (std::size_t j = 0; j < feature_idx.size(); ++j) {
        if (!parse_double(fields[static_cast<std::size_t>(feature_idx[j])], row[j])) {
          ok = false;
          break;
        }
      }
    }
    std::string label;
    if (ok) {
      label = trim(fields[static_cast<std::size_t>(target_idx)]);
      ok = !label.empty();
    }
    if (!ok) {
      ++dropped;
      continue;
    }
    rows.push_back(std::move(row));
    raw_labels.push_back(std::move(label));
  }

  if (rows.empty()) throw data_error("no usable rows after cleaning: " + path);

  std::map<std::string, int> label_ids;  // lexicographic encoding
  for (const auto& l : raw_labels) label_ids.emplace(l, 0);
  if (label_ids.size() < 2) throw data_error("target has fewer than 2 classes after cleaning");
  int next = 0;
  for (auto& [name, id] : label_ids) id = next++;

  LoadResult result;
  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index d = static_cast<Eigen::Index>(numeric_columns.size());
  result.data.features.values.resize(n, d);
  result.data.features.feature_names = numeric_columns;
  result.data.labels.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      result.data.features.values(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    result.data.labels[i] = label_ids.at(raw_labels[static_cast<std::size_t>(i)]);
  }
  result.data.class_names.resize(label_ids.size());
  for (const auto& [name, id] : label_ids) result.data.class_names[static_cast<std::size_t>(id)] = name;
  result.rows_dropped = dropped;
  return result;
}

MomentSummary summarize(const Matrix& features) {
  MomentSummary s;
  s.count = features.rows();
  s.sum = features.colwise().sum();
  s.sum_squares = features.array().square().colwise().sum();
  return s;
}

StandardizationStats pooled_stats(const std::vector<MomentSummary>& summaries) {
  if (summaries.empty()) throw data_error("pooled_stats: no summaries");
  const Eigen::Index d = summaries.front().sum.size();
  std::int64_t total = 0;
  Vector sum = Vector::Zero(d);
  Vector sum_sq = Vector::Zero(d);
  for (const auto& s : summaries) {
    if (s.sum.size() != d || s.sum_squares.size() != d) {
      throw data_error("pooled_stats: mismatched summary dimensions");
    }
    total += s.count;
    sum += s.sum;
    sum_sq += s.sum_squares;
  }
  if (total < 2) throw data_error("pooled_stats: need at least 2 samples");

  StandardizationStats stats;
  const double n = static_cast<double>(total);
  stats.mean = sum / n;
  stats.std_dev.resize(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double mean_square = sum_sq[j] / n;
    double var = mean_square - stats.mean[j] * stats.mean[j];
    // Pooling sums of squares cancels catastrophically for constant
    // columns; variance at rounding-noise level relative to the raw
    // second moment counts as zero.
    if (var <= 1e-12 * mean_square) var = 0.0;
    stats.std_dev[j] = var == 0.0 ? 1.0 : std::sqrt(var);
  }
  return stats;
}

Matrix standardize(const Matrix& features, const StandardizationStats& stats) {
  if (features.cols() != stats.mean.size()) {
    throw data_error("standardize: dimension mismatch");
  }
  return (features.rowwise() - stats.mean.transpose()).array().rowwise() /
         stats.std_dev.transpose().array();
}

LabeledDataset standardize(const LabeledDataset& data,
                           const StandardizationStats& stats) {
  LabeledDataset out = data;
  out.features.values = standardize(data.features.values, stats);
  return out;
}

std::pair<LabeledDataset, LabeledDataset> train_test_split(
    const LabeledDataset& data, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw config_error("test_fraction must lie in (0, 1)");
  }
  const int num_classes = data.num_classes();
  std::vector<std::vector<Eigen::Index>> by_class(static_cast<std::size_t>(num_classes));
  for (Eigen::Index i = 0; i < data.labels.size(); ++i) {
    by_class[static_cast<std::size_t>(data.labels[i])].push_back(i);
  }
  for (int c = 0; c < num_classes; ++c) {
    if (by_class[static_cast<std::size_t>(c)].size() < 2) {
      throw data_error("train_test_split: class " + data.class_names[static_cast<std::size_t>(c)] +
                       " has fewer than 2 samples");
    }
  }

  std::mt19937_64 rng(seed);
  std::vector<Eigen::Index> train_rows, test_rows;
  for (auto& rows : by_class) {
    std::shuffle(rows.begin(), rows.end(), rng);
    const auto take = static_cast<std::size_t>(
        std::llround(static_cast<double>(rows.size()) * test_fraction));
    test_rows.insert(test_rows.end(), rows.begin(), rows.begin() + static_cast<long>(take));
    train_rows.insert(train_rows.end(), rows.begin() + static_cast<long>(take), rows.end());
  }
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());
  return {subset(data, train_rows), subset(data, test_rows)};
}

LabeledDataset subset(const LabeledDataset& data,
                      std::span<const Eigen::Index> rows) {
  LabeledDataset out;
  out.features.feature_names = data.features.feature_names;
  out.class_names = data.class_names;
  out.features.values.resize(static_cast<Eigen::Index>(rows.size()), data.num_features());
  out.labels.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.features.values.row(static_cast<Eigen::Index>(i)) = data.features.values.row(rows[i]);
    out.labels[static_cast<Eigen::Index>(i)] = data.labels[rows[i]];
  }
  return out;
}

}  // namespace flr
