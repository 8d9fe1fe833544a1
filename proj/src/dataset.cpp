#include "enskit/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <string_view>

#include "enskit/errors.hpp"
#include "enskit/numeric.hpp"
#include "enskit/rng.hpp"

namespace enskit {

namespace {

constexpr double kClusterStd = 1.0 / 3.0;

std::vector<std::size_t> shuffled_indices(std::size_t n, Rng& rng) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = n; i > 1; --i) {  // Fisher-Yates
    std::swap(idx[i - 1], idx[rng.next_below(i)]);
  }
  return idx;
}

// Splits a seeded shuffle of [0, n) into sorted test/train index sets.
void assign_split(Dataset& dataset, std::size_t test_count, Rng& rng) {
  const std::size_t n = dataset.size();
  if (test_count < 1 || test_count >= n) {
    throw ParameterError("train/test split leaves one side empty");
  }
  const std::vector<std::size_t> order = shuffled_indices(n, rng);
  dataset.test_idx.assign(order.begin(), order.begin() + test_count);
  dataset.train_idx.assign(order.begin() + test_count, order.end());
  std::sort(dataset.test_idx.begin(), dataset.test_idx.end());
  std::sort(dataset.train_idx.begin(), dataset.train_idx.end());
}

}  // namespace

Dataset make_blobs(std::size_t n, std::size_t d, int k, double class_sep,
                   double label_noise, std::uint64_t seed) {
  if (k < 2) throw ParameterError("make_blobs needs k >= 2");
  if (n < 10 * static_cast<std::size_t>(k)) {
    throw ParameterError("make_blobs needs n >= 10*k");
  }
  if (d < static_cast<std::size_t>(k)) {
    throw ParameterError("make_blobs places means on axes, needs d >= k");
  }
  if (!(label_noise >= 0.0 && label_noise < 0.5)) {
    throw ParameterError("label_noise must lie in [0, 0.5)");
  }
  if (!(class_sep >= 0.0)) throw ParameterError("class_sep must be >= 0");

  Dataset dataset;
  dataset.num_classes = k;
  dataset.labels.resize(n);
  dataset.features.resize(static_cast<Eigen::Index>(n),
                          static_cast<Eigen::Index>(d));

  // Mean of class c sits at (class_sep/sqrt(2)) * e_c.
  const double radius = class_sep / std::sqrt(2.0);
  Rng feature_rng(derive_seed(seed, 0));
  for (std::size_t j = 0; j < n; ++j) {
    const int label = static_cast<int>(j % static_cast<std::size_t>(k));
    dataset.labels[j] = label;
    for (std::size_t c = 0; c < d; ++c) {
      double value = kClusterStd * feature_rng.next_normal();
      if (c == static_cast<std::size_t>(label)) value += radius;
      dataset.features(static_cast<Eigen::Index>(j),
                       static_cast<Eigen::Index>(c)) = value;
    }
  }

  Rng split_rng(derive_seed(seed, 1));
  assign_split(dataset, n / 4, split_rng);

  // Flip an exact count of training labels; test labels stay clean.
  Rng noise_rng(derive_seed(seed, 2));
  const std::size_t flips = static_cast<std::size_t>(
      std::llround(label_noise * static_cast<double>(dataset.train_idx.size())));
  std::vector<std::size_t> pool = dataset.train_idx;
  for (std::size_t i = pool.size(); i > 1; --i) {
    std::swap(pool[i - 1], pool[noise_rng.next_below(i)]);
  }
  for (std::size_t i = 0; i < flips; ++i) {
    const std::size_t row = pool[i];
    const int old_label = dataset.labels[row];
    const int draw = static_cast<int>(
        noise_rng.next_below(static_cast<std::uint64_t>(k - 1)));
    dataset.labels[row] = draw < old_label ? draw : draw + 1;
  }
  return dataset;
}

Dataset load_dataset_csv(const std::filesystem::path& path,
                         double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ParameterError("test_fraction must lie in (0, 1)");
  }
  std::ifstream file(path);
  if (!file) throw ParseError("cannot open " + path.string());

  std::vector<int> labels;
  std::vector<double> values;  // row-major feature buffer
  std::size_t dim = 0;
  std::size_t line_no = 0;
  for (std::string line; std::getline(file, line);) {
    ++line_no;
    std::string_view sv(line);
    while (!sv.empty() && (sv.back() == '\r' || sv.back() == ' ')) {
      sv.remove_suffix(1);
    }
    if (sv.empty()) continue;
    if (line_no == 1 && sv.starts_with("label")) continue;  // optional header

    std::vector<double> row;
    std::size_t start = 0;
    while (start <= sv.size()) {
      const std::size_t comma = sv.find(',', start);
      std::string_view cell =
          sv.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                           : comma - start);
      while (!cell.empty() && cell.front() == ' ') cell.remove_prefix(1);
      while (!cell.empty() && cell.back() == ' ') cell.remove_suffix(1);
      double value = 0.0;
      const auto [ptr, ec] =
          std::from_chars(cell.begin(), cell.end(), value);
      if (ec != std::errc{} || ptr != cell.end()) {
        throw ParseError("dataset line " + std::to_string(line_no) +
                         ": bad number '" + std::string(cell) + "'");
      }
      row.push_back(value);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (row.size() < 2) {
      throw ParseError("dataset line " + std::to_string(line_no) +
                       ": need a label and at least one feature");
    }
    const double label_real = row[0];
    const int label = static_cast<int>(label_real);
    if (label < 0 || static_cast<double>(label) != label_real) {
      throw ParseError("dataset line " + std::to_string(line_no) +
                       ": label must be a non-negative integer");
    }
    if (dim == 0) {
      dim = row.size() - 1;
    } else if (row.size() - 1 != dim) {
      throw ParseError("dataset line " + std::to_string(line_no) +
                       ": expected " + std::to_string(dim) + " features");
    }
    labels.push_back(label);
    values.insert(values.end(), row.begin() + 1, row.end());
  }
  if (labels.empty()) throw ParseError("dataset file has no rows");

  Dataset dataset;
  dataset.labels = std::move(labels);
  const std::size_t n = dataset.labels.size();
  dataset.features.resize(static_cast<Eigen::Index>(n),
                          static_cast<Eigen::Index>(dim));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t c = 0; c < dim; ++c) {
      dataset.features(static_cast<Eigen::Index>(j),
                       static_cast<Eigen::Index>(c)) = values[j * dim + c];
    }
  }
  dataset.num_classes = std::max(
      2, *std::max_element(dataset.labels.begin(), dataset.labels.end()) + 1);

  Rng split_rng(derive_seed(seed, 1));
  const auto test_count = static_cast<std::size_t>(
      std::llround(test_fraction * static_cast<double>(n)));
  assign_split(dataset, test_count, split_rng);
  return dataset;
}

void save_dataset_csv(const Dataset& dataset,
                      const std::filesystem::path& path) {
  std::ofstream file(path);
  if (!file) throw ParseError("cannot write " + path.string());
  for (std::size_t j = 0; j < dataset.size(); ++j) {
    std::string line = std::to_string(dataset.labels[j]);
    for (std::size_t c = 0; c < dataset.dim(); ++c) {
      line += "," + format_double(dataset.features(
                        static_cast<Eigen::Index>(j),
                        static_cast<Eigen::Index>(c)));
    }
    file << line << "\n";
  }
}

}  // namespace enskit
