#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include <Eigen/Dense>

namespace enskit {

/// A feature/label table with a fixed train/test split baked in. Rows are
/// examples; labels are dense class indices.
struct Dataset {
  Eigen::MatrixXd features;            // n x d
  std::vector<int> labels;             // n
  std::vector<std::size_t> train_idx;  // sorted, disjoint from test_idx
  std::vector<std::size_t> test_idx;   // sorted
  int num_classes = 2;

  std::size_t size() const { return labels.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(features.cols()); }
};

// Synthetic K-cluster data: class k is an isotropic Gaussian (std 1/3)
// centered at (class_sep/sqrt(2)) * e_k, so every pair of means is exactly
// class_sep apart (this needs k <= d). Classes are balanced; the split is
// a seeded 75/25 shuffle; exactly round(label_noise * train size) training
// labels are then flipped to a uniformly random other class. Test labels
// are never touched. Throws ParameterError on invalid ranges
// (n >= 10*k, 2 <= k <= d, label_noise in [0, 0.5), class_sep >= 0).
Dataset make_blobs(std::size_t n, std::size_t d, int k, double class_sep,
                   double label_noise, std::uint64_t seed);

// Reads `label,f_1,...,f_d` rows (an optional literal header row is
// skipped) and applies a seeded shuffled split with the given test
// fraction. Throws ParseError on malformed rows, ParameterError when the
// fraction leaves either side empty.
Dataset load_dataset_csv(const std::filesystem::path& path,
                         double test_fraction, std::uint64_t seed);

// Writes `label,f_1,...,f_d` rows (shortest round-trip doubles; the split
// is runtime state and is not serialized).
void save_dataset_csv(const Dataset& dataset,
                      const std::filesystem::path& path);

}  // namespace enskit
