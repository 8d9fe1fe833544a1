#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace enskit {

/// Hard-label predictions of a finite weighted ensemble on a fixed evaluation
/// set: M classifiers x m examples, classes 0..K-1, classifier weights
/// summing to 1. Immutable after construction; all invariants are checked in
/// the constructor.
class PredictionMatrix {
public:
  /// `preds` is row-major, one row of length `labels.size()` per classifier.
  /// Empty `weights` means uniform 1/M. Weights must be non-negative; a sum
  /// within [0.999, 1.001] is renormalized (kept as-is when already within
  /// 1e-12 of 1), anything else is a WeightError.
  PredictionMatrix(std::vector<int> preds, std::size_t num_classifiers,
                   std::vector<int> labels, int num_classes,
                   std::vector<double> weights = {});

  std::size_t num_classifiers() const { return num_classifiers_; }
  std::size_t num_examples() const { return labels_.size(); }
  int num_classes() const { return num_classes_; }

  int pred(std::size_t classifier, std::size_t example) const {
    return preds_[classifier * labels_.size() + example];
  }
  std::span<const int> row(std::size_t classifier) const {
    return {preds_.data() + classifier * labels_.size(), labels_.size()};
  }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<double>& weights() const { return weights_; }

  bool operator==(const PredictionMatrix&) const = default;

private:
  std::vector<int> preds_;
  std::size_t num_classifiers_;
  std::vector<int> labels_;
  int num_classes_;
  std::vector<double> weights_;
};

/// Per-example distribution of the weighted class vote:
/// mass[j][k] = sum_i weights[i] * 1(preds[i][j] = k). Rows sum to 1.
class ClassMassProfile {
public:
  ClassMassProfile(std::vector<double> mass, std::size_t num_examples,
                   int num_classes)
      : mass_(std::move(mass)),
        num_examples_(num_examples),
        num_classes_(num_classes) {}

  std::size_t num_examples() const { return num_examples_; }
  int num_classes() const { return num_classes_; }
  std::span<const double> row(std::size_t example) const {
    return {mass_.data() + example * static_cast<std::size_t>(num_classes_),
            static_cast<std::size_t>(num_classes_)};
  }

private:
  std::vector<double> mass_;
  std::size_t num_examples_;
  int num_classes_;
};

/// Empirical law of the per-example error mass: w[j] is the weighted fraction
/// of classifiers that are wrong on example j.
struct ErrorProfile {
  std::vector<double> w;
  double mean_w = 0.0;
  double mean_w_sq = 0.0;
};

ClassMassProfile class_mass(const PredictionMatrix& pm);
ErrorProfile error_profile(const PredictionMatrix& pm);

}  // namespace enskit
