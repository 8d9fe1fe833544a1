#include "enskit/prediction_matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "enskit/errors.hpp"
#include "enskit/numeric.hpp"

namespace enskit {

PredictionMatrix::PredictionMatrix(std::vector<int> preds,
                                   std::size_t num_classifiers,
                                   std::vector<int> labels, int num_classes,
                                   std::vector<double> weights)
    : preds_(std::move(preds)),
      num_classifiers_(num_classifiers),
      labels_(std::move(labels)),
      num_classes_(num_classes),
      weights_(std::move(weights)) {
  const std::size_t m = labels_.size();
  if (num_classifiers_ < 1 || m < 1) {
    throw std::invalid_argument("prediction matrix needs M >= 1 and m >= 1");
  }
  if (num_classes_ < 2) {
    throw std::invalid_argument("num_classes must be >= 2");
  }
  if (preds_.size() != num_classifiers_ * m) {
    throw std::invalid_argument("prediction matrix shape mismatch");
  }
  for (int y : labels_) {
    if (y < 0 || y >= num_classes_) {
      throw LabelRangeError("label " + std::to_string(y) +
                            " outside {0.." + std::to_string(num_classes_ - 1) + "}");
    }
  }
  for (int p : preds_) {
    if (p < 0 || p >= num_classes_) {
      throw LabelRangeError("prediction " + std::to_string(p) +
                            " outside {0.." + std::to_string(num_classes_ - 1) + "}");
    }
  }

  if (weights_.empty()) {
    weights_.assign(num_classifiers_, 1.0 / static_cast<double>(num_classifiers_));
    return;
  }
  if (weights_.size() != num_classifiers_) {
    throw WeightError("expected " + std::to_string(num_classifiers_) +
                      " weights, got " + std::to_string(weights_.size()));
  }
  for (double w : weights_) {
    if (!(w >= 0.0)) {
      throw WeightError("weights must be non-negative and finite");
    }
  }
  const double sum = kahan_sum(weights_);
  if (std::abs(sum - 1.0) <= 1e-12) {
    return;  // already normalized; keep the user's values bit-exact
  }
  if (sum < 0.999 || sum > 1.001) {
    throw WeightError("weight sum " + std::to_string(sum) +
                      " outside the renormalizable range [0.999, 1.001]");
  }
  for (double& w : weights_) w /= sum;
}

ClassMassProfile class_mass(const PredictionMatrix& pm) {
  const std::size_t m = pm.num_examples();
  const std::size_t k = static_cast<std::size_t>(pm.num_classes());
  std::vector<double> mass(m * k, 0.0);
  for (std::size_t i = 0; i < pm.num_classifiers(); ++i) {
    const double w = pm.weights()[i];
    const auto row = pm.row(i);
    for (std::size_t j = 0; j < m; ++j) {
      mass[j * k + static_cast<std::size_t>(row[j])] += w;
    }
  }
  return ClassMassProfile(std::move(mass), m, pm.num_classes());
}

ErrorProfile error_profile(const PredictionMatrix& pm) {
  const std::size_t m = pm.num_examples();
  ErrorProfile profile;
  profile.w.assign(m, 0.0);
  for (std::size_t i = 0; i < pm.num_classifiers(); ++i) {
    const double w = pm.weights()[i];
    const auto row = pm.row(i);
    for (std::size_t j = 0; j < m; ++j) {
      if (row[j] != pm.labels()[j]) profile.w[j] += w;
    }
  }
  KahanAccumulator sum, sum_sq;
  for (double wj : profile.w) {
    sum.add(wj);
    sum_sq.add(wj * wj);
  }
  profile.mean_w = sum.sum() / static_cast<double>(m);
  profile.mean_w_sq = sum_sq.sum() / static_cast<double>(m);
  return profile;
}

}  // namespace enskit
