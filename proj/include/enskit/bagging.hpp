#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "enskit/cart.hpp"
#include "enskit/dataset.hpp"
#include "enskit/linear_model.hpp"
#include "enskit/prediction_matrix.hpp"

namespace enskit {

enum class ModelFamilyKind { RandomFeatures, Cart };

ModelFamilyKind parse_model_family(const std::string& name);
std::string model_family_name(ModelFamilyKind kind);

/// A member recipe plus its capacity knob: the number of random ReLU
/// features, or the tree's maximum leaf count.
struct ModelFamily {
  ModelFamilyKind kind = ModelFamilyKind::RandomFeatures;
  std::size_t capacity = 1;
  LogisticConfig logistic;  // random-features members only
  FeatureSubset cart_features = FeatureSubset::Sqrt;
};

/// A bagged ensemble evaluated on the dataset's test split. in_bag_errors[i]
/// is member i's error on its own bootstrap sample — the only training rows
/// it ever saw — and in_bag_indices[i] lists that sample (dataset row ids,
/// with multiplicity).
struct TrainedEnsemble {
  std::size_t capacity = 0;
  std::uint64_t seed = 0;
  std::vector<double> in_bag_errors;
  std::vector<std::vector<std::size_t>> in_bag_indices;
  PredictionMatrix test_predictions;
};

// Trains `members` bootstrap members. Member i's seed is derived from the
// master seed and i alone (never from the capacity), so sweeping the
// capacity re-trains the same bootstrap samples. Uniform ensemble weights.
TrainedEnsemble train_bagged_ensemble(const Dataset& dataset,
                                      const ModelFamily& family,
                                      std::size_t members, std::uint64_t seed);

struct SweepRow {
  std::size_t capacity = 0;
  double avg_error = 0.0;
  double mv_error = 0.0;
  std::optional<double> eir;
  std::optional<double> der;
  double mean_in_bag_error = 0.0;
  bool interpolating = false;  // true iff every member is at exactly 0
};

struct SweepResult {
  std::vector<SweepRow> rows;
  // Smallest capacity whose ensemble interpolates, if any does.
  std::optional<std::size_t> interpolation_threshold;
};

// One ensemble per grid point (strictly ascending capacities), diagnostics
// on the test split under the lowest-index tie rule.
SweepResult capacity_sweep(const Dataset& dataset, ModelFamily family,
                           std::span<const std::size_t> capacity_grid,
                           std::size_t members, std::uint64_t seed);

// CSV columns: capacity,avg_error,mv_error,eir,der,mean_in_bag_error,
// interpolating. Undefined eir/der cells are left empty.
std::string sweep_to_csv(const SweepResult& result);
std::string sweep_to_json(const SweepResult& result, int indent = 2);

}  // namespace enskit
