#include "enskit/bagging.hpp"

#include <algorithm>
#include <utility>

#include <json.hpp>

#include "enskit/errors.hpp"
#include "enskit/metrics.hpp"
#include "enskit/numeric.hpp"
#include "enskit/rng.hpp"

namespace enskit {

ModelFamilyKind parse_model_family(const std::string& name) {
  if (name == "random_features") return ModelFamilyKind::RandomFeatures;
  if (name == "cart") return ModelFamilyKind::Cart;
  throw ConfigError("unknown model family '" + name +
                    "' (expected random_features or cart)");
}

std::string model_family_name(ModelFamilyKind kind) {
  return kind == ModelFamilyKind::RandomFeatures ? "random_features" : "cart";
}

namespace {

Eigen::MatrixXd gather_rows(const Eigen::MatrixXd& features,
                            const std::vector<std::size_t>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), features.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) =
        features.row(static_cast<Eigen::Index>(rows[i]));
  }
  return out;
}

double error_fraction(const std::vector<int>& predictions,
                      const std::vector<int>& labels) {
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (predictions[i] != labels[i]) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(labels.size());
}

}  // namespace

TrainedEnsemble train_bagged_ensemble(const Dataset& dataset,
                                      const ModelFamily& family,
                                      std::size_t members,
                                      std::uint64_t seed) {
  if (members < 1) throw ParameterError("ensemble needs >= 1 member");
  if (dataset.train_idx.empty() || dataset.test_idx.empty()) {
    throw ParameterError("dataset needs non-empty train and test splits");
  }
  if (family.capacity < 1) throw ParameterError("capacity must be >= 1");

  const std::size_t n_train = dataset.train_idx.size();
  const Eigen::MatrixXd test_x = gather_rows(dataset.features, dataset.test_idx);
  std::vector<int> test_labels(dataset.test_idx.size());
  for (std::size_t i = 0; i < dataset.test_idx.size(); ++i) {
    test_labels[i] = dataset.labels[dataset.test_idx[i]];
  }

  std::vector<double> in_bag_errors;
  std::vector<std::vector<std::size_t>> in_bag_indices;
  std::vector<int> all_test_preds;
  all_test_preds.reserve(members * test_labels.size());

  for (std::size_t i = 0; i < members; ++i) {
    const std::uint64_t member_seed = derive_seed(seed, i);
    Rng bootstrap_rng(member_seed);
    std::vector<std::size_t> bag(n_train);
    for (std::size_t t = 0; t < n_train; ++t) {
      bag[t] = dataset.train_idx[bootstrap_rng.next_below(n_train)];
    }

    const Eigen::MatrixXd bag_x = gather_rows(dataset.features, bag);
    std::vector<int> bag_y(bag.size());
    for (std::size_t t = 0; t < bag.size(); ++t) {
      bag_y[t] = dataset.labels[bag[t]];
    }

    const std::uint64_t model_seed = derive_seed(member_seed, 1);
    std::vector<int> bag_preds, test_preds;
    if (family.kind == ModelFamilyKind::RandomFeatures) {
      const ReluFeatureMap map =
          make_relu_feature_map(dataset.dim(), family.capacity, model_seed);
      const Eigen::MatrixXd bag_z = map.transform(bag_x);
      const LinearModel model = fit_multinomial_logistic(
          bag_z, bag_y, dataset.num_classes, family.logistic);
      bag_preds = model.predict(bag_z);
      test_preds = model.predict(map.transform(test_x));
    } else {
      const CartTree tree =
          fit_cart_tree(bag_x, bag_y, dataset.num_classes, family.capacity,
                        family.cart_features, model_seed);
      bag_preds = tree.predict(bag_x);
      test_preds = tree.predict(test_x);
    }

    in_bag_errors.push_back(error_fraction(bag_preds, bag_y));
    in_bag_indices.push_back(std::move(bag));
    all_test_preds.insert(all_test_preds.end(), test_preds.begin(),
                          test_preds.end());
  }

  return TrainedEnsemble{
      family.capacity, seed, std::move(in_bag_errors),
      std::move(in_bag_indices),
      PredictionMatrix(std::move(all_test_preds), members,
                       std::move(test_labels), dataset.num_classes)};
}

SweepResult capacity_sweep(const Dataset& dataset, ModelFamily family,
                           std::span<const std::size_t> capacity_grid,
                           std::size_t members, std::uint64_t seed) {
  if (capacity_grid.empty()) throw ParameterError("capacity grid is empty");
  for (std::size_t i = 0; i + 1 < capacity_grid.size(); ++i) {
    if (capacity_grid[i] >= capacity_grid[i + 1]) {
      throw ParameterError("capacity grid must be strictly ascending");
    }
  }

  SweepResult result;
  for (std::size_t capacity : capacity_grid) {
    family.capacity = capacity;
    const TrainedEnsemble ensemble =
        train_bagged_ensemble(dataset, family, members, seed);
    const DiagnosticsReport report =
        diagnostics(ensemble.test_predictions, TieRule::LowestIndex);

    SweepRow row;
    row.capacity = capacity;
    row.avg_error = report.avg_error;
    row.mv_error = report.mv_error;
    row.eir = report.eir;
    row.der = report.der;
    KahanAccumulator mean;
    bool interpolating = true;
    for (double e : ensemble.in_bag_errors) {
      mean.add(e);
      if (e != 0.0) interpolating = false;
    }
    row.mean_in_bag_error =
        mean.sum() / static_cast<double>(ensemble.in_bag_errors.size());
    row.interpolating = interpolating;
    if (interpolating && !result.interpolation_threshold) {
      result.interpolation_threshold = capacity;
    }
    result.rows.push_back(row);
  }
  return result;
}

std::string sweep_to_csv(const SweepResult& result) {
  std::string out =
      "capacity,avg_error,mv_error,eir,der,mean_in_bag_error,interpolating\n";
  for (const SweepRow& row : result.rows) {
    out += std::to_string(row.capacity) + "," + format_double(row.avg_error) +
           "," + format_double(row.mv_error) + "," +
           (row.eir ? format_double(*row.eir) : std::string()) + "," +
           (row.der ? format_double(*row.der) : std::string()) + "," +
           format_double(row.mean_in_bag_error) + "," +
           (row.interpolating ? "true" : "false") + "\n";
  }
  return out;
}

std::string sweep_to_json(const SweepResult& result, int indent) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = 1;
  auto& rows = doc["rows"] = nlohmann::ordered_json::array();
  for (const SweepRow& row : result.rows) {
    nlohmann::ordered_json r;
    r["capacity"] = row.capacity;
    r["avg_error"] = row.avg_error;
    r["mv_error"] = row.mv_error;
    if (row.eir) r["eir"] = *row.eir; else r["eir"] = nullptr;
    if (row.der) r["der"] = *row.der; else r["der"] = nullptr;
    r["mean_in_bag_error"] = row.mean_in_bag_error;
    r["interpolating"] = row.interpolating;
    rows.push_back(std::move(r));
  }
  if (result.interpolation_threshold) {
    doc["interpolation_threshold"] = *result.interpolation_threshold;
  } else {
    doc["interpolation_threshold"] = nullptr;
  }
  return doc.dump(indent);
}

}  // namespace enskit
