#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace enskit {

/// How many features each split considers: all of them, or a fresh random
/// subset of floor(sqrt(d)) (the random-forest default).
enum class FeatureSubset { All, Sqrt };

FeatureSubset parse_feature_subset(const std::string& name);
std::string feature_subset_name(FeatureSubset subset);

/// Axis-aligned binary decision tree. Internal nodes route x[feature] <=
/// threshold to `left`; leaves carry `prediction`.
struct CartTree {
  struct Node {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int prediction = -1;  // leaf majority label; -1 on internal nodes
  };
  std::vector<Node> nodes;  // nodes[0] is the root

  int predict_one(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
  std::vector<int> predict(const Eigen::MatrixXd& x) const;
  std::size_t leaf_count() const;
};

// Grows the tree best-first: the frontier leaf whose best split gives the
// largest size-weighted Gini decrease is split next, until max_leaf_nodes
// leaves exist or every leaf is pure or unsplittable. Splits with zero
// decrease are allowed on impure nodes (an impurity-neutral cut can open
// pure children two levels down, e.g. on XOR data); pure nodes are final.
// Tie-breaks are total: within a node, smaller feature index then smaller
// threshold; across the frontier, earlier-created node. When the sampled
// feature subset admits no valid split but the node is impure, the search
// falls back to all features, so saturation means genuinely unsplittable.
// Throws ParameterError unless max_leaf_nodes >= 2 and shapes agree.
CartTree fit_cart_tree(const Eigen::MatrixXd& x, const std::vector<int>& y,
                       int num_classes, std::size_t max_leaf_nodes,
                       FeatureSubset subset, std::uint64_t seed);

}  // namespace enskit
