#include "enskit/cart.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "enskit/errors.hpp"
#include "enskit/rng.hpp"

namespace enskit {

FeatureSubset parse_feature_subset(const std::string& name) {
  if (name == "all") return FeatureSubset::All;
  if (name == "sqrt") return FeatureSubset::Sqrt;
  throw ConfigError("unknown feature subset '" + name +
                    "' (expected all or sqrt)");
}

std::string feature_subset_name(FeatureSubset subset) {
  return subset == FeatureSubset::All ? "all" : "sqrt";
}

int CartTree::predict_one(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  int at = 0;
  while (nodes[static_cast<std::size_t>(at)].prediction < 0) {
    const Node& node = nodes[static_cast<std::size_t>(at)];
    at = x(node.feature) <= node.threshold ? node.left : node.right;
  }
  return nodes[static_cast<std::size_t>(at)].prediction;
}

std::vector<int> CartTree::predict(const Eigen::MatrixXd& x) const {
  std::vector<int> out(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    out[static_cast<std::size_t>(i)] = predict_one(x.row(i));
  }
  return out;
}

std::size_t CartTree::leaf_count() const {
  std::size_t count = 0;
  for (const Node& node : nodes) {
    if (node.prediction >= 0) count += 1;
  }
  return count;
}

namespace {

// Size-weighted Gini impurity |S| * (1 - sum_c (n_c/|S|)^2) = |S| - sum n_c^2/|S|.
double weighted_gini(const std::vector<std::size_t>& counts, std::size_t size) {
  if (size == 0) return 0.0;
  double sum_sq = 0.0;
  for (std::size_t c : counts) {
    sum_sq += static_cast<double>(c) * static_cast<double>(c);
  }
  return static_cast<double>(size) - sum_sq / static_cast<double>(size);
}

struct Split {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double decrease = -1.0;  // parent impurity minus children impurity
};

// A frontier leaf: its rows, class tally, and the best split it could make
// (computed once, at creation, so the stream of RNG draws depends only on
// node creation order and never on the leaf budget).
struct Leaf {
  int node_id = 0;
  std::vector<std::size_t> rows;
  std::vector<std::size_t> counts;
  double impurity = 0.0;  // size-weighted
  Split split;
};

int majority_label(const std::vector<std::size_t>& counts) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < counts.size(); ++c) {
    if (counts[c] > counts[best]) best = c;  // ties keep the lowest index
  }
  return static_cast<int>(best);
}

class TreeGrower {
public:
  TreeGrower(const Eigen::MatrixXd& x, const std::vector<int>& y,
             int num_classes, FeatureSubset subset, std::uint64_t seed)
      : x_(x), y_(y), num_classes_(num_classes), subset_(subset), rng_(seed) {}

  CartTree grow(std::size_t max_leaf_nodes) {
    CartTree tree;
    tree.nodes.emplace_back();

    std::vector<std::size_t> all_rows(y_.size());
    for (std::size_t i = 0; i < all_rows.size(); ++i) all_rows[i] = i;
    std::vector<Leaf> frontier;
    frontier.push_back(make_leaf(0, std::move(all_rows)));

    std::size_t leaves = 1;
    while (leaves < max_leaf_nodes) {
      // Best-first: largest decrease, earliest-created node on ties.
      int chosen = -1;
      for (std::size_t i = 0; i < frontier.size(); ++i) {
        if (!frontier[i].split.found) continue;
        if (chosen < 0 ||
            frontier[i].split.decrease >
                frontier[static_cast<std::size_t>(chosen)].split.decrease) {
          chosen = static_cast<int>(i);
        }
      }
      if (chosen < 0) break;  // every leaf pure or unsplittable: saturated

      Leaf leaf = std::move(frontier[static_cast<std::size_t>(chosen)]);
      frontier.erase(frontier.begin() + chosen);

      std::vector<std::size_t> left_rows, right_rows;
      for (std::size_t row : leaf.rows) {
        if (x_(static_cast<Eigen::Index>(row), leaf.split.feature) <=
            leaf.split.threshold) {
          left_rows.push_back(row);
        } else {
          right_rows.push_back(row);
        }
      }

      const int left_id = static_cast<int>(tree.nodes.size());
      const int right_id = left_id + 1;
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();
      CartTree::Node& parent = tree.nodes[static_cast<std::size_t>(leaf.node_id)];
      parent.feature = leaf.split.feature;
      parent.threshold = leaf.split.threshold;
      parent.left = left_id;
      parent.right = right_id;
      parent.prediction = -1;

      frontier.push_back(make_leaf(left_id, std::move(left_rows)));
      frontier.push_back(make_leaf(right_id, std::move(right_rows)));
      leaves += 1;
    }

    for (const Leaf& leaf : frontier) {
      tree.nodes[static_cast<std::size_t>(leaf.node_id)].prediction =
          majority_label(leaf.counts);
    }
    return tree;
  }

private:
  Leaf make_leaf(int node_id, std::vector<std::size_t> rows) {
    Leaf leaf;
    leaf.node_id = node_id;
    leaf.rows = std::move(rows);
    leaf.counts.assign(static_cast<std::size_t>(num_classes_), 0);
    for (std::size_t row : leaf.rows) {
      leaf.counts[static_cast<std::size_t>(y_[row])] += 1;
    }
    leaf.impurity = weighted_gini(leaf.counts, leaf.rows.size());
    if (leaf.impurity > 0.0) {  // pure nodes are never split
      leaf.split = best_split(leaf);
    }
    return leaf;
  }

  Split best_split(const Leaf& leaf) {
    Split best = best_split_over(leaf, candidate_features());
    if (!best.found && subset_ == FeatureSubset::Sqrt) {
      // The sampled subset was constant on this node; an impure node must
      // not stall while another feature could still separate it.
      std::vector<int> all(static_cast<std::size_t>(x_.cols()));
      for (std::size_t f = 0; f < all.size(); ++f) all[f] = static_cast<int>(f);
      best = best_split_over(leaf, all);
    }
    return best;
  }

  std::vector<int> candidate_features() {
    const std::size_t d = static_cast<std::size_t>(x_.cols());
    if (subset_ == FeatureSubset::All) {
      std::vector<int> all(d);
      for (std::size_t f = 0; f < d; ++f) all[f] = static_cast<int>(f);
      return all;
    }
    const std::size_t take = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::sqrt(static_cast<double>(d))));
    // Partial Fisher-Yates, then sorted so the feature-index tie-break is
    // independent of sampling order.
    std::vector<int> pool(d);
    for (std::size_t f = 0; f < d; ++f) pool[f] = static_cast<int>(f);
    for (std::size_t i = 0; i < take; ++i) {
      const std::size_t j = i + rng_.next_below(d - i);
      std::swap(pool[i], pool[j]);
    }
    pool.resize(take);
    std::sort(pool.begin(), pool.end());
    return pool;
  }

  Split best_split_over(const Leaf& leaf, const std::vector<int>& features) {
    Split best;
    std::vector<std::pair<double, int>> column(leaf.rows.size());
    std::vector<std::size_t> left_counts(
        static_cast<std::size_t>(num_classes_));
    for (int feature : features) {
      for (std::size_t i = 0; i < leaf.rows.size(); ++i) {
        column[i] = {x_(static_cast<Eigen::Index>(leaf.rows[i]), feature),
                     y_[leaf.rows[i]]};
      }
      std::sort(column.begin(), column.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      std::fill(left_counts.begin(), left_counts.end(), 0);
      std::size_t left_size = 0;
      for (std::size_t i = 0; i + 1 < column.size(); ++i) {
        left_counts[static_cast<std::size_t>(column[i].second)] += 1;
        left_size += 1;
        if (column[i].first == column[i + 1].first) continue;
        const double decrease =
            leaf.impurity - weighted_gini(left_counts, left_size) -
            right_gini(leaf, left_counts, left_size);
        if (!best.found || decrease > best.decrease) {
          // Midpoint threshold, nudged down when rounding would let the
          // right neighbor leak into the left child.
          double threshold = 0.5 * (column[i].first + column[i + 1].first);
          if (!(threshold < column[i + 1].first)) threshold = column[i].first;
          best.found = true;
          best.feature = feature;
          best.threshold = threshold;
          best.decrease = decrease;
        }
      }
    }
    return best;
  }

  double right_gini(const Leaf& leaf, const std::vector<std::size_t>& left,
                    std::size_t left_size) const {
    double sum_sq = 0.0;
    for (std::size_t c = 0; c < left.size(); ++c) {
      const double n = static_cast<double>(leaf.counts[c] - left[c]);
      sum_sq += n * n;
    }
    const std::size_t size = leaf.rows.size() - left_size;
    if (size == 0) return 0.0;
    return static_cast<double>(size) - sum_sq / static_cast<double>(size);
  }

  const Eigen::MatrixXd& x_;
  const std::vector<int>& y_;
  int num_classes_;
  FeatureSubset subset_;
  Rng rng_;
};

}  // namespace

CartTree fit_cart_tree(const Eigen::MatrixXd& x, const std::vector<int>& y,
                       int num_classes, std::size_t max_leaf_nodes,
                       FeatureSubset subset, std::uint64_t seed) {
  if (max_leaf_nodes < 2) throw ParameterError("max_leaf_nodes must be >= 2");
  if (static_cast<std::size_t>(x.rows()) != y.size() || y.empty()) {
    throw ParameterError("rows and labels must match and be non-empty");
  }
  if (num_classes < 2) throw ParameterError("tree fit needs >= 2 classes");
  for (int label : y) {
    if (label < 0 || label >= num_classes) {
      throw LabelRangeError("label outside {0..K-1} in tree fit");
    }
  }
  return TreeGrower(x, y, num_classes, subset, seed).grow(max_leaf_nodes);
}

}  // namespace enskit
