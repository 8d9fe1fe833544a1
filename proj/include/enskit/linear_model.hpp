#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace enskit {

/// Fixed random lift z(x) = max(Ux, 0) with the rows of U drawn uniformly
/// from the unit sphere. The member count of U's rows is the capacity knob
/// of the random-features model family.
struct ReluFeatureMap {
  Eigen::MatrixXd u;  // n_features x d, unit-norm rows

  Eigen::MatrixXd transform(const Eigen::MatrixXd& x) const {
    return (x * u.transpose()).cwiseMax(0.0);
  }
};

ReluFeatureMap make_relu_feature_map(std::size_t dim, std::size_t n_features,
                                     std::uint64_t seed);

// Convenience form of the above: builds the map and applies it to x.
Eigen::MatrixXd random_relu_features(const Eigen::MatrixXd& x,
                                     std::size_t n_features,
                                     std::uint64_t seed);

/// Multinomial logistic classifier on top of a fixed feature matrix.
struct LinearModel {
  Eigen::MatrixXd weights;  // num_classes x n_features
  Eigen::VectorXd biases;   // num_classes

  // Arg-max of the class scores, lowest index on exact ties.
  std::vector<int> predict(const Eigen::MatrixXd& z) const;
};

// Mean softmax cross-entropy plus (l2/2)*||w||_F^2 (biases unpenalized).
double multinomial_logistic_loss(const Eigen::MatrixXd& z,
                                 const std::vector<int>& y,
                                 const Eigen::MatrixXd& weights,
                                 const Eigen::VectorXd& biases, double l2);

// Analytic gradient of the same objective.
void multinomial_logistic_gradient(const Eigen::MatrixXd& z,
                                   const std::vector<int>& y,
                                   const Eigen::MatrixXd& weights,
                                   const Eigen::VectorXd& biases, double l2,
                                   Eigen::MatrixXd& grad_weights,
                                   Eigen::VectorXd& grad_biases);

struct LogisticConfig {
  double l2_strength = 1e-6;  // weak by default so interpolation is reachable
  std::size_t max_iters = 500;
  double tol = 1e-8;  // stop when the gradient infinity-norm drops below
};

// Full-batch gradient descent with Armijo backtracking line search, from a
// zero start. Deterministic. Throws NonFiniteError when the inputs (and
// hence the initial loss) are not finite.
LinearModel fit_multinomial_logistic(const Eigen::MatrixXd& z,
                                     const std::vector<int>& y,
                                     int num_classes,
                                     const LogisticConfig& config = {});

}  // namespace enskit
