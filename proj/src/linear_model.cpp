#include "enskit/linear_model.hpp"

#include <cmath>
#include <limits>

#include "enskit/errors.hpp"
#include "enskit/rng.hpp"

namespace enskit {

ReluFeatureMap make_relu_feature_map(std::size_t dim, std::size_t n_features,
                                     std::uint64_t seed) {
  if (dim < 1 || n_features < 1) {
    throw ParameterError("feature map needs dim >= 1 and n_features >= 1");
  }
  ReluFeatureMap map;
  map.u.resize(static_cast<Eigen::Index>(n_features),
               static_cast<Eigen::Index>(dim));
  Rng rng(seed);
  for (Eigen::Index r = 0; r < map.u.rows(); ++r) {
    double norm_sq = 0.0;
    do {  // normalized Gaussian = uniform on the sphere; reject ~zero draws
      norm_sq = 0.0;
      for (Eigen::Index c = 0; c < map.u.cols(); ++c) {
        const double g = rng.next_normal();
        map.u(r, c) = g;
        norm_sq += g * g;
      }
    } while (norm_sq < 1e-24);
    map.u.row(r) /= std::sqrt(norm_sq);
  }
  return map;
}

Eigen::MatrixXd random_relu_features(const Eigen::MatrixXd& x,
                                     std::size_t n_features,
                                     std::uint64_t seed) {
  return make_relu_feature_map(static_cast<std::size_t>(x.cols()), n_features,
                               seed)
      .transform(x);
}

std::vector<int> LinearModel::predict(const Eigen::MatrixXd& z) const {
  const Eigen::MatrixXd scores =
      (z * weights.transpose()).rowwise() + biases.transpose();
  std::vector<int> out(static_cast<std::size_t>(z.rows()));
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    int best = 0;
    for (Eigen::Index k = 1; k < scores.cols(); ++k) {
      if (scores(i, k) > scores(i, best)) best = static_cast<int>(k);
    }
    out[static_cast<std::size_t>(i)] = best;
  }
  return out;
}

namespace {

// Row-stabilized log-sum-exp scores shared by loss and gradient.
Eigen::MatrixXd class_scores(const Eigen::MatrixXd& z,
                             const Eigen::MatrixXd& weights,
                             const Eigen::VectorXd& biases) {
  return (z * weights.transpose()).rowwise() + biases.transpose();
}

}  // namespace

double multinomial_logistic_loss(const Eigen::MatrixXd& z,
                                 const std::vector<int>& y,
                                 const Eigen::MatrixXd& weights,
                                 const Eigen::VectorXd& biases, double l2) {
  const Eigen::MatrixXd scores = class_scores(z, weights, biases);
  const Eigen::VectorXd row_max = scores.rowwise().maxCoeff();
  const Eigen::VectorXd lse =
      ((scores.colwise() - row_max).array().exp().rowwise().sum().log() +
       row_max.array())
          .matrix();
  double data = 0.0;
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    data += lse(i) - scores(i, y[static_cast<std::size_t>(i)]);
  }
  data /= static_cast<double>(scores.rows());
  return data + 0.5 * l2 * weights.squaredNorm();
}

void multinomial_logistic_gradient(const Eigen::MatrixXd& z,
                                   const std::vector<int>& y,
                                   const Eigen::MatrixXd& weights,
                                   const Eigen::VectorXd& biases, double l2,
                                   Eigen::MatrixXd& grad_weights,
                                   Eigen::VectorXd& grad_biases) {
  const Eigen::MatrixXd scores = class_scores(z, weights, biases);
  const Eigen::VectorXd row_max = scores.rowwise().maxCoeff();
  Eigen::MatrixXd probs = (scores.colwise() - row_max).array().exp().matrix();
  const Eigen::VectorXd row_sum = probs.rowwise().sum();
  probs.array().colwise() /= row_sum.array();
  for (Eigen::Index i = 0; i < probs.rows(); ++i) {
    probs(i, y[static_cast<std::size_t>(i)]) -= 1.0;
  }
  const double inv_n = 1.0 / static_cast<double>(probs.rows());
  grad_weights = inv_n * (probs.transpose() * z) + l2 * weights;
  grad_biases = inv_n * probs.colwise().sum().transpose();
}

LinearModel fit_multinomial_logistic(const Eigen::MatrixXd& z,
                                     const std::vector<int>& y,
                                     int num_classes,
                                     const LogisticConfig& config) {
  if (num_classes < 2) throw ParameterError("logistic fit needs >= 2 classes");
  if (static_cast<std::size_t>(z.rows()) != y.size() || z.rows() < 1) {
    throw ParameterError("feature rows and labels must match and be non-empty");
  }
  if (!z.allFinite()) throw NonFiniteError("feature matrix is not finite");
  for (int label : y) {
    if (label < 0 || label >= num_classes) {
      throw LabelRangeError("label outside {0..K-1} in logistic fit");
    }
  }

  LinearModel model;
  model.weights = Eigen::MatrixXd::Zero(num_classes, z.cols());
  model.biases = Eigen::VectorXd::Zero(num_classes);

  double loss = multinomial_logistic_loss(z, y, model.weights, model.biases,
                                          config.l2_strength);
  if (!std::isfinite(loss)) throw NonFiniteError("initial loss is not finite");

  Eigen::MatrixXd grad_w;
  Eigen::VectorXd grad_b;
  double step = 1.0;
  for (std::size_t iter = 0; iter < config.max_iters; ++iter) {
    multinomial_logistic_gradient(z, y, model.weights, model.biases,
                                  config.l2_strength, grad_w, grad_b);
    const double grad_inf = std::max(grad_w.cwiseAbs().maxCoeff(),
                                     grad_b.cwiseAbs().maxCoeff());
    if (grad_inf < config.tol) break;
    const double grad_sq = grad_w.squaredNorm() + grad_b.squaredNorm();

    // Armijo backtracking; the trial step doubles after a success so the
    // search recovers from overly cautious steps.
    step = std::min(step * 2.0, 1e6);
    bool accepted = false;
    while (step >= 1e-20) {
      const Eigen::MatrixXd trial_w = model.weights - step * grad_w;
      const Eigen::VectorXd trial_b = model.biases - step * grad_b;
      const double trial_loss = multinomial_logistic_loss(
          z, y, trial_w, trial_b, config.l2_strength);
      if (std::isfinite(trial_loss) &&
          trial_loss <= loss - 1e-4 * step * grad_sq) {
        model.weights = trial_w;
        model.biases = trial_b;
        loss = trial_loss;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // at numerical floor; no descent step exists
  }
  return model;
}

}  // namespace enskit
