#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "enskit/prediction_matrix.hpp"

namespace enskit {

/// What the majority vote does when two or more classes tie for the largest
/// vote mass (equal within 1e-12):
///   LowestIndex — predict the smallest tied class index (deterministic).
///   Pessimistic — emit the sentinel `kTieSentinel`, which never equals any
///   label, so the example counts as an error. This realizes the bound
///   chain's P(W >= 1/2) exactly.
enum class TieRule { LowestIndex, Pessimistic };

inline constexpr int kTieSentinel = -1;

// Parses "lowest-index" or "pessimistic"; throws ConfigError otherwise.
TieRule parse_tie_rule(const std::string& name);
std::string tie_rule_name(TieRule rule);

struct MajorityVote {
  std::vector<int> predictions;  // per example; kTieSentinel under Pessimistic
  std::size_t tie_count = 0;     // examples whose top vote mass was tied
};

MajorityVote majority_vote(const PredictionMatrix& pm, TieRule rule);

// Weighted average of the individual classifiers' error rates,
// sum_i weights[i] * L(h_i).
double average_error(const PredictionMatrix& pm);

// Error rate of the majority vote itself.
double majority_vote_error(const PredictionMatrix& pm, TieRule rule);

// Probability that two classifiers drawn independently from the weight
// distribution disagree on a random example. Includes the (zero) diagonal
// h = h' pairs; computed as (1/m) * sum_j (1 - ||mass_j||^2).
double disagreement(const PredictionMatrix& pm);

// Probability that two independently drawn classifiers are both wrong,
// (1/m) * sum_j w[j]^2.
double tandem_loss(const PredictionMatrix& pm);

struct MarginMoments {
  double mean = 0.0;
  double sq_mean = 0.0;
};

// Moments of the voting margin: correct-class vote mass minus the largest
// wrong-class vote mass, per example.
MarginMoments margin_moments(const PredictionMatrix& pm);

/// Every scalar diagnostic of an ensemble in one record. `eir` (ensemble
/// improvement rate, (avg-mv)/avg) and `der` (disagreement-error ratio,
/// disagreement/avg) are undefined when avg_error = 0; then
/// `zero_error_warning` is set instead of emitting NaN.
struct DiagnosticsReport {
  double avg_error = 0.0;
  double mv_error = 0.0;
  double disagreement = 0.0;
  double tandem = 0.0;
  std::optional<double> eir;
  std::optional<double> der;
  double margin_mean = 0.0;
  double margin_sq_mean = 0.0;
  std::size_t tie_count = 0;
  int num_classes = 2;
  TieRule tie_rule = TieRule::LowestIndex;
  bool zero_error_warning = false;
};

DiagnosticsReport diagnostics(const PredictionMatrix& pm, TieRule rule);

// Flat JSON object, field names as in DiagnosticsReport; eir/der are null
// when undefined.
std::string diagnostics_to_json(const DiagnosticsReport& report, int indent = 2);

}  // namespace enskit
