#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "enskit/competence.hpp"
#include "enskit/metrics.hpp"
#include "enskit/prediction_matrix.hpp"

namespace enskit {

/// Which hypotheses each bound needs before it says anything about the data.
/// Bounds are always computed; a false flag means "reported for information
/// only" (e.g. the competence-conditional bounds on an incompetent ensemble).
struct BoundApplicability {
  bool first_order_ub = true;   // unconditional
  bool competent_ub = false;    // needs competence
  bool second_order_ub = false; // needs competence
  bool prior_binary_ub = false; // needs K = 2 (unconditional otherwise)
  bool c_bound = false;         // needs margin_mean > 0
  bool mv_lower = true;         // unconditional
  bool eir_ub = false;          // needs avg_error > 0 (no competence)
  bool eir_lb = false;          // needs competence and avg_error > 0
};

/// Every majority-vote bound evaluated on one ensemble. Raw values are
/// the formulas verbatim; the unsuffixed fields are clipped into [0,1] for
/// display (upper bounds from above and below, the lower bound from below
/// at 0 is NOT applied — mv_lower may be negative, which is information).
struct BoundTable {
  double first_order_ub_raw = 0.0;  // 2 * avg_error
  double first_order_ub = 0.0;      // clipped to <= 1
  double competent_ub = 0.0;        // avg_error itself
  double second_order_ub_raw = 0.0; // (4(K-1)/K) * (avg - dis/2)
  double second_order_ub = 0.0;     // clipped to [0,1]
  std::optional<double> prior_binary_ub_raw;  // 4*avg - 2*dis, K=2 only
  std::optional<double> prior_binary_ub;      // clipped to [0,1]
  std::optional<double> c_bound;    // 1 - margin_mean^2 / margin_sq_mean
  double mv_lower = 0.0;            // avg_error - disagreement
  std::optional<double> eir_ub;     // der
  std::optional<double> eir_lb;     // (2(K-1)/K)*der - (3K-4)/K
  BoundApplicability applicable;
};

BoundTable bound_table(const DiagnosticsReport& report,
                       const CompetenceVerdict& verdict);

std::string bound_table_to_json(const BoundTable& table, int indent = 2);

/// One bound compared against the quantity it constrains. `checked` is false
/// when the bound's hypotheses do not hold on this data, in which case
/// `pass` is not meaningful (kept true so aggregate status reflects only
/// real checks). `slack` is how far the bound is from being violated
/// (negative = violated).
struct BoundCheck {
  std::string bound;
  double value = 0.0;
  bool applicable = false;
  bool checked = false;
  bool pass = true;
  double slack = 0.0;
};

struct BoundVerification {
  DiagnosticsReport report;
  CompetenceVerdict verdict;
  BoundTable table;
  std::vector<BoundCheck> checks;
  bool all_pass = true;  // over checked bounds only
};

// Runs diagnostics + competence + bound_table and compares every bound
// against the realized mv_error / eir, with tolerance 1e-12. Bound
// violations are recorded as data, never thrown. `competence_slack` loosens
// the competence verdict gating the conditional bounds.
BoundVerification verify_bounds(const PredictionMatrix& pm, TieRule rule,
                                double competence_slack = 0.0);

// CSV `bound,value,applicable,checked,pass,slack`, one row per bound check.
std::string bound_checks_to_csv(const BoundVerification& verification);

struct BoundComparisonRow {
  std::size_t ensemble_id = 0;
  double ours = 0.0;                  // second_order_ub
  std::optional<double> c_bound;
  std::string tighter;                // "ours", "c_bound", or "tie"
};

// Ranks the second-order bound against the C-bound per ensemble.
std::vector<BoundComparisonRow> bound_comparison(
    std::span<const PredictionMatrix> ensembles, TieRule rule);

// CSV `ensemble_id,ours,c_bound,tighter`.
std::string bound_comparison_to_csv(std::span<const BoundComparisonRow> rows);

}  // namespace enskit
