#pragma once

#include <optional>
#include <string>
#include <vector>

#include "enskit/prediction_matrix.hpp"

namespace enskit {

/// Result of testing the competence condition
///   P(W in [t, 1/2)) >= P(W in [1/2, 1-t])   for all t in [0, 1/2]
/// against the empirical law of the per-example error mass. The left
/// interval is closed-open, the right closed-closed; mass exactly at 1/2
/// counts to the right side only.
struct CompetenceVerdict {
  std::vector<double> t_grid;
  std::vector<double> lhs;  // P(W in [t, 1/2)) per grid point
  std::vector<double> rhs;  // P(W in [1/2, 1-t]) per grid point
  bool competent = false;
  double max_violation = 0.0;             // max(0, max(rhs - lhs))
  std::optional<double> violation_t;      // grid point attaining it, if any
};

// Checks competence on the empirical distribution of profile.w. An empty
// `grid` selects the automatic grid — the sorted distinct breakpoints
// {w} ∪ {1-w} clipped to [0, 1/2] plus the endpoints 0 and 1/2 — which is
// exact because both probabilities are step functions that change value
// only at these points. Competent iff every violation is <= slack; the raw
// max_violation is always reported.
CompetenceVerdict competence_check(const ErrorProfile& profile,
                                   const std::vector<double>& grid = {},
                                   double slack = 0.0);

struct CompetenceCurve {
  std::vector<double> t;
  std::vector<double> lhs;
  std::vector<double> rhs;
};

// Evaluates both probabilities on a uniform n_points grid over [0, 1/2]
// (plot data; use competence_check for the exact verdict).
CompetenceCurve competence_curve(const ErrorProfile& profile, int n_points);

// CSV with header `t,lhs,rhs`, one row per grid point.
std::string competence_curve_to_csv(const CompetenceCurve& curve);
std::string competence_verdict_to_csv(const CompetenceVerdict& verdict);
std::string competence_verdict_to_json(const CompetenceVerdict& verdict,
                                       int indent = 2);

}  // namespace enskit
