#pragma once

#include <cstddef>
#include <string>

#include "enskit/competence.hpp"
#include "enskit/metrics.hpp"
#include "enskit/prediction_matrix.hpp"

namespace enskit {

/// The two adversarial ensembles showing what incompetent ensembles can do.
/// Continuous "fractions of classifiers" are realized exactly as two
/// weighted classifiers (weights 0.5-eps and 0.5+eps) instead of replicated
/// members, so any eps works without quantization.
///
///   Example1 — the 0.5-eps weight is a perfect classifier, the 0.5+eps
///   weight always wrong: average error 0.5+eps, majority-vote error 1.
///   Example2 — the heavy classifier is wrong only on the last 2*delta*m
///   examples: average error delta*(1+2*eps), majority-vote error 2*delta,
///   mean margin 1 - 2*delta*(1+2*eps) (positive margin, yet the
///   first-order bound is still what binds).
enum class PathologyKind { Example1, Example2 };

struct PathologySpec {
  PathologyKind kind = PathologyKind::Example1;
  double epsilon = 0.0;    // in (0, 1/2)
  double delta = 0.0;      // in (0, 1/2), Example2 only
  std::size_t m = 0;       // number of examples
};

PathologyKind parse_pathology_kind(const std::string& name);
std::string pathology_kind_name(PathologyKind kind);

// Builds the counterexample as a 2-classifier binary matrix. Throws
// ParameterError for out-of-range epsilon/delta/m and SpecError when
// 2*delta*m is not an integer (Example2's erroneous region must be a whole
// number of examples).
PredictionMatrix make_pathology(const PathologySpec& spec);

/// Closed-form expectations vs what the generated matrix actually measures.
struct PathologyAudit {
  PathologySpec spec;
  double expected_avg_error = 0.0;
  double expected_mv_error = 0.0;
  double expected_margin_mean = 0.0;
  DiagnosticsReport measured;
  CompetenceVerdict verdict;
  bool closed_forms_match = false;  // within 1e-12
  bool incompetent = false;         // pathologies must fail competence
  bool ok = false;                  // both of the above
};

PathologyAudit pathology_audit(const PathologySpec& spec);

std::string pathology_audit_to_json(const PathologyAudit& audit,
                                    int indent = 2);

}  // namespace enskit
