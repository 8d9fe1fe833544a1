#include "enskit/pathology.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "enskit/errors.hpp"

namespace enskit {

namespace {
constexpr double kAuditTolerance = 1e-12;
}

PathologyKind parse_pathology_kind(const std::string& name) {
  if (name == "example1") return PathologyKind::Example1;
  if (name == "example2") return PathologyKind::Example2;
  throw ConfigError("unknown pathology kind '" + name +
                    "' (expected example1 or example2)");
}

std::string pathology_kind_name(PathologyKind kind) {
  return kind == PathologyKind::Example1 ? "example1" : "example2";
}

PredictionMatrix make_pathology(const PathologySpec& spec) {
  if (!(spec.epsilon > 0.0 && spec.epsilon < 0.5)) {
    throw ParameterError("pathology epsilon must lie in (0, 1/2)");
  }
  if (spec.m < 1) throw ParameterError("pathology m must be >= 1");

  const std::size_t m = spec.m;
  std::vector<int> labels(m, 0);        // true class is always 0
  std::vector<int> perfect(m, 0);       // light classifier, never wrong
  std::vector<int> heavy(m, 0);         // 0.5+eps of the vote mass

  if (spec.kind == PathologyKind::Example1) {
    heavy.assign(m, 1);  // always wrong
  } else {
    if (!(spec.delta > 0.0 && spec.delta < 0.5)) {
      throw ParameterError("pathology delta must lie in (0, 1/2)");
    }
    const double bad_real = 2.0 * spec.delta * static_cast<double>(m);
    const double bad_rounded = std::round(bad_real);
    if (std::abs(bad_real - bad_rounded) > 1e-9 || bad_rounded < 1.0) {
      throw SpecError("2*delta*m must be a positive integer, got " +
                      std::to_string(bad_real));
    }
    const std::size_t bad = static_cast<std::size_t>(bad_rounded);
    if (bad > m) throw SpecError("erroneous region exceeds the test set");
    for (std::size_t j = m - bad; j < m; ++j) heavy[j] = 1;
  }

  std::vector<int> preds = perfect;
  preds.insert(preds.end(), heavy.begin(), heavy.end());
  return PredictionMatrix(std::move(preds), 2, std::move(labels), 2,
                          {0.5 - spec.epsilon, 0.5 + spec.epsilon});
}

PathologyAudit pathology_audit(const PathologySpec& spec) {
  PathologyAudit audit;
  audit.spec = spec;
  const PredictionMatrix pm = make_pathology(spec);

  if (spec.kind == PathologyKind::Example1) {
    audit.expected_avg_error = 0.5 + spec.epsilon;
    audit.expected_mv_error = 1.0;
    audit.expected_margin_mean = -2.0 * spec.epsilon;
  } else {
    audit.expected_avg_error = spec.delta * (1.0 + 2.0 * spec.epsilon);
    audit.expected_mv_error = 2.0 * spec.delta;
    audit.expected_margin_mean =
        1.0 - 2.0 * spec.delta * (1.0 + 2.0 * spec.epsilon);
  }

  audit.measured = diagnostics(pm, TieRule::LowestIndex);
  audit.verdict = competence_check(error_profile(pm));
  audit.closed_forms_match =
      std::abs(audit.measured.avg_error - audit.expected_avg_error) <=
          kAuditTolerance &&
      std::abs(audit.measured.mv_error - audit.expected_mv_error) <=
          kAuditTolerance &&
      std::abs(audit.measured.margin_mean - audit.expected_margin_mean) <=
          kAuditTolerance;
  audit.incompetent = !audit.verdict.competent;
  audit.ok = audit.closed_forms_match && audit.incompetent;
  return audit;
}

std::string pathology_audit_to_json(const PathologyAudit& audit, int indent) {
  nlohmann::ordered_json doc;
  doc["kind"] = pathology_kind_name(audit.spec.kind);
  doc["epsilon"] = audit.spec.epsilon;
  if (audit.spec.kind == PathologyKind::Example2) {
    doc["delta"] = audit.spec.delta;
  }
  doc["m"] = audit.spec.m;
  doc["expected_avg_error"] = audit.expected_avg_error;
  doc["expected_mv_error"] = audit.expected_mv_error;
  doc["expected_margin_mean"] = audit.expected_margin_mean;
  doc["measured"] = nlohmann::ordered_json::parse(
      diagnostics_to_json(audit.measured, indent));
  doc["max_competence_violation"] = audit.verdict.max_violation;
  doc["closed_forms_match"] = audit.closed_forms_match;
  doc["incompetent"] = audit.incompetent;
  doc["ok"] = audit.ok;
  return doc.dump(indent);
}

}  // namespace enskit
