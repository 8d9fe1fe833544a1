#include "enskit/bounds.hpp"

#include <algorithm>

#include <json.hpp>

#include "enskit/numeric.hpp"

namespace enskit {

namespace {

constexpr double kBoundTolerance = 1e-12;

double clip01(double x) { return std::clamp(x, 0.0, 1.0); }

nlohmann::ordered_json optional_json(const std::optional<double>& value) {
  if (value) return *value;
  return nullptr;
}

}  // namespace

BoundTable bound_table(const DiagnosticsReport& report,
                       const CompetenceVerdict& verdict) {
  const double avg = report.avg_error;
  const double dis = report.disagreement;
  const double k = static_cast<double>(report.num_classes);

  BoundTable table;
  table.first_order_ub_raw = 2.0 * avg;
  table.first_order_ub = std::min(table.first_order_ub_raw, 1.0);
  table.competent_ub = avg;
  table.second_order_ub_raw = (4.0 * (k - 1.0) / k) * (avg - dis / 2.0);
  table.second_order_ub = clip01(table.second_order_ub_raw);
  if (report.num_classes == 2) {
    table.prior_binary_ub_raw = 4.0 * avg - 2.0 * dis;
    table.prior_binary_ub = clip01(*table.prior_binary_ub_raw);
  }
  if (report.margin_mean > 0.0) {
    table.c_bound =
        1.0 - report.margin_mean * report.margin_mean / report.margin_sq_mean;
  }
  table.mv_lower = avg - dis;
  if (report.der) {
    table.eir_ub = *report.der;
    table.eir_lb = (2.0 * (k - 1.0) / k) * *report.der - (3.0 * k - 4.0) / k;
  }

  table.applicable.first_order_ub = true;
  table.applicable.competent_ub = verdict.competent;
  table.applicable.second_order_ub = verdict.competent;
  table.applicable.prior_binary_ub = report.num_classes == 2;
  table.applicable.c_bound = table.c_bound.has_value();
  table.applicable.mv_lower = true;
  table.applicable.eir_ub = report.der.has_value();
  table.applicable.eir_lb = report.der.has_value() && verdict.competent;
  return table;
}

std::string bound_table_to_json(const BoundTable& table, int indent) {
  nlohmann::ordered_json doc;
  doc["first_order_ub"] = table.first_order_ub;
  doc["first_order_ub_raw"] = table.first_order_ub_raw;
  doc["competent_ub"] = table.competent_ub;
  doc["second_order_ub"] = table.second_order_ub;
  doc["second_order_ub_raw"] = table.second_order_ub_raw;
  doc["prior_binary_ub"] = optional_json(table.prior_binary_ub);
  doc["prior_binary_ub_raw"] = optional_json(table.prior_binary_ub_raw);
  doc["c_bound"] = optional_json(table.c_bound);
  doc["mv_lower"] = table.mv_lower;
  doc["eir_ub"] = optional_json(table.eir_ub);
  doc["eir_lb"] = optional_json(table.eir_lb);
  nlohmann::ordered_json flags;
  flags["first_order_ub"] = table.applicable.first_order_ub;
  flags["competent_ub"] = table.applicable.competent_ub;
  flags["second_order_ub"] = table.applicable.second_order_ub;
  flags["prior_binary_ub"] = table.applicable.prior_binary_ub;
  flags["c_bound"] = table.applicable.c_bound;
  flags["mv_lower"] = table.applicable.mv_lower;
  flags["eir_ub"] = table.applicable.eir_ub;
  flags["eir_lb"] = table.applicable.eir_lb;
  doc["applicable"] = flags;
  return doc.dump(indent);
}

BoundVerification verify_bounds(const PredictionMatrix& pm, TieRule rule,
                                double competence_slack) {
  BoundVerification v;
  v.report = diagnostics(pm, rule);
  v.verdict = competence_check(error_profile(pm), {}, competence_slack);
  v.table = bound_table(v.report, v.verdict);

  const double mv = v.report.mv_error;
  auto add = [&](const std::string& name, double value, bool applicable,
                 double slack) {
    BoundCheck check;
    check.bound = name;
    check.value = value;
    check.applicable = applicable;
    check.checked = applicable;
    check.slack = slack;
    check.pass = !check.checked || slack >= -kBoundTolerance;
    if (check.checked && !check.pass) v.all_pass = false;
    v.checks.push_back(check);
  };

  // Upper bounds on mv_error: slack = bound - mv_error (raw formula values;
  // the guarantees hold for the raw quantity, clipping only helps).
  add("first_order_ub", v.table.first_order_ub_raw,
      v.table.applicable.first_order_ub, v.table.first_order_ub_raw - mv);
  add("competent_ub", v.table.competent_ub, v.table.applicable.competent_ub,
      v.table.competent_ub - mv);
  add("second_order_ub", v.table.second_order_ub_raw,
      v.table.applicable.second_order_ub, v.table.second_order_ub_raw - mv);
  add("prior_binary_ub", v.table.prior_binary_ub_raw.value_or(0.0),
      v.table.applicable.prior_binary_ub,
      v.table.prior_binary_ub_raw.value_or(0.0) - mv);
  add("c_bound", v.table.c_bound.value_or(0.0), v.table.applicable.c_bound,
      v.table.c_bound.value_or(0.0) - mv);
  // Lower bound on mv_error.
  add("mv_lower", v.table.mv_lower, v.table.applicable.mv_lower,
      mv - v.table.mv_lower);
  // Bracketing of the improvement rate.
  const double eir = v.report.eir.value_or(0.0);
  add("eir_ub", v.table.eir_ub.value_or(0.0), v.table.applicable.eir_ub,
      v.table.eir_ub.value_or(0.0) - eir);
  add("eir_lb", v.table.eir_lb.value_or(0.0), v.table.applicable.eir_lb,
      eir - v.table.eir_lb.value_or(0.0));
  return v;
}

std::string bound_checks_to_csv(const BoundVerification& verification) {
  std::string out = "bound,value,applicable,checked,pass,slack\n";
  for (const BoundCheck& check : verification.checks) {
    out += check.bound + "," + format_double(check.value) + "," +
           (check.applicable ? "true" : "false") + "," +
           (check.checked ? "true" : "false") + "," +
           (check.pass ? "true" : "false") + "," + format_double(check.slack) +
           "\n";
  }
  return out;
}

std::vector<BoundComparisonRow> bound_comparison(
    std::span<const PredictionMatrix> ensembles, TieRule rule) {
  std::vector<BoundComparisonRow> rows;
  rows.reserve(ensembles.size());
  for (std::size_t i = 0; i < ensembles.size(); ++i) {
    const DiagnosticsReport report = diagnostics(ensembles[i], rule);
    const CompetenceVerdict verdict =
        competence_check(error_profile(ensembles[i]));
    const BoundTable table = bound_table(report, verdict);
    BoundComparisonRow row;
    row.ensemble_id = i;
    row.ours = table.second_order_ub;
    row.c_bound = table.c_bound;
    if (!row.c_bound || row.ours < *row.c_bound) {
      row.tighter = "ours";
    } else if (*row.c_bound < row.ours) {
      row.tighter = "c_bound";
    } else {
      row.tighter = "tie";
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string bound_comparison_to_csv(std::span<const BoundComparisonRow> rows) {
  std::string out = "ensemble_id,ours,c_bound,tighter\n";
  for (const BoundComparisonRow& row : rows) {
    out += std::to_string(row.ensemble_id) + "," + format_double(row.ours) +
           "," + (row.c_bound ? format_double(*row.c_bound) : std::string()) +
           "," + row.tighter + "\n";
  }
  return out;
}

}  // namespace enskit
