#include "enskit/competence.hpp"

#include <algorithm>
#include <cstddef>

#include <json.hpp>

#include "enskit/errors.hpp"
#include "enskit/numeric.hpp"

namespace enskit {

namespace {

// Empirical probabilities over a sorted copy of the error masses:
//   lhs(t) = #{w : t <= w < 1/2} / m,  rhs(t) = #{w : 1/2 <= w <= 1-t} / m.
// Comparisons are exact; the interval-boundary convention is part of the
// competence definition, not a tolerance question.
struct EmpiricalLaw {
  std::vector<double> sorted_w;

  explicit EmpiricalLaw(const ErrorProfile& profile) : sorted_w(profile.w) {
    std::sort(sorted_w.begin(), sorted_w.end());
  }

  double lhs(double t) const {
    const auto from = std::lower_bound(sorted_w.begin(), sorted_w.end(), t);
    const auto to = std::lower_bound(sorted_w.begin(), sorted_w.end(), 0.5);
    return to <= from ? 0.0
                      : static_cast<double>(to - from) /
                            static_cast<double>(sorted_w.size());
  }

  double rhs(double t) const {
    const auto from = std::lower_bound(sorted_w.begin(), sorted_w.end(), 0.5);
    const auto to = std::upper_bound(sorted_w.begin(), sorted_w.end(), 1.0 - t);
    return to <= from ? 0.0
                      : static_cast<double>(to - from) /
                            static_cast<double>(sorted_w.size());
  }
};

std::vector<double> auto_grid(const std::vector<double>& sorted_w) {
  std::vector<double> grid{0.0, 0.5};
  for (double w : sorted_w) {
    if (w >= 0.0 && w <= 0.5) grid.push_back(w);
    const double mirrored = 1.0 - w;
    if (mirrored >= 0.0 && mirrored <= 0.5) grid.push_back(mirrored);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

}  // namespace

CompetenceVerdict competence_check(const ErrorProfile& profile,
                                   const std::vector<double>& grid,
                                   double slack) {
  if (profile.w.empty()) {
    throw ParameterError("competence check needs at least one example");
  }
  if (slack < 0.0) throw ParameterError("competence slack must be >= 0");
  const EmpiricalLaw law(profile);

  CompetenceVerdict verdict;
  verdict.t_grid = grid.empty() ? auto_grid(law.sorted_w) : grid;
  for (double t : verdict.t_grid) {
    if (t < 0.0 || t > 0.5) {
      throw ParameterError("competence grid points must lie in [0, 1/2]");
    }
  }
  if (!grid.empty() &&
      !std::is_sorted(verdict.t_grid.begin(), verdict.t_grid.end())) {
    std::sort(verdict.t_grid.begin(), verdict.t_grid.end());
  }

  verdict.lhs.reserve(verdict.t_grid.size());
  verdict.rhs.reserve(verdict.t_grid.size());
  for (double t : verdict.t_grid) {
    const double l = law.lhs(t);
    const double r = law.rhs(t);
    verdict.lhs.push_back(l);
    verdict.rhs.push_back(r);
    const double violation = r - l;
    if (violation > verdict.max_violation) {
      verdict.max_violation = violation;
      verdict.violation_t = t;
    }
  }
  verdict.competent = verdict.max_violation <= slack;
  return verdict;
}

CompetenceCurve competence_curve(const ErrorProfile& profile, int n_points) {
  if (n_points < 2) throw ParameterError("competence curve needs >= 2 points");
  if (profile.w.empty()) {
    throw ParameterError("competence curve needs at least one example");
  }
  const EmpiricalLaw law(profile);
  CompetenceCurve curve;
  for (int i = 0; i < n_points; ++i) {
    const double t =
        0.5 * static_cast<double>(i) / static_cast<double>(n_points - 1);
    curve.t.push_back(t);
    curve.lhs.push_back(law.lhs(t));
    curve.rhs.push_back(law.rhs(t));
  }
  return curve;
}

namespace {
std::string table_csv(const std::vector<double>& t, const std::vector<double>& l,
                      const std::vector<double>& r) {
  std::string out = "t,lhs,rhs\n";
  for (std::size_t i = 0; i < t.size(); ++i) {
    out += format_double(t[i]) + "," + format_double(l[i]) + "," +
           format_double(r[i]) + "\n";
  }
  return out;
}
}  // namespace

std::string competence_curve_to_csv(const CompetenceCurve& curve) {
  return table_csv(curve.t, curve.lhs, curve.rhs);
}

std::string competence_verdict_to_csv(const CompetenceVerdict& verdict) {
  return table_csv(verdict.t_grid, verdict.lhs, verdict.rhs);
}

std::string competence_verdict_to_json(const CompetenceVerdict& verdict,
                                       int indent) {
  nlohmann::ordered_json doc;
  doc["competent"] = verdict.competent;
  doc["max_violation"] = verdict.max_violation;
  if (verdict.violation_t) doc["violation_t"] = *verdict.violation_t;
  else doc["violation_t"] = nullptr;
  doc["t_grid"] = verdict.t_grid;
  doc["lhs"] = verdict.lhs;
  doc["rhs"] = verdict.rhs;
  return doc.dump(indent);
}

}  // namespace enskit
