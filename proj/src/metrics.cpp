#include "enskit/metrics.hpp"

#include <cstdlib>

#include <json.hpp>

#include "enskit/errors.hpp"
#include "enskit/numeric.hpp"

namespace enskit {

namespace {
constexpr double kTieTolerance = 1e-12;
}

TieRule parse_tie_rule(const std::string& name) {
  if (name == "lowest-index") return TieRule::LowestIndex;
  if (name == "pessimistic") return TieRule::Pessimistic;
  throw ConfigError("unknown tie rule '" + name +
                    "' (expected lowest-index or pessimistic)");
}

std::string tie_rule_name(TieRule rule) {
  return rule == TieRule::LowestIndex ? "lowest-index" : "pessimistic";
}

MajorityVote majority_vote(const PredictionMatrix& pm, TieRule rule) {
  const ClassMassProfile mass = class_mass(pm);
  const int k = pm.num_classes();
  MajorityVote mv;
  mv.predictions.reserve(pm.num_examples());
  for (std::size_t j = 0; j < pm.num_examples(); ++j) {
    const auto row = mass.row(j);
    int best = 0;
    for (int c = 1; c < k; ++c) {
      if (row[c] > row[best]) best = c;
    }
    bool tied = false;
    int lowest = best;
    for (int c = 0; c < k; ++c) {
      if (c != best && std::abs(row[c] - row[best]) <= kTieTolerance) {
        tied = true;
        if (c < lowest) lowest = c;
      }
    }
    if (tied) ++mv.tie_count;
    if (tied && rule == TieRule::Pessimistic) {
      mv.predictions.push_back(kTieSentinel);
    } else {
      mv.predictions.push_back(lowest);
    }
  }
  return mv;
}

double average_error(const PredictionMatrix& pm) {
  const std::size_t m = pm.num_examples();
  KahanAccumulator avg;
  for (std::size_t i = 0; i < pm.num_classifiers(); ++i) {
    const auto row = pm.row(i);
    std::size_t wrong = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (row[j] != pm.labels()[j]) ++wrong;
    }
    avg.add(pm.weights()[i] *
            (static_cast<double>(wrong) / static_cast<double>(m)));
  }
  return avg.sum();
}

double majority_vote_error(const PredictionMatrix& pm, TieRule rule) {
  const MajorityVote mv = majority_vote(pm, rule);
  std::size_t wrong = 0;
  for (std::size_t j = 0; j < pm.num_examples(); ++j) {
    if (mv.predictions[j] != pm.labels()[j]) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(pm.num_examples());
}

double disagreement(const PredictionMatrix& pm) {
  const ClassMassProfile mass = class_mass(pm);
  const int k = pm.num_classes();
  KahanAccumulator total;
  for (std::size_t j = 0; j < pm.num_examples(); ++j) {
    const auto row = mass.row(j);
    double norm_sq = 0.0;
    for (int c = 0; c < k; ++c) norm_sq += row[c] * row[c];
    total.add(1.0 - norm_sq);
  }
  return total.sum() / static_cast<double>(pm.num_examples());
}

double tandem_loss(const PredictionMatrix& pm) {
  const ErrorProfile profile = error_profile(pm);
  return profile.mean_w_sq;
}

MarginMoments margin_moments(const PredictionMatrix& pm) {
  const ClassMassProfile mass = class_mass(pm);
  const int k = pm.num_classes();
  KahanAccumulator sum, sum_sq;
  for (std::size_t j = 0; j < pm.num_examples(); ++j) {
    const auto row = mass.row(j);
    const int y = pm.labels()[j];
    double runner_up = 0.0;
    for (int c = 0; c < k; ++c) {
      if (c != y && row[c] > runner_up) runner_up = row[c];
    }
    const double margin = row[y] - runner_up;
    sum.add(margin);
    sum_sq.add(margin * margin);
  }
  const double m = static_cast<double>(pm.num_examples());
  return {sum.sum() / m, sum_sq.sum() / m};
}

DiagnosticsReport diagnostics(const PredictionMatrix& pm, TieRule rule) {
  DiagnosticsReport report;
  report.avg_error = average_error(pm);
  const MajorityVote mv = majority_vote(pm, rule);
  std::size_t wrong = 0;
  for (std::size_t j = 0; j < pm.num_examples(); ++j) {
    if (mv.predictions[j] != pm.labels()[j]) ++wrong;
  }
  report.mv_error =
      static_cast<double>(wrong) / static_cast<double>(pm.num_examples());
  report.tie_count = mv.tie_count;
  report.disagreement = disagreement(pm);
  report.tandem = tandem_loss(pm);
  const MarginMoments margins = margin_moments(pm);
  report.margin_mean = margins.mean;
  report.margin_sq_mean = margins.sq_mean;
  report.num_classes = pm.num_classes();
  report.tie_rule = rule;
  if (report.avg_error > 0.0) {
    report.eir = (report.avg_error - report.mv_error) / report.avg_error;
    report.der = report.disagreement / report.avg_error;
  } else {
    report.zero_error_warning = true;
  }
  return report;
}

std::string diagnostics_to_json(const DiagnosticsReport& report, int indent) {
  nlohmann::ordered_json doc;
  doc["avg_error"] = report.avg_error;
  doc["mv_error"] = report.mv_error;
  doc["disagreement"] = report.disagreement;
  doc["tandem"] = report.tandem;
  if (report.eir) doc["eir"] = *report.eir; else doc["eir"] = nullptr;
  if (report.der) doc["der"] = *report.der; else doc["der"] = nullptr;
  doc["margin_mean"] = report.margin_mean;
  doc["margin_sq_mean"] = report.margin_sq_mean;
  doc["tie_count"] = report.tie_count;
  doc["num_classes"] = report.num_classes;
  doc["tie_rule"] = tie_rule_name(report.tie_rule);
  doc["zero_error_warning"] = report.zero_error_warning;
  return doc.dump(indent);
}

}  // namespace enskit
