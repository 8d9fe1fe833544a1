#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "enskit/bounds.hpp"
#include "enskit/competence.hpp"
#include "enskit/metrics.hpp"
#include "enskit/prediction_matrix.hpp"
#include "support/oracles.hpp"

using namespace enskit;

namespace {

BoundVerification verify(const PredictionMatrix& pm) {
  return verify_bounds(pm, TieRule::Pessimistic);
}

}  // namespace

TEST_CASE("worked example bound values") {
  const PredictionMatrix pm = testing::example_matrix();
  const BoundVerification v =
      verify_bounds(pm, TieRule::LowestIndex);
  const BoundTable& t = v.table;

  CHECK(t.first_order_ub_raw == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(t.competent_ub == doctest::Approx(0.25).epsilon(1e-15));
  // (4(K-1)/K)(avg - dis/2) = 2 * (0.25 - 1/6) = 1/6.
  CHECK(t.second_order_ub_raw == doctest::Approx(1.0 / 6).epsilon(1e-14));
  REQUIRE(t.prior_binary_ub_raw.has_value());
  // 4*avg - 2*dis = 1 - 2/3 = 1/3.
  CHECK(*t.prior_binary_ub_raw == doctest::Approx(1.0 / 3).epsilon(1e-14));
  REQUIRE(t.c_bound.has_value());
  // 1 - mean(margin)^2 / mean(margin^2) = 1 - 0.25/(1/3) = 0.25.
  CHECK(*t.c_bound == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(t.mv_lower == doctest::Approx(0.25 - 1.0 / 3).epsilon(1e-14));
  REQUIRE(t.eir_ub.has_value());
  CHECK(*t.eir_ub == doctest::Approx(4.0 / 3).epsilon(1e-14));
  REQUIRE(t.eir_lb.has_value());
  // (2(K-1)/K)*der - (3K-4)/K = 4/3 - 1 = 1/3.
  CHECK(*t.eir_lb == doctest::Approx(1.0 / 3).epsilon(1e-14));

  CHECK(t.applicable.competent_ub);
  CHECK(t.applicable.second_order_ub);
  CHECK(t.applicable.prior_binary_ub);
  CHECK(t.applicable.c_bound);
  CHECK(t.applicable.eir_lb);
  CHECK(v.all_pass);
}

TEST_CASE("bounds hold on every competent random ensemble") {
  std::mt19937 gen(1331);
  int competent_seen = 0;
  for (int trial = 0; trial < 5000; ++trial) {
    const PredictionMatrix pm = testing::random_matrix(gen);
    const BoundVerification v = verify(pm);
    if (!v.verdict.competent) continue;
    ++competent_seen;
    CHECK(v.all_pass);
    for (const BoundCheck& c : v.checks) {
      if (c.checked) CHECK(c.slack >= -1e-12);
    }
    // Ordering: mv <= second_order <= first_order family on competent data.
    const double mv = v.report.mv_error;
    CHECK(mv <= v.table.second_order_ub_raw + 1e-12);
    CHECK(mv <= v.table.competent_ub + 1e-12);
    CHECK(v.table.competent_ub <= v.table.first_order_ub_raw + 1e-12);
    CHECK(v.table.mv_lower <= mv + 1e-12);
  }
  CHECK(competent_seen > 500);
}

TEST_CASE("lower bound and eir ceiling hold without competence") {
  std::mt19937 gen(1441);
  for (int trial = 0; trial < 5000; ++trial) {
    const PredictionMatrix pm = testing::random_matrix(gen);
    const DiagnosticsReport r = diagnostics(pm, TieRule::Pessimistic);
    const double mv = r.mv_error;
    CHECK(r.avg_error - r.disagreement <= mv + 1e-12);
    if (r.eir.has_value()) {
      CHECK(*r.eir <= *r.der + 1e-12);
    }
    // Same under the optimistic tie rule.
    const DiagnosticsReport r2 = diagnostics(pm, TieRule::LowestIndex);
    CHECK(r2.avg_error - r2.disagreement <= r2.mv_error + 1e-12);
    if (r2.eir.has_value()) CHECK(*r2.eir <= *r2.der + 1e-12);
  }
}

TEST_CASE("binary second order bound is exactly half the prior bound") {
  std::mt19937 gen(1551);
  int binary_seen = 0;
  while (binary_seen < 1000) {
    const PredictionMatrix pm = testing::random_matrix(gen);
    if (pm.num_classes() != 2) continue;
    ++binary_seen;
    const BoundTable t = verify(pm).table;
    REQUIRE(t.prior_binary_ub_raw.has_value());
    // Exact floating-point identity: the K=2 second-order bound is
    // 2*(avg - dis/2) and the prior bound 4*avg - 2*dis = 2*(2*avg - dis);
    // both reduce to scaling by powers of two.
    CHECK(t.second_order_ub_raw == *t.prior_binary_ub_raw / 2);
  }
}

TEST_CASE("multiclass ensembles carry no prior binary bound") {
  std::mt19937 gen(1661);
  int seen = 0;
  while (seen < 100) {
    const PredictionMatrix pm = testing::random_matrix(gen);
    if (pm.num_classes() == 2) continue;
    ++seen;
    const BoundTable t = verify(pm).table;
    CHECK_FALSE(t.prior_binary_ub_raw.has_value());
    CHECK_FALSE(t.applicable.prior_binary_ub);
  }
}

TEST_CASE("c-bound present only with positive mean margin") {
  // All classifiers always wrong: margin mean is negative.
  const PredictionMatrix wrong({1, 1, 1, 1}, 2, {0, 0}, 2);
  const BoundTable t = verify(wrong).table;
  CHECK_FALSE(t.c_bound.has_value());
  CHECK_FALSE(t.applicable.c_bound);
}

TEST_CASE("c-bound dominates the majority vote error when margin positive") {
  std::mt19937 gen(1771);
  int with_cb = 0;
  for (int trial = 0; trial < 5000; ++trial) {
    const PredictionMatrix pm = testing::random_matrix(gen);
    const BoundVerification v = verify(pm);
    if (!v.table.c_bound.has_value()) continue;
    ++with_cb;
    CHECK(v.report.mv_error <= *v.table.c_bound + 1e-12);
  }
  CHECK(with_cb > 1000);
}

TEST_CASE("ratio bounds bracket the improvement on competent ensembles") {
  std::mt19937 gen(1881);
  int usable = 0;
  for (int trial = 0; trial < 5000; ++trial) {
    const PredictionMatrix pm = testing::random_matrix(gen);
    const BoundVerification v = verify(pm);
    if (!v.verdict.competent || !v.report.eir.has_value()) continue;
    ++usable;
    REQUIRE(v.table.eir_lb.has_value());
    REQUIRE(v.table.eir_ub.has_value());
    CHECK(*v.table.eir_lb - 1e-12 <= *v.report.eir);
    CHECK(*v.report.eir <= *v.table.eir_ub + 1e-12);
    // Competent ensembles never hurt: improvement is non-negative.
    CHECK(*v.report.eir >= -1e-12);
  }
  CHECK(usable > 500);
}

TEST_CASE("display bounds are clipped while raw values are verbatim") {
  // A terrible ensemble drives the raw first-order bound above 1.
  const PredictionMatrix bad({1, 1, 1, 1}, 2, {0, 0}, 2);
  const BoundTable t = verify(bad).table;
  CHECK(t.first_order_ub_raw == doctest::Approx(2.0));
  CHECK(t.first_order_ub == doctest::Approx(1.0));
  CHECK(t.second_order_ub_raw >= 0.0);
  CHECK(t.mv_lower == doctest::Approx(1.0));  // never clipped
}

TEST_CASE("comparison table ranks the two bounds") {
  // Unanimously correct ensembles have degenerate margins (all 1): the
  // c-bound equals 0 and the second-order bound equals 0 -> tie.
  const PredictionMatrix perfect({0, 1, 0, 1}, 2, {0, 1}, 2);
  const PredictionMatrix example = testing::example_matrix();
  const std::vector<PredictionMatrix> ensembles = {perfect, example};
  const auto rows = bound_comparison(ensembles, TieRule::LowestIndex);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].ensemble_id == 0);
  CHECK(rows[0].tighter == "tie");
  // Worked example: second-order 1/6 < c-bound 1/4.
  CHECK(rows[1].tighter == "ours");
  const std::string csv = bound_comparison_to_csv(rows);
  CHECK(csv.rfind("ensemble_id,ours,c_bound,tighter\n", 0) == 0);
}

TEST_CASE("verification csv is well formed") {
  const std::string csv =
      bound_checks_to_csv(verify(testing::example_matrix()));
  CHECK(csv.rfind("bound,value,applicable,checked,pass,slack\n", 0) == 0);
  CHECK(csv.find("first_order_ub") != std::string::npos);
  CHECK(csv.find("c_bound") != std::string::npos);
}
