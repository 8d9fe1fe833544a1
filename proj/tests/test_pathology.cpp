#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "enskit/errors.hpp"
#include "enskit/metrics.hpp"
#include "enskit/pathology.hpp"

using namespace enskit;

namespace {

PathologySpec example1(double eps, std::size_t m) {
  PathologySpec s;
  s.kind = PathologyKind::Example1;
  s.epsilon = eps;
  s.m = m;
  return s;
}

PathologySpec example2(double eps, double delta, std::size_t m) {
  PathologySpec s;
  s.kind = PathologyKind::Example2;
  s.epsilon = eps;
  s.delta = delta;
  s.m = m;
  return s;
}

}  // namespace

TEST_CASE("always-wrong heavy classifier: closed forms are exact") {
  for (double eps : {0.05, 0.25, 0.4}) {
    const PathologyAudit audit = pathology_audit(example1(eps, 12));
    CHECK(audit.expected_avg_error == 0.5 + eps);
    CHECK(audit.expected_mv_error == 1.0);
    CHECK(audit.measured.avg_error ==
          doctest::Approx(0.5 + eps).epsilon(1e-13));
    CHECK(audit.measured.mv_error == 1.0);
    CHECK(audit.measured.margin_mean ==
          doctest::Approx(-2.0 * eps).epsilon(1e-12));
    CHECK(audit.closed_forms_match);
    CHECK(audit.incompetent);
    CHECK(audit.ok);
  }
}

TEST_CASE("first-order bound is tight: mv/avg approaches 2") {
  // As eps -> 0 the ratio 1/(0.5+eps) -> 2, matching the factor in the
  // first-order upper bound.
  double previous = 0.0;
  for (double eps : {0.4, 0.2, 0.1, 0.01, 1e-3, 1e-4}) {
    const PathologyAudit audit = pathology_audit(example1(eps, 4));
    const double ratio =
        audit.measured.mv_error / audit.measured.avg_error;
    CHECK(ratio > previous);  // monotone in shrinking eps
    previous = ratio;
  }
  CHECK(previous >= 1.999);
  CHECK(previous < 2.0);
}

TEST_CASE("tail-error heavy classifier: closed forms are exact") {
  const double eps = 0.05;
  const double delta = 0.1;
  const PathologyAudit audit = pathology_audit(example2(eps, delta, 20));
  CHECK(audit.expected_avg_error ==
        doctest::Approx(delta * (1 + 2 * eps)).epsilon(1e-15));
  CHECK(audit.expected_mv_error == doctest::Approx(2 * delta).epsilon(1e-15));
  CHECK(audit.expected_margin_mean ==
        doctest::Approx(1 - 2 * delta * (1 + 2 * eps)).epsilon(1e-15));
  CHECK(audit.measured.avg_error ==
        doctest::Approx(audit.expected_avg_error).epsilon(1e-13));
  CHECK(audit.measured.mv_error ==
        doctest::Approx(audit.expected_mv_error).epsilon(1e-13));
  CHECK(audit.measured.margin_mean ==
        doctest::Approx(audit.expected_margin_mean).epsilon(1e-13));
  CHECK(audit.closed_forms_match);
  CHECK(audit.incompetent);
  CHECK(audit.ok);
}

TEST_CASE("positive margin does not save the tail pathology") {
  // delta small: mean margin close to 1 even though the ensemble is
  // incompetent and the majority vote doubles the average error.
  const PathologyAudit audit = pathology_audit(example2(0.05, 0.01, 100));
  CHECK(audit.measured.margin_mean > 0.97);
  CHECK(audit.incompetent);
  REQUIRE(audit.measured.eir.has_value());
  // EIR = 1 - 2/(1+2*eps), a finite negative number independent of delta.
  CHECK(*audit.measured.eir ==
        doctest::Approx(1.0 - 2.0 / (1 + 2 * 0.05)).epsilon(1e-12));
}

TEST_CASE("improvement degradation is identical across delta") {
  const double eps = 0.1;
  const PathologyAudit small = pathology_audit(example2(eps, 0.05, 40));
  const PathologyAudit large = pathology_audit(example2(eps, 0.25, 40));
  REQUIRE(small.measured.eir.has_value());
  REQUIRE(large.measured.eir.has_value());
  CHECK(*small.measured.eir ==
        doctest::Approx(*large.measured.eir).epsilon(1e-12));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(make_pathology(example1(0.0, 4)), ParameterError);
  CHECK_THROWS_AS(make_pathology(example1(0.5, 4)), ParameterError);
  CHECK_THROWS_AS(make_pathology(example1(0.1, 0)), ParameterError);
  CHECK_THROWS_AS(make_pathology(example2(0.1, 0.0, 10)), ParameterError);
  CHECK_THROWS_AS(make_pathology(example2(0.1, 0.5, 10)), ParameterError);

  // 2*delta*m must be a whole number of examples: 2*0.1*7 = 1.4.
  CHECK_THROWS_AS(make_pathology(example2(0.1, 0.1, 7)), SpecError);
  CHECK_NOTHROW(make_pathology(example2(0.1, 0.1, 10)));
  // ...but near-integer rounding within 1e-9 is accepted.
  CHECK_NOTHROW(make_pathology(example2(0.1, 0.1 + 1e-12, 10)));
}

TEST_CASE("kind parsing") {
  CHECK(parse_pathology_kind("example1") == PathologyKind::Example1);
  CHECK(parse_pathology_kind("example2") == PathologyKind::Example2);
  CHECK_THROWS_AS(parse_pathology_kind("example3"), ConfigError);
  CHECK(pathology_kind_name(PathologyKind::Example1) == "example1");
}

TEST_CASE("matrix layout: two weighted classifiers") {
  const PredictionMatrix pm = make_pathology(example2(0.25, 0.25, 8));
  REQUIRE(pm.num_classifiers() == 2);
  REQUIRE(pm.num_examples() == 8);
  CHECK(pm.weights()[0] == doctest::Approx(0.25).epsilon(1e-15));  // 0.5-eps
  CHECK(pm.weights()[1] == doctest::Approx(0.75).epsilon(1e-15));  // 0.5+eps
  // Light classifier perfect; heavy classifier wrong exactly on the last
  // 2*delta*m = 4 examples.
  for (std::size_t j = 0; j < 8; ++j) {
    CHECK(pm.pred(0, j) == pm.labels()[j]);
    const bool in_tail = j >= 4;
    CHECK((pm.pred(1, j) != pm.labels()[j]) == in_tail);
  }
}

TEST_CASE("audit json carries the verdict") {
  const std::string json = pathology_audit_to_json(
      pathology_audit(example1(0.3, 5)));
  CHECK(json.find("\"ok\": true") != std::string::npos);
  CHECK(json.find("\"incompetent\": true") != std::string::npos);
  CHECK(json.find("\"expected_mv_error\": 1.0") != std::string::npos);
}
