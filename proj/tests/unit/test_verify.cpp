#include <doctest.h>

#include <cmath>

#include "odelin/examples.hpp"
#include "odelin/reduction.hpp"
#include "odelin/verify.hpp"

using namespace odelin;

namespace {

const char* kEx1 = "y'*y'''' - y''*y''' - 3*y'^2*y''' + 2*y'^3*y'' + 3*y'^5 = 0";

double shadow_at(const ReductionTrace& t, double h, std::size_t steps) {
  const Trajectory tr = integrate(t.source, {0, 1, 1, 1}, 0, h, steps);
  REQUIRE_FALSE(tr.halted);
  return reduction_residual(t, tr).shadow.max;
}

}  // namespace

TEST_CASE("RK4 is exact for y'''' = 0 on cubic data") {
  const Trajectory t = integrate(parse_normalized("y'''' = 0"), {1, 2, 3, 4}, 0, 0.01, 100);
  REQUIRE(t.values.size() == 101);
  const double x = t.grid.back();
  CHECK(x == doctest::Approx(1.0));
  const double exact = 1 + 2 * x + 1.5 * x * x + 4.0 / 6 * x * x * x;
  CHECK(t.values.back()[0] == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("reduction residual for Example 1 converges at fourth order") {
  const ReductionTrace t = reduce_missing_x(parse_normalized(kEx1));
  const double r1 = shadow_at(t, 2e-3, 250);
  const double r2 = shadow_at(t, 1e-3, 500);
  const double r3 = shadow_at(t, 5e-4, 1000);
  CHECK(r1 > r2);
  CHECK(r2 > r3);
  CHECK(r2 < 1e-6);
  const double ratio = r2 / r3;
  CHECK_MESSAGE(ratio >= 12, ratio);
  CHECK_MESSAGE(ratio <= 20, ratio);
  const Trajectory tr = integrate(t.source, {0, 1, 1, 1}, 0, 1e-3, 500);
  CHECK(reduction_residual(t, tr).consistency.max < 1e-9);
}

TEST_CASE("integration halts at a pole, on blowup, and refuses a singular start") {
  const Trajectory pole = integrate(parse_normalized("y'' = 1/(x - 1/2)"), {1, 0}, 0, 1e-3, 2000);
  CHECK(pole.halted);
  CHECK(pole.halt_reason.find("singularity") != std::string::npos);
  CHECK(pole.grid.back() < 0.5);

  const Trajectory blow = integrate(parse_normalized("y'' = y^2"), {1, 1}, 0, 1e-3, 10000);
  CHECK(blow.halted);
  CHECK(blow.values.size() < 10001);

  const NormalizedOde o = parse_normalized("y'' = 1/y");
  CHECK_THROWS_AS(integrate(o, {0, 1}, 0, 1e-3, 10), VerifyError);
  CHECK_THROWS_AS(integrate(o, {1}, 0, 1e-3, 10), VerifyError);
}

TEST_CASE("Example 2 solution family has a tiny residual") {
  const NormalizedOde o = parse_normalized(find_example(2)->ode);
  SolutionCandidate c;
  c.kind = SolutionCandidate::Kind::Implicit;
  c.constants = {"c1", "c2", "c3", "c4"};
  c.g = parse_expr("c1*y^5 + c2*y^3 + c3*y + c4", {{}, {"c1", "c2", "c3", "c4"}});
  const ResidualStats s = solution_residual(o, c);
  CHECK(s.evaluated > 0);
  CHECK(s.max < 1e-8);
}

TEST_CASE("a wrong exponent is caught") {
  const NormalizedOde o = parse_normalized(find_example(2)->ode);
  SolutionCandidate c;
  c.kind = SolutionCandidate::Kind::Implicit;
  c.constants = {"c1", "c2", "c3", "c4"};
  c.g = parse_expr("c1*y^6 + c2*y^3 + c3*y + c4", {{}, {"c1", "c2", "c3", "c4"}});
  CHECK(solution_residual(o, c).max > 1e-3);
}

TEST_CASE("explicit candidates and unknown symbols") {
  const NormalizedOde o = parse_normalized("y'' = -y");
  SolutionCandidate c;
  c.constants = {"c1", "c2"};
  c.g = parse_expr("c1*sin(x) + c2*cos(x)", {{}, {"c1", "c2"}});
  CHECK(solution_residual(o, c).max < 1e-12);
  c.g = parse_expr("c1*sin(x) + c3*cos(x)", {{}, {"c1", "c3"}});
  CHECK_THROWS_AS(solution_residual(o, c), VerifyError);
}

TEST_CASE("solution sampling is deterministic per seed") {
  const NormalizedOde o = parse_normalized("y'' = -y");
  SolutionCandidate c;
  c.constants = {"c1"};
  c.g = parse_expr("c1*exp(x)", {{}, {"c1"}});
  SolutionOptions so;
  so.seed = 9;
  const ResidualStats a = solution_residual(o, c, so), b = solution_residual(o, c, so);
  CHECK(a.max == b.max);
  CHECK(a.max > 0.1);
}
