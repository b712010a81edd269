#include <doctest.h>

#include <cmath>

#include "../support/gen.hpp"
#include "odelin/canonical.hpp"
#include "odelin/expr.hpp"

using namespace odelin;

namespace {

const std::vector<std::string> kVars{"x", "y"};

bool try_eval(const Expr& e, const Point& p, double& out) {
  try {
    out = eval_at(e, p);
  } catch (const EvalError&) {
    return false;
  }
  return std::isfinite(out) && std::abs(out) < 1e6;
}

}  // namespace

TEST_CASE("derivative agrees with central differences on 100 random expressions") {
  testgen::Gen g(20240917);
  int checked = 0;
  double worst = 0;
  for (int attempt = 0; attempt < 5000 && checked < 100; ++attempt) {
    const Expr e = g.expr(kVars, 3);
    const std::string v = kVars[static_cast<std::size_t>(g.integer(0, 1))];
    const Expr d = diff(e, v);
    Point p{{"x", g.real(0.5, 1.5)}, {"y", g.real(0.5, 1.5)}};
    double dv = 0, fp = 0, fm = 0, fp2 = 0, fm2 = 0;
    const double h = 1e-5;
    Point pp = p, pm = p, pp2 = p, pm2 = p;
    pp[v] += h;
    pm[v] -= h;
    pp2[v] += 2 * h;
    pm2[v] -= 2 * h;
    if (!try_eval(d, p, dv) || !try_eval(e, pp, fp) || !try_eval(e, pm, fm) || !try_eval(e, pp2, fp2) ||
        !try_eval(e, pm2, fm2)) {
      continue;
    }
    const double fd = (fp - fm) / (2 * h);
    const double fd2 = (fp2 - fm2) / (4 * h);
    // Points where the difference quotient itself is not converged say
    // nothing about the symbolic derivative.
    if (std::abs(fd - fd2) > 1e-7 * std::max(1.0, std::abs(fd))) continue;
    const double rel = std::abs(dv - fd) / std::max(1.0, std::abs(dv));
    worst = std::max(worst, rel);
    CHECK_MESSAGE(rel <= 1e-5, e.str(), " d/d", v, " = ", d.str());
    ++checked;
  }
  CHECK(checked == 100);
  MESSAGE("worst relative error ", worst);
}

TEST_CASE("canonicalize is idempotent and value-preserving on the same corpus") {
  testgen::Gen g(20240917);
  int checked = 0;
  for (int i = 0; i < 100; ++i) {
    const Expr e = g.expr(kVars, 3);
    const Expr c = canonicalize(e);
    CHECK_MESSAGE(structurally_equal(c, canonicalize(c)), e.str());
    Point p{{"x", g.real(0.5, 1.5)}, {"y", g.real(0.5, 1.5)}};
    double a = 0, b = 0;
    if (try_eval(e, p, a) && try_eval(c, p, b)) {
      CHECK(std::abs(a - b) <= 1e-8 * std::max(1.0, std::abs(a)));
      ++checked;
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("diff is linear") {
  testgen::Gen g(7);
  for (int i = 0; i < 30; ++i) {
    const Expr a = g.expr(kVars, 2), b = g.expr(kVars, 2);
    const Expr k = g.rational(), m = g.rational();
    const Expr lhs = diff(k * a + m * b, "x");
    const Expr rhs = k * diff(a, "x") + m * diff(b, "x");
    CHECK_MESSAGE(is_zero(lhs - rhs).holds(), a.str(), " | ", b.str());
  }
}

TEST_CASE("product and chain rules") {
  const Expr x = Expr::variable("x"), y = Expr::variable("y");
  CHECK(canonically_equal(diff(x * y, "x"), y));
  CHECK(canonically_equal(diff(pow(x, 3), "x"), Expr(3) * pow(x, 2)));
  CHECK(canonically_equal(diff(Expr(1) / x, "x"), Expr(-1) / pow(x, 2)));
  CHECK(canonically_equal(diff(sin(x * y), "y"), x * cos(x * y)));
  CHECK(canonically_equal(diff(ln(x), "x"), Expr(1) / x));
  CHECK(canonically_equal(diff(sqrt(x), "x"), Expr(1) / (Expr(2) * sqrt(x))));
  CHECK(canonically_equal(diff(exp(Expr(2) * x), "x"), Expr(2) * exp(Expr(2) * x)));
  CHECK(canonically_equal(diff(x, "x", 3), Expr(0)));
}

TEST_CASE("canonical forms of equal rational functions coincide") {
  const Expr x = Expr::variable("x"), y = Expr::variable("y");
  CHECK(structurally_equal(canonicalize((x * x - y * y) / (x - y)), canonicalize(x + y)));
  CHECK(structurally_equal(canonicalize(Expr(1) / x + Expr(1) / y), canonicalize((x + y) / (x * y))));
  CHECK(canonicalize(pow(x + Expr(1), 2) - x * x - Expr(2) * x - Expr(1)).is_constant(0));
  CHECK((Expr(1) / Expr(0)).is_undefined());
}

TEST_CASE("zero test verdicts") {
  const Expr x = Expr::variable("x"), y = Expr::variable("y");
  CHECK(is_zero(pow(x + y, 2) - x * x - Expr(2) * x * y - y * y).kind == ZeroVerdict::Kind::ProvenZero);

  const ZeroVerdict trig = is_zero(pow(sin(x), 2) + pow(cos(x), 2) - Expr(1));
  CHECK(trig.kind == ZeroVerdict::Kind::ProbablyZero);
  CHECK(trig.samples == 16);

  const ZeroVerdict nz = is_zero(x - y);
  REQUIRE(nz.kind == ZeroVerdict::Kind::NonZero);
  CHECK_FALSE(nz.witness.empty());
  CHECK(nz.witness_value != 0);

  const ZeroVerdict bad = is_zero(ln(Expr(-1) - x * x) - x);
  CHECK(bad.kind == ZeroVerdict::Kind::Indeterminate);
}

TEST_CASE("zero test is deterministic per seed") {
  const Expr x = Expr::variable("x"), y = Expr::variable("y");
  const Expr e = sin(x) * y - x;
  ZeroTestOptions o;
  o.seed = 42;
  const ZeroVerdict a = is_zero(e, o), b = is_zero(e, o);
  CHECK(a.witness == b.witness);
  CHECK(a.witness_value == b.witness_value);
}

TEST_CASE("substitution") {
  const Expr x = Expr::variable("x"), y = Expr::variable("y"), z = Expr::variable("z");
  CHECK(canonically_equal(substitute(x - Expr(2) * y, {{"x", z}, {"y", Expr(3)}}), z - Expr(6)));
  CHECK(canonically_equal(substitute(x * x, {{"x", y + Expr(1)}}), pow(y + Expr(1), 2)));
  CHECK_THROWS_AS(substitute(x - y, {{"x", y}, {"y", x}}), SubstitutionError);
}

TEST_CASE("total derivative promotes jets") {
  const JetSpace j;
  const Expr x = j.independent_expr(), y = j.jet_expr(0), yp = j.jet_expr(1);
  CHECK(canonically_equal(total_diff(x * y, j, 4), y + x * yp));
  CHECK(canonically_equal(total_diff(pow(yp, 2), j, 4), Expr(2) * yp * j.jet_expr(2)));
  CHECK_THROWS_AS(total_diff(j.jet_expr(4), j, 4), JetError);
  CHECK(j.order_of("y'''") == 3);
  CHECK(j.order_of("x") == -1);
}

TEST_CASE("evaluation raises on poles and domain errors") {
  const Expr x = Expr::variable("x");
  CHECK_THROWS_AS(eval_at(Expr(1) / x, {{"x", 0.0}}), EvalError);
  CHECK_THROWS_AS(eval_at(ln(x), {{"x", -1.0}}), EvalError);
  CHECK_THROWS_AS(eval_at(sqrt(x), {{"x", -1.0}}), EvalError);
  CHECK_THROWS_AS(eval_at(x, {}), EvalError);
  CHECK(eval_at(exp(x), {{"x", 0.0}}) == 1.0);
}
