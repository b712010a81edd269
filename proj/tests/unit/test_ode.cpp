#include <doctest.h>

#include "../support/gen.hpp"
#include "odelin/canonical.hpp"
#include "odelin/ode.hpp"

using namespace odelin;

TEST_CASE("Example 1 normalizes by its leading coefficient") {
  const NormalizedOde o = parse_normalized("y'*y'''' - y''*y''' - 3*y'^2*y''' + 2*y'^3*y'' + 3*y'^5 = 0");
  CHECK(o.order == 4);
  CHECK(o.leading.str() == "y'");
  CHECK(o.str() == "y'''' = -3*y'^4 - 2*y''*y'^2 + 3*y'''*y' + y'''*y''/y'");
}

TEST_CASE("grammar details") {
  CHECK(parse_normalized("y^(4) = y").structurally_equals(parse_normalized("y'''' = y")));
  CHECK(canonically_equal(parse_normalized("y'' = 0.25*y").rhs, Expr::rational(1, 4) * Expr::variable("y")));
  CHECK(canonically_equal(parse_normalized("y'' + x^-2*y").rhs, -Expr::variable("y") / pow(Expr::variable("x"), 2)));
  CHECK(canonically_equal(parse_normalized("y''' = 2^3").rhs, Expr(8)));
  CHECK(parse_normalized("y'' = -y").order == 2);
  CHECK(canonically_equal(parse_normalized("y'' = y^2").rhs, pow(Expr::variable("y"), 2)));
  CHECK(canonically_equal(parse_normalized("2*y''' = exp(x)*sin(y)").rhs,
                          exp(Expr::variable("x")) * sin(Expr::variable("y")) / Expr(2)));
}

TEST_CASE("parse errors carry byte offsets") {
  try {
    parse_ode("y''''' = 0");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 0);
    CHECK(std::string(e.what()).find("order 5") != std::string::npos);
  }
  try {
    parse_ode("y'' = z + 1");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 6);
  }
  CHECK_THROWS_AS(parse_ode("y'' = y = 1"), ParseError);
  CHECK_THROWS_AS(parse_ode("y'' = y^(1/2)"), ParseError);
  CHECK_THROWS_AS(parse_ode("y'' = (y"), ParseError);
  CHECK_THROWS_AS(parse_ode("y'' = y +"), ParseError);
  CHECK_THROWS_AS(parse_ode("y'' = 3 $ y"), ParseError);
}

TEST_CASE("normalize errors") {
  CHECK_THROWS_AS(parse_normalized("y'''^2 = 1"), NormalizeError);
  CHECK_THROWS_AS(parse_normalized("y' = y"), NormalizeError);
  CHECK_THROWS_AS(parse_normalized("x = 1"), NormalizeError);
  CHECK_THROWS_AS(parse_normalized("sin(y'') = y"), NormalizeError);
  CHECK_THROWS_AS(parse_normalized("y''/y''' = 1"), NormalizeError);
}

TEST_CASE("other jet spaces parse") {
  ParseContext ctx;
  ctx.jets = {"y'", "u"};
  const NormalizedOde o = normalize_leading(parse_ode("u'' + u'^3 - u' = 0", ctx), ctx.jets);
  CHECK(o.order == 2);
  CHECK(o.str() == "u'' = -u'^3 + u'");
  ctx.extra_symbols = {"c1"};
  CHECK(canonically_equal(parse_expr("c1*u", ctx), Expr::variable("c1") * Expr::variable("u")));
}

TEST_CASE("dependency scan") {
  const DependencyProfile a = dependency_scan(parse_normalized("y'''' = y'*y''"));
  CHECK(a.order == 4);
  CHECK_FALSE(a.uses_independent);
  CHECK_FALSE(a.uses_dependent);
  const DependencyProfile b = dependency_scan(parse_normalized("y''' = x*y"));
  CHECK(b.uses_independent);
  CHECK(b.uses_dependent);
}

TEST_CASE("printing round-trips through the parser") {
  testgen::Gen g(99);
  const JetSpace j;
  for (int i = 0; i < 60; ++i) {
    const int order = g.integer(2, 4);
    std::vector<std::string> vars{"x"};
    for (int k = 0; k < order; ++k) vars.push_back(j.jet(k));
    const Expr rhs = g.expr(vars, 3);
    NormalizedOde o;
    try {
      o = normalize_leading(Equation{j.jet_expr(order), rhs});
    } catch (const NormalizeError&) {
      continue;
    }
    const NormalizedOde again = parse_normalized(o.str());
    CHECK_MESSAGE(again.structurally_equals(o), o.str());
    const NormalizedOde from_eq = parse_normalized(o.equation_str());
    CHECK_MESSAGE(canonically_equal(from_eq.rhs, o.rhs), o.equation_str());
  }
}
