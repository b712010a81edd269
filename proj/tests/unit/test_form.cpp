#include <doctest.h>

#include <algorithm>

#include "../support/gen.hpp"
#include "odelin/canonical.hpp"
#include "odelin/form.hpp"

using namespace odelin;

namespace {

MatchedForm must_match(const NormalizedOde& o, FormId f) {
  auto m = match_form(o, f);
  if (auto* nm = std::get_if<NoMatch>(&m)) FAIL(nm->reason, ": ", nm->detail);
  return std::get<MatchedForm>(m);
}

void check_coeffs(const CoeffSet& c, std::vector<std::pair<std::string, std::string>> expected) {
  for (const auto& [name, value] : named_coefficients(c)) {
    for (const auto& [en, ev] : expected) {
      if (en == name) CHECK_MESSAGE(canonically_equal(value, parse_expr(ev)), name, " = ", value.str());
    }
  }
}

NoMatch must_miss(const std::string& text, FormId f) {
  auto m = match_form(parse_normalized(text), f);
  REQUIRE(std::holds_alternative<NoMatch>(m));
  return std::get<NoMatch>(m);
}

}  // namespace

TEST_CASE("Example 1 coefficients") {
  const auto m = must_match(parse_normalized("y'*y'''' - y''*y''' - 3*y'^2*y''' + 2*y'^3*y'' + 3*y'^5 = 0"),
                            FormId::Thm1FourthX);
  check_coeffs(m.coeffs, {{"A1", "-1/y'"}, {"A0", "-3*y'"}, {"B3", "0"}, {"B2", "0"}, {"B1", "2*y'^2"},
                          {"B0", "3*y'^4"}});
}

TEST_CASE("Example 2 coefficients") {
  const auto m = must_match(
      parse_normalized(
          "y^2*y'^2*y'''' - 10*y^2*y'*y''*y''' - 3*y*y'^3*y''' + 15*y^2*y''^3 + 9*y*y'^2*y''^2 + 3*y'^4*y'' = 0"),
      FormId::Thm1FourthX);
  check_coeffs(m.coeffs, {{"A1", "-10/y'"}, {"A0", "-3*y'/y"}, {"B3", "15/y'^2"}, {"B2", "9/y"},
                          {"B1", "3*y'^2/y^2"}, {"B0", "0"}});
}

TEST_CASE("Example 3 Type II coefficients") {
  const NormalizedOde o =
      parse_normalized("y'*y''*y'''' - 3*y'*y'''^2 + 6*y'^3*y''^2*y''' - 4*y''^2*y''' - y'*y''^5 = 0");
  const auto m = must_match(o, FormId::Thm2FourthX);
  check_coeffs(m.coeffs, {{"r0", "0"}, {"C2", "6*y'^2 - 4/y'"}, {"C1", "0"}, {"C0", "0"}, {"D5", "-1"},
                          {"D4", "0"}, {"D3", "0"}, {"D2", "0"}, {"D1", "0"}, {"D0", "0"}});
  auto pole = recover_pole(o, FormId::Thm2FourthX);
  REQUIRE(std::holds_alternative<Expr>(pole));
  CHECK(std::get<Expr>(pole).is_constant(0));
}

TEST_CASE("Example 4 coefficients (corrected equation)") {
  const auto m = must_match(parse_normalized("y''*y'''' + y'''^3 - y'''^2 - y''^2*y''' = 0"), FormId::Thm3FourthXY);
  check_coeffs(m.coeffs, {{"a", "1/y''"}, {"b", "-1/y''"}, {"c", "-y''"}, {"d", "0"}});
}

TEST_CASE("Example 4 as printed has a different c") {
  const auto m = must_match(parse_normalized("y''*y'''' + y'''^3 - y'''^2 - y''*y''' = 0"), FormId::Thm3FourthXY);
  check_coeffs(m.coeffs, {{"c", "-1"}});
}

TEST_CASE("pole recovery on a synthetic template") {
  FourthXTypeII c;
  c.r0 = Expr::variable("y");
  c.C2 = Expr::variable("y'");
  c.D[5] = Expr(1);
  const NormalizedOde o = expand_template(FormId::Thm2FourthX, c);
  auto pole = recover_pole(o, FormId::Thm2FourthX);
  REQUIRE(std::holds_alternative<Expr>(pole));
  CHECK(canonically_equal(std::get<Expr>(pole), Expr::variable("y")));
}

TEST_CASE("no-match reasons") {
  CHECK(must_miss("y''' = y", FormId::Thm1FourthX).reason == "order-mismatch");
  CHECK(must_miss("y'''' = y'''^2", FormId::Thm1FourthX).reason == "degree-excess");
  CHECK(must_miss("y'''' = y'''*y''", FormId::Thm2FourthX).reason == "no-quadratic-part");
  const NoMatch leak = must_miss("y'''' = x", FormId::Thm1FourthX);
  CHECK(leak.reason == "variable-leakage");
  CHECK(leak.coefficient == "B0");
  CHECK(must_miss("y'''' = 1/y'''", FormId::Thm1FourthX).reason == "denominator");
  const std::vector<std::string> reasons{"order-mismatch", "denominator",      "degree-excess",
                                         "no-quadratic-part", "variable-leakage", "residual"};
  const NoMatch other = must_miss("y'''' = y'''*y''^2", FormId::Thm1FourthX);
  CHECK(std::find(reasons.begin(), reasons.end(), other.reason) != reasons.end());
}

TEST_CASE("expand_template rejects a foreign variant") {
  CHECK_THROWS_AS(expand_template(FormId::Thm1FourthX, Cubic2{}), std::invalid_argument);
}

TEST_CASE("match_form after expand_template is the identity (50 sets per form)") {
  ZeroTestOptions z;
  z.samples = 16;
  z.tol = 1e-8;
  for (FormId f : kAllForms) {
    testgen::Gen g(1000 + static_cast<int>(f));
    int ok = 0;
    for (int i = 0; i < 50; ++i) {
      CoeffSet c = g.coeffs(f);
      const NormalizedOde o = expand_template(f, c);
      auto m = match_form(o, f);
      if (auto* nm = std::get_if<NoMatch>(&m)) {
        FAIL_CHECK(form_name(f), ": ", nm->reason, " ", nm->detail, " on ", o.str());
        continue;
      }
      const auto back = named_coefficients(std::get<MatchedForm>(m).coeffs);
      const auto orig = named_coefficients(c);
      REQUIRE(back.size() == orig.size());
      bool all = true;
      for (std::size_t k = 0; k < orig.size(); ++k) {
        const ZeroVerdict v = is_zero(orig[k].second - back[k].second, z);
        CHECK_MESSAGE(v.holds(), form_name(f), " ", orig[k].first, ": ", orig[k].second.str(), " vs ",
                      back[k].second.str());
        all = all && v.holds();
      }
      ok += all;
    }
    CHECK_MESSAGE(ok == 50, form_name(f));
  }
}

TEST_CASE("swap form with f = x + y") {
  const NormalizedOde o = expand_template(FormId::SwapRemark, SwapForm{Expr::variable("x") + Expr::variable("y")});
  auto m = match_swap_form(o);
  REQUIRE(std::holds_alternative<MatchedForm>(m));
  CHECK(canonically_equal(std::get<SwapForm>(std::get<MatchedForm>(m).coeffs).f,
                          Expr::variable("x") + Expr::variable("y")));
  CHECK(std::holds_alternative<NoMatch>(match_swap_form(parse_normalized("y'''' = x^2*y'^5"))));
}

TEST_CASE("form names round-trip") {
  for (FormId f : kAllForms) {
    auto back = form_from_name(form_name(f));
    REQUIRE(back.has_value());
    CHECK(*back == f);
  }
  CHECK_FALSE(form_from_name("nope").has_value());
}
