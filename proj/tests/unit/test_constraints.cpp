#include <doctest.h>

#include "../support/gen.hpp"
#include "odelin/canonical.hpp"
#include "odelin/constraints.hpp"
#include "odelin/reduction.hpp"

using namespace odelin;

namespace {

const char* kEx1 = "y'*y'''' - y''*y''' - 3*y'^2*y''' + 2*y'^3*y'' + 3*y'^5 = 0";
const char* kEx3 = "y'*y''*y'''' - 3*y'*y'''^2 + 6*y'^3*y''^2*y''' - 4*y''^2*y''' - y'*y''^5 = 0";
const char* kEx4 = "y''*y'''' + y'''^3 - y'''^2 - y''^2*y''' = 0";

ConstraintReport report_for(const std::string& text, FormId f) {
  auto m = match_form(parse_normalized(text), f);
  REQUIRE(std::holds_alternative<MatchedForm>(m));
  return evaluate_constraints(std::get<MatchedForm>(m));
}

const Condition& find(const ConstraintReport& r, const std::string& id) {
  for (const auto& c : r.conditions) {
    if (c.id == id) return c;
  }
  FAIL("no condition ", id);
  return r.conditions.front();
}

}  // namespace

TEST_CASE("condition counts per system") {
  testgen::Gen g(5);
  const std::vector<std::pair<FormId, std::size_t>> counts{{FormId::LieCubic2, 2},   {FormId::ImType1Third, 5},
                                                           {FormId::Thm1FourthX, 5}, {FormId::Thm2FourthX, 8},
                                                           {FormId::Thm3FourthXY, 2}, {FormId::Type1FourthY, 5}};
  for (const auto& [f, n] : counts) {
    const CoeffSet c = g.coeffs(f);
    auto m = match_form(expand_template(f, c), f);
    REQUIRE(std::holds_alternative<MatchedForm>(m));
    const ConstraintReport r = evaluate_constraints(std::get<MatchedForm>(m));
    CHECK_MESSAGE(r.conditions.size() == n, form_name(f));
    CHECK(r.H.has_value() == (f == FormId::Thm2FourthX));
    for (const auto& cond : r.conditions) CHECK_FALSE(cond.provenance.empty());
  }
}

TEST_CASE("Example 1 satisfies the x-free Type I conditions exactly") {
  const ConstraintReport r = report_for(kEx1, FormId::Thm1FourthX);
  CHECK(r.overall == Verdict::Pass);
  for (const auto& c : r.conditions) CHECK_MESSAGE(c.verdict.kind == ZeroVerdict::Kind::ProvenZero, c.id);
}

TEST_CASE("perturbing B1 by a constant multiple keeps all five conditions") {
  // Known behavior of the printed system: b*y'^2 for any constant b passes.
  for (const char* b : {"3", "-7/2", "11"}) {
    const std::string text =
        std::string("y'''' = -3*y'^4 - ") + b + "*y''*y'^2 + 3*y'''*y' + y'''*y''/y'";
    const ConstraintReport r = report_for(text, FormId::Thm1FourthX);
    CHECK_MESSAGE(r.overall == Verdict::Pass, b);
  }
}

TEST_CASE("y'''' = 0 fails the fourth condition with residual -5") {
  const ConstraintReport r = report_for("y'''' = 0", FormId::Thm1FourthX);
  CHECK(r.overall == Verdict::Fail);
  const Condition& c4 = find(r, "thm1-4");
  CHECK(c4.residual.is_constant(-5));
  CHECK(c4.verdict.kind == ZeroVerdict::Kind::NonZero);
  for (const char* id : {"thm1-1", "thm1-2", "thm1-3", "thm1-5"}) CHECK(find(r, id).verdict.holds());
}

TEST_CASE("Example 3 passes c1..c8 and H expands to a constant term of 22") {
  const ConstraintReport r = report_for(kEx3, FormId::Thm2FourthX);
  CHECK(r.overall == Verdict::Pass);
  for (const auto& c : r.conditions) CHECK_MESSAGE(c.verdict.kind == ZeroVerdict::Kind::ProvenZero, c.id);
  REQUIRE(r.H.has_value());
  const Expr expected = parse_expr("32*y'^6 - 24*y'^3 + 22 - 28/y'^3");
  CHECK_MESSAGE(canonically_equal(*r.H, expected), r.H->str());
  CHECK_FALSE(canonically_equal(*r.H, parse_expr("32*y'^6 - 24*y'^3 + 76/3 - 28/y'^3")));
  CHECK_FALSE(r.notes.empty());
}

TEST_CASE("printed x,y-free conditions on Example 4 leave 4y''") {
  const ConstraintReport r = report_for(kEx4, FormId::Thm3FourthXY);
  CHECK(r.overall == Verdict::Fail);
  CHECK(canonically_equal(find(r, "thm3-1").residual, parse_expr("4*y''")));
  CHECK(find(r, "thm3-2").verdict.kind == ZeroVerdict::Kind::ProvenZero);
}

TEST_CASE("Tresse on the reduced Example 4") {
  const ConstraintReport r = tresse_conditions(Cubic2{Expr(1), Expr(0), Expr(-1), Expr(0)}, {"y'", "u"});
  CHECK(r.overall == Verdict::Pass);
  for (const auto& c : r.conditions) CHECK(c.verdict.kind == ZeroVerdict::Kind::ProvenZero);

  const ReductionTrace t = reduce_missing_xy(parse_normalized(kEx4));
  auto m = match_form(t.reduced, FormId::LieCubic2);
  REQUIRE(std::holds_alternative<MatchedForm>(m));
  CHECK(evaluate_constraints(std::get<MatchedForm>(m)).overall == Verdict::Pass);
}

TEST_CASE("Tresse rejects a non-linearizable cubic") {
  const ConstraintReport r = tresse_conditions(Cubic2{Expr(0), Expr(0), Expr(0), Expr::variable("y") * Expr::variable("y")}, {"x", "y"});
  CHECK(r.overall == Verdict::Fail);
}

TEST_CASE("third-order Type I on reduced Example 1") {
  const ReductionTrace t = reduce_missing_x(parse_normalized(kEx1));
  auto m = match_form(t.reduced, FormId::ImType1Third);
  REQUIRE(std::holds_alternative<MatchedForm>(m));
  const ConstraintReport r = evaluate_constraints(std::get<MatchedForm>(m));
  CHECK(r.overall == Verdict::Pass);
  CHECK(r.conditions.size() == 5);
}

TEST_CASE("third-order Type II has no constraint system here") {
  testgen::Gen g(3);
  auto m = match_form(expand_template(FormId::ImType2Third, g.coeffs(FormId::ImType2Third)), FormId::ImType2Third);
  REQUIRE(std::holds_alternative<MatchedForm>(m));
  const ConstraintReport r = evaluate_constraints(std::get<MatchedForm>(m));
  CHECK(r.overall == Verdict::Unsupported);
  CHECK(r.conditions.empty());
}

TEST_CASE("condition residuals are deterministic") {
  const ConstraintReport a = report_for("y'''' = y'*y'''", FormId::Thm1FourthX);
  const ConstraintReport b = report_for("y'''' = y'*y'''", FormId::Thm1FourthX);
  REQUIRE(a.conditions.size() == b.conditions.size());
  for (std::size_t i = 0; i < a.conditions.size(); ++i) {
    CHECK(structurally_equal(a.conditions[i].residual, b.conditions[i].residual));
    CHECK(a.conditions[i].verdict.kind == b.conditions[i].verdict.kind);
  }
}
