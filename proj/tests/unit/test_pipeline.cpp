#include <doctest.h>

#include <algorithm>

#include "odelin/pipeline.hpp"
#include "odelin/report.hpp"

using namespace odelin;

namespace {

Analysis run_example(int n) {
  const BuiltinExample* ex = find_example(n);
  REQUIRE(ex != nullptr);
  return analyze(parse_normalized(ex->ode), ex->ode, {}, ex);
}

bool has(const std::vector<Discrepancy>& ds, const std::string& id) {
  return std::any_of(ds.begin(), ds.end(), [&](const Discrepancy& d) { return d.id == id; });
}

}  // namespace

TEST_CASE("built-in examples are recognized from their equations") {
  for (const auto& ex : builtin_examples()) {
    const BuiltinExample* got = recognize_example(parse_normalized(ex.ode));
    REQUIRE(got != nullptr);
    CHECK(got->number == ex.number);
  }
  CHECK(recognize_example(parse_normalized("y'''' = y")) == nullptr);
}

TEST_CASE("Example 1 analysis") {
  const Analysis a = run_example(1);
  CHECK(a.headline == Verdict::Pass);
  REQUIRE(a.auto_method.has_value());
  CHECK(*a.auto_method == Method::MissingX);
  const ReductionOutcome* xy = a.reduction(Method::MissingXY);
  REQUIRE(xy != nullptr);
  CHECK(xy->linearization.verdict == Verdict::Fail);
  CHECK(has(a.discrepancies, "printed-coefficient:B0"));
  CHECK_FALSE(has(a.discrepancies, "printed-reduced-equation"));
}

TEST_CASE("Example 3 analysis flags d5 and the printed reduced equation") {
  const Analysis a = run_example(3);
  CHECK(a.headline == Verdict::Pass);
  CHECK(a.paper_formula_disagrees);
  CHECK(has(a.discrepancies, "identification:d5"));
  CHECK_FALSE(has(a.discrepancies, "identification:c1"));
  CHECK(has(a.discrepancies, "printed-reduced-equation"));
  const FormOutcome* f = a.form(FormId::Thm2FourthX);
  REQUIRE(f != nullptr);
  REQUIRE(f->report.has_value());
  CHECK(f->report->overall == Verdict::Pass);
}

TEST_CASE("Example 4 analysis: printed conditions disagree with reduce-then-test") {
  const Analysis a = run_example(4);
  CHECK(a.headline == Verdict::Pass);
  CHECK(a.paper_formula_disagrees);
  CHECK(has(a.discrepancies, "printed-ode"));
  CHECK(has(a.discrepancies, "printed-conditions:thm3-fourth-xy"));
  const auto it = std::find_if(a.cross_checks.begin(), a.cross_checks.end(),
                               [](const CrossCheck& c) { return c.form == FormId::Thm3FourthXY; });
  REQUIRE(it != a.cross_checks.end());
  CHECK(it->printed == Verdict::Fail);
  CHECK(it->semantic == Verdict::Pass);
}

TEST_CASE("y'''' = 0 still classifies through a reduction") {
  const NormalizedOde o = parse_normalized("y'''' = 0");
  const Analysis a = analyze(o, "y'''' = 0");
  CHECK(a.example == nullptr);
  const FormOutcome* f = a.form(FormId::Thm1FourthX);
  REQUIRE(f != nullptr);
  REQUIRE(f->report.has_value());
  CHECK(f->report->overall == Verdict::Fail);
  CHECK(a.headline == Verdict::Pass);
  REQUIRE(a.auto_method.has_value());
  CHECK(*a.auto_method == Method::MissingXY);
}

TEST_CASE("verification of every example passes") {
  for (const auto& ex : builtin_examples()) {
    const Analysis a = analyze(parse_normalized(ex.ode), ex.ode, {}, &ex);
    const Verification v = verify(a, {});
    CHECK_MESSAGE(v.overall == Verdict::Pass, "example ", ex.number);
    REQUIRE(v.reduction.has_value());
    CHECK(v.reduction->verdict == Verdict::Pass);
  }
}

TEST_CASE("a claimed reduced equation that is wrong fails verification") {
  const Analysis a = run_example(1);
  VerifyOptions o;
  o.reduced = "u''' + 3/u*u'*u'' - 3*u'' - 3/u*u'^2 - 2*u' + 3*u = 0";
  const Verification v = verify(a, o);
  REQUIRE(v.reduction.has_value());
  CHECK(v.reduction->reduced_from_user);
  CHECK(v.reduction->verdict == Verdict::Fail);
  CHECK(v.overall == Verdict::Fail);
}

TEST_CASE("JSON is stable across runs apart from the timestamp") {
  const Analysis a = run_example(3);
  const Verification v = verify(a, {});
  auto render = [&](const std::string& ts) {
    Report r;
    r.command = "verify";
    r.source = "example 3";
    r.timestamp = ts;
    r.analysis = &a;
    r.verification = &v;
    r.verdict = "pass";
    return to_json(r);
  };
  auto j1 = render("2020-01-01T00:00:00Z");
  auto j2 = render("2021-01-01T00:00:00Z");
  CHECK(j1["timestamp"] != j2["timestamp"]);
  j1.erase("timestamp");
  j2.erase("timestamp");
  CHECK(j1.dump() == j2.dump());
  CHECK(j1["tool"] == "odelin");
  CHECK(j1["headline"]["paper_formula_disagrees"] == true);
}
