#include "odelin/examples.hpp"

#include "odelin/canonical.hpp"

namespace odelin {
namespace {

using Kind = SolutionCandidate::Kind;
using Role = SolutionFamily::Role;

std::vector<BuiltinExample> build() {
  std::vector<BuiltinExample> out;
  const JetSpace yu{"y", "u"};

  {
    BuiltinExample e;
    e.number = 1;
    e.ode = "y'*y'''' - y''*y''' - 3*y'^2*y''' + 2*y'^3*y'' + 3*y'^5 = 0";
    e.printed_ode = e.ode;
    e.form = FormId::Thm1FourthX;
    e.printed_coefficients = {{"A1", "-1/y'"}, {"A0", "-3*y'"}, {"B3", "0"},
                              {"B2", "0"},     {"B1", "2*y'^2"}, {"B0", "3*y'^5"}};
    e.method = Method::MissingX;
    e.printed_reduced = "u''' + 3/u*u'*u'' - 3*u'' - 3/u*u'^2 + 2*u' + 3*u = 0";
    e.reduced_jets = yu;
    e.initial = {0, 1, 1, 1};
    const std::string radicand = "c1*exp(-y) + exp(2*y)*(c2*cos(sqrt(2)*y) + c3*sin(sqrt(2)*y))";
    e.solutions = {
        {"reduced equation, u(y)", Role::Claim, true, e.printed_reduced, yu, Kind::Explicit,
         "sqrt(" + radicand + ")", {"c1", "c2", "c3"}},
        {"linear target s''' - 2s/t^3 = 0", Role::PaperCheck, true, "s''' - 2*s/t^3 = 0", {"t", "s"},
         Kind::Explicit, "c1/t + t^2*(c2*cos(sqrt(2)*ln(t)) + c3*sin(sqrt(2)*ln(t)))", {"c1", "c2", "c3"}},
        {"linear target s''' + 6s/t^3 = 0", Role::PaperCheck, false, "s''' + 6*s/t^3 = 0", {"t", "s"},
         Kind::Explicit, "c1/t + t^2*(c2*cos(sqrt(2)*ln(t)) + c3*sin(sqrt(2)*ln(t)))", {"c1", "c2", "c3"}},
    };
    e.quadrature = "integral of dy/sqrt(" + radicand + ") = +/-x + c4";
    out.push_back(std::move(e));
  }
  {
    BuiltinExample e;
    e.number = 2;
    e.ode = "y^2*y'^2*y'''' - 10*y^2*y'*y''*y''' - 3*y*y'^3*y''' + 15*y^2*y''^3 + 9*y*y'^2*y''^2 + 3*y'^4*y'' = 0";
    e.printed_ode = e.ode;
    e.form = FormId::Thm1FourthX;
    e.printed_coefficients = {{"A1", "-10/y'"}, {"A0", "-3*y'/y"},     {"B3", "15/y'^2"},
                              {"B2", "9/y"},    {"B1", "3*y'^2/y^2"}, {"B0", "0"}};
    e.method = Method::MissingX;
    e.printed_reduced = "y^2*u^2*u''' - 3*y*u^2*u'' - 6*y^2*u*u'*u'' + 3*u^2*u' + 6*y*u*u'^2 + 6*y^2*u'^3 = 0";
    e.reduced_jets = yu;
    e.initial = {1, 1, 1, 1};
    e.solutions = {
        {"general solution, x(y)", Role::Claim, true, e.ode, {}, Kind::Implicit, "c1*y^5 + c2*y^3 + c3*y + c4",
         {"c1", "c2", "c3", "c4"}},
        {"reduced equation, u(y)", Role::Claim, true, e.printed_reduced, yu, Kind::Explicit,
         "1/(c1*y^4 + c2*y^2 + c3)", {"c1", "c2", "c3"}},
    };
    out.push_back(std::move(e));
  }
  {
    BuiltinExample e;
    e.number = 3;
    e.ode = "y'*y''*y'''' - 3*y'*y'''^2 + 6*y'^3*y''^2*y''' - 4*y''^2*y''' - y'*y''^5 = 0";
    e.printed_ode = e.ode;
    e.form = FormId::Thm2FourthX;
    e.printed_coefficients = {{"r0", "0"}, {"C2", "6*y'^2 - 4/y'"}, {"C1", "0"}, {"C0", "0"}, {"D5", "-1"},
                              {"D4", "0"}, {"D3", "0"},             {"D2", "0"}, {"D1", "0"}, {"D0", "0"}};
    e.method = Method::MissingX;
    e.printed_reduced = "u''' + (-3*u''^2 - y*u'^5)/u' = 0";
    e.reduced_jets = yu;
    e.initial = {0, 1, 1, 0};
    e.solutions = {
        {"printed reduced equation, y(u)", Role::PaperCheck, true, e.printed_reduced, yu, Kind::Implicit,
         "c1*exp(-u) + c2*exp(u/2)*cos(u) + c3*exp(u/2)*sin(u)", {"c1", "c2", "c3"}},
        {"printed reduced equation, y(u) with cos(sqrt(3)u/2)", Role::PaperCheck, false, e.printed_reduced, yu,
         Kind::Implicit, "c1*exp(-u) + c2*exp(u/2)*cos(sqrt(3)*u/2) + c3*exp(u/2)*sin(sqrt(3)*u/2)",
         {"c1", "c2", "c3"}},
    };
    out.push_back(std::move(e));
  }
  {
    BuiltinExample e;
    e.number = 4;
    e.ode = "y''*y'''' + y'''^3 - y'''^2 - y''^2*y''' = 0";
    e.printed_ode = "y''*y'''' + y'''^3 - y'''^2 - y''*y''' = 0";
    e.correction_note =
        "the printed last term -y''*y''' is read as -y''^2*y'''; only that reading has c = -y'' and reduces to "
        "u'' + u'^3 - u' = 0";
    e.form = FormId::Thm3FourthXY;
    e.printed_coefficients = {{"a", "1/y''"}, {"b", "-1/y''"}, {"c", "-y''"}, {"d", "0"}};
    e.method = Method::MissingXY;
    e.printed_reduced = "u'' + u'^3 - u' = 0";
    e.reduced_jets = {"y'", "u"};
    e.initial = {0, 0, 1, 0.5};
    e.solutions = {
        {"reduced equation, y'(u)", Role::Claim, true, e.printed_reduced, e.reduced_jets, Kind::Implicit,
         "ln(c1*exp(-u) + c2*exp(u))", {"c1", "c2"}},
    };
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace

const std::vector<BuiltinExample>& builtin_examples() {
  static const std::vector<BuiltinExample> all = build();
  return all;
}

const BuiltinExample* find_example(int number) {
  for (const auto& e : builtin_examples()) {
    if (e.number == number) return &e;
  }
  return nullptr;
}

const BuiltinExample* recognize_example(const NormalizedOde& ode) {
  for (const auto& e : builtin_examples()) {
    const NormalizedOde known = parse_normalized(e.ode);
    if (known.jets == ode.jets && known.order == ode.order && canonically_equal(known.rhs, ode.rhs)) return &e;
  }
  return nullptr;
}

NormalizedOde parse_in(const std::string& text, const JetSpace& jets, const std::vector<std::string>& constants) {
  ParseContext ctx;
  ctx.jets = jets;
  ctx.extra_symbols = constants;
  return normalize_leading(parse_ode(text, ctx), jets);
}

}  // namespace odelin
