#include "odelin/reduction.hpp"

#include <stdexcept>

namespace odelin {
namespace {

// Chain-rule images of the source jets: image(first) = seed and
// image(y^(k+1)) = sigma * D_new(image(y^(k))).
Bindings chain_images(const NormalizedOde& ode, int first, const Expr& seed, const Expr& sigma,
                      const JetSpace& target) {
  Bindings out;
  Expr image = seed;
  for (int k = first; k <= ode.order; ++k) {
    out.emplace_back(ode.jets.jet(k), image);
    if (k < ode.order) image = canonicalize(sigma * total_diff(image, target, ode.order + 1));
  }
  return out;
}

// u, u', ... written in source jets: inverse[0] = w, inverse[k+1] = D(inverse[k]) / D(s).
std::vector<Expr> inverse_jets(const NormalizedOde& ode, const Expr& s, const Expr& w, int reduced_order) {
  std::vector<Expr> out{w};
  const Expr ds = total_diff(s, ode.jets, ode.order + 2);
  for (int k = 0; k < reduced_order; ++k) {
    out.push_back(canonicalize(total_diff(out.back(), ode.jets, ode.order + 2) / ds));
  }
  return out;
}

ReductionTrace finish(Method method, const NormalizedOde& ode, Bindings dictionary, const JetSpace& target,
                      const Expr& s, const Expr& w) {
  ReductionTrace t;
  t.method = method;
  t.source = ode;
  t.dictionary = std::move(dictionary);
  const Expr substituted = substitute(ode.top() - ode.rhs, t.dictionary);
  try {
    t.reduced = normalize_leading(Equation{substituted, Expr(0)}, target);
  } catch (const NormalizeError& e) {
    throw ReductionError(std::string(method_name(method)) + ": " + e.what());
  }
  t.divisor = t.reduced.leading;
  t.new_independent = s;
  t.inverse = inverse_jets(ode, s, w, t.reduced.order);
  return t;
}

void require_absent(const NormalizedOde& ode, bool independent, bool dependent, Method m) {
  const DependencyProfile d = dependency_scan(ode);
  const std::string name(method_name(m));
  if (independent && d.uses_independent) {
    throw ReductionError(name + ": the equation depends on " + ode.jets.independent);
  }
  if (dependent && d.uses_dependent) {
    throw ReductionError(name + ": the equation depends on " + ode.jets.jet(0));
  }
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::MissingY: return "missing-y";
    case Method::MissingX: return "missing-x";
    case Method::MissingXY: return "missing-xy";
    case Method::Swap: return "swap";
  }
  return "?";
}

std::optional<Method> method_from_name(std::string_view name) {
  for (Method m : {Method::MissingY, Method::MissingX, Method::MissingXY, Method::Swap}) {
    if (method_name(m) == name) return m;
  }
  return std::nullopt;
}

ReductionTrace reduce_missing_y(const NormalizedOde& ode) {
  if (ode.order < 3) throw ReductionError("missing-y: needs order 3 or 4");
  require_absent(ode, false, true, Method::MissingY);
  const JetSpace target{ode.jets.independent, "u"};
  Bindings dict = chain_images(ode, 1, target.jet_expr(0), Expr(1), target);
  ReductionTrace t = finish(Method::MissingY, ode, std::move(dict), target, ode.jets.independent_expr(),
                            ode.jets.jet_expr(1));
  t.recipe = {"solve the reduced equation for u(" + target.independent + ")",
              ode.jets.jet(0) + " = integral of u(" + target.independent + ") d" + target.independent + " + C"};
  return t;
}

ReductionTrace reduce_missing_x(const NormalizedOde& ode) {
  if (ode.order < 3) throw ReductionError("missing-x: needs order 3 or 4");
  require_absent(ode, true, false, Method::MissingX);
  const JetSpace target{ode.jets.jet(0), "u"};
  const Expr u = target.jet_expr(0);
  Bindings dict = chain_images(ode, 1, u, u, target);
  ReductionTrace t = finish(Method::MissingX, ode, std::move(dict), target, ode.jets.jet_expr(0), ode.jets.jet_expr(1));
  const std::string& x = ode.jets.independent;
  const std::string& y = target.independent;
  t.recipe = {"solve the reduced equation for u(" + y + ")",
              "quadrature: integral of d" + y + "/u(" + y + ") = " + x + " + C",
              "invert " + x + "(" + y + ") on arcs where u does not vanish"};
  t.warnings = {"u = " + ode.jets.jet(1) + " must be nonzero on solution arcs; divided by " + t.divisor.str()};
  return t;
}

ReductionTrace reduce_missing_xy(const NormalizedOde& ode) {
  if (ode.order != 4) throw ReductionError("missing-xy: needs order 4");
  require_absent(ode, true, true, Method::MissingXY);
  const JetSpace target{ode.jets.jet(1), "u"};
  const Expr u = target.jet_expr(0);
  Bindings dict = chain_images(ode, 2, u, u, target);
  ReductionTrace t = finish(Method::MissingXY, ode, std::move(dict), target, ode.jets.jet_expr(1), ode.jets.jet_expr(2));
  const std::string& p = target.independent;
  const std::string& x = ode.jets.independent;
  t.recipe = {"solve the reduced second-order equation for u(" + p + ")",
              ode.jets.jet(2) + " = u(" + p + ") is first order in p = " + p + ": integral of dp/u(p) = " + x + " + C",
              "invert to obtain " + p + "(" + x + "), then " + ode.jets.jet(0) + " = integral of " + p + " d" + x +
                  " + C"};
  t.warnings = {"u = " + ode.jets.jet(2) + " must be nonzero on solution arcs; divided by " + t.divisor.str()};
  return t;
}

ReductionTrace swap_variables(const NormalizedOde& ode) {
  auto m = match_swap_form(ode);
  if (auto* nm = std::get_if<NoMatch>(&m)) throw ReductionError("swap: " + nm->reason + ": " + nm->detail);
  const JetSpace target{ode.jets.jet(0), ode.jets.independent};
  const Expr inv = Expr(1) / target.jet_expr(1);
  Bindings dict = chain_images(ode, 1, inv, inv, target);
  ReductionTrace t = finish(Method::Swap, ode, std::move(dict), target, ode.jets.jet_expr(0), ode.jets.independent_expr());
  t.recipe = {"solve the linear equation " + t.reduced.str() + " for " + target.dependent + "(" + target.independent + ")",
              "invert " + target.dependent + "(" + target.independent + ") on monotone branches"};
  return t;
}

ReductionTrace reduce(const NormalizedOde& ode, Method m) {
  switch (m) {
    case Method::MissingY: return reduce_missing_y(ode);
    case Method::MissingX: return reduce_missing_x(ode);
    case Method::MissingXY: return reduce_missing_xy(ode);
    case Method::Swap: return swap_variables(ode);
  }
  throw ReductionError("unknown method");
}

std::vector<Method> plan(const NormalizedOde& ode) {
  std::vector<Method> out;
  if (ode.order < 3) return out;
  const DependencyProfile d = dependency_scan(ode);
  if (ode.order == 4 && std::holds_alternative<MatchedForm>(match_swap_form(ode))) out.push_back(Method::Swap);
  if (ode.order == 4 && !d.uses_independent && !d.uses_dependent) out.push_back(Method::MissingXY);
  if (!d.uses_independent) out.push_back(Method::MissingX);
  if (!d.uses_dependent) out.push_back(Method::MissingY);
  return out;
}

IdentificationOutcome identify_coeffs(const MatchedForm& m, const ZeroTestOptions& opts) {
  if (m.form != FormId::Thm1FourthX && m.form != FormId::Thm2FourthX) {
    throw std::invalid_argument("identification maps exist only for the x-free fourth-order forms");
  }
  const std::string& yp = m.vars.second;
  const Expr P = Expr::variable(yp);
  const Bindings to_u{{yp, Expr::variable("u")}};

  IdentificationOutcome out;
  out.source_form = m.form;
  std::vector<std::pair<std::string, Expr>> printed;
  if (m.form == FormId::Thm1FourthX) {
    out.reduced_form = FormId::ImType1Third;
    const auto& c = std::get<FourthXTypeI>(m.coeffs);
    printed = {
        {"a1", c.A1 + Expr(4) / P},
        {"a0", c.A0 / P},
        {"b3", c.B3 + c.A1 / P + Expr(1) / pow(P, 2)},
        {"b2", c.B2 / P + c.A0 / pow(P, 2)},
        {"b1", c.B1 / pow(P, 2)},
        {"b0", c.B0 / pow(P, 3)},
    };
  } else {
    out.reduced_form = FormId::ImType2Third;
    const auto& c = std::get<FourthXTypeII>(m.coeffs);
    const auto& D = c.D;
    printed = {
        {"r", c.r0 / P},
        {"c2", c.C2 - Expr(2) / P},
        {"c1", c.C1 + Expr(4) * c.r0 / P},
        {"c0", c.C0 / pow(P, 2)},
        {"d5", D[5] / pow(P, 5)},
        {"d4", D[4] + c.C2 / P - Expr(2) / pow(P, 2)},
        {"d3", D[3] / P + c.C1 / P + Expr(4) * c.r0 / pow(P, 2) - Expr(3) * c.r0 / pow(P, 3)},
        {"d2", D[2] / pow(P, 2) + c.C0 / pow(P, 3)},
        {"d1", D[1] / pow(P, 3)},
        {"d0", D[0] / pow(P, 4)},
    };
  }

  const NormalizedOde source = expand_template(m.form, m.coeffs, m.jets);
  std::vector<std::pair<std::string, Expr>> semantic;
  try {
    const ReductionTrace t = reduce_missing_x(source);
    auto rm = match_form(t.reduced, out.reduced_form);
    if (auto* nm = std::get_if<NoMatch>(&rm)) {
      out.semantic_failure = *nm;
    } else {
      semantic = named_coefficients(std::get<MatchedForm>(rm).coeffs);
    }
  } catch (const ReductionError& e) {
    out.semantic_failure = NoMatch{"reduction", e.what(), {}, {}};
  }

  out.all_agree = !out.semantic_failure.has_value();
  for (auto& [name, value] : printed) {
    CoefficientAgreement a;
    a.name = name;
    a.printed = canonicalize(substitute(value, to_u));
    for (const auto& [sn, sv] : semantic) {
      if (sn == name) a.semantic = sv;
    }
    if (a.semantic) {
      a.agreement = is_zero(a.printed - *a.semantic, opts);
      if (!a.agreement.holds()) out.all_agree = false;
    } else {
      a.agreement.kind = ZeroVerdict::Kind::Indeterminate;
      a.agreement.detail = "no semantic coefficient";
    }
    out.coefficients.push_back(std::move(a));
  }
  return out;
}

}  // namespace odelin
