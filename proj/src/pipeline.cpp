#include "odelin/pipeline.hpp"

#include <algorithm>
#include <sstream>

#include "odelin/canonical.hpp"

namespace odelin {
namespace {

std::optional<Method> semantic_method(FormId f) {
  switch (f) {
    case FormId::Thm1FourthX:
    case FormId::Thm2FourthX: return Method::MissingX;
    case FormId::Thm3FourthXY: return Method::MissingXY;
    case FormId::Type1FourthY:
    case FormId::Type2FourthYFormOnly: return Method::MissingY;
    case FormId::SwapRemark: return Method::Swap;
    default: return std::nullopt;
  }
}

bool decisive(Verdict v) { return v == Verdict::Pass || v == Verdict::Fail; }

// True when rhs is affine in the jets of order < order, with constant coefficients.
bool is_linear(const NormalizedOde& ode) {
  for (int k = 0; k < ode.order; ++k) {
    const Expr d = canonicalize(diff(ode.rhs, ode.jets.jet(k)));
    for (SymbolId v : free_variables(d)) {
      if (ode.jets.order_of(symbol_name(v)) >= 0) return false;
    }
  }
  return true;
}

std::string nonzero_residuals(const ConstraintReport& r) {
  std::ostringstream os;
  bool first = true;
  for (const Condition& c : r.conditions) {
    if (c.verdict.holds()) continue;
    os << (first ? "" : "; ") << c.id << " = " << c.residual.str();
    first = false;
  }
  return os.str();
}

void example_discrepancies(Analysis& a) {
  const BuiltinExample& e = *a.example;
  const NormalizedOde printed = parse_normalized(e.printed_ode);
  if (!canonically_equal(printed.rhs, a.ode.rhs) || printed.order != a.ode.order) {
    a.discrepancies.push_back({"printed-ode", e.printed_ode, e.ode, e.correction_note});
  }
  if (const FormOutcome* f = a.form(e.form)) {
    if (const auto* m = std::get_if<MatchedForm>(&f->match)) {
      for (const auto& [name, value] : named_coefficients(m->coeffs)) {
        for (const auto& pc : e.printed_coefficients) {
          if (pc.name != name) continue;
          if (!canonically_equal(parse_expr(pc.text), value)) {
            a.discrepancies.push_back({"printed-coefficient:" + name, pc.text, value.str(),
                                       "read off the equation normalized by its leading coefficient " +
                                           a.ode.leading.str()});
          }
        }
      }
    }
  }
  if (const ReductionOutcome* r = a.reduction(e.method); r && r->trace) {
    const NormalizedOde printed_red = parse_in(e.printed_reduced, e.reduced_jets);
    const NormalizedOde& red = r->trace->reduced;
    if (printed_red.order != red.order || !canonically_equal(printed_red.rhs, red.rhs)) {
      a.discrepancies.push_back({"printed-reduced-equation", e.printed_reduced, red.equation_str(),
                                 "direct substitution of the " + std::string(method_name(e.method)) +
                                     " dictionary gives a different equation"});
    }
  }
}

}  // namespace

const FormOutcome* Analysis::form(FormId f) const {
  for (const auto& o : forms) {
    if (o.form == f) return &o;
  }
  return nullptr;
}

const ReductionOutcome* Analysis::reduction(Method m) const {
  for (const auto& r : reductions) {
    if (r.method == m) return &r;
  }
  return nullptr;
}

Linearization linearization_test(const ReductionTrace& trace, const ZeroTestOptions& opts) {
  Linearization out;
  const NormalizedOde& red = trace.reduced;
  if (trace.method == Method::Swap || red.order == 4) {
    out.verdict = is_linear(red) ? Verdict::Pass : Verdict::Fail;
    out.note = out.verdict == Verdict::Pass ? "reduced equation is linear" : "reduced equation is not linear";
    return out;
  }
  std::vector<FormId> candidates;
  if (red.order == 2) candidates = {FormId::LieCubic2};
  if (red.order == 3) candidates = {FormId::ImType1Third, FormId::ImType2Third};
  for (FormId f : candidates) {
    auto m = match_form(red, f);
    if (auto* nm = std::get_if<NoMatch>(&m)) {
      out.misses.emplace_back(f, *nm);
      continue;
    }
    out.form = f;
    out.report = evaluate_constraints(std::get<MatchedForm>(m), opts);
    out.verdict = out.report->overall;
    return out;
  }
  out.verdict = Verdict::Fail;
  out.note = "reduced equation matches no linearizable form";
  return out;
}

Analysis analyze(const NormalizedOde& ode, const std::string& input, const ZeroTestOptions& opts,
                 const BuiltinExample* example) {
  Analysis a;
  a.input = input;
  a.ode = ode;
  a.profile = dependency_scan(ode);
  a.example = example ? example : recognize_example(ode);

  for (FormId f : kAllForms) {
    if (form_order(f) != ode.order) continue;
    FormOutcome o{f, match_form(ode, f), std::nullopt};
    if (const auto* m = std::get_if<MatchedForm>(&o.match)) o.report = evaluate_constraints(*m, opts);
    a.forms.push_back(std::move(o));
  }

  a.plan = plan(ode);
  for (Method m : a.plan) {
    ReductionOutcome r{m, std::nullopt, {}, {}};
    try {
      r.trace = reduce(ode, m);
      r.linearization = linearization_test(*r.trace, opts);
    } catch (const ReductionError& e) {
      r.error = e.what();
    }
    a.reductions.push_back(std::move(r));
  }
  for (const auto& r : a.reductions) {
    if (r.trace && r.linearization.verdict == Verdict::Pass) {
      a.auto_method = r.method;
      break;
    }
  }
  if (!a.auto_method) {
    for (const auto& r : a.reductions) {
      if (r.trace) {
        a.auto_method = r.method;
        break;
      }
    }
  }

  for (FormId f : {FormId::Thm1FourthX, FormId::Thm2FourthX}) {
    const FormOutcome* o = a.form(f);
    if (!o || !std::holds_alternative<MatchedForm>(o->match)) continue;
    a.identification = identify_coeffs(std::get<MatchedForm>(o->match), opts);
    for (const auto& c : a.identification->coefficients) {
      if (c.semantic && !c.agreement.holds()) {
        a.discrepancies.push_back({"identification:" + c.name, c.printed.str(), c.semantic->str(),
                                   "printed identification map against direct substitution"});
      }
    }
    if (!a.identification->all_agree) a.paper_formula_disagrees = true;
    break;
  }

  for (const auto& o : a.forms) {
    if (!o.report || !decisive(o.report->overall)) continue;
    const auto m = semantic_method(o.form);
    if (!m || *m == Method::Swap) continue;
    const ReductionOutcome* r = a.reduction(*m);
    if (!r || !r->trace || !decisive(r->linearization.verdict)) continue;
    CrossCheck c{o.form, *m, o.report->overall, r->linearization.verdict, false};
    c.disagrees = c.printed != c.semantic;
    if (c.disagrees) {
      a.paper_formula_disagrees = true;
      a.discrepancies.push_back(
          {"printed-conditions:" + std::string(form_name(o.form)),
           std::string(verdict_name(c.printed)) + (c.printed == Verdict::Fail ? ": " + nonzero_residuals(*o.report) : ""),
           std::string(verdict_name(c.semantic)) + " after " + std::string(method_name(*m)) + " reduction",
           "the direct substitution path decides the headline"});
    }
    a.cross_checks.push_back(c);
  }

  if (a.example) example_discrepancies(a);

  for (const auto& o : a.forms) {
    if (!o.report) continue;
    Verdict v = o.report->overall;
    std::string basis = std::string(form_name(o.form)) + " conditions";
    for (const auto& c : a.cross_checks) {
      if (c.form == o.form && c.disagrees) {
        v = c.semantic;
        basis = std::string(form_name(o.form)) + " via " + std::string(method_name(c.method)) + " reduction";
      }
    }
    if (v == Verdict::Pass) {
      a.headline = Verdict::Pass;
      a.headline_basis = basis;
      return a;
    }
  }
  for (const auto& r : a.reductions) {
    if (r.linearization.verdict == Verdict::Pass) {
      a.headline = Verdict::Pass;
      a.headline_basis = std::string(method_name(r.method)) + " reduction to " +
                         (r.linearization.form ? std::string(form_name(*r.linearization.form)) : "a linear equation");
      return a;
    }
  }
  a.headline = Verdict::Fail;
  a.headline_basis = "no linearizable or reducible form passed";
  return a;
}

std::vector<double> default_initial(int order) {
  std::vector<double> v(static_cast<std::size_t>(order), 1.0);
  if (!v.empty()) v[0] = 0;
  return v;
}

namespace {

ReductionCheck check_reduction(const Analysis& a, Method method, const VerifyOptions& opts) {
  ReductionCheck c;
  c.method = method;
  c.h = opts.h;
  c.requested_steps = opts.steps;
  std::optional<ReductionTrace> trace;
  if (const ReductionOutcome* r = a.reduction(method); r && r->trace) {
    trace = r->trace;
  } else {
    try {
      trace = reduce(a.ode, method);
    } catch (const ReductionError& e) {
      c.error = e.what();
      return c;
    }
  }
  if (opts.reduced) {
    trace->reduced = parse_in(*opts.reduced, trace->reduced.jets);
    c.reduced_from_user = true;
  }
  c.reduced = trace->reduced.equation_str();
  c.initial = opts.initial ? *opts.initial : a.example ? a.example->initial : default_initial(a.ode.order);
  try {
    const Trajectory t = integrate(a.ode, c.initial, opts.x0, opts.h, opts.steps);
    c.taken_steps = t.grid.size() - 1;
    c.halted = t.halted;
    c.halt_reason = t.halt_reason;
    c.residual = reduction_residual(*trace, t);
    const Trajectory fine = integrate(a.ode, c.initial, opts.x0, opts.h / 2, opts.steps * 2);
    c.refined = reduction_residual(*trace, fine);
    if (c.refined->shadow.max > 0 && !c.refined->shadow.indeterminate()) {
      c.ratio = c.residual.shadow.max / c.refined->shadow.max;
    }
  } catch (const VerifyError& e) {
    c.error = e.what();
    return c;
  }
  if (c.residual.shadow.indeterminate() || c.residual.consistency.indeterminate()) {
    c.verdict = Verdict::Indeterminate;
  } else if (c.residual.shadow.max <= opts.tol && c.residual.consistency.max <= opts.tol) {
    c.verdict = Verdict::Pass;
  } else {
    c.verdict = Verdict::Fail;
  }
  return c;
}

SolutionCheck check_solution(const SolutionFamily& f, const VerifyOptions& opts) {
  SolutionCheck c;
  c.family = f;
  try {
    const NormalizedOde ode = parse_in(f.equation, f.jets);
    ParseContext ctx;
    ctx.jets = f.jets;
    ctx.extra_symbols = f.constants;
    SolutionCandidate cand{f.kind, parse_expr(f.g, ctx), f.constants};
    SolutionOptions so;
    so.seed = opts.seed;
    c.stats = solution_residual(ode, cand, so);
  } catch (const std::exception& e) {
    c.error = e.what();
    return c;
  }
  if (c.stats.indeterminate()) {
    c.verdict = Verdict::Indeterminate;
  } else {
    c.verdict = c.stats.max <= opts.tol ? Verdict::Pass : Verdict::Fail;
  }
  return c;
}

}  // namespace

Verification verify(const Analysis& a, const VerifyOptions& opts) {
  Verification v;
  if (opts.numeric) {
    std::optional<Method> m = opts.method ? opts.method : a.auto_method;
    if (!m && a.example) m = a.example->method;
    if (m) {
      v.reduction = check_reduction(a, *m, opts);
    } else {
      ReductionCheck c;
      c.error = "no reduction applies";
      v.reduction = c;
    }
  }
  std::vector<SolutionFamily> families;
  if (a.example) families = a.example->solutions;
  families.insert(families.end(), opts.solutions.begin(), opts.solutions.end());
  for (const auto& f : families) {
    SolutionCheck c = check_solution(f, opts);
    if (f.role == SolutionFamily::Role::PaperCheck && f.as_printed && c.verdict == Verdict::Fail) {
      std::ostringstream os;
      os << "scaled residual max " << c.stats.max;
      v.discrepancies.push_back({"printed-solution:" + f.label, f.g, os.str(), "does not solve " + f.equation});
    }
    v.solutions.push_back(std::move(c));
  }

  bool any_pass = false, any_fail = false;
  auto tally = [&](Verdict x) {
    any_pass = any_pass || x == Verdict::Pass;
    any_fail = any_fail || x == Verdict::Fail;
  };
  if (v.reduction) {
    tally(v.reduction->verdict);
    if (!v.reduction->error.empty()) any_fail = any_fail || opts.method.has_value();
  }
  for (const auto& s : v.solutions) {
    if (s.family.role == SolutionFamily::Role::Claim) tally(s.verdict);
  }
  v.overall = any_fail ? Verdict::Fail : any_pass ? Verdict::Pass : Verdict::Indeterminate;
  return v;
}

}  // namespace odelin
