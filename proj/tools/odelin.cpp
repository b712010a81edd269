#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "odelin/report.hpp"

using namespace odelin;

namespace {

struct Options {
  std::string input;
  bool json = false;
  std::uint64_t seed = 0;
  double tol = 1e-6;
  std::string method = "auto";
  std::string form;
  bool numeric = true;
  double h = 1e-3;
  std::size_t steps = 500;
  double x0 = 0;
  std::vector<double> ic;
  std::string reduced;
  std::vector<std::string> solutions;
  std::vector<std::string> constants{"c1", "c2", "c3", "c4"};
  int example = 0;
};

struct InputError : std::runtime_error {
  Diagnostic d;
  explicit InputError(Diagnostic diag) : std::runtime_error(diag.message), d(std::move(diag)) {}
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string read_input(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(path);
    if (!in) throw InputError({"io", "cannot read " + path, std::nullopt});
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  // Lines starting with '#' are comments; the rest is joined.
  std::istringstream lines(text);
  std::string line, joined;
  while (std::getline(lines, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    joined += (joined.empty() ? "" : " ") + t;
  }
  if (joined.empty()) throw InputError({"parse", "empty input", std::size_t{0}});
  return joined;
}

template <class F>
auto as_input(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw InputError({"parse", e.what(), e.offset()});
  } catch (const NormalizeError& e) {
    throw InputError({"normalize", e.what(), std::nullopt});
  }
}

std::string verdict_word(Verdict v) { return std::string(verdict_name(v)); }

void print_coeffs(std::ostream& os, const CoeffSet& c) {
  bool first = true;
  for (const auto& [name, value] : named_coefficients(c)) {
    os << (first ? "" : ", ") << name << " = " << value.str();
    first = false;
  }
}

void print_report(std::ostream& os, const ConstraintReport& r, const std::string& indent) {
  os << indent << "conditions " << verdict_word(r.overall) << ":";
  for (const auto& c : r.conditions) os << " " << c.id << "=" << verdict_name(c.verdict.kind);
  os << "\n";
  for (const auto& c : r.conditions) {
    if (!c.verdict.holds()) os << indent << "  " << c.id << " residual " << c.residual.str() << "\n";
  }
  if (r.H) os << indent << "H = " << r.H->str() << "\n";
}

void print_analysis(std::ostream& os, const Analysis& a, std::optional<FormId> only = std::nullopt) {
  os << "input: " << a.input << "\n";
  os << "normalized: " << a.ode.str() << "   (divided by " << a.ode.leading.str() << ")\n";
  os << "profile: order " << a.profile.order << ", " << a.ode.jets.independent
     << (a.profile.uses_independent ? " present" : " absent") << ", " << a.ode.jets.jet(0)
     << (a.profile.uses_dependent ? " present" : " absent") << "\n";
  if (a.example) os << "recognized: built-in example " << a.example->number << "\n";
  os << "forms:\n";
  for (const auto& f : a.forms) {
    if (only && f.form != *only) continue;
    os << "  " << form_name(f.form) << ": ";
    if (const auto* m = std::get_if<MatchedForm>(&f.match)) {
      os << "matched; ";
      print_coeffs(os, m->coeffs);
      os << "\n";
      if (f.report) print_report(os, *f.report, "    ");
    } else {
      const auto& nm = std::get<NoMatch>(f.match);
      os << "no match (" << nm.reason << ": " << nm.detail << ")\n";
    }
  }
  if (!only) {
    os << "reductions:\n";
    for (const auto& r : a.reductions) {
      os << "  " << method_name(r.method) << ": ";
      if (!r.trace) {
        os << r.error << "\n";
        continue;
      }
      os << r.trace->reduced.equation_str() << "\n    linearization: "
         << (r.linearization.form ? std::string(form_name(*r.linearization.form)) : std::string("-")) << " "
         << verdict_word(r.linearization.verdict) << (r.linearization.note.empty() ? "" : " (" + r.linearization.note + ")")
         << "\n";
    }
    for (const auto& c : a.cross_checks) {
      os << "cross-check " << form_name(c.form) << ": printed " << verdict_word(c.printed) << ", semantic ("
         << method_name(c.method) << ") " << verdict_word(c.semantic) << (c.disagrees ? "  DISAGREE" : "") << "\n";
    }
    if (a.identification) {
      os << "identification " << form_name(a.identification->source_form) << " -> "
         << form_name(a.identification->reduced_form) << ": " << (a.identification->all_agree ? "agrees" : "disagrees")
         << "\n";
    }
  }
}

void print_discrepancies(std::ostream& os, const std::vector<Discrepancy>& ds) {
  if (ds.empty()) return;
  os << "discrepancies:\n";
  for (const auto& d : ds) {
    os << "  " << d.id << "\n    printed:  " << d.printed << "\n    computed: " << d.computed << "\n";
    if (!d.note.empty()) os << "    note: " << d.note << "\n";
  }
}

void print_verification(std::ostream& os, const Verification& v) {
  if (v.reduction) {
    const auto& c = *v.reduction;
    os << "reduction residual (" << method_name(c.method) << (c.reduced_from_user ? ", claimed equation" : "") << "): ";
    if (!c.error.empty()) {
      os << c.error << "\n";
    } else {
      os << "shadow max " << c.residual.shadow.max << ", consistency max " << c.residual.consistency.max << " over "
         << c.taken_steps << "/" << c.requested_steps << " steps of h=" << c.h;
      if (c.ratio) os << ", h/2 ratio " << *c.ratio;
      if (c.residual.shadow.skipped) os << ", " << c.residual.shadow.skipped << " skipped";
      os << " -> " << verdict_word(c.verdict) << "\n";
      if (c.halted) os << "  halted: " << c.halt_reason << "\n";
    }
  }
  for (const auto& s : v.solutions) {
    os << "solution [" << (s.family.role == SolutionFamily::Role::Claim ? "claim" : "paper") << "] " << s.family.label
       << ": ";
    if (!s.error.empty()) {
      os << s.error << "\n";
      continue;
    }
    os << "max " << s.stats.max << " (" << s.stats.evaluated << " points, " << s.stats.skipped << " skipped) -> "
       << verdict_word(s.verdict) << "\n";
  }
  os << "verification: " << verdict_word(v.overall) << "\n";
}

struct Emitter {
  const Options& o;
  std::string command;

  int emit(Report& r, const std::vector<Discrepancy>& extra, const std::function<void(std::ostream&)>& text) const {
    r.command = command;
    r.seed = o.seed;
    r.tol = o.tol;
    r.timestamp = utc_timestamp();
    if (o.json) {
      std::cout << to_json(r).dump(2) << "\n";
    } else {
      text(std::cout);
      print_discrepancies(std::cout, extra);
      std::cout << r.verdict << "\n";
    }
    return r.exit_code;
  }
};

std::vector<Discrepancy> all_discrepancies(const Analysis& a, const Verification* v) {
  std::vector<Discrepancy> out = a.discrepancies;
  if (v) out.insert(out.end(), v->discrepancies.begin(), v->discrepancies.end());
  return out;
}

ZeroTestOptions zero_opts(const Options& o) {
  ZeroTestOptions z;
  z.seed = o.seed;
  return z;
}

Analysis load(const Options& o, std::string& source) {
  source = o.input;
  const std::string text = read_input(o.input);
  const NormalizedOde ode = as_input([&] { return parse_normalized(text); });
  return analyze(ode, text, zero_opts(o));
}

int run_classify(const Options& o, const Emitter& em) {
  Report r;
  const Analysis a = load(o, r.source);
  r.analysis = &a;
  r.exit_code = a.headline == Verdict::Pass ? 0 : 1;
  r.verdict = "classify: " + verdict_word(a.headline) + " (" + a.headline_basis + ")";
  return em.emit(r, a.discrepancies, [&](std::ostream& os) { print_analysis(os, a); });
}

int run_reduce(const Options& o, const Emitter& em) {
  Report r;
  const Analysis a = load(o, r.source);
  r.analysis = &a;
  std::optional<Method> m;
  if (o.method == "auto") {
    m = a.auto_method;
  } else {
    m = method_from_name(o.method);
    if (!m) throw InputError({"usage", "unknown method '" + o.method + "'", std::nullopt});
  }
  std::optional<ReductionTrace> trace;
  std::string error = m ? "" : "no reduction method applies";
  if (m) {
    if (const ReductionOutcome* ro = a.reduction(*m); ro && ro->trace) {
      trace = ro->trace;
    } else {
      try {
        trace = reduce(a.ode, *m);
      } catch (const ReductionError& e) {
        error = e.what();
      }
    }
  }
  // Keep the report's reductions restricted to the chosen method.
  Analysis shown = a;
  if (m && !a.reduction(*m)) shown.reductions.push_back({*m, trace, error, {}});
  r.analysis = &shown;
  r.reduction = m;
  r.exit_code = trace ? 0 : 1;
  r.verdict = trace ? "reduce: " + std::string(method_name(*m)) : "reduce: not applicable: " + error;
  return em.emit(r, {}, [&](std::ostream& os) {
    if (!trace) return;
    os << trace->reduced.equation_str() << "\n";
    os << "method: " << method_name(trace->method) << ", new variables (" << trace->reduced.jets.independent << ", "
       << trace->reduced.jets.dependent << "), divided by " << trace->divisor.str() << "\n";
    os << "recipe:\n";
    int i = 1;
    for (const auto& step : trace->recipe) os << "  " << i++ << ". " << step << "\n";
    for (const auto& w : trace->warnings) os << "warning: " << w << "\n";
  });
}

int run_check(const Options& o, const Emitter& em) {
  const auto f = form_from_name(o.form);
  if (!f) throw InputError({"usage", "unknown form '" + o.form + "'", std::nullopt});
  Report r;
  const Analysis a = load(o, r.source);
  r.analysis = &a;
  r.checked_form = f;
  const FormOutcome* fo = a.form(*f);
  Verdict v = Verdict::Fail;
  std::string why;
  if (!fo) {
    why = "order mismatch: the input has order " + std::to_string(a.ode.order);
  } else if (const auto* nm = std::get_if<NoMatch>(&fo->match)) {
    why = nm->reason + ": " + nm->detail;
  } else {
    v = fo->report ? fo->report->overall : Verdict::Unsupported;
    why = "conditions";
    for (const auto& c : a.cross_checks) {
      if (c.form == *f && c.disagrees) {
        why = "printed " + verdict_word(c.printed) + ", semantic " + verdict_word(c.semantic) +
              "; paper_formula_disagrees";
        v = c.semantic;
      }
    }
  }
  r.exit_code = v == Verdict::Pass ? 0 : 1;
  r.verdict = "check " + o.form + ": " + verdict_word(v) + " (" + why + ")";
  return em.emit(r, {}, [&](std::ostream& os) { print_analysis(os, a, f); });
}

VerifyOptions verify_options(const Options& o, const Analysis& a) {
  VerifyOptions v;
  v.h = o.h;
  v.steps = o.steps;
  v.tol = o.tol;
  v.seed = o.seed;
  v.x0 = o.x0;
  v.numeric = o.numeric;
  if (!o.ic.empty()) v.initial = o.ic;
  if (o.method != "auto") {
    v.method = method_from_name(o.method);
    if (!v.method) throw InputError({"usage", "unknown method '" + o.method + "'", std::nullopt});
  }
  if (!o.reduced.empty()) v.reduced = o.reduced;
  for (const auto& text : o.solutions) {
    const auto eq = text.find('=');
    const std::string lhs = trim(text.substr(0, eq == std::string::npos ? 0 : eq));
    SolutionFamily f;
    f.label = "user candidate";
    f.equation = a.ode.str();
    f.jets = a.ode.jets;
    f.constants = o.constants;
    if (lhs == a.ode.jets.independent) {
      f.kind = SolutionCandidate::Kind::Implicit;
    } else if (lhs == a.ode.jets.jet(0)) {
      f.kind = SolutionCandidate::Kind::Explicit;
    } else {
      throw InputError({"usage", "solution must read '" + a.ode.jets.jet(0) + " = ...' or '" +
                                     a.ode.jets.independent + " = ...'", std::nullopt});
    }
    f.g = trim(text.substr(eq + 1));
    ParseContext ctx;
    ctx.extra_symbols = f.constants;
    as_input([&] { return parse_expr(f.g, ctx); });
    v.solutions.push_back(f);
  }
  return v;
}

int run_verify(const Options& o, const Emitter& em) {
  Report r;
  const Analysis a = load(o, r.source);
  const VerifyOptions vo = verify_options(o, a);
  const Verification v = as_input([&] { return verify(a, vo); });
  r.analysis = &a;
  r.verification = &v;
  r.exit_code = v.overall == Verdict::Pass ? 0 : 1;
  r.verdict = "verify: " + verdict_word(v.overall);
  return em.emit(r, all_discrepancies(a, &v), [&](std::ostream& os) {
    os << "input: " << a.ode.str() << "\n";
    print_verification(os, v);
  });
}

int run_example(const Options& o, const Emitter& em) {
  const BuiltinExample* e = find_example(o.example);
  if (!e) throw InputError({"usage", "examples are numbered 1 to 4", std::nullopt});
  Report r;
  r.source = "example " + std::to_string(e->number);
  const Analysis a = analyze(parse_normalized(e->ode), e->ode, zero_opts(o), e);
  VerifyOptions vo;
  vo.h = e->h;
  vo.steps = e->steps;
  vo.tol = o.tol;
  vo.seed = o.seed;
  vo.method = e->method;
  const Verification v = verify(a, vo);
  r.analysis = &a;
  r.verification = &v;
  const bool ok = a.headline == Verdict::Pass && v.overall == Verdict::Pass;
  r.exit_code = ok ? 0 : 1;
  r.verdict = "example " + std::to_string(e->number) + ": " + (ok ? "Pass" : "Fail");
  return em.emit(r, all_discrepancies(a, &v), [&](std::ostream& os) {
    os << "example " << e->number << "\n";
    if (e->printed_ode != e->ode) {
      os << "printed equation: " << e->printed_ode << "\n";
      os << "correction: " << e->correction_note << "\n";
    }
    print_analysis(os, a);
    os << "printed coefficients vs computed:\n";
    if (const FormOutcome* f = a.form(e->form); f && std::holds_alternative<MatchedForm>(f->match)) {
      const auto computed = named_coefficients(std::get<MatchedForm>(f->match).coeffs);
      for (const auto& pc : e->printed_coefficients) {
        for (const auto& [name, value] : computed) {
          if (name == pc.name) os << "  " << name << ": printed " << pc.text << ", computed " << value.str() << "\n";
        }
      }
    }
    if (const ReductionOutcome* ro = a.reduction(e->method); ro && ro->trace) {
      os << "reduced (" << method_name(e->method) << "):\n  printed:  " << e->printed_reduced
         << "\n  computed: " << ro->trace->reduced.equation_str() << "\n";
      os << "recipe:\n";
      int i = 1;
      for (const auto& step : ro->trace->recipe) os << "  " << i++ << ". " << step << "\n";
      if (!e->quadrature.empty()) os << "  with the solution above: " << e->quadrature << "\n";
    }
    print_verification(os, v);
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classify, reduce and verify autonomous fourth-order ODEs"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool with_input) {
    if (with_input) sub->add_option("input", o.input, "equation file, or - for standard input")->required();
    sub->add_flag("--json", o.json, "print the JSON report");
    sub->add_option("--seed", o.seed, "sampling seed")->capture_default_str();
    sub->add_option("--tol", o.tol, "residual tolerance")->capture_default_str();
  };
  auto* classify = app.add_subcommand("classify", "match every applicable form and evaluate its conditions");
  common(classify, true);
  auto* reduce_cmd = app.add_subcommand("reduce", "apply an order-reducing substitution");
  common(reduce_cmd, true);
  reduce_cmd->add_option("--method", o.method, "auto, missing-x, missing-y, missing-xy or swap")->capture_default_str();
  auto* check = app.add_subcommand("check", "match one form and evaluate its conditions");
  common(check, true);
  check->add_option("--form", o.form, "form id")->required();
  auto* verify_cmd = app.add_subcommand("verify", "numerically check the reduction and registered solutions");
  verify_cmd->set_help_flag("--help", "print this help and exit");
  common(verify_cmd, true);
  verify_cmd->add_flag("--numeric,!--no-numeric", o.numeric, "run the trajectory check (default on)");
  verify_cmd->add_option("--h", o.h, "step size")->capture_default_str();
  verify_cmd->add_option("--steps", o.steps, "number of steps")->capture_default_str();
  verify_cmd->add_option("--x0", o.x0, "starting abscissa")->capture_default_str();
  verify_cmd->add_option("--ic", o.ic, "initial values y, y', ...")->delimiter(',');
  verify_cmd->add_option("--method", o.method, "reduction to verify")->capture_default_str();
  verify_cmd->add_option("--reduced", o.reduced, "claimed reduced equation to test instead of the computed one");
  verify_cmd->add_option("--solution", o.solutions, "candidate 'y = g(x)' or 'x = g(y)'");
  verify_cmd->add_option("--constants", o.constants, "names of free constants in candidates")->delimiter(',');
  auto* example = app.add_subcommand("example", "run a built-in worked example");
  common(example, false);
  example->add_option("n", o.example, "1 to 4")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  const Emitter em{o, sub->get_name()};
  try {
    if (sub == classify) return run_classify(o, em);
    if (sub == reduce_cmd) return run_reduce(o, em);
    if (sub == check) return run_check(o, em);
    if (sub == verify_cmd) return run_verify(o, em);
    return run_example(o, em);
  } catch (const InputError& e) {
    if (o.json) {
      std::cout << diagnostic_json(em.command, o.input, e.d, o.seed, utc_timestamp(), 2).dump(2) << "\n";
    } else {
      std::cerr << "error: " << e.d.kind << ": " << e.d.message << "\n";
    }
    return 2;
  } catch (const std::exception& e) {
    if (o.json) {
      std::cout << diagnostic_json(em.command, o.input, {"internal", e.what(), std::nullopt}, o.seed,
                                   utc_timestamp(), 3)
                       .dump(2)
                << "\n";
    } else {
      std::cerr << "internal error: " << e.what() << "\n";
    }
    return 3;
  } catch (...) {
    std::cerr << "internal error\n";
    return 3;
  }
}
