#include "odelin/report.hpp"

#include <chrono>
#include <ctime>

namespace odelin {
namespace {

using json = nlohmann::ordered_json;

std::string s(std::string_view v) { return std::string(v); }

json jets_json(const JetSpace& j) { return {{"independent", j.independent}, {"dependent", j.dependent}}; }

json ode_json(const NormalizedOde& o) {
  return {{"jets", jets_json(o.jets)},
          {"order", o.order},
          {"normalized", o.str()},
          {"equation", o.equation_str()},
          {"leading", o.leading.str()}};
}

json coeffs_json(const CoeffSet& c) {
  json out = json::object();
  for (const auto& [name, value] : named_coefficients(c)) out[name] = value.str();
  return out;
}

json no_match_json(const NoMatch& m) {
  json out{{"reason", m.reason}, {"detail", m.detail}};
  if (!m.coefficient.empty()) out["coefficient"] = m.coefficient;
  if (m.reason == "residual") out["residual"] = m.residual.str();
  return out;
}

json match_json(FormId f, const MatchResult<MatchedForm>& m) {
  json out{{"form", s(form_name(f))}};
  if (const auto* mf = std::get_if<MatchedForm>(&m)) {
    out["matched"] = true;
    out["variables"] = {mf->vars.first, mf->vars.second};
    out["coefficients"] = coeffs_json(mf->coeffs);
  } else {
    out["matched"] = false;
    out["no_match"] = no_match_json(std::get<NoMatch>(m));
  }
  return out;
}

json linearization_json(const Linearization& l) {
  json out{{"verdict", s(verdict_name(l.verdict))}};
  out["form"] = l.form ? json(s(form_name(*l.form))) : json(nullptr);
  if (!l.note.empty()) out["note"] = l.note;
  json misses = json::array();
  for (const auto& [f, nm] : l.misses) {
    json m = no_match_json(nm);
    m["form"] = s(form_name(f));
    misses.push_back(m);
  }
  out["misses"] = misses;
  return out;
}

json discrepancy_json(const Discrepancy& d) {
  return {{"id", d.id}, {"printed", d.printed}, {"computed", d.computed}, {"note", d.note}};
}

json reduction_check_json(const ReductionCheck& c) {
  json out{{"method", s(method_name(c.method))},
           {"reduced", c.reduced},
           {"reduced_from_user", c.reduced_from_user},
           {"initial", c.initial},
           {"h", c.h},
           {"requested_steps", c.requested_steps},
           {"taken_steps", c.taken_steps},
           {"halted", c.halted},
           {"halt_reason", c.halt_reason},
           {"shadow", to_json(c.residual.shadow)},
           {"consistency", to_json(c.residual.consistency)}};
  out["refined_shadow"] = c.refined ? to_json(c.refined->shadow) : json(nullptr);
  out["ratio"] = c.ratio ? json(*c.ratio) : json(nullptr);
  out["verdict"] = s(verdict_name(c.verdict));
  if (!c.error.empty()) out["error"] = c.error;
  return out;
}

json solution_check_json(const SolutionCheck& c) {
  const SolutionFamily& f = c.family;
  const bool implicit = f.kind == SolutionCandidate::Kind::Implicit;
  json out{{"label", f.label},
           {"role", f.role == SolutionFamily::Role::Claim ? "claim" : "paper-check"},
           {"as_printed", f.as_printed},
           {"equation", f.equation},
           {"candidate", (implicit ? f.jets.independent : f.jets.dependent) + " = " + f.g},
           {"constants", f.constants},
           {"residual", to_json(c.stats)},
           {"verdict", s(verdict_name(c.verdict))}};
  if (!c.error.empty()) out["error"] = c.error;
  return out;
}

json identification_json(const IdentificationOutcome& id) {
  json coeffs = json::array();
  for (const auto& c : id.coefficients) {
    coeffs.push_back({{"name", c.name},
                      {"printed", c.printed.str()},
                      {"semantic", c.semantic ? json(c.semantic->str()) : json(nullptr)},
                      {"agreement", to_json(c.agreement)}});
  }
  json out{{"source_form", s(form_name(id.source_form))},
           {"reduced_form", s(form_name(id.reduced_form))},
           {"coefficients", coeffs},
           {"all_agree", id.all_agree}};
  out["semantic_failure"] = id.semantic_failure ? no_match_json(*id.semantic_failure) : json(nullptr);
  return out;
}

}  // namespace

json to_json(const ZeroVerdict& v) {
  json w = json::object();
  for (const auto& [name, value] : v.witness) w[name] = value;
  json out{{"kind", s(verdict_name(v.kind))}, {"samples", v.samples}, {"max_abs", v.max_abs}};
  if (v.kind == ZeroVerdict::Kind::NonZero) {
    out["witness"] = w;
    out["witness_value"] = v.witness_value;
  }
  if (!v.detail.empty()) out["detail"] = v.detail;
  return out;
}

json to_json(const ConstraintReport& r) {
  json conds = json::array();
  for (const auto& c : r.conditions) {
    conds.push_back(
        {{"id", c.id}, {"residual", c.residual.str()}, {"verdict", to_json(c.verdict)}, {"provenance", c.provenance}});
  }
  json out{{"form", s(form_name(r.form))}, {"overall", s(verdict_name(r.overall))}, {"conditions", conds},
           {"notes", r.notes}};
  out["H"] = r.H ? json(r.H->str()) : json(nullptr);
  return out;
}

json to_json(const ReductionTrace& t) {
  json dict = json::object();
  for (const auto& [name, value] : t.dictionary) dict[name] = value.str();
  json inverse = json::array();
  for (const auto& e : t.inverse) inverse.push_back(e.str());
  return {{"method", s(method_name(t.method))},
          {"dictionary", dict},
          {"reduced", ode_json(t.reduced)},
          {"divisor", t.divisor.str()},
          {"new_independent", t.new_independent.str()},
          {"inverse", inverse},
          {"recipe", t.recipe},
          {"warnings", t.warnings}};
}

json to_json(const ResidualStats& st) {
  return {{"max", st.max}, {"mean", st.mean}, {"evaluated", st.evaluated}, {"skipped", st.skipped}};
}

json to_json(const Report& r) {
  json out{{"tool", "odelin"}, {"version", kVersion}, {"command", r.command}, {"seed", r.seed},
           {"tol", r.tol},     {"timestamp", r.timestamp}};
  const Analysis* a = r.analysis;
  if (a) {
    json input{{"source", r.source}, {"text", a->input}};
    input.update(ode_json(a->ode));
    out["input"] = input;
    out["dependency_profile"] = {{"order", a->profile.order},
                                 {"uses_independent", a->profile.uses_independent},
                                 {"uses_dependent", a->profile.uses_dependent}};
    out["example"] = a->example ? json(a->example->number) : json(nullptr);

    json matches = json::array();
    json reports = json::array();
    for (const auto& f : a->forms) {
      if (r.checked_form && f.form != *r.checked_form) continue;
      matches.push_back(match_json(f.form, f.match));
      if (f.report) {
        json rep = to_json(*f.report);
        rep["path"] = "printed";
        reports.push_back(rep);
      }
    }
    for (const auto& red : a->reductions) {
      if (red.linearization.report) {
        json rep = to_json(*red.linearization.report);
        rep["path"] = "semantic";
        rep["method"] = s(method_name(red.method));
        reports.push_back(rep);
      }
    }
    out["form_matches"] = matches;
    out["constraint_reports"] = reports;

    json cross = json::array();
    for (const auto& c : a->cross_checks) {
      cross.push_back({{"form", s(form_name(c.form))},
                       {"method", s(method_name(c.method))},
                       {"printed", s(verdict_name(c.printed))},
                       {"semantic", s(verdict_name(c.semantic))},
                       {"disagrees", c.disagrees}});
    }
    out["cross_checks"] = cross;

    json plan = json::array();
    for (Method m : a->plan) plan.push_back(s(method_name(m)));
    out["plan"] = plan;
    out["auto_method"] = a->auto_method ? json(s(method_name(*a->auto_method))) : json(nullptr);
    json reds = json::array();
    for (const auto& red : a->reductions) {
      if (r.reduction && red.method != *r.reduction) continue;
      json j{{"method", s(method_name(red.method))}};
      j["trace"] = red.trace ? to_json(*red.trace) : json(nullptr);
      if (!red.error.empty()) j["error"] = red.error;
      j["linearization"] = linearization_json(red.linearization);
      reds.push_back(j);
    }
    out["reductions"] = reds;
    out["identification"] = a->identification ? identification_json(*a->identification) : json(nullptr);
  }

  if (const Verification* v = r.verification) {
    json sols = json::array();
    for (const auto& c : v->solutions) sols.push_back(solution_check_json(c));
    out["verification"] = {{"reduction", v->reduction ? reduction_check_json(*v->reduction) : json(nullptr)},
                           {"solutions", sols},
                           {"overall", s(verdict_name(v->overall))}};
  } else {
    out["verification"] = nullptr;
  }

  json disc = json::array();
  if (a) {
    for (const auto& d : a->discrepancies) disc.push_back(discrepancy_json(d));
  }
  if (r.verification) {
    for (const auto& d : r.verification->discrepancies) disc.push_back(discrepancy_json(d));
  }
  out["discrepancies"] = disc;
  if (a) {
    out["headline"] = {{"verdict", s(verdict_name(a->headline))},
                       {"basis", a->headline_basis},
                       {"paper_formula_disagrees", a->paper_formula_disagrees}};
  }
  out["verdict"] = r.verdict;
  out["exit_code"] = r.exit_code;
  return out;
}

json diagnostic_json(const std::string& command, const std::string& source, const Diagnostic& d, std::uint64_t seed,
                     const std::string& timestamp, int exit_code) {
  json err{{"kind", d.kind}, {"message", d.message}};
  err["offset"] = d.offset ? json(*d.offset) : json(nullptr);
  return {{"tool", "odelin"}, {"version", kVersion},      {"command", command},      {"seed", seed},
          {"timestamp", timestamp}, {"source", source}, {"error", err}, {"exit_code", exit_code}};
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace odelin
