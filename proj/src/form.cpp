#include "odelin/form.hpp"

#include <set>
#include <stdexcept>

#include "odelin/canonical.hpp"

namespace odelin {
namespace {

enum class Shape { Cubic, TypeI, TypeII, Swap };

Shape shape_of(FormId f) {
  switch (f) {
    case FormId::LieCubic2:
    case FormId::Thm3FourthXY: return Shape::Cubic;
    case FormId::ImType1Third:
    case FormId::Thm1FourthX:
    case FormId::Type1FourthY: return Shape::TypeI;
    case FormId::ImType2Third:
    case FormId::Thm2FourthX:
    case FormId::Type2FourthYFormOnly: return Shape::TypeII;
    case FormId::SwapRemark: return Shape::Swap;
  }
  return Shape::Cubic;
}

std::set<std::string> leaf_names(const Expr& e) {
  std::set<std::string> out;
  for (SymbolId s : free_variables(e)) out.insert(symbol_name(s));
  return out;
}

// Name of the first variable outside `vars`, if any.
std::optional<std::string> leaked_variable(const Expr& e, const std::pair<std::string, std::string>& vars) {
  for (const std::string& v : leaf_names(e)) {
    if (v != vars.first && v != vars.second) return v;
  }
  return std::nullopt;
}

bool atom_mentions(const RatFunc& r, SymbolId v) {
  for (const Poly* p : {&r.num, &r.den}) {
    for (SymbolId s : p->symbols()) {
      if (is_atom(s) && mentions(atom_arg(s), v)) return true;
    }
  }
  return false;
}

// Coefficients of r as a polynomial in v (index k multiplies v^k), or a
// NoMatch when r is not polynomial in v.
MatchResult<std::vector<RatFunc>> coefficients(const RatFunc& r, SymbolId v) {
  if (r.den.degree_in(v) > 0 || atom_mentions(r, v)) {
    return NoMatch{"denominator", "not polynomial in " + symbol_name(v), {}, {}};
  }
  std::vector<RatFunc> out;
  for (const Poly& c : r.num.coefficients_in(v)) out.push_back(RatFunc::reduce(c, r.den));
  return out;
}

RatFunc coefficient_at(const std::vector<RatFunc>& cs, std::size_t k) {
  return k < cs.size() ? cs[k] : RatFunc::constant(0);
}

NoMatch degree_excess(const std::string& jet, std::size_t degree, std::size_t bound) {
  return NoMatch{"degree-excess",
                 "degree " + std::to_string(degree) + " in " + jet + " exceeds " + std::to_string(bound), {}, {}};
}

// Fills the coefficient slots from the generic extraction and checks that
// each coefficient depends only on the permitted variables.
std::optional<NoMatch> check_leakage(CoeffSet& c, const std::pair<std::string, std::string>& vars) {
  for (auto& [name, slot] : coefficient_slots(c)) {
    if (auto v = leaked_variable(*slot, vars)) {
      return NoMatch{"variable-leakage", name + " depends on " + *v, name, {}};
    }
  }
  return std::nullopt;
}

Expr rf(const RatFunc& r) { return from_ratfunc(r); }

// -f for the cubic shape: k3 q^3 + k2 q^2 + k1 q + k0.
std::array<Expr, 4> cubic_ks(FormId form, const CoeffSet& c) {
  if (form == FormId::LieCubic2) {
    const auto& s = std::get<Cubic2>(c);
    return {-s.a4, s.a3, -s.a2, s.a1};
  }
  const auto& s = std::get<FourthXY>(c);
  return {s.d, s.c, s.b, s.a};
}

void set_cubic_ks(FormId form, CoeffSet& c, const std::array<Expr, 4>& k) {
  if (form == FormId::LieCubic2) {
    c = Cubic2{k[3], canonicalize(-k[2]), k[1], canonicalize(-k[0])};
  } else {
    c = FourthXY{k[3], k[2], k[1], k[0]};
  }
}

// Type I: -f = (s1 p + s0) q + t3 p^3 + t2 p^2 + t1 p + t0, stored as
// {s0, s1, t0, t1, t2, t3} which is the field order of both variants.
std::array<Expr, 6> type1_ks(const CoeffSet& c) {
  if (const auto* s = std::get_if<ThirdTypeI>(&c)) return {s->a0, s->a1, s->b0, s->b1, s->b2, s->b3};
  const auto& s = std::get<FourthXTypeI>(c);
  return {s.A0, s.A1, s.B0, s.B1, s.B2, s.B3};
}

void set_type1_ks(FormId form, CoeffSet& c, const std::array<Expr, 6>& k) {
  if (form == FormId::Thm1FourthX) {
    c = FourthXTypeI{k[0], k[1], k[2], k[3], k[4], k[5]};
  } else {
    c = ThirdTypeI{k[0], k[1], k[2], k[3], k[4], k[5]};
  }
}

struct Type2Ks {
  Expr r;
  std::array<Expr, 3> c;
  std::array<Expr, 6> d;
};

Type2Ks type2_ks(const CoeffSet& cs) {
  if (const auto* s = std::get_if<ThirdTypeII>(&cs)) return {s->r, {s->c0, s->c1, s->c2}, s->d};
  const auto& s = std::get<FourthXTypeII>(cs);
  return {s.r0, {s.C0, s.C1, s.C2}, s.D};
}

void set_type2_ks(FormId form, CoeffSet& cs, const Type2Ks& k) {
  if (form == FormId::Thm2FourthX) {
    cs = FourthXTypeII{k.r, k.c[0], k.c[1], k.c[2], k.d};
  } else {
    cs = ThirdTypeII{k.r, k.c[0], k.c[1], k.c[2], k.d};
  }
}

bool variant_fits(FormId form, const CoeffSet& c) {
  switch (form) {
    case FormId::LieCubic2: return std::holds_alternative<Cubic2>(c);
    case FormId::ImType1Third:
    case FormId::Type1FourthY: return std::holds_alternative<ThirdTypeI>(c);
    case FormId::ImType2Third:
    case FormId::Type2FourthYFormOnly: return std::holds_alternative<ThirdTypeII>(c);
    case FormId::Thm1FourthX: return std::holds_alternative<FourthXTypeI>(c);
    case FormId::Thm2FourthX: return std::holds_alternative<FourthXTypeII>(c);
    case FormId::Thm3FourthXY: return std::holds_alternative<FourthXY>(c);
    case FormId::SwapRemark: return std::holds_alternative<SwapForm>(c);
  }
  return false;
}

Expr template_rhs(FormId form, const CoeffSet& c, const JetSpace& jets) {
  const int n = form_order(form);
  const Expr q = jets.jet_expr(n - 1);
  const Expr p = jets.jet_expr(n - 2);
  switch (shape_of(form)) {
    case Shape::Cubic: {
      auto k = cubic_ks(form, c);
      return -(k[3] * pow(q, 3) + k[2] * pow(q, 2) + k[1] * q + k[0]);
    }
    case Shape::TypeI: {
      auto k = type1_ks(c);
      return -((k[1] * p + k[0]) * q + k[5] * pow(p, 3) + k[4] * pow(p, 2) + k[3] * p + k[2]);
    }
    case Shape::TypeII: {
      Type2Ks k = type2_ks(c);
      Expr bracket = Expr(-3) * pow(q, 2) + (k.c[2] * pow(p, 2) + k.c[1] * p + k.c[0]) * q;
      for (int i = 5; i >= 0; --i) bracket = bracket + k.d[i] * pow(p, i);
      return -(bracket / (p + k.r));
    }
    case Shape::Swap: {
      const Expr& f = std::get<SwapForm>(c).f;
      const Expr y1 = jets.jet_expr(1);
      return -f * pow(y1, 5) + Expr(10) * p * q / y1 - Expr(15) * pow(p, 3) / pow(y1, 2);
    }
  }
  return Expr::undefined();
}

MatchResult<MatchedForm> finish(FormId form, const NormalizedOde& ode, CoeffSet coeffs,
                                const std::pair<std::string, std::string>& vars) {
  if (auto leak = check_leakage(coeffs, vars)) return *leak;
  const Expr back = template_rhs(form, coeffs, ode.jets);
  if (!canonically_equal(ode.rhs, back) && !is_zero(ode.rhs - back).holds()) {
    return NoMatch{"residual", "re-expanded template differs from the equation", {}, canonicalize(ode.rhs - back)};
  }
  return MatchedForm{form, ode.jets, std::move(coeffs), vars};
}

MatchResult<MatchedForm> match_cubic(FormId form, const NormalizedOde& ode, const RatFunc& minus_f,
                                     const std::pair<std::string, std::string>& vars) {
  const int n = form_order(form);
  const SymbolId q = ode.jets.jet_symbol(n - 1);
  auto cs = coefficients(minus_f, q);
  if (auto* nm = std::get_if<NoMatch>(&cs)) return *nm;
  const auto& k = std::get<std::vector<RatFunc>>(cs);
  if (k.size() > 4) return degree_excess(ode.jets.jet(n - 1), k.size() - 1, 3);
  CoeffSet out = empty_coeffs(form);
  set_cubic_ks(form, out, {rf(coefficient_at(k, 0)), rf(coefficient_at(k, 1)), rf(coefficient_at(k, 2)),
                           rf(coefficient_at(k, 3))});
  return finish(form, ode, std::move(out), vars);
}

MatchResult<MatchedForm> match_type1(FormId form, const NormalizedOde& ode, const RatFunc& minus_f,
                                     const std::pair<std::string, std::string>& vars) {
  const int n = form_order(form);
  const SymbolId q = ode.jets.jet_symbol(n - 1);
  const SymbolId p = ode.jets.jet_symbol(n - 2);
  auto in_q = coefficients(minus_f, q);
  if (auto* nm = std::get_if<NoMatch>(&in_q)) return *nm;
  const auto& kq = std::get<std::vector<RatFunc>>(in_q);
  if (kq.size() > 2) return degree_excess(ode.jets.jet(n - 1), kq.size() - 1, 1);

  auto s = coefficients(coefficient_at(kq, 1), p);
  if (auto* nm = std::get_if<NoMatch>(&s)) return *nm;
  const auto& ks = std::get<std::vector<RatFunc>>(s);
  if (ks.size() > 2) return degree_excess(ode.jets.jet(n - 2) + " (coefficient of " + ode.jets.jet(n - 1) + ")",
                                          ks.size() - 1, 1);
  auto t = coefficients(coefficient_at(kq, 0), p);
  if (auto* nm = std::get_if<NoMatch>(&t)) return *nm;
  const auto& kt = std::get<std::vector<RatFunc>>(t);
  if (kt.size() > 4) return degree_excess(ode.jets.jet(n - 2), kt.size() - 1, 3);

  CoeffSet out = empty_coeffs(form);
  set_type1_ks(form, out,
               {rf(coefficient_at(ks, 0)), rf(coefficient_at(ks, 1)), rf(coefficient_at(kt, 0)),
                rf(coefficient_at(kt, 1)), rf(coefficient_at(kt, 2)), rf(coefficient_at(kt, 3))});
  return finish(form, ode, std::move(out), vars);
}

MatchResult<MatchedForm> match_type2(FormId form, const NormalizedOde& ode,
                                     const std::pair<std::string, std::string>& vars) {
  const int n = form_order(form);
  const SymbolId q = ode.jets.jet_symbol(n - 1);
  const SymbolId p = ode.jets.jet_symbol(n - 2);
  auto pole = recover_pole(ode, form);
  if (auto* nm = std::get_if<NoMatch>(&pole)) return *nm;
  const Expr r = std::get<Expr>(pole);

  RatFunc bracket = to_ratfunc(-ode.rhs * (ode.jets.jet_expr(n - 2) + r));
  auto in_q = coefficients(bracket, q);
  if (auto* nm = std::get_if<NoMatch>(&in_q)) return *nm;
  const auto& kq = std::get<std::vector<RatFunc>>(in_q);
  if (kq.size() > 3) return degree_excess(ode.jets.jet(n - 1), kq.size() - 1, 2);

  auto c = coefficients(coefficient_at(kq, 1), p);
  if (auto* nm = std::get_if<NoMatch>(&c)) return *nm;
  const auto& kc = std::get<std::vector<RatFunc>>(c);
  if (kc.size() > 3) return degree_excess(ode.jets.jet(n - 2) + " (coefficient of " + ode.jets.jet(n - 1) + ")",
                                          kc.size() - 1, 2);
  auto d = coefficients(coefficient_at(kq, 0), p);
  if (auto* nm = std::get_if<NoMatch>(&d)) return *nm;
  const auto& kd = std::get<std::vector<RatFunc>>(d);
  if (kd.size() > 6) return degree_excess(ode.jets.jet(n - 2), kd.size() - 1, 5);

  Type2Ks k;
  k.r = r;
  for (std::size_t i = 0; i < 3; ++i) k.c[i] = rf(coefficient_at(kc, i));
  for (std::size_t i = 0; i < 6; ++i) k.d[i] = rf(coefficient_at(kd, i));
  CoeffSet out = empty_coeffs(form);
  set_type2_ks(form, out, k);
  return finish(form, ode, std::move(out), vars);
}

}  // namespace

std::string_view form_name(FormId f) {
  switch (f) {
    case FormId::LieCubic2: return "lie-cubic-2";
    case FormId::ImType1Third: return "im-type1-3";
    case FormId::ImType2Third: return "im-type2-3";
    case FormId::Thm1FourthX: return "thm1-fourth-x";
    case FormId::Thm2FourthX: return "thm2-fourth-x";
    case FormId::Thm3FourthXY: return "thm3-fourth-xy";
    case FormId::Type1FourthY: return "type1-fourth-y";
    case FormId::Type2FourthYFormOnly: return "type2-fourth-y-form-only";
    case FormId::SwapRemark: return "swap-remark";
  }
  return "?";
}

std::optional<FormId> form_from_name(std::string_view name) {
  for (FormId f : kAllForms) {
    if (form_name(f) == name) return f;
  }
  return std::nullopt;
}

int form_order(FormId f) {
  switch (f) {
    case FormId::LieCubic2: return 2;
    case FormId::ImType1Third:
    case FormId::ImType2Third: return 3;
    default: return 4;
  }
}

CoeffSet empty_coeffs(FormId f) {
  switch (f) {
    case FormId::LieCubic2: return Cubic2{};
    case FormId::ImType1Third:
    case FormId::Type1FourthY: return ThirdTypeI{};
    case FormId::ImType2Third:
    case FormId::Type2FourthYFormOnly: return ThirdTypeII{};
    case FormId::Thm1FourthX: return FourthXTypeI{};
    case FormId::Thm2FourthX: return FourthXTypeII{};
    case FormId::Thm3FourthXY: return FourthXY{};
    case FormId::SwapRemark: return SwapForm{};
  }
  return Cubic2{};
}

std::vector<std::pair<std::string, Expr*>> coefficient_slots(CoeffSet& c) {
  return std::visit(
      [](auto& s) -> std::vector<std::pair<std::string, Expr*>> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Cubic2>) {
          return {{"a1", &s.a1}, {"a2", &s.a2}, {"a3", &s.a3}, {"a4", &s.a4}};
        } else if constexpr (std::is_same_v<T, ThirdTypeI>) {
          return {{"a1", &s.a1}, {"a0", &s.a0}, {"b3", &s.b3}, {"b2", &s.b2}, {"b1", &s.b1}, {"b0", &s.b0}};
        } else if constexpr (std::is_same_v<T, FourthXTypeI>) {
          return {{"A1", &s.A1}, {"A0", &s.A0}, {"B3", &s.B3}, {"B2", &s.B2}, {"B1", &s.B1}, {"B0", &s.B0}};
        } else if constexpr (std::is_same_v<T, ThirdTypeII> || std::is_same_v<T, FourthXTypeII>) {
          constexpr bool upper = std::is_same_v<T, FourthXTypeII>;
          std::vector<std::pair<std::string, Expr*>> out;
          if constexpr (upper) {
            out = {{"r0", &s.r0}, {"C2", &s.C2}, {"C1", &s.C1}, {"C0", &s.C0}};
          } else {
            out = {{"r", &s.r}, {"c2", &s.c2}, {"c1", &s.c1}, {"c0", &s.c0}};
          }
          auto& d = [&]() -> std::array<Expr, 6>& {
            if constexpr (upper) return s.D; else return s.d;
          }();
          for (int k = 5; k >= 0; --k) out.emplace_back((upper ? "D" : "d") + std::to_string(k), &d[k]);
          return out;
        } else if constexpr (std::is_same_v<T, FourthXY>) {
          return {{"a", &s.a}, {"b", &s.b}, {"c", &s.c}, {"d", &s.d}};
        } else {
          return {{"f", &s.f}};
        }
      },
      c);
}

std::vector<std::pair<std::string, Expr>> named_coefficients(const CoeffSet& c) {
  CoeffSet copy = c;
  std::vector<std::pair<std::string, Expr>> out;
  for (auto& [name, slot] : coefficient_slots(copy)) out.emplace_back(name, *slot);
  return out;
}

std::pair<std::string, std::string> permitted_variables(FormId f, const JetSpace& jets) {
  switch (f) {
    case FormId::LieCubic2:
    case FormId::ImType1Third:
    case FormId::ImType2Third:
    case FormId::SwapRemark: return {jets.independent, jets.jet(0)};
    case FormId::Type1FourthY:
    case FormId::Type2FourthYFormOnly: return {jets.independent, jets.jet(1)};
    case FormId::Thm1FourthX:
    case FormId::Thm2FourthX: return {jets.jet(0), jets.jet(1)};
    case FormId::Thm3FourthXY: return {jets.jet(1), jets.jet(2)};
  }
  return {};
}

MatchResult<MatchedForm> match_form(const NormalizedOde& ode, FormId form) {
  if (ode.order != form_order(form)) {
    return NoMatch{"order-mismatch",
                   "form " + std::string(form_name(form)) + " needs order " + std::to_string(form_order(form)) +
                       ", equation has order " + std::to_string(ode.order),
                   {}, {}};
  }
  const auto vars = permitted_variables(form, ode.jets);
  switch (shape_of(form)) {
    case Shape::Cubic: return match_cubic(form, ode, to_ratfunc(-ode.rhs), vars);
    case Shape::TypeI: return match_type1(form, ode, to_ratfunc(-ode.rhs), vars);
    case Shape::TypeII: return match_type2(form, ode, vars);
    case Shape::Swap: return match_swap_form(ode);
  }
  return NoMatch{"order-mismatch", "unknown form", {}, {}};
}

MatchResult<Expr> recover_pole(const NormalizedOde& ode, FormId form) {
  const int n = ode.order;
  if (n < 3) return NoMatch{"order-mismatch", "a pole needs order 3 or 4", {}, {}};
  const SymbolId q = ode.jets.jet_symbol(n - 1);
  // At most quadratic in q over a q-free denominator: half the second
  // derivative is the q^2 coefficient.
  Expr c;
  auto direct = coefficients(to_ratfunc(ode.rhs), q);
  if (auto* ks = std::get_if<std::vector<RatFunc>>(&direct); ks && ks->size() <= 3) {
    c = rf(coefficient_at(*ks, 2));
  } else {
    c = canonicalize(diff(diff(ode.rhs, q), q) / Expr(2));
  }
  if (c.is_undefined() || c.is_constant(0)) {
    return NoMatch{"no-quadratic-part", "no quadratic " + ode.jets.jet(n - 1) + " term", {}, {}};
  }
  const Expr r = canonicalize(Expr(3) / c - ode.jets.jet_expr(n - 2));
  const char* name = form == FormId::Thm2FourthX ? "r0" : "r";
  if (auto v = leaked_variable(r, permitted_variables(form, ode.jets))) {
    return NoMatch{"variable-leakage", std::string(name) + " = " + r.str() + " depends on " + *v, name, {}};
  }
  return r;
}

NormalizedOde expand_template(FormId form, const CoeffSet& coeffs, const JetSpace& jets) {
  if (!variant_fits(form, coeffs)) {
    throw std::invalid_argument("coefficient set does not belong to form " + std::string(form_name(form)));
  }
  NormalizedOde ode;
  ode.jets = jets;
  ode.order = form_order(form);
  ode.rhs = canonicalize(template_rhs(form, coeffs, jets));
  return ode;
}

MatchResult<MatchedForm> match_swap_form(const NormalizedOde& ode) {
  const FormId form = FormId::SwapRemark;
  if (ode.order != 4) return NoMatch{"order-mismatch", "the swap form needs order 4", {}, {}};
  const JetSpace& j = ode.jets;
  const Expr y1 = j.jet_expr(1);
  const Expr p = j.jet_expr(2);
  const Expr q = j.jet_expr(3);
  const Expr rest = ode.rhs - Expr(10) * p * q / y1 + Expr(15) * pow(p, 3) / pow(y1, 2);
  const Expr f = canonicalize(-rest / pow(y1, 5));
  const auto vars = permitted_variables(form, j);
  if (auto v = leaked_variable(f, vars)) {
    return NoMatch{"variable-leakage", "f = " + f.str() + " depends on " + *v, "f", {}};
  }
  auto in_x = coefficients(to_ratfunc(f), intern_variable(j.independent));
  if (auto* nm = std::get_if<NoMatch>(&in_x)) return *nm;
  const auto& kx = std::get<std::vector<RatFunc>>(in_x);
  if (kx.size() > 2) return degree_excess(j.independent, kx.size() - 1, 1);
  return finish(form, ode, SwapForm{f}, vars);
}

}  // namespace odelin
