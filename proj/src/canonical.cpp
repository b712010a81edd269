#include "odelin/canonical.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>

namespace odelin {

RatFunc to_ratfunc(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Constant: return RatFunc::constant(e.value());
    case ExprKind::Variable: return RatFunc::symbol(e.symbol());
    case ExprKind::Undefined: return RatFunc::make_undefined();
    case ExprKind::Sum: {
      RatFunc r = RatFunc::constant(0);
      for (const Expr& a : e.args()) r = r + to_ratfunc(a);
      return r;
    }
    case ExprKind::Product: {
      RatFunc r = RatFunc::constant(1);
      for (const Expr& a : e.args()) r = r * to_ratfunc(a);
      return r;
    }
    case ExprKind::Power: return pow(to_ratfunc(e.args()[0]), e.exponent());
    case ExprKind::Quotient: return to_ratfunc(e.args()[0]) / to_ratfunc(e.args()[1]);
    case ExprKind::Function: {
      RatFunc arg = to_ratfunc(e.args()[0]);
      if (arg.undefined) return arg;
      Expr applied = apply(e.func(), from_ratfunc(arg));
      if (applied.is_constant()) return RatFunc::constant(applied.value());
      return RatFunc::symbol(intern_atom(e.func(), applied.args()[0]));
    }
  }
  return RatFunc::make_undefined();
}

namespace {

Expr poly_expr(const Poly& p) {
  std::vector<Expr> terms;
  terms.reserve(p.terms().size());
  for (const Term& t : p.terms()) {
    std::vector<Expr> factors{Expr(t.coeff)};
    for (const auto& [s, k] : t.monomial.factors) factors.push_back(pow(symbol_expr(s), static_cast<long>(k)));
    terms.push_back(product(std::move(factors)));
  }
  return sum(std::move(terms));
}

void collect_leaf_vars(SymbolId s, std::set<SymbolId>& out) {
  if (!is_atom(s)) {
    out.insert(s);
    return;
  }
  for (SymbolId v : free_variables(atom_arg(s))) out.insert(v);
}

struct PolyValue {
  double value = 0;
  double scale = 0;  // sum of |term values|
};

PolyValue eval_poly(const Poly& p, const std::map<SymbolId, double>& values) {
  PolyValue r;
  for (const Term& t : p.terms()) {
    double v = t.coeff.get_d();
    for (const auto& [s, k] : t.monomial.factors) {
      double b = values.at(s);
      for (std::uint32_t i = 0; i < k; ++i) v *= b;
    }
    r.value += v;
    r.scale += std::abs(v);
  }
  return r;
}

}  // namespace

Expr from_ratfunc(const RatFunc& r) {
  if (r.undefined) return Expr::undefined();
  Expr num = poly_expr(r.num);
  if (r.den.is_constant() && r.den.constant_value() == 1) return num;
  return Expr::make(ExprNode{ExprKind::Quotient, {}, 0, 0, Func::Exp, {num, poly_expr(r.den)}});
}

Expr canonicalize(const Expr& e) { return from_ratfunc(to_ratfunc(e)); }

std::pair<Expr, Expr> numerator_denominator(const Expr& e) {
  RatFunc r = to_ratfunc(e);
  if (r.undefined) return {Expr::undefined(), Expr(1)};
  return {poly_expr(r.num), poly_expr(r.den)};
}

std::string_view verdict_name(ZeroVerdict::Kind k) {
  switch (k) {
    case ZeroVerdict::Kind::ProvenZero: return "ProvenZero";
    case ZeroVerdict::Kind::ProbablyZero: return "ProbablyZero";
    case ZeroVerdict::Kind::NonZero: return "NonZero";
    case ZeroVerdict::Kind::Indeterminate: return "Indeterminate";
  }
  return "?";
}

ZeroVerdict is_zero(const Expr& e, const ZeroTestOptions& opts) {
  ZeroVerdict v;
  RatFunc r = to_ratfunc(e);
  if (r.undefined) {
    v.kind = ZeroVerdict::Kind::Indeterminate;
    v.detail = "expression is undefined (division by zero)";
    return v;
  }
  if (r.num.is_zero()) {
    v.kind = ZeroVerdict::Kind::ProvenZero;
    return v;
  }

  std::set<SymbolId> symbols;
  for (const Poly* p : {&r.num, &r.den}) {
    for (SymbolId s : p->symbols()) symbols.insert(s);
  }
  std::set<SymbolId> leaves;
  for (SymbolId s : symbols) collect_leaf_vars(s, leaves);

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> magnitude(0.5, 3.0);
  std::bernoulli_distribution negative(0.5);
  constexpr int kRetries = 20;

  for (int i = 0; i < opts.samples; ++i) {
    bool ok = false;
    for (int attempt = 0; attempt <= kRetries && !ok; ++attempt) {
      Point point;
      std::map<SymbolId, double> values;
      for (SymbolId s : leaves) {
        double m = magnitude(rng);
        double x = negative(rng) ? -m : m;
        point.emplace(symbol_name(s), x);
        values.emplace(s, x);
      }
      try {
        for (SymbolId s : symbols) {
          if (is_atom(s)) values[s] = eval_at(symbol_expr(s), point);
        }
      } catch (const EvalError&) {
        continue;
      }
      PolyValue den = eval_poly(r.den, values);
      if (!std::isfinite(den.value) || std::abs(den.value) <= 1e-12 * std::max(den.scale, 1.0)) continue;
      PolyValue num = eval_poly(r.num, values);
      if (!std::isfinite(num.value)) continue;
      ok = true;
      double value = num.value / den.value;
      v.max_abs = std::max(v.max_abs, std::abs(value));
      ++v.samples;
      if (std::abs(num.value) > opts.tol * num.scale) {
        v.kind = ZeroVerdict::Kind::NonZero;
        v.witness.assign(point.begin(), point.end());
        v.witness_value = value;
        return v;
      }
    }
    if (!ok) {
      v.kind = ZeroVerdict::Kind::Indeterminate;
      v.detail = "every retry hit a singularity";
      return v;
    }
  }
  v.kind = ZeroVerdict::Kind::ProbablyZero;
  return v;
}

bool canonically_equal(const Expr& a, const Expr& b) {
  const RatFunc ra = to_ratfunc(a), rb = to_ratfunc(b);
  if (ra.undefined || rb.undefined) return false;
  return ra == rb;
}

}  // namespace odelin
