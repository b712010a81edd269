#include "odelin/expr.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace odelin {
namespace {

const std::shared_ptr<const ExprNode>& zero_node() {
  static const auto node = std::make_shared<const ExprNode>();
  return node;
}

int precedence(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Constant: {
      const mpq_class& v = e.value();
      if (sgn(v) < 0 || v.get_den() != 1) return 2;
      return 4;
    }
    case ExprKind::Sum: return 1;
    case ExprKind::Product:
    case ExprKind::Quotient: return 2;
    case ExprKind::Power: return 3;
    default: return 4;
  }
}

bool negative_led(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Constant: return sgn(e.value()) < 0;
    case ExprKind::Product:
      return !e.args().empty() && e.args().front().is_constant() &&
             sgn(e.args().front().value()) < 0;
    case ExprKind::Quotient: return negative_led(e.args()[0]);
    default: return false;
  }
}

// Structural negation of a negative-led term, for printing "a - b".
Expr negate_for_print(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Constant: return Expr(mpq_class(-e.value()));
    case ExprKind::Product: {
      std::vector<Expr> f = e.args();
      mpq_class c = -f.front().value();
      if (c == 1) {
        f.erase(f.begin());
      } else {
        f.front() = Expr(c);
      }
      if (f.size() == 1) return f.front();
      return Expr::make(ExprNode{ExprKind::Product, {}, 0, 0, Func::Exp, std::move(f)});
    }
    case ExprKind::Quotient:
      return Expr::make(ExprNode{ExprKind::Quotient, {}, 0, 0, Func::Exp,
                                 {negate_for_print(e.args()[0]), e.args()[1]}});
    default: return e;
  }
}

void print(std::ostream& os, const Expr& e, int min_prec);

void print_wrapped(std::ostream& os, const Expr& e, int min_prec) {
  if (precedence(e) < min_prec) {
    os << '(';
    print(os, e, 0);
    os << ')';
  } else {
    print(os, e, min_prec);
  }
}

void print(std::ostream& os, const Expr& e, int /*min_prec*/) {
  switch (e.kind()) {
    case ExprKind::Constant: {
      const mpq_class& v = e.value();
      os << v.get_num().get_str();
      if (v.get_den() != 1) os << '/' << v.get_den().get_str();
      return;
    }
    case ExprKind::Variable: os << e.name(); return;
    case ExprKind::Undefined: os << "undefined"; return;
    case ExprKind::Function:
      os << func_name(e.func()) << '(';
      print(os, e.args()[0], 0);
      os << ')';
      return;
    case ExprKind::Sum: {
      bool first = true;
      for (const Expr& t : e.args()) {
        if (first) {
          print_wrapped(os, t, 1);
        } else if (negative_led(t)) {
          os << " - ";
          print_wrapped(os, negate_for_print(t), 2);
        } else {
          os << " + ";
          print_wrapped(os, t, 2);
        }
        first = false;
      }
      return;
    }
    case ExprKind::Product: {
      const auto& f = e.args();
      std::size_t i = 0;
      if (f.front().is_constant()) {
        const mpq_class& c = f.front().value();
        if (c == -1) {
          os << '-';
          i = 1;
        }
      }
      bool first = true;
      for (; i < f.size(); ++i) {
        if (!first) os << '*';
        // The leading factor may be a fraction or a quotient; later factors
        // must bind tighter than '*' to survive a re-parse.
        print_wrapped(os, f[i], first ? 2 : 3);
        first = false;
      }
      return;
    }
    case ExprKind::Quotient:
      print_wrapped(os, e.args()[0], 2);
      os << '/';
      print_wrapped(os, e.args()[1], 3);
      return;
    case ExprKind::Power:
      print_wrapped(os, e.args()[0], 4);
      os << '^';
      if (e.exponent() < 0) {
        os << '(' << e.exponent() << ')';
      } else {
        os << e.exponent();
      }
      return;
  }
}

mpq_class exact_pow(const mpq_class& base, long n) {
  mpq_class result = 1;
  mpq_class b = n < 0 ? mpq_class(1 / base) : base;
  unsigned long k = n < 0 ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
  while (k) {
    if (k & 1UL) result *= b;
    b *= b;
    k >>= 1U;
  }
  return result;
}

// Exact square root of a non-negative rational, if it has one.
bool exact_sqrt(const mpq_class& q, mpq_class& out) {
  if (sgn(q) < 0) return false;
  mpz_class n = q.get_num(), d = q.get_den();
  mpz_class rn = ::sqrt(n), rd = ::sqrt(d);
  if (rn * rn != n || rd * rd != d) return false;
  out = mpq_class(rn, rd);
  out.canonicalize();
  return true;
}

void collect_vars(const Expr& e, std::set<SymbolId>& out) {
  switch (e.kind()) {
    case ExprKind::Variable: out.insert(e.symbol()); return;
    case ExprKind::Constant:
    case ExprKind::Undefined: return;
    default:
      for (const Expr& a : e.args()) collect_vars(a, out);
  }
}

}  // namespace

Expr::Expr() : node_(zero_node()) {}

Expr::Expr(long value) {
  ExprNode n;
  n.value = value;
  node_ = std::make_shared<const ExprNode>(std::move(n));
}

Expr::Expr(const mpq_class& value) {
  ExprNode n;
  n.value = value;
  n.value.canonicalize();
  node_ = std::make_shared<const ExprNode>(std::move(n));
}

Expr Expr::variable(std::string_view name) { return variable(intern_variable(name)); }

Expr Expr::variable(SymbolId id) {
  ExprNode n;
  n.kind = ExprKind::Variable;
  n.symbol = id;
  return make(std::move(n));
}

Expr Expr::undefined() {
  ExprNode n;
  n.kind = ExprKind::Undefined;
  return make(std::move(n));
}

Expr Expr::rational(long num, long den) { return Expr(mpq_class(num, den)); }

Expr Expr::make(ExprNode node) { return Expr(std::make_shared<const ExprNode>(std::move(node))); }

std::string Expr::str() const {
  std::ostringstream os;
  print(os, *this, 0);
  return os.str();
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case ExprKind::Constant: return a.value() == b.value();
    case ExprKind::Variable: return a.symbol() == b.symbol();
    case ExprKind::Undefined: return true;
    case ExprKind::Power:
      if (a.exponent() != b.exponent()) return false;
      break;
    case ExprKind::Function:
      if (a.func() != b.func()) return false;
      break;
    default: break;
  }
  if (a.args().size() != b.args().size()) return false;
  for (std::size_t i = 0; i < a.args().size(); ++i) {
    if (!structurally_equal(a.args()[i], b.args()[i])) return false;
  }
  return true;
}

Expr sum(std::vector<Expr> terms) {
  std::vector<Expr> out;
  mpq_class c = 0;
  for (Expr& t : terms) {
    if (t.is_undefined()) return Expr::undefined();
    if (t.kind() == ExprKind::Sum) {
      for (const Expr& s : t.args()) {
        if (s.is_constant()) {
          c += s.value();
        } else {
          out.push_back(s);
        }
      }
    } else if (t.is_constant()) {
      c += t.value();
    } else {
      out.push_back(std::move(t));
    }
  }
  if (c != 0) out.emplace_back(c);
  if (out.empty()) return Expr();
  if (out.size() == 1) return out.front();
  return Expr::make(ExprNode{ExprKind::Sum, {}, 0, 0, Func::Exp, std::move(out)});
}

Expr product(std::vector<Expr> factors) {
  std::vector<Expr> out;
  mpq_class c = 1;
  bool undefined = false;
  for (Expr& f : factors) {
    if (f.is_undefined()) undefined = true;
    if (f.kind() == ExprKind::Product) {
      for (const Expr& s : f.args()) {
        if (s.is_constant()) {
          c *= s.value();
        } else {
          out.push_back(s);
        }
      }
    } else if (f.is_constant()) {
      c *= f.value();
    } else {
      out.push_back(std::move(f));
    }
  }
  if (undefined) return Expr::undefined();
  if (c == 0) return Expr();
  if (out.empty()) return Expr(c);
  if (c != 1) out.insert(out.begin(), Expr(c));
  if (out.size() == 1) return out.front();
  return Expr::make(ExprNode{ExprKind::Product, {}, 0, 0, Func::Exp, std::move(out)});
}

Expr pow(const Expr& base, long exponent) {
  if (base.is_undefined()) return base;
  if (exponent == 0) return Expr(1);
  if (exponent == 1) return base;
  if (base.is_constant()) {
    if (sgn(base.value()) == 0) return exponent < 0 ? Expr::undefined() : Expr();
    return Expr(exact_pow(base.value(), exponent));
  }
  if (base.kind() == ExprKind::Power) return pow(base.args()[0], base.exponent() * exponent);
  return Expr::make(ExprNode{ExprKind::Power, {}, 0, exponent, Func::Exp, {base}});
}

Expr quotient(const Expr& num, const Expr& den) {
  if (num.is_undefined() || den.is_undefined()) return Expr::undefined();
  if (den.is_constant()) {
    if (sgn(den.value()) == 0) return Expr::undefined();
    return product({num, Expr(mpq_class(1 / den.value()))});
  }
  if (num.is_constant(0)) return Expr();
  return Expr::make(ExprNode{ExprKind::Quotient, {}, 0, 0, Func::Exp, {num, den}});
}

Expr apply(Func f, const Expr& arg) {
  if (arg.is_undefined()) return arg;
  if (arg.is_constant()) {
    const mpq_class& v = arg.value();
    switch (f) {
      case Func::Exp:
        if (v == 0) return Expr(1);
        break;
      case Func::Ln:
        if (v == 1) return Expr();
        break;
      case Func::Sin:
        if (v == 0) return Expr();
        break;
      case Func::Cos:
        if (v == 0) return Expr(1);
        break;
      case Func::Sqrt: {
        mpq_class r;
        if (exact_sqrt(v, r)) return Expr(r);
        break;
      }
    }
  }
  return Expr::make(ExprNode{ExprKind::Function, {}, 0, 0, f, {arg}});
}

Expr operator+(const Expr& a, const Expr& b) { return sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return sum({a, -b}); }
Expr operator*(const Expr& a, const Expr& b) { return product({a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return quotient(a, b); }
Expr operator-(const Expr& a) { return product({Expr(-1), a}); }

std::vector<SymbolId> free_variables(const Expr& e) {
  std::set<SymbolId> s;
  collect_vars(e, s);
  return {s.begin(), s.end()};
}

bool mentions(const Expr& e, SymbolId v) {
  switch (e.kind()) {
    case ExprKind::Variable: return e.symbol() == v;
    case ExprKind::Constant:
    case ExprKind::Undefined: return false;
    default:
      return std::any_of(e.args().begin(), e.args().end(),
                         [v](const Expr& a) { return mentions(a, v); });
  }
}

Expr diff(const Expr& e, SymbolId v) {
  if (e.is_undefined()) return e;
  if (!mentions(e, v)) return Expr();
  switch (e.kind()) {
    case ExprKind::Variable: return Expr(1);
    case ExprKind::Sum: {
      std::vector<Expr> terms;
      for (const Expr& t : e.args()) terms.push_back(diff(t, v));
      return sum(std::move(terms));
    }
    case ExprKind::Product: {
      const auto& f = e.args();
      std::vector<Expr> terms;
      for (std::size_t i = 0; i < f.size(); ++i) {
        if (!mentions(f[i], v)) continue;
        std::vector<Expr> factors;
        for (std::size_t j = 0; j < f.size(); ++j) factors.push_back(i == j ? diff(f[j], v) : f[j]);
        terms.push_back(product(std::move(factors)));
      }
      return sum(std::move(terms));
    }
    case ExprKind::Power: {
      const Expr& b = e.args()[0];
      return product({Expr(e.exponent()), pow(b, e.exponent() - 1), diff(b, v)});
    }
    case ExprKind::Quotient: {
      const Expr& a = e.args()[0];
      const Expr& b = e.args()[1];
      return quotient(diff(a, v) * b - a * diff(b, v), pow(b, 2));
    }
    case ExprKind::Function: {
      const Expr& g = e.args()[0];
      Expr dg = diff(g, v);
      switch (e.func()) {
        case Func::Exp: return e * dg;
        case Func::Ln: return quotient(dg, g);
        case Func::Sin: return cos(g) * dg;
        case Func::Cos: return -(sin(g) * dg);
        case Func::Sqrt: return quotient(dg, Expr(2) * e);
      }
      break;
    }
    default: break;
  }
  return Expr();
}

Expr diff(const Expr& e, std::string_view v) { return diff(e, intern_variable(v)); }

Expr diff(const Expr& e, std::string_view v, int times) {
  Expr r = e;
  SymbolId id = intern_variable(v);
  for (int i = 0; i < times; ++i) r = diff(r, id);
  return r;
}

std::string JetSpace::jet(int order) const {
  return dependent + std::string(static_cast<std::size_t>(order), '\'');
}

int JetSpace::order_of(std::string_view name) const {
  if (name.size() < dependent.size() || name.substr(0, dependent.size()) != dependent) return -1;
  auto rest = name.substr(dependent.size());
  if (rest.find_first_not_of('\'') != std::string_view::npos) return -1;
  return static_cast<int>(rest.size());
}

Expr total_diff(const Expr& e, const JetSpace& jets, int max_order) {
  std::vector<Expr> terms{diff(e, jets.independent)};
  for (SymbolId v : free_variables(e)) {
    const std::string& name = symbol_name(v);
    if (name == jets.independent) continue;
    int k = jets.order_of(name);
    if (k < 0) continue;
    if (k >= max_order) {
      throw JetError("total_diff: '" + name + "' has order " + std::to_string(k) +
                     ", at or above the limit " + std::to_string(max_order));
    }
    terms.push_back(jets.jet_expr(k + 1) * diff(e, v));
  }
  return sum(std::move(terms));
}

namespace {

Expr substitute_impl(const Expr& e, const std::map<SymbolId, Expr>& b) {
  switch (e.kind()) {
    case ExprKind::Constant:
    case ExprKind::Undefined: return e;
    case ExprKind::Variable: {
      auto it = b.find(e.symbol());
      return it == b.end() ? e : it->second;
    }
    case ExprKind::Sum: {
      std::vector<Expr> t;
      for (const Expr& a : e.args()) t.push_back(substitute_impl(a, b));
      return sum(std::move(t));
    }
    case ExprKind::Product: {
      std::vector<Expr> t;
      for (const Expr& a : e.args()) t.push_back(substitute_impl(a, b));
      return product(std::move(t));
    }
    case ExprKind::Power: return pow(substitute_impl(e.args()[0], b), e.exponent());
    case ExprKind::Quotient:
      return quotient(substitute_impl(e.args()[0], b), substitute_impl(e.args()[1], b));
    case ExprKind::Function: return apply(e.func(), substitute_impl(e.args()[0], b));
  }
  return e;
}

}  // namespace

Expr substitute(const Expr& e, const Bindings& bindings) {
  std::map<SymbolId, Expr> b;
  for (const auto& [name, value] : bindings) b[intern_variable(name)] = value;
  for (const auto& [name, value] : bindings) {
    for (SymbolId v : free_variables(value)) {
      if (b.count(v)) {
        throw SubstitutionError("cyclic bindings: replacement for '" + name + "' mentions bound '" +
                                symbol_name(v) + "'");
      }
    }
  }
  return substitute_impl(e, b);
}

double eval_at(const Expr& e, const Point& point, double pole_tol) {
  switch (e.kind()) {
    case ExprKind::Constant: return e.value().get_d();
    case ExprKind::Undefined: throw EvalError("undefined expression", e.str());
    case ExprKind::Variable: {
      auto it = point.find(e.name());
      if (it == point.end()) throw EvalError("unbound variable '" + e.name() + "'", e.str());
      return it->second;
    }
    case ExprKind::Sum: {
      double s = 0;
      for (const Expr& a : e.args()) s += eval_at(a, point, pole_tol);
      return s;
    }
    case ExprKind::Product: {
      double p = 1;
      for (const Expr& a : e.args()) p *= eval_at(a, point, pole_tol);
      return p;
    }
    case ExprKind::Power: {
      double b = eval_at(e.args()[0], point, pole_tol);
      long n = e.exponent();
      double r = std::pow(b, static_cast<double>(n < 0 ? -n : n));
      if (n < 0) {
        if (std::abs(r) < pole_tol) throw EvalError("division by a value near zero", e.str());
        r = 1.0 / r;
      }
      return r;
    }
    case ExprKind::Quotient: {
      double d = eval_at(e.args()[1], point, pole_tol);
      if (std::abs(d) < pole_tol) throw EvalError("division by a value near zero", e.str());
      return eval_at(e.args()[0], point, pole_tol) / d;
    }
    case ExprKind::Function: {
      double a = eval_at(e.args()[0], point, pole_tol);
      switch (e.func()) {
        case Func::Exp: return std::exp(a);
        case Func::Ln:
          if (a <= 0) throw EvalError("ln of a non-positive value", e.str());
          return std::log(a);
        case Func::Sin: return std::sin(a);
        case Func::Cos: return std::cos(a);
        case Func::Sqrt:
          if (a < 0) throw EvalError("sqrt of a negative value", e.str());
          return std::sqrt(a);
      }
    }
  }
  return 0;
}

}  // namespace odelin
