#include "odelin/ode.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

#include "odelin/canonical.hpp"

namespace odelin {
namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Equals, End };

struct Token {
  Tok kind = Tok::End;
  std::size_t offset = 0;
  mpq_class number;
  std::string name;  // identifier with any trailing primes folded in
  int explicit_order = -1;  // set for the y^(n) spelling
};

class Lexer {
 public:
  Lexer(std::string_view text, const ParseContext& ctx) : text_(text), ctx_(ctx) {}

  Token next() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    Token t;
    t.offset = pos_;
    if (pos_ >= text_.size()) return t;
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number(t);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier(t);
    ++pos_;
    switch (c) {
      case '+': t.kind = Tok::Plus; return t;
      case '-': t.kind = Tok::Minus; return t;
      case '*': t.kind = Tok::Star; return t;
      case '/': t.kind = Tok::Slash; return t;
      case '^': t.kind = Tok::Caret; return t;
      case '(': t.kind = Tok::LParen; return t;
      case ')': t.kind = Tok::RParen; return t;
      case '=': t.kind = Tok::Equals; return t;
      default: break;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", t.offset);
  }

 private:
  Token number(Token t) {
    std::string digits;
    std::size_t scale = 0;
    bool seen_point = false;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        digits += c;
        if (seen_point) ++scale;
      } else if (c == '.' && !seen_point) {
        seen_point = true;
      } else {
        break;
      }
      ++pos_;
    }
    if (digits.empty()) throw ParseError("malformed number", t.offset);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, scale);
    t.kind = Tok::Number;
    t.number = mpq_class(mpz_class(digits, 10), den);
    t.number.canonicalize();
    return t;
  }

  Token identifier(Token t) {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    t.kind = Tok::Ident;
    t.name = std::string(text_.substr(start, pos_ - start));
    while (pos_ < text_.size() && text_[pos_] == '\'') {
      t.name += '\'';
      ++pos_;
    }
    // The dependent name followed directly by ^(digits) is derivative notation.
    if (t.name == ctx_.jets.dependent && text_.substr(pos_, 2) == "^(") {
      std::size_t p = pos_ + 2;
      std::size_t q = p;
      while (q < text_.size() && std::isdigit(static_cast<unsigned char>(text_[q]))) ++q;
      if (q > p && q < text_.size() && text_[q] == ')') {
        t.explicit_order = std::stoi(std::string(text_.substr(p, q - p)));
        pos_ = q + 1;
      }
    }
    return t;
  }

  std::string_view text_;
  const ParseContext& ctx_;
  std::size_t pos_ = 0;
};

std::optional<Func> function_named(std::string_view name) {
  if (name == "exp") return Func::Exp;
  if (name == "ln") return Func::Ln;
  if (name == "sin") return Func::Sin;
  if (name == "cos") return Func::Cos;
  if (name == "sqrt") return Func::Sqrt;
  return std::nullopt;
}

class Parser {
 public:
  Parser(std::string_view text, const ParseContext& ctx) : lexer_(text, ctx), ctx_(ctx) { advance(); }

  Equation equation() {
    Equation eq;
    eq.lhs = expression();
    if (tok_.kind == Tok::Equals) {
      advance();
      eq.rhs = expression();
    }
    expect_end();
    return eq;
  }

  Expr lone_expression() {
    Expr e = expression();
    expect_end();
    return e;
  }

 private:
  void advance() { tok_ = lexer_.next(); }

  void expect_end() {
    if (tok_.kind == Tok::Equals) throw ParseError("more than one '='", tok_.offset);
    if (tok_.kind != Tok::End) throw ParseError("unexpected token", tok_.offset);
  }

  void expect(Tok kind, const char* what) {
    if (tok_.kind != kind) throw ParseError(std::string("expected ") + what, tok_.offset);
    advance();
  }

  Expr expression() {
    Expr acc = term();
    while (tok_.kind == Tok::Plus || tok_.kind == Tok::Minus) {
      const bool minus = tok_.kind == Tok::Minus;
      advance();
      Expr rhs = term();
      acc = minus ? acc - rhs : acc + rhs;
    }
    return acc;
  }

  Expr term() {
    Expr acc = unary();
    while (tok_.kind == Tok::Star || tok_.kind == Tok::Slash) {
      const bool divide = tok_.kind == Tok::Slash;
      advance();
      Expr rhs = unary();
      acc = divide ? acc / rhs : acc * rhs;
    }
    return acc;
  }

  Expr unary() {
    if (tok_.kind == Tok::Minus) {
      advance();
      return -unary();
    }
    if (tok_.kind == Tok::Plus) {
      advance();
      return unary();
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (tok_.kind != Tok::Caret) return base;
    const std::size_t at = tok_.offset;
    advance();
    Expr exponent = canonicalize(unary());
    if (!exponent.is_constant() || exponent.value().get_den() != 1 || !exponent.value().get_num().fits_slong_p()) {
      throw ParseError("exponent must be an integer constant", at);
    }
    return pow(base, exponent.value().get_num().get_si());
  }

  Expr primary() {
    const Token t = tok_;
    switch (t.kind) {
      case Tok::Number: advance(); return Expr(t.number);
      case Tok::LParen: {
        advance();
        Expr inner = expression();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Ident: {
        advance();
        if (auto f = function_named(t.name); f && tok_.kind == Tok::LParen) {
          advance();
          Expr arg = expression();
          expect(Tok::RParen, "')'");
          return apply(*f, arg);
        }
        return identifier(t);
      }
      case Tok::End: throw ParseError("unexpected end of input", t.offset);
      default: throw ParseError("expected an operand", t.offset);
    }
  }

  Expr identifier(const Token& t) {
    const JetSpace& jets = ctx_.jets;
    if (t.explicit_order >= 0) return jet(t.explicit_order, t.offset);
    if (t.name == jets.independent) return jets.independent_expr();
    if (int order = jets.order_of(t.name); order >= 0) return jet(order, t.offset);
    const std::string base = t.name.substr(0, t.name.find('\''));
    if (base == jets.dependent) return jet(static_cast<int>(t.name.size() - base.size()), t.offset);
    if (std::find(ctx_.extra_symbols.begin(), ctx_.extra_symbols.end(), t.name) != ctx_.extra_symbols.end()) {
      return Expr::variable(t.name);
    }
    throw ParseError("unknown identifier '" + t.name + "'", t.offset);
  }

  Expr jet(int order, std::size_t offset) {
    if (order > ctx_.max_order) {
      throw ParseError("derivative order " + std::to_string(order) + " exceeds " + std::to_string(ctx_.max_order),
                       offset);
    }
    return ctx_.jets.jet_expr(order);
  }

  Lexer lexer_;
  const ParseContext& ctx_;
  Token tok_;
};

int highest_order(const RatFunc& r, const JetSpace& jets) {
  int n = -1;
  for (const Poly* p : {&r.num, &r.den}) {
    for (SymbolId s : p->symbols()) {
      std::vector<SymbolId> leaves = is_atom(s) ? free_variables(atom_arg(s)) : std::vector<SymbolId>{s};
      for (SymbolId v : leaves) n = std::max(n, jets.order_of(symbol_name(v)));
    }
  }
  return n;
}

// Product of the positive powers of a monomial's factors.
Expr monomial_expr(const Monomial& m) {
  std::vector<Expr> factors;
  for (const auto& [s, k] : m.factors) factors.push_back(pow(symbol_expr(s), static_cast<long>(k)));
  return product(std::move(factors));
}

}  // namespace

Equation parse_ode(std::string_view text, const ParseContext& ctx) { return Parser(text, ctx).equation(); }

Expr parse_expr(std::string_view text, const ParseContext& ctx) { return Parser(text, ctx).lone_expression(); }

NormalizedOde normalize_leading(const Equation& eq, const JetSpace& jets) {
  RatFunc p = to_ratfunc(eq.lhs - eq.rhs);
  if (p.undefined) throw NormalizeError("equation contains a division by zero");
  const int n = highest_order(p, jets);
  if (n < 1) throw NormalizeError("no derivative of " + jets.dependent + " is present");
  if (n < 2 || n > 4) throw NormalizeError("order " + std::to_string(n) + " is outside the supported range 2..4");

  const SymbolId top = jets.jet_symbol(n);
  for (const Poly* q : {&p.num, &p.den}) {
    for (SymbolId s : q->symbols()) {
      if (is_atom(s) && mentions(atom_arg(s), top)) {
        throw NormalizeError(jets.jet(n) + " appears inside " + std::string(func_name(atom_func(s))) + "()");
      }
    }
  }
  if (p.den.degree_in(top) > 0) throw NormalizeError("equation is not polynomial in " + jets.jet(n));
  std::vector<Poly> coeffs = p.num.coefficients_in(top);
  if (coeffs.size() != 2) throw NormalizeError("equation is nonlinear in " + jets.jet(n));

  RatFunc c = RatFunc::reduce(coeffs[1], p.den);
  RatFunc rest = RatFunc::reduce(coeffs[0], p.den);
  RatFunc f = RatFunc::constant(-1) * (rest / c);

  NormalizedOde ode;
  ode.jets = jets;
  ode.order = n;
  ode.rhs = from_ratfunc(f);
  ode.leading = from_ratfunc(c);
  return ode;
}

NormalizedOde parse_normalized(std::string_view text, const ParseContext& ctx) {
  return normalize_leading(parse_ode(text, ctx), ctx.jets);
}

std::string NormalizedOde::str() const { return jets.jet(order) + " = " + expand_over_monomial(rhs).str(); }

std::string NormalizedOde::equation_str() const {
  Expr moved = expand_over_monomial(canonicalize(-rhs));
  std::vector<Expr> terms{top()};
  if (moved.kind() == ExprKind::Sum) {
    terms.insert(terms.end(), moved.args().begin(), moved.args().end());
  } else if (!moved.is_constant(0)) {
    terms.push_back(moved);
  }
  Expr lhs = terms.size() == 1 ? terms[0] : Expr::make(ExprNode{ExprKind::Sum, {}, 0, 0, Func::Exp, terms});
  return lhs.str() + " = 0";
}

bool NormalizedOde::structurally_equals(const NormalizedOde& o) const {
  return jets == o.jets && order == o.order && structurally_equal(rhs, o.rhs);
}

DependencyProfile dependency_scan(const NormalizedOde& ode) {
  DependencyProfile d;
  d.order = ode.order;
  const Expr f = canonicalize(ode.rhs);
  d.uses_independent = mentions(f, intern_variable(ode.jets.independent));
  d.uses_dependent = mentions(f, ode.jets.jet_symbol(0));
  return d;
}

Expr expand_over_monomial(const Expr& e) {
  RatFunc r = to_ratfunc(e);
  if (r.undefined) return Expr::undefined();
  if (!r.den.is_monomial()) return from_ratfunc(r);
  const Term& d = r.den.leading();
  std::vector<Expr> terms;
  for (const Term& t : r.num.terms()) {
    mpq_class coeff = t.coeff / d.coeff;
    Monomial up;
    Monomial down;
    std::map<SymbolId, long> net;
    for (const auto& [s, k] : t.monomial.factors) net[s] += k;
    for (const auto& [s, k] : d.monomial.factors) net[s] -= k;
    for (const auto& [s, k] : net) {
      if (k > 0) up.factors.emplace_back(s, static_cast<std::uint32_t>(k));
      if (k < 0) down.factors.emplace_back(s, static_cast<std::uint32_t>(-k));
    }
    Expr num = product({Expr(mpq_class(abs(coeff.get_num()))), monomial_expr(up)});
    Expr term = down.factors.empty()
                    ? num
                    : Expr::make(ExprNode{ExprKind::Quotient, {}, 0, 0, Func::Exp, {num, monomial_expr(down)}});
    if (coeff.get_den() != 1) {
      // k/m * stuff is printed as k*stuff/(m*down) to stay within the grammar.
      Expr den = product({Expr(mpq_class(coeff.get_den())), monomial_expr(down)});
      term = Expr::make(ExprNode{ExprKind::Quotient, {}, 0, 0, Func::Exp, {num, den}});
    }
    if (coeff < 0) term = Expr::make(ExprNode{ExprKind::Product, {}, 0, 0, Func::Exp, {Expr(-1), term}});
    terms.push_back(term);
  }
  if (terms.empty()) return Expr(0);
  if (terms.size() == 1) return terms[0];
  return Expr::make(ExprNode{ExprKind::Sum, {}, 0, 0, Func::Exp, std::move(terms)});
}

}  // namespace odelin
