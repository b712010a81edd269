#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "odelin/symbols.hpp"

namespace odelin {

enum class ExprKind : std::uint8_t {
  Constant,
  Variable,
  Sum,
  Product,
  Power,
  Quotient,
  Function,
  Undefined,  // result of dividing by a syntactic zero
};

class Expr;

struct ExprNode {
  ExprKind kind = ExprKind::Constant;
  mpq_class value;       // Constant
  SymbolId symbol = 0;   // Variable
  long exponent = 0;     // Power
  Func func = Func::Exp; // Function
  std::vector<Expr> args;
};

/// Immutable expression tree. Copies share structure.
class Expr {
 public:
  Expr();  // the constant 0
  Expr(long value);  // NOLINT(google-explicit-constructor)
  Expr(const mpq_class& value);  // NOLINT(google-explicit-constructor)

  static Expr variable(std::string_view name);
  static Expr variable(SymbolId id);
  static Expr undefined();
  static Expr rational(long num, long den);

  ExprKind kind() const { return node_->kind; }
  const mpq_class& value() const { return node_->value; }
  SymbolId symbol() const { return node_->symbol; }
  const std::string& name() const { return symbol_name(node_->symbol); }
  long exponent() const { return node_->exponent; }
  Func func() const { return node_->func; }
  const std::vector<Expr>& args() const { return node_->args; }

  bool is_constant() const { return kind() == ExprKind::Constant; }
  bool is_constant(long v) const { return is_constant() && value() == v; }
  bool is_undefined() const { return kind() == ExprKind::Undefined; }

  std::string str() const;

  // Raw node construction; no simplification. Used by the canonical printer.
  static Expr make(ExprNode node);

 private:
  explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const ExprNode> node_;
};

bool structurally_equal(const Expr& a, const Expr& b);

// Smart constructors: flatten, fold constants, drop neutral elements.
Expr sum(std::vector<Expr> terms);
Expr product(std::vector<Expr> factors);
Expr pow(const Expr& base, long exponent);
Expr quotient(const Expr& num, const Expr& den);
Expr apply(Func f, const Expr& arg);

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);

inline Expr exp(const Expr& e) { return apply(Func::Exp, e); }
inline Expr ln(const Expr& e) { return apply(Func::Ln, e); }
inline Expr sin(const Expr& e) { return apply(Func::Sin, e); }
inline Expr cos(const Expr& e) { return apply(Func::Cos, e); }
inline Expr sqrt(const Expr& e) { return apply(Func::Sqrt, e); }

/// Sorted list of variables mentioned anywhere in `e`, including inside
/// function arguments.
std::vector<SymbolId> free_variables(const Expr& e);
bool mentions(const Expr& e, SymbolId v);

/// Partial derivative; all variables are mutually independent.
Expr diff(const Expr& e, SymbolId v);
Expr diff(const Expr& e, std::string_view v);
Expr diff(const Expr& e, std::string_view v, int times);

/// Dependent/independent naming of a jet space: jet(k) is the dependent name
/// followed by k primes.
struct JetSpace {
  std::string independent = "x";
  std::string dependent = "y";

  std::string jet(int order) const;
  SymbolId jet_symbol(int order) const { return intern_variable(jet(order)); }
  Expr jet_expr(int order) const { return Expr::variable(jet(order)); }
  Expr independent_expr() const { return Expr::variable(independent); }
  /// Order of `name` as a jet variable of this space, or -1.
  int order_of(std::string_view name) const;

  bool operator==(const JetSpace&) const = default;
};

class JetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// d/d(independent) with every jet variable of order k promoted to k+1.
/// Throws JetError if `e` already mentions a jet of order >= max_order.
Expr total_diff(const Expr& e, const JetSpace& jets, int max_order);

class SubstitutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Bindings = std::vector<std::pair<std::string, Expr>>;

/// Simultaneous substitution. Throws SubstitutionError when a replacement
/// mentions a bound variable.
Expr substitute(const Expr& e, const Bindings& bindings);

class EvalError : public std::runtime_error {
 public:
  EvalError(const std::string& what, std::string subexpression)
      : std::runtime_error(what), subexpression_(std::move(subexpression)) {}
  const std::string& subexpression() const { return subexpression_; }

 private:
  std::string subexpression_;
};

using Point = std::map<std::string, double, std::less<>>;

/// IEEE double evaluation. Division by |d| < pole_tol, ln of a non-positive
/// value and sqrt of a negative value raise EvalError.
double eval_at(const Expr& e, const Point& point, double pole_tol = 1e-12);

// Function atoms used by the polynomial layer.
SymbolId intern_atom(Func f, const Expr& canonical_arg);
Func atom_func(SymbolId id);
const Expr& atom_arg(SymbolId id);
Expr symbol_expr(SymbolId id);

}  // namespace odelin
