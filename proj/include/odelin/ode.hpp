#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "odelin/expr.hpp"

namespace odelin {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : std::runtime_error(message + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

struct ParseContext {
  JetSpace jets;
  std::vector<std::string> extra_symbols;  // e.g. integration constants
  int max_order = 4;
};

struct Equation {
  Expr lhs;
  Expr rhs;
};

/// Grammar: jet variables (y, y', ..., y'''' or y^(4)), the independent
/// variable, rational literals (3, 3/2, 0.5), + - * / ^ with the usual
/// precedence (^ right-associative, integer exponent), exp ln sin cos sqrt,
/// and an optional single '='. A lone expression means expression = 0.
Equation parse_ode(std::string_view text, const ParseContext& ctx = {});
Expr parse_expr(std::string_view text, const ParseContext& ctx = {});

class NormalizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// (d/d independent)^order dependent = rhs, with rhs canonical and free of
/// derivatives of order >= `order`.
struct NormalizedOde {
  JetSpace jets;
  int order = 0;
  Expr rhs;
  Expr leading = Expr(1);  // coefficient divided out by normalize_leading

  Expr top() const { return jets.jet_expr(order); }
  /// "y'''' = rhs", re-parseable.
  std::string str() const;
  /// "y'''' + ... = 0" with the right-hand side moved over and expanded
  /// term by term when its denominator is a monomial.
  std::string equation_str() const;

  bool structurally_equals(const NormalizedOde& o) const;
};

/// Solves for the highest derivative present. Throws NormalizeError when the
/// equation is nonlinear in it, when it is missing, or when the order is
/// outside 2..4.
NormalizedOde normalize_leading(const Equation& eq, const JetSpace& jets = {});
NormalizedOde parse_normalized(std::string_view text, const ParseContext& ctx = {});

struct DependencyProfile {
  int order = 0;
  bool uses_independent = false;
  bool uses_dependent = false;
};

DependencyProfile dependency_scan(const NormalizedOde& ode);

/// Display form of a canonical expression: when the denominator is a single
/// monomial, each numerator term is divided through separately.
Expr expand_over_monomial(const Expr& e);

}  // namespace odelin
