#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "odelin/expr.hpp"
#include "odelin/poly.hpp"

namespace odelin {

RatFunc to_ratfunc(const Expr& e);
Expr from_ratfunc(const RatFunc& r);

/// Quotient of two expanded polynomials in lowest terms (function
/// applications act as extra indeterminates with canonical arguments).
/// Idempotent; dividing by a syntactic zero yields Expr::undefined().
Expr canonicalize(const Expr& e);

/// Splits a canonical expression into numerator and denominator.
std::pair<Expr, Expr> numerator_denominator(const Expr& e);

struct ZeroTestOptions {
  int samples = 16;
  double tol = 1e-8;
  std::uint64_t seed = 0;
};

struct ZeroVerdict {
  enum class Kind { ProvenZero, ProbablyZero, NonZero, Indeterminate };

  Kind kind = Kind::Indeterminate;
  int samples = 0;
  double max_abs = 0;  // largest |value| seen while sampling
  std::vector<std::pair<std::string, double>> witness;  // NonZero only
  double witness_value = 0;
  std::string detail;

  bool holds() const { return kind == Kind::ProvenZero || kind == Kind::ProbablyZero; }
};

std::string_view verdict_name(ZeroVerdict::Kind k);

/// ProvenZero when the canonical numerator vanishes identically; otherwise
/// samples the canonical form at random points with components drawn from
/// [-3,-0.5] U [0.5,3]. A sample counts as zero when |N| <= tol * sum|terms of N|.
ZeroVerdict is_zero(const Expr& e, const ZeroTestOptions& opts = {});

/// Convenience: canonical forms of a and b coincide.
bool canonically_equal(const Expr& a, const Expr& b);

}  // namespace odelin
