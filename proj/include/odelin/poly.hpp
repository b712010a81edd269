#pragma once

// Sparse multivariate polynomials over Q in the symbol table's variables and
// function atoms, plus reduced rational functions built on them.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "odelin/symbols.hpp"

namespace odelin {

struct Monomial {
  std::vector<std::pair<SymbolId, std::uint32_t>> factors;  // ascending id, exponents > 0

  unsigned degree() const;
  std::uint32_t exponent_of(SymbolId v) const;
  bool operator==(const Monomial&) const = default;
};

Monomial operator*(const Monomial& a, const Monomial& b);

/// Graded lexicographic order; a lower symbol id carries more weight.
bool grlex_greater(const Monomial& a, const Monomial& b);

struct GrlexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const { return grlex_greater(a, b); }
};

struct Term {
  Monomial monomial;
  mpq_class coeff;
};

class Poly {
 public:
  Poly() = default;
  explicit Poly(const mpq_class& c);
  static Poly symbol(SymbolId v);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  mpq_class constant_value() const;  // requires is_constant()
  bool is_monomial() const { return terms_.size() == 1; }
  const Term& leading() const { return terms_.front(); }

  std::vector<SymbolId> symbols() const;
  unsigned degree_in(SymbolId v) const;
  /// Coefficients as a polynomial in v: result[k] multiplies v^k.
  std::vector<Poly> coefficients_in(SymbolId v) const;
  static Poly from_coefficients(SymbolId v, const std::vector<Poly>& coeffs);

  Poly operator-() const;
  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly scaled(const mpq_class& c) const;
  bool operator==(const Poly& o) const;

 private:
  friend class PolyBuilder;
  std::vector<Term> terms_;  // grlex descending, no zero coefficients
};

/// Exact quotient a / b, or nullopt when b does not divide a.
std::optional<Poly> exact_divide(const Poly& a, const Poly& b);

/// Greatest common divisor over Q, normalized to leading coefficient 1.
Poly gcd(const Poly& a, const Poly& b);

/// num/den in lowest terms: no common polynomial factor, integer
/// coefficients with no common numeric factor, positive leading denominator
/// coefficient. `undefined` marks a division by the zero polynomial.
struct RatFunc {
  Poly num;
  Poly den{mpq_class(1)};
  bool undefined = false;

  static RatFunc constant(const mpq_class& c);
  static RatFunc symbol(SymbolId v);
  static RatFunc make_undefined();
  static RatFunc reduce(Poly num, Poly den);

  bool is_zero() const { return !undefined && num.is_zero(); }
  bool operator==(const RatFunc&) const = default;
};

RatFunc operator+(const RatFunc& a, const RatFunc& b);
RatFunc operator-(const RatFunc& a, const RatFunc& b);
RatFunc operator*(const RatFunc& a, const RatFunc& b);
RatFunc operator/(const RatFunc& a, const RatFunc& b);
RatFunc pow(const RatFunc& a, long n);

}  // namespace odelin
