#include <doctest.h>

#include "../support/gen.hpp"
#include "odelin/poly.hpp"

using namespace odelin;

namespace {

Poly random_poly(testgen::Gen& g, const std::vector<SymbolId>& vars, int terms, int max_exp) {
  Poly p;
  for (int t = 0; t < terms; ++t) {
    Poly m(mpq_class(g.integer(-9, 9), g.integer(1, 3)));
    for (SymbolId v : vars) {
      for (int k = g.integer(0, max_exp); k > 0; --k) m = m * Poly::symbol(v);
    }
    p = p + m;
  }
  return p;
}

std::vector<SymbolId> syms(std::initializer_list<const char*> names) {
  std::vector<SymbolId> out;
  for (const char* n : names) out.push_back(Expr::variable(n).symbol());
  return out;
}

}  // namespace

TEST_CASE("gcd recovers a planted common factor") {
  testgen::Gen g(31);
  const auto vars = syms({"p", "q", "r"});
  int planted = 0;
  for (int i = 0; i < 60; ++i) {
    const Poly a = random_poly(g, vars, g.integer(1, 5), 2);
    const Poly b = random_poly(g, vars, g.integer(1, 5), 2);
    const Poly c = random_poly(g, vars, g.integer(2, 4), 2);
    if (a.is_zero() || b.is_zero() || c.is_zero() || c.is_constant()) continue;
    const Poly ac = a * c, bc = b * c;
    const Poly d = gcd(ac, bc);
    CHECK(exact_divide(ac, d).has_value());
    CHECK(exact_divide(bc, d).has_value());
    CHECK_MESSAGE(exact_divide(d, c).has_value(), "planted factor lost");
    ++planted;
  }
  CHECK(planted > 40);
}

TEST_CASE("gcd of coprime polynomials is 1") {
  const auto v = syms({"p", "q"});
  const Poly p = Poly::symbol(v[0]), q = Poly::symbol(v[1]);
  const Poly one(mpq_class(1));
  CHECK(gcd(p * p + q * q + one, p * q + one) == one);
  CHECK(gcd(p + q, p - q) == one);
  CHECK(gcd(p * q, p * p) == p);
  const Poly d = gcd((p + q) * (p - one), (p + q) * (q + one));
  CHECK(d == p + q);
}

TEST_CASE("gcd with a linear variable on one side stays fast") {
  // Degree 1 in p on one side: the remainder sequence must run in p.
  const auto v = syms({"p", "q", "r"});
  const Poly p = Poly::symbol(v[0]), q = Poly::symbol(v[1]), r = Poly::symbol(v[2]);
  const Poly one(mpq_class(1));
  Poly a = one, b = p * q + r * r + one;
  for (int k = 0; k < 5; ++k) a = a * (p * p * q + r * r * r + q * q * q * q + one);
  const Poly common = q * q + r + one;
  const Poly d = gcd(a * common, b * common);
  CHECK(exact_divide(d, common).has_value());
  CHECK(exact_divide(common, d).has_value());
}
