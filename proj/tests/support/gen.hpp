#pragma once

// Seeded random generators for property tests.

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "odelin/expr.hpp"
#include "odelin/form.hpp"

namespace odelin::testgen {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool chance(double p) { return real(0, 1) < p; }

  Expr rational() {
    long num = integer(-9, 9);
    if (num == 0) num = 1;
    return Expr::rational(num, integer(1, 4));
  }

  /// Random expression over `vars` whose transcendental arguments stay in
  /// safe ranges, so it is finite wherever its denominators are.
  Expr expr(const std::vector<std::string>& vars, int depth) {
    if (depth <= 0 || chance(0.2)) return leaf(vars);
    switch (integer(0, 8)) {
      case 0:
      case 1: return expr(vars, depth - 1) + expr(vars, depth - 1);
      case 2: return expr(vars, depth - 1) - expr(vars, depth - 1);
      case 3:
      case 4: return expr(vars, depth - 1) * expr(vars, depth - 1);
      case 5: return expr(vars, depth - 1) / (Expr(2) + pow(leaf(vars), 2));
      case 6: return pow(expr(vars, depth - 1), integer(-2, 3));
      case 7: {
        const Expr a = expr(vars, depth - 1);
        switch (integer(0, 4)) {
          case 0: return sin(a);
          case 1: return cos(a);
          case 2: return exp(sin(a));
          case 3: return ln(Expr(1) + pow(a, 2));
          default: return sqrt(Expr(3) + cos(a));
        }
      }
      default: return expr(vars, depth - 1) / leaf(vars);
    }
  }

  /// Small rational function in the given pair, occasionally zero.
  Expr coefficient(const std::pair<std::string, std::string>& vars) {
    if (chance(0.15)) return Expr(0);
    const Expr a = Expr::variable(vars.first);
    const Expr b = Expr::variable(vars.second);
    Expr num = rational();
    for (int t = integer(0, 2); t > 0; --t) {
      num = num + rational() * pow(a, integer(0, 2)) * pow(b, integer(0, 2));
    }
    if (chance(0.5)) return num;
    return num / (pow(b, integer(1, 2)) + (chance(0.5) ? a : Expr(0)) + Expr(integer(1, 3)));
  }

  /// Random coefficient set of the variant `form` uses, with coefficients in
  /// the form's permitted variables. Swap coefficients are kept linear in the
  /// independent variable.
  CoeffSet coeffs(FormId form, const JetSpace& jets = {}) {
    CoeffSet c = empty_coeffs(form);
    const auto vars = permitted_variables(form, jets);
    if (form == FormId::SwapRemark) {
      const Expr x = Expr::variable(vars.first);
      const std::pair<std::string, std::string> yy{vars.second, vars.second};
      return SwapForm{coefficient(yy) * x + coefficient(yy) + Expr(1)};
    }
    for (auto& [name, slot] : coefficient_slots(c)) *slot = coefficient(vars);
    return c;
  }

 private:
  Expr leaf(const std::vector<std::string>& vars) {
    if (chance(0.3)) return rational();
    return Expr::variable(vars[static_cast<std::size_t>(integer(0, static_cast<int>(vars.size()) - 1))]);
  }

  std::mt19937_64 rng_;
};

}  // namespace odelin::testgen
