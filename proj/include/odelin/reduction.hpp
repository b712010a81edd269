#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "odelin/canonical.hpp"
#include "odelin/form.hpp"
#include "odelin/ode.hpp"

namespace odelin {

enum class Method { MissingY, MissingX, MissingXY, Swap };

std::string_view method_name(Method m);
std::optional<Method> method_from_name(std::string_view name);

class ReductionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ReductionTrace {
  Method method = Method::MissingY;
  NormalizedOde source;
  /// Source jet name -> its image in the reduced jet space (chain rule).
  Bindings dictionary;
  NormalizedOde reduced;
  /// Leading coefficient divided out of the substituted equation.
  Expr divisor = Expr(1);
  /// Reduced independent variable and reduced jets u, u', ..., u^(m) written
  /// in source jets (u^(m) may contain the source top derivative).
  Expr new_independent;
  std::vector<Expr> inverse;
  std::vector<std::string> recipe;
  std::vector<std::string> warnings;
};

ReductionTrace reduce_missing_y(const NormalizedOde& ode);
ReductionTrace reduce_missing_x(const NormalizedOde& ode);
ReductionTrace reduce_missing_xy(const NormalizedOde& ode);
ReductionTrace swap_variables(const NormalizedOde& ode);
ReductionTrace reduce(const NormalizedOde& ode, Method m);

/// Applicable methods in priority order: swap, missing-xy, missing-x, missing-y.
std::vector<Method> plan(const NormalizedOde& ode);

struct CoefficientAgreement {
  std::string name;
  Expr printed;                   // from the printed identification map, y' -> u
  std::optional<Expr> semantic;   // from direct substitution and re-matching
  ZeroVerdict agreement;          // of printed - semantic
};

struct IdentificationOutcome {
  FormId source_form;
  FormId reduced_form;
  std::vector<CoefficientAgreement> coefficients;
  std::optional<NoMatch> semantic_failure;  // reduced equation did not match
  bool all_agree = false;
};

/// Printed identification map against the direct reduction for the x-free
/// Type I and Type II fourth-order forms. Throws std::invalid_argument for
/// other forms.
IdentificationOutcome identify_coeffs(const MatchedForm& m, const ZeroTestOptions& opts = {});

}  // namespace odelin
