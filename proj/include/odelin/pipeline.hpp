#pragma once

// Orchestration shared by the command-line tool and the acceptance suite:
// normalize, match every applicable form, evaluate constraints, reduce, and
// cross-check printed formulas against the direct substitution path.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "odelin/constraints.hpp"
#include "odelin/examples.hpp"
#include "odelin/form.hpp"
#include "odelin/ode.hpp"
#include "odelin/reduction.hpp"
#include "odelin/verify.hpp"

namespace odelin {

struct FormOutcome {
  FormId form;
  MatchResult<MatchedForm> match;
  std::optional<ConstraintReport> report;  // printed-formula conditions
};

/// Whether a reduced equation is in a linearizable class.
struct Linearization {
  std::optional<FormId> form;  // first form that matched
  std::optional<ConstraintReport> report;
  std::vector<std::pair<FormId, NoMatch>> misses;
  Verdict verdict = Verdict::Unsupported;
  std::string note;
};

struct ReductionOutcome {
  Method method;
  std::optional<ReductionTrace> trace;
  std::string error;
  Linearization linearization;
};

/// Printed condition set against reduce-then-test on the same input.
struct CrossCheck {
  FormId form;
  Method method;
  Verdict printed = Verdict::Unsupported;
  Verdict semantic = Verdict::Unsupported;
  bool disagrees = false;
};

struct Discrepancy {
  std::string id;
  std::string printed;
  std::string computed;
  std::string note;
};

struct Analysis {
  std::string input;
  NormalizedOde ode;
  DependencyProfile profile;
  std::vector<FormOutcome> forms;
  std::vector<Method> plan;
  std::vector<ReductionOutcome> reductions;
  std::optional<Method> auto_method;
  std::optional<IdentificationOutcome> identification;
  std::vector<CrossCheck> cross_checks;
  const BuiltinExample* example = nullptr;
  std::vector<Discrepancy> discrepancies;
  bool paper_formula_disagrees = false;
  Verdict headline = Verdict::Fail;
  std::string headline_basis;

  const FormOutcome* form(FormId f) const;
  const ReductionOutcome* reduction(Method m) const;
};

Linearization linearization_test(const ReductionTrace& trace, const ZeroTestOptions& opts = {});

/// Full symbolic pipeline. `example` may be null; if so the input is matched
/// against the built-in examples.
Analysis analyze(const NormalizedOde& ode, const std::string& input, const ZeroTestOptions& opts = {},
                 const BuiltinExample* example = nullptr);

struct VerifyOptions {
  double h = 1e-3;
  std::size_t steps = 500;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  double x0 = 0;
  std::optional<std::vector<double>> initial;
  std::optional<Method> method;
  std::optional<std::string> reduced;  // claimed reduced equation replacing the computed one
  std::vector<SolutionFamily> solutions;  // checked in addition to registered families
  bool numeric = true;
};

struct ReductionCheck {
  Method method;
  std::string reduced;
  bool reduced_from_user = false;
  std::vector<double> initial;
  double h = 0;
  std::size_t requested_steps = 0;
  std::size_t taken_steps = 0;
  bool halted = false;
  std::string halt_reason;
  ReductionResidual residual;
  std::optional<ReductionResidual> refined;  // at h/2
  std::optional<double> ratio;               // shadow max at h over h/2
  Verdict verdict = Verdict::Indeterminate;
  std::string error;
};

struct SolutionCheck {
  SolutionFamily family;
  ResidualStats stats;
  Verdict verdict = Verdict::Indeterminate;
  std::string error;
};

struct Verification {
  std::optional<ReductionCheck> reduction;
  std::vector<SolutionCheck> solutions;
  std::vector<Discrepancy> discrepancies;
  Verdict overall = Verdict::Indeterminate;
};

Verification verify(const Analysis& a, const VerifyOptions& opts);

/// Default starting values: y = 0 and every derivative 1.
std::vector<double> default_initial(int order);

}  // namespace odelin
