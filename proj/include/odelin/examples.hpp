#pragma once

// Built-in worked examples: the equation the pipeline runs on, the text as
// originally printed, and the printed intermediate results to compare against.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "odelin/expr.hpp"
#include "odelin/form.hpp"
#include "odelin/ode.hpp"
#include "odelin/reduction.hpp"
#include "odelin/verify.hpp"

namespace odelin {

struct PrintedCoefficient {
  std::string name;
  std::string text;
};

/// A solution family to be checked with solution_residual.
struct SolutionFamily {
  enum class Role {
    Claim,       // certifies the pipeline's own output; gates verification
    PaperCheck,  // tests a printed statement; failures become discrepancies
  };
  std::string label;
  Role role = Role::Claim;
  bool as_printed = true;  // false: our corrected version of a printed formula
  std::string equation;    // ODE text the family should solve
  JetSpace jets;
  SolutionCandidate::Kind kind = SolutionCandidate::Kind::Explicit;
  std::string g;  // right-hand side of y = g(x) or x = g(y)
  std::vector<std::string> constants;
};

struct BuiltinExample {
  int number = 0;
  std::string ode;          // equation the pipeline runs on
  std::string printed_ode;  // as printed, transcribed into the grammar
  std::string correction_note;
  FormId form = FormId::Thm1FourthX;
  std::vector<PrintedCoefficient> printed_coefficients;
  Method method = Method::MissingX;
  std::string printed_reduced;
  JetSpace reduced_jets;
  std::vector<double> initial;
  double h = 1e-3;
  std::size_t steps = 500;
  std::vector<SolutionFamily> solutions;
  std::string quadrature;  // printed final step, if any
};

const std::vector<BuiltinExample>& builtin_examples();
const BuiltinExample* find_example(int number);

/// The built-in example whose equation is canonically the same as `ode`.
const BuiltinExample* recognize_example(const NormalizedOde& ode);

/// Parses an equation in the given jet space, admitting the listed constants.
NormalizedOde parse_in(const std::string& text, const JetSpace& jets, const std::vector<std::string>& constants = {});

}  // namespace odelin
