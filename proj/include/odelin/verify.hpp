#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "odelin/ode.hpp"
#include "odelin/reduction.hpp"

namespace odelin {

class VerifyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kSingularityGuard = 1e-6;
inline constexpr double kStateBound = 1e8;

struct Trajectory {
  JetSpace jets;
  int order = 0;
  double h = 0;
  std::vector<double> grid;
  /// values[i] holds y, y', ..., y^(order) at grid[i]; the last entry is
  /// recomputed from the right-hand side.
  std::vector<std::vector<double>> values;
  std::size_t requested_steps = 0;
  bool halted = false;
  std::string halt_reason;
};

/// Classical fourth-order Runge-Kutta on the first-order companion system.
/// Halts early when a denominator drops below the guard or the state leaves
/// the bound. Throws VerifyError if the initial point is already singular.
Trajectory integrate(const NormalizedOde& ode, const std::vector<double>& initial, double x0, double h,
                     std::size_t steps);

struct ResidualStats {
  double max = 0;
  double mean = 0;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;

  bool indeterminate() const { return evaluated == 0; }
};

struct ReductionResidual {
  /// Largest deviation between the mapped source trajectory and an
  /// independent integration of the reduced equation along the mapped grid.
  ResidualStats shadow;
  /// Pointwise top-derivative-minus-right-hand-side of the reduced equation
  /// on the mapped states.
  ResidualStats consistency;
};

ReductionResidual reduction_residual(const ReductionTrace& trace, const Trajectory& source);

struct SolutionCandidate {
  enum class Kind { Explicit, Implicit };
  Kind kind = Kind::Explicit;  // Explicit: y = g(x, c); Implicit: x = g(y, c)
  Expr g;
  std::vector<std::string> constants;
};

struct SolutionOptions {
  int constant_samples = 16;
  int abscissae = 8;
  double lo = 0.5;
  double hi = 1.5;
  std::uint64_t seed = 0;
};

/// Scaled residual |y^(n) - f| / (1 + |y^(n)|) of the candidate at
/// constant_samples x abscissae points. Throws VerifyError when the candidate
/// mentions a symbol that is neither a constant nor the abscissa.
ResidualStats solution_residual(const NormalizedOde& ode, const SolutionCandidate& candidate,
                                const SolutionOptions& opts = {});

}  // namespace odelin
