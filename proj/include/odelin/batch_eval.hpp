#pragma once

// Flat register programs compiled from expression trees, evaluated one point
// at a time or over batches of points. Batch evaluation has a scalar
// reference kernel and an AVX2 kernel; both perform the same IEEE operations
// in the same order, so their results agree bit for bit.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "odelin/expr.hpp"

namespace odelin::kernels {

enum class Op : std::uint8_t { Const, Load, Add, Sub, Mul, Div, Neg, PowInt, Exp, Ln, Sin, Cos, Sqrt };

struct Instr {
  Op op;
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  long n = 0;      // PowInt exponent, Load slot
  double k = 0.0;  // Const value
};

// Fault bits reported per evaluated point.
inline constexpr std::uint8_t kFaultPole = 1;    // |denominator| < pole_tol
inline constexpr std::uint8_t kFaultDomain = 2;  // ln(<=0) or sqrt(<0)
inline constexpr std::uint8_t kFaultNonFinite = 4;

/// Instruction i writes register i (single assignment).
class Program {
 public:
  /// Throws EvalError if `e` mentions a variable not in `inputs` or is undefined.
  static Program compile(const Expr& e, std::vector<std::string> inputs);

  const std::vector<std::string>& inputs() const { return inputs_; }
  const std::vector<Instr>& code() const { return code_; }
  std::uint32_t result() const { return static_cast<std::uint32_t>(code_.size() - 1); }

 private:
  std::vector<std::string> inputs_;
  std::vector<Instr> code_;
};

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);
bool isa_available(Isa isa);
/// Best available kernel; ODELIN_ISA=scalar in the environment forces the
/// reference kernel.
Isa active_isa();

/// Single point. `fault` receives the fault bits (0 on success); the result
/// is NaN whenever a fault is raised.
double eval_point(const Program& p, std::span<const double> inputs, double pole_tol, std::uint8_t& fault);

/// Structure-of-arrays batch: input slot s of point i lives at
/// soa[s * n_points + i]. Faulted points produce NaN.
void eval_batch(const Program& p, std::span<const double> soa, std::size_t n_points, std::span<double> out,
                std::span<std::uint8_t> faults, double pole_tol, Isa isa = active_isa());

namespace detail {
void eval_batch_scalar(const Program& p, const double* soa, std::size_t n_points, double* out,
                       std::uint8_t* faults, double pole_tol);
void eval_batch_avx2(const Program& p, const double* soa, std::size_t n_points, double* out,
                     std::uint8_t* faults, double pole_tol);
}  // namespace detail

}  // namespace odelin::kernels
