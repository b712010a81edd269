#include <cmath>
#include <limits>
#include <vector>

#include "odelin/batch_eval.hpp"
#include "unary.hpp"

namespace odelin::kernels {
namespace {

double run(const Program& p, const double* inputs, std::size_t stride, double pole_tol, std::vector<double>& reg,
           std::uint8_t& fault) {
  const auto& code = p.code();
  reg.resize(code.size());
  fault = 0;
  for (std::size_t i = 0; i < code.size(); ++i) {
    const Instr& in = code[i];
    double r = 0;
    switch (in.op) {
      case Op::Const: r = in.k; break;
      case Op::Load: r = inputs[static_cast<std::size_t>(in.n) * stride]; break;
      case Op::Add: r = reg[in.a] + reg[in.b]; break;
      case Op::Sub: r = reg[in.a] - reg[in.b]; break;
      case Op::Mul: r = reg[in.a] * reg[in.b]; break;
      case Op::Div:
        if (!(std::abs(reg[in.b]) >= pole_tol)) fault |= kFaultPole;
        r = reg[in.a] / reg[in.b];
        break;
      case Op::Neg: r = -reg[in.a]; break;
      case Op::PowInt: {
        double base = reg[in.a];
        double acc = 1.0;
        unsigned long k = in.n < 0 ? static_cast<unsigned long>(-in.n) : static_cast<unsigned long>(in.n);
        while (k) {
          if (k & 1UL) acc *= base;
          base *= base;
          k >>= 1U;
        }
        if (in.n < 0) {
          if (!(std::abs(acc) >= pole_tol)) fault |= kFaultPole;
          acc = 1.0 / acc;
        }
        r = acc;
        break;
      }
      default: r = detail::apply_unary(in.op, reg[in.a], fault); break;
    }
    reg[i] = r;
  }
  double r = reg[p.result()];
  if (!std::isfinite(r)) fault |= kFaultNonFinite;
  return fault ? std::numeric_limits<double>::quiet_NaN() : r;
}

}  // namespace

double eval_point(const Program& p, std::span<const double> inputs, double pole_tol, std::uint8_t& fault) {
  thread_local std::vector<double> reg;
  return run(p, inputs.data(), 1, pole_tol, reg, fault);
}

namespace detail {

void eval_batch_scalar(const Program& p, const double* soa, std::size_t n_points, double* out,
                       std::uint8_t* faults, double pole_tol) {
  std::vector<double> reg;
  for (std::size_t i = 0; i < n_points; ++i) out[i] = run(p, soa + i, n_points, pole_tol, reg, faults[i]);
}

}  // namespace detail
}  // namespace odelin::kernels
