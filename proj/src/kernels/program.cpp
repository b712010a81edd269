#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "odelin/batch_eval.hpp"

namespace odelin::kernels {
namespace {

class Compiler {
 public:
  explicit Compiler(const std::vector<std::string>& inputs) : inputs_(inputs) {}

  std::uint32_t emit(const Expr& e) {
    switch (e.kind()) {
      case ExprKind::Constant: return push({Op::Const, 0, 0, 0, e.value().get_d()});
      case ExprKind::Undefined: throw EvalError("cannot compile an undefined expression", e.str());
      case ExprKind::Variable: {
        auto it = std::find(inputs_.begin(), inputs_.end(), e.name());
        if (it == inputs_.end()) throw EvalError("unbound variable '" + e.name() + "'", e.str());
        return push({Op::Load, 0, 0, static_cast<long>(it - inputs_.begin()), 0.0});
      }
      case ExprKind::Sum:
      case ExprKind::Product: {
        const Op op = e.kind() == ExprKind::Sum ? Op::Add : Op::Mul;
        std::uint32_t acc = emit(e.args()[0]);
        for (std::size_t i = 1; i < e.args().size(); ++i) {
          std::uint32_t rhs = emit(e.args()[i]);
          acc = push({op, acc, rhs});
        }
        return acc;
      }
      case ExprKind::Quotient: {
        std::uint32_t a = emit(e.args()[0]);
        std::uint32_t b = emit(e.args()[1]);
        return push({Op::Div, a, b});
      }
      case ExprKind::Power: {
        std::uint32_t a = emit(e.args()[0]);
        return push({Op::PowInt, a, 0, e.exponent()});
      }
      case ExprKind::Function: {
        std::uint32_t a = emit(e.args()[0]);
        Op op = Op::Exp;
        switch (e.func()) {
          case Func::Exp: op = Op::Exp; break;
          case Func::Ln: op = Op::Ln; break;
          case Func::Sin: op = Op::Sin; break;
          case Func::Cos: op = Op::Cos; break;
          case Func::Sqrt: op = Op::Sqrt; break;
        }
        return push({op, a});
      }
    }
    return 0;
  }

  std::vector<Instr> take() { return std::move(code_); }

 private:
  std::uint32_t push(Instr i) {
    code_.push_back(i);
    return static_cast<std::uint32_t>(code_.size() - 1);
  }

  const std::vector<std::string>& inputs_;
  std::vector<Instr> code_;
};

}  // namespace

Program Program::compile(const Expr& e, std::vector<std::string> inputs) {
  Program p;
  p.inputs_ = std::move(inputs);
  Compiler c(p.inputs_);
  c.emit(e);
  p.code_ = c.take();
  return p;
}

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool isa_available(Isa isa) {
  if (isa == Isa::Scalar) return true;
#if defined(ODELIN_HAVE_AVX2)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa active_isa() {
  static const Isa isa = [] {
    const char* forced = std::getenv("ODELIN_ISA");
    if (forced != nullptr && std::strcmp(forced, "scalar") == 0) return Isa::Scalar;
    return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
  }();
  return isa;
}

void eval_batch(const Program& p, std::span<const double> soa, std::size_t n_points, std::span<double> out,
                std::span<std::uint8_t> faults, double pole_tol, Isa isa) {
  if (soa.size() < p.inputs().size() * n_points || out.size() < n_points || faults.size() < n_points) {
    throw std::invalid_argument("eval_batch: buffer sizes do not match the point count");
  }
  if (isa == Isa::Avx2 && !isa_available(Isa::Avx2)) isa = Isa::Scalar;
#if defined(ODELIN_HAVE_AVX2)
  if (isa == Isa::Avx2) {
    detail::eval_batch_avx2(p, soa.data(), n_points, out.data(), faults.data(), pole_tol);
    return;
  }
#endif
  detail::eval_batch_scalar(p, soa.data(), n_points, out.data(), faults.data(), pole_tol);
}

}  // namespace odelin::kernels
