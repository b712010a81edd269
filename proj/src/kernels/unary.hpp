#pragma once

#include <cmath>
#include <cstdint>

#include "odelin/batch_eval.hpp"

namespace odelin::kernels::detail {

// Shared by every kernel so transcendental lanes match bit for bit.
inline double apply_unary(Op op, double a, std::uint8_t& fault) {
  switch (op) {
    case Op::Exp: return std::exp(a);
    case Op::Ln:
      if (!(a > 0)) fault |= kFaultDomain;
      return std::log(a);
    case Op::Sin: return std::sin(a);
    case Op::Cos: return std::cos(a);
    case Op::Sqrt:
      if (a < 0) fault |= kFaultDomain;
      return std::sqrt(a);
    default: return a;
  }
}

}  // namespace odelin::kernels::detail
