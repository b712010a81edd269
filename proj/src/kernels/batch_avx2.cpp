#include <immintrin.h>

#include <cmath>
#include <limits>
#include <vector>

#include "odelin/batch_eval.hpp"
#include "unary.hpp"

namespace odelin::kernels::detail {
namespace {

constexpr std::size_t kLanes = 4;

struct alignas(32) Reg {
  __m256d v;
};

// Lane-wise fault bits kept as integers; the vector compare masks are folded
// into them after each guarded instruction.
void or_mask(__m256d mask, std::uint8_t bit, std::uint8_t* lane_faults) {
  const int bits = _mm256_movemask_pd(mask);
  for (std::size_t l = 0; l < kLanes; ++l) {
    if (bits & (1 << l)) lane_faults[l] |= bit;
  }
}

}  // namespace

void eval_batch_avx2(const Program& p, const double* soa, std::size_t n_points, double* out,
                     std::uint8_t* faults, double pole_tol) {
  const auto& code = p.code();
  std::vector<Reg> reg(code.size());
  const __m256d tol = _mm256_set1_pd(pole_tol);
  const __m256d sign = _mm256_set1_pd(-0.0);
  const __m256d one = _mm256_set1_pd(1.0);

  const std::size_t full = n_points - n_points % kLanes;
  for (std::size_t i = 0; i < full; i += kLanes) {
    std::uint8_t lane_faults[kLanes] = {0, 0, 0, 0};
    for (std::size_t j = 0; j < code.size(); ++j) {
      const Instr& in = code[j];
      __m256d r;
      switch (in.op) {
        case Op::Const: r = _mm256_set1_pd(in.k); break;
        case Op::Load: r = _mm256_loadu_pd(soa + static_cast<std::size_t>(in.n) * n_points + i); break;
        case Op::Add: r = _mm256_add_pd(reg[in.a].v, reg[in.b].v); break;
        case Op::Sub: r = _mm256_sub_pd(reg[in.a].v, reg[in.b].v); break;
        case Op::Mul: r = _mm256_mul_pd(reg[in.a].v, reg[in.b].v); break;
        case Op::Div: {
          const __m256d mag = _mm256_andnot_pd(sign, reg[in.b].v);
          or_mask(_mm256_cmp_pd(mag, tol, _CMP_NGE_UQ), kFaultPole, lane_faults);
          r = _mm256_div_pd(reg[in.a].v, reg[in.b].v);
          break;
        }
        case Op::Neg: r = _mm256_xor_pd(reg[in.a].v, sign); break;
        case Op::PowInt: {
          __m256d base = reg[in.a].v;
          __m256d acc = one;
          unsigned long k = in.n < 0 ? static_cast<unsigned long>(-in.n) : static_cast<unsigned long>(in.n);
          while (k) {
            if (k & 1UL) acc = _mm256_mul_pd(acc, base);
            base = _mm256_mul_pd(base, base);
            k >>= 1U;
          }
          if (in.n < 0) {
            const __m256d mag = _mm256_andnot_pd(sign, acc);
            or_mask(_mm256_cmp_pd(mag, tol, _CMP_NGE_UQ), kFaultPole, lane_faults);
            acc = _mm256_div_pd(one, acc);
          }
          r = acc;
          break;
        }
        default: {
          alignas(32) double lanes[kLanes];
          _mm256_store_pd(lanes, reg[in.a].v);
          for (std::size_t l = 0; l < kLanes; ++l) lanes[l] = apply_unary(in.op, lanes[l], lane_faults[l]);
          r = _mm256_load_pd(lanes);
          break;
        }
      }
      reg[j].v = r;
    }
    alignas(32) double res[kLanes];
    _mm256_store_pd(res, reg[p.result()].v);
    for (std::size_t l = 0; l < kLanes; ++l) {
      if (!std::isfinite(res[l])) lane_faults[l] |= kFaultNonFinite;
      faults[i + l] = lane_faults[l];
      out[i + l] = lane_faults[l] ? std::numeric_limits<double>::quiet_NaN() : res[l];
    }
  }
  if (full < n_points) {
    // Remainder through the reference kernel on a compacted copy.
    const std::size_t rest = n_points - full;
    const std::size_t slots = p.inputs().size();
    std::vector<double> tail(slots * rest);
    for (std::size_t s = 0; s < slots; ++s) {
      for (std::size_t l = 0; l < rest; ++l) tail[s * rest + l] = soa[s * n_points + full + l];
    }
    eval_batch_scalar(p, tail.data(), rest, out + full, faults + full, pole_tol);
  }
}

}  // namespace odelin::kernels::detail
