#include "odelin/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "odelin/batch_eval.hpp"
#include "odelin/canonical.hpp"

namespace odelin {
namespace {

using kernels::Program;

std::vector<std::string> jet_inputs(const JetSpace& jets, int count) {
  std::vector<std::string> names{jets.independent};
  for (int k = 0; k < count; ++k) names.push_back(jets.jet(k));
  return names;
}

Program compile_or_throw(const Expr& e, std::vector<std::string> inputs) {
  try {
    return Program::compile(e, std::move(inputs));
  } catch (const EvalError& err) {
    throw VerifyError(std::string("cannot evaluate ") + err.subexpression() + ": " + err.what());
  }
}

// One classical RK4 step of z^(n) = f(t, z, ..., z^(n-1)). Returns false on a
// guarded singularity in any stage.
class Rk4 {
 public:
  Rk4(const Program& f, std::size_t n) : f_(f), n_(n), buf_(n + 1), k1_(n), k2_(n), k3_(n), k4_(n), tmp_(n) {}

  bool top(double t, const std::vector<double>& z, double& out) {
    buf_[0] = t;
    std::copy(z.begin(), z.end(), buf_.begin() + 1);
    std::uint8_t fault = 0;
    out = kernels::eval_point(f_, buf_, kSingularityGuard, fault);
    return fault == 0;
  }

  bool step(double t, double h, std::vector<double>& z) {
    if (!deriv(t, z, k1_)) return false;
    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = z[i] + h / 2 * k1_[i];
    if (!deriv(t + h / 2, tmp_, k2_)) return false;
    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = z[i] + h / 2 * k2_[i];
    if (!deriv(t + h / 2, tmp_, k3_)) return false;
    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = z[i] + h * k3_[i];
    if (!deriv(t + h, tmp_, k4_)) return false;
    for (std::size_t i = 0; i < n_; ++i) z[i] = z[i] + h / 6 * (k1_[i] + 2 * k2_[i] + 2 * k3_[i] + k4_[i]);
    return true;
  }

 private:
  bool deriv(double t, const std::vector<double>& z, std::vector<double>& d) {
    for (std::size_t i = 0; i + 1 < n_; ++i) d[i] = z[i + 1];
    return top(t, z, d[n_ - 1]);
  }

  const Program& f_;
  std::size_t n_;
  std::vector<double> buf_, k1_, k2_, k3_, k4_, tmp_;
};

bool within_bound(const std::vector<double>& z) {
  return std::all_of(z.begin(), z.end(), [](double v) { return std::isfinite(v) && std::abs(v) <= kStateBound; });
}

void accumulate(ResidualStats& s, double r, double& sum) {
  s.max = std::max(s.max, r);
  sum += r;
  ++s.evaluated;
}

void close(ResidualStats& s, double sum) { s.mean = s.evaluated > 0 ? sum / static_cast<double>(s.evaluated) : 0; }

// Evaluates each program at every trajectory point; faults become NaN.
std::vector<std::vector<double>> eval_on_points(const std::vector<Program>& programs,
                                                const std::vector<std::vector<double>>& soa_rows, std::size_t n) {
  std::vector<double> soa;
  soa.reserve(soa_rows.size() * n);
  for (const auto& row : soa_rows) soa.insert(soa.end(), row.begin(), row.end());
  std::vector<std::vector<double>> out;
  std::vector<std::uint8_t> faults(n);
  for (const Program& p : programs) {
    std::vector<double> values(n);
    kernels::eval_batch(p, soa, n, values, faults, kSingularityGuard);
    for (std::size_t i = 0; i < n; ++i) {
      if (faults[i] != 0) values[i] = std::numeric_limits<double>::quiet_NaN();
    }
    out.push_back(std::move(values));
  }
  return out;
}

}  // namespace

Trajectory integrate(const NormalizedOde& ode, const std::vector<double>& initial, double x0, double h,
                     std::size_t steps) {
  if (!(h > 0)) throw VerifyError("step must be positive");
  if (initial.size() != static_cast<std::size_t>(ode.order)) {
    throw VerifyError("expected " + std::to_string(ode.order) + " initial values, got " +
                      std::to_string(initial.size()));
  }
  const Program f = compile_or_throw(ode.rhs, jet_inputs(ode.jets, ode.order));
  Rk4 rk(f, initial.size());

  Trajectory t;
  t.jets = ode.jets;
  t.order = ode.order;
  t.h = h;
  t.requested_steps = steps;

  std::vector<double> z = initial;
  double top = 0;
  if (!rk.top(x0, z, top)) throw VerifyError("the initial point is singular");
  auto record = [&](double x) {
    t.grid.push_back(x);
    std::vector<double> v = z;
    v.push_back(top);
    t.values.push_back(std::move(v));
  };
  record(x0);

  for (std::size_t i = 1; i <= steps; ++i) {
    const double x = t.grid.back();
    if (!rk.step(x, h, z)) {
      t.halted = true;
      t.halt_reason = "singularity guard tripped after " + std::to_string(i - 1) + " steps";
      break;
    }
    const double next = x0 + static_cast<double>(i) * h;
    if (!within_bound(z) || !rk.top(next, z, top) || !std::isfinite(top)) {
      t.halted = true;
      t.halt_reason = "state left the admissible region after " + std::to_string(i - 1) + " steps";
      break;
    }
    record(next);
  }
  return t;
}

ReductionResidual reduction_residual(const ReductionTrace& trace, const Trajectory& source) {
  const NormalizedOde& red = trace.reduced;
  const std::size_t n = source.grid.size();
  const std::size_t m = static_cast<std::size_t>(red.order);

  // Source values as structure of arrays: x, y, y', ..., y^(order).
  std::vector<std::vector<double>> rows(source.order + 2, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    rows[0][i] = source.grid[i];
    for (int k = 0; k <= source.order; ++k) rows[k + 1][i] = source.values[i][k];
  }
  const std::vector<std::string> src_inputs = jet_inputs(source.jets, source.order + 1);
  std::vector<Program> maps{compile_or_throw(trace.new_independent, src_inputs)};
  for (const Expr& e : trace.inverse) maps.push_back(compile_or_throw(e, src_inputs));
  const auto mapped = eval_on_points(maps, rows, n);
  const std::vector<double>& s = mapped[0];
  auto U = [&](std::size_t k, std::size_t i) { return mapped[k + 1][i]; };

  ReductionResidual out;

  // Consistency: u^(m) from the map against the reduced right-hand side.
  const Program f_red = compile_or_throw(red.rhs, jet_inputs(red.jets, red.order));
  {
    std::vector<std::vector<double>> red_rows{s};
    for (std::size_t k = 0; k < m; ++k) red_rows.push_back(mapped[k + 1]);
    const auto f_vals = eval_on_points({f_red}, red_rows, n)[0];
    double sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double top = U(m, i);
      const double r = std::abs(top - f_vals[i]) / (1 + std::abs(top));
      if (std::isfinite(r)) {
        accumulate(out.consistency, r, sum);
      } else {
        ++out.consistency.skipped;
      }
    }
    close(out.consistency, sum);
  }

  // Shadow: integrate the reduced equation along the mapped grid.
  const bool same_grid = structurally_equal(trace.new_independent, source.jets.independent_expr());
  Rk4 rk(f_red, m);
  std::vector<double> z(m);
  for (std::size_t k = 0; k < m; ++k) z[k] = U(k, 0);
  bool alive = n > 0 && std::all_of(z.begin(), z.end(), [](double v) { return std::isfinite(v); });
  double sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (alive && i > 0) {
      const double step = same_grid ? source.h : s[i] - s[i - 1];
      alive = std::isfinite(step) && rk.step(s[i - 1], step, z) && within_bound(z);
    }
    double dev = 0;
    bool ok = alive;
    for (std::size_t k = 0; ok && k < m; ++k) {
      const double target = U(k, i);
      if (!std::isfinite(target)) ok = false;
      dev = std::max(dev, std::abs(z[k] - target));
    }
    if (ok) {
      accumulate(out.shadow, dev, sum);
    } else {
      ++out.shadow.skipped;
    }
  }
  close(out.shadow, sum);
  return out;
}

ResidualStats solution_residual(const NormalizedOde& ode, const SolutionCandidate& candidate,
                                const SolutionOptions& opts) {
  const JetSpace& j = ode.jets;
  const bool implicit = candidate.kind == SolutionCandidate::Kind::Implicit;
  const std::string abscissa = implicit ? j.jet(0) : j.independent;
  for (SymbolId v : free_variables(candidate.g)) {
    const std::string& name = symbol_name(v);
    if (name != abscissa &&
        std::find(candidate.constants.begin(), candidate.constants.end(), name) == candidate.constants.end()) {
      throw VerifyError("candidate mentions unknown symbol '" + name + "'");
    }
  }

  // Jets of the candidate as functions of the abscissa.
  std::vector<Expr> d(ode.order + 1);
  Bindings bind;
  if (implicit) {
    const Expr yp = Expr(1) / diff(candidate.g, abscissa);
    d[0] = Expr::variable(abscissa);
    d[1] = yp;
    for (int k = 1; k < ode.order; ++k) d[k + 1] = yp * diff(d[k], abscissa);
    bind.emplace_back(j.independent, candidate.g);
    for (int k = 1; k < ode.order; ++k) bind.emplace_back(j.jet(k), d[k]);
  } else {
    d[0] = candidate.g;
    for (int k = 1; k <= ode.order; ++k) d[k] = diff(d[k - 1], abscissa);
    for (int k = 0; k < ode.order; ++k) bind.emplace_back(j.jet(k), d[k]);
  }
  const Expr rhs = substitute(ode.rhs, bind);

  std::vector<std::string> inputs{abscissa};
  inputs.insert(inputs.end(), candidate.constants.begin(), candidate.constants.end());
  const std::vector<Program> programs{compile_or_throw(d[ode.order], inputs), compile_or_throw(rhs, inputs)};

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> constant(-1.0, 1.0);
  std::uniform_real_distribution<double> point(opts.lo, opts.hi);
  const std::size_t n = static_cast<std::size_t>(opts.constant_samples) * static_cast<std::size_t>(opts.abscissae);
  std::vector<std::vector<double>> rows(inputs.size(), std::vector<double>(n));
  std::size_t i = 0;
  for (int sample = 0; sample < opts.constant_samples; ++sample) {
    std::vector<double> c(candidate.constants.size());
    for (double& v : c) v = constant(rng);
    for (int a = 0; a < opts.abscissae; ++a, ++i) {
      rows[0][i] = point(rng);
      for (std::size_t k = 0; k < c.size(); ++k) rows[k + 1][i] = c[k];
    }
  }
  const auto vals = eval_on_points(programs, rows, n);

  ResidualStats stats;
  double sum = 0;
  for (std::size_t p = 0; p < n; ++p) {
    const double top = vals[0][p];
    const double r = std::abs(top - vals[1][p]) / (1 + std::abs(top));
    if (std::isfinite(r)) {
      accumulate(stats, r, sum);
    } else {
      ++stats.skipped;
    }
  }
  close(stats, sum);
  return stats;
}

}  // namespace odelin
