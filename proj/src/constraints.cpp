#include "odelin/constraints.hpp"

namespace odelin {
namespace {

// Partial derivatives by position in the variable pair: d(e, 1) is the
// derivative in vars.first, d(e, 2, 2) the second derivative in vars.second.
class Partials {
 public:
  explicit Partials(const VarPair& vars) : first_(intern_variable(vars.first)), second_(intern_variable(vars.second)) {}

  Expr operator()(const Expr& e, int a) const { return diff(e, pick(a)); }
  Expr operator()(const Expr& e, int a, int b) const { return diff(diff(e, pick(a)), pick(b)); }

 private:
  SymbolId pick(int i) const { return i == 1 ? first_ : second_; }
  SymbolId first_;
  SymbolId second_;
};

Expr q(long n, long d) { return Expr::rational(n, d); }

void add(ConstraintReport& r, std::string id, const Expr& lhs, std::string provenance, const ZeroTestOptions& opts) {
  Condition c;
  c.id = std::move(id);
  c.residual = canonicalize(lhs);
  c.verdict = is_zero(c.residual, opts);
  c.provenance = std::move(provenance);
  r.conditions.push_back(std::move(c));
}

void finalize(ConstraintReport& r) {
  bool fail = false;
  bool unknown = false;
  for (const Condition& c : r.conditions) {
    if (c.verdict.kind == ZeroVerdict::Kind::NonZero) fail = true;
    if (c.verdict.kind == ZeroVerdict::Kind::Indeterminate) unknown = true;
  }
  r.overall = fail ? Verdict::Fail : unknown ? Verdict::Indeterminate : Verdict::Pass;
}

}  // namespace

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "Pass";
    case Verdict::Fail: return "Fail";
    case Verdict::Indeterminate: return "Indeterminate";
    case Verdict::Unsupported: return "Unsupported";
  }
  return "?";
}

ConstraintReport tresse_conditions(const Cubic2& c, const VarPair& vars, const ZeroTestOptions& opts) {
  const Partials d(vars);
  const Expr &a1 = c.a1, &a2 = c.a2, &a3 = c.a3, &a4 = c.a4;
  ConstraintReport r;
  r.form = FormId::LieCubic2;
  const std::string prov = "Tresse conditions for the cubic second-order form in (" + vars.first + ", " +
                           vars.second + ")";
  add(r, "tresse-1",
      Expr(3) * d(a1 * a3, 1) - Expr(3) * a4 * d(a1, 2) - Expr(6) * a1 * d(a4, 2) - Expr(2) * a2 * d(a2, 1) +
          a2 * d(a3, 2) - Expr(3) * d(a1, 1, 1) + Expr(2) * d(a2, 1, 2) - d(a3, 2, 2),
      prov, opts);
  add(r, "tresse-2",
      Expr(3) * d(a4 * a2, 2) - Expr(3) * a1 * d(a4, 1) - Expr(6) * a4 * d(a1, 1) - Expr(2) * a3 * d(a3, 2) +
          a3 * d(a2, 1) + Expr(3) * d(a4, 2, 2) - Expr(2) * d(a3, 1, 2) + d(a2, 1, 1),
      prov, opts);
  finalize(r);
  return r;
}

ConstraintReport type1_conditions(const ThirdTypeI& c, const VarPair& vars, FormId form,
                                  const ZeroTestOptions& opts) {
  const Partials d(vars);
  const Expr &a0 = c.a0, &a1 = c.a1, &b0 = c.b0, &b1 = c.b1, &b2 = c.b2, &b3 = c.b3;
  ConstraintReport r;
  r.form = form;
  const std::string prov = "Type I third-order conditions in (" + vars.first + ", " + vars.second + ")";
  add(r, "im1-1", d(a0, 2) - d(a1, 1), prov, opts);
  add(r, "im1-2", d(Expr(3) * b1 - pow(a0, 2) - Expr(3) * d(a0, 1), 2), prov, opts);
  add(r, "im1-3", Expr(3) * d(a1, 1) + a0 * a1 - Expr(3) * b2, prov, opts);
  add(r, "im1-4", Expr(3) * d(a1, 2) + pow(a1, 2) - Expr(9) * b3, prov, opts);
  add(r, "im1-5",
      (Expr(9) * b1 - Expr(6) * d(a0, 1) - Expr(2) * pow(a0, 2)) * d(a1, 1) + Expr(9) * d(d(b1, 1) - a1 * b0, 2) +
          Expr(3) * d(b1, 2) * a0 - Expr(27) * d(b0, 2, 2),
      prov, opts);
  finalize(r);
  return r;
}

ConstraintReport thm1_conditions(const FourthXTypeI& c, const VarPair& vars, const ZeroTestOptions& opts) {
  const Partials d(vars);  // 1: y, 2: y'
  const Expr &A0 = c.A0, &A1 = c.A1, &B0 = c.B0, &B1 = c.B1, &B2 = c.B2, &B3 = c.B3;
  const Expr P = Expr::variable(vars.second);
  ConstraintReport r;
  r.form = FormId::Thm1FourthX;
  const std::string prov = "x-free fourth-order Type I conditions";
  add(r, "thm1-1", pow(P, 2) * d(A1, 1) - P * d(A0, 2) + A0, prov, opts);
  add(r, "thm1-2",
      pow(P, 2) * (Expr(-3) * d(A0, 1, 2)) + P * (Expr(3) * d(B1, 2) + Expr(3) * d(A0, 1) - Expr(2) * A0 * d(A0, 2)) +
          (Expr(-6) * B1 + Expr(2) * pow(A0, 2)),
      prov, opts);
  add(r, "thm1-3", pow(P, 2) * (Expr(3) * d(A1, 1)) + P * (A0 * A1 - Expr(3) * B2) + A0, prov, opts);
  add(r, "thm1-4", pow(P, 2) * (Expr(3) * d(A1, 2) - Expr(9) * B3 + pow(A1, 2)) - P * A1 - Expr(5), prov, opts);
  add(r, "thm1-5",
      pow(P, 4) * (Expr(-6) * d(A0, 1) * d(A1, 1)) +
          pow(P, 3) * (Expr(9) * B1 * d(A1, 1) - Expr(2) * pow(A0, 2) * d(A1, 1) + Expr(9) * d(B1, 1, 2)) +
          pow(P, 2) * (Expr(-18) * d(B1, 1) - Expr(9) * A1 * d(B0, 2) - Expr(9) * B0 * d(A1, 2) +
                       Expr(3) * A0 * d(B1, 2) - Expr(27) * d(B0, 2, 2)) +
          P * (Expr(27) * A1 * B0 - Expr(6) * A0 * B1 + Expr(126) * d(B0, 2)) - Expr(180) * B0,
      prov, opts);
  finalize(r);
  return r;
}

Expr compute_H(const FourthXTypeII& c, const VarPair& vars) {
  const Partials d(vars);  // 1: y, 2: y'
  const Expr &r0 = c.r0, &C1 = c.C1, &C2 = c.C2, &D4 = c.D[4], &D5 = c.D[5];
  const Expr P = Expr::variable(vars.second);
  Expr H = (d(D4, 2) + q(1, 3) * d(C2, 2, 2) + q(2, 3) * C2 * d(C2, 2) + q(2, 3) * C2 * D4 + q(4, 27) * pow(C2, 3)) +
           (q(-4, 3) * d(C2, 2) + q(2, 3) * pow(C2, 2) - q(4, 3) * D4 - q(8, 9) * pow(C2, 2)) / P +
           (q(-5, 9) * C2) / pow(P, 2) + q(40, 27) / pow(P, 3) +
           (Expr(-2) * d(D5, 1) - q(2, 3) * C1 * D5) / pow(P, 5) +
           (Expr(-3) * r0 * d(D5, 2) - Expr(5) * D5 * d(r0, 2) - Expr(2) * r0 * C2 * D5 - q(8, 3) * r0 * D5) /
               pow(P, 6) +
           (Expr(24) * r0 * D5) / pow(P, 7);
  return canonicalize(H);
}

ConstraintReport thm2_conditions(const FourthXTypeII& c, const VarPair& vars, const ZeroTestOptions& opts) {
  const Partials d(vars);  // 1: y, 2: y'
  const Expr &r = c.r0, &C0 = c.C0, &C1 = c.C1, &C2 = c.C2;
  const Expr &D1 = c.D[1], &D2 = c.D[2], &D3 = c.D[3], &D4 = c.D[4], &D5 = c.D[5];
  const Expr P = Expr::variable(vars.second);
  const Expr ry = d(r, 1), rp = d(r, 2), ryy = d(r, 1, 1), ryp = d(r, 1, 2), rpp = d(r, 2, 2);
  auto P_ = [&](long k) { return pow(P, k); };
  auto n = [](long v) { return Expr(v); };

  ConstraintReport rep;
  rep.form = FormId::Thm2FourthX;
  const std::string prov = "x-free fourth-order Type II conditions";

  add(rep, "c1",
      (r * C1 - n(6) * ry) * P_(2) + (n(6) * r * rp + n(4) * pow(r, 2) - pow(r, 2) * C2 - C0) * P - n(4) * pow(r, 2),
      prov, opts);

  add(rep, "c2",
      (d(C2, 1) - d(C1, 2)) * P_(3) + (r * d(C2, 2) + C2 * rp - n(4) * rp - n(6) * rpp) * P_(2) +
          (n(10) * rp + n(4) * r - C2 * r) * P - n(8) * r,
      prov, opts);

  add(rep, "c3",
      (n(-6) * pow(r, 2) * d(C1, 1) - n(54) * pow(ry, 2) + n(18) * r * ryy + n(18) * r * ry * C1 -
       n(2) * pow(r, 2) * pow(C1, 2)) * P_(8) +
          (n(3) * pow(r, 3) * d(C1, 2) + n(48) * pow(r, 2) * ry - n(3) * pow(r, 3) * d(C2, 1) -
           n(36) * pow(r, 2) * ryp - n(6) * pow(r, 2) * ry * C2 - n(18) * pow(r, 2) * rp * C1 +
           n(2) * pow(r, 3) * C1 * C2 - n(16) * pow(r, 3) * C1) * P_(7) +
          (n(-60) * pow(r, 3) * rp + n(9) * pow(r, 4) * d(C2, 2) - n(42) * pow(r, 2) * ry -
           n(36) * pow(r, 2) * pow(rp, 2) + n(9) * pow(r, 3) * rp * C2 + n(14) * pow(r, 3) * C1 - n(32) * pow(r, 4) +
           n(8) * pow(r, 4) * C2 + n(4) * pow(r, 4) * pow(C2, 2) + n(18) * pow(r, 4) * D4) * P_(6) +
          (n(44) * pow(r, 4) + n(72) * pow(r, 2) * rp - n(18) * pow(r, 3) * rp - n(7) * pow(r, 4) * C2) * P_(5) +
          (n(-20) * pow(r, 4)) * P_(4) - n(72) * pow(r, 5) * D5,
      prov, opts);

  add(rep, "c4",
      (n(-12) * r * d(C1, 1) + n(18) * ryp + n(18) * ry * C1 - n(4) * r * pow(C1, 2)) * P_(8) +
          (n(9) * pow(r, 2) * d(C1, 2) - n(48) * r * ry - n(27) * pow(r, 2) * d(C2, 1) - n(36) * r * ryp -
           n(18) * ry + n(72) * r * ry + n(24) * r * ry * C2 - n(18) * r * rp * C1 - n(18) * r * rp -
           n(32) * pow(r, 2) * C1 - n(2) * pow(r, 2) * C1 * C2) * P_(7) +
          (n(-18) * D1 - n(36) * pow(r, 2) * rp + n(33) * pow(r, 3) * d(C2, 2) + n(6) * r * ry +
           n(18) * pow(r, 2) * C1 - n(21) * pow(r, 2) * rp * C2 + n(18) * r * pow(rp, 2) - n(64) * pow(r, 3) +
           n(4) * pow(r, 2) * C1 - n(8) * pow(r, 3) * C2 + n(20) * pow(r, 3) * pow(C2, 2) +
           n(72) * pow(r, 3) * D4) * P_(6) +
          (n(52) * pow(r, 3) + n(6) * pow(r, 2) * rp + n(13) * pow(r, 3) * C2) * P_(5) +
          (n(-22) * pow(r, 3)) * P_(4) - n(270) * pow(r, 4) * D5,
      prov, opts);

  add(rep, "c5",
      (n(-3) * d(C1, 1) - pow(C1, 2)) * P_(8) +
          (n(3) * r * d(C1, 2) - n(12) * ry - n(21) * r * d(C2, 1) - n(8) * r * C1 + n(15) * ry * C2 -
           n(5) * r * C1 * C2) * P_(7) +
          (n(-9) * D2 + n(12) * r * rp + n(21) * pow(r, 2) * d(C2, 2) - n(30) * ry - n(15) * r * rp * C2 +
           n(10) * r * C1 - n(20) * pow(r, 2) * C2 + n(14) * pow(r, 2) * pow(C2, 2) + n(54) * pow(r, 2) * D4 -
           n(16) * pow(r, 2)) * P_(6) +
          (n(-9) * C0 + n(28) * pow(r, 2) + n(30) * r * rp + n(13) * pow(r, 2) * C2) * P_(5) +
          (n(-40) * pow(r, 2)) * P_(4) - n(180) * pow(r, 3) * D5,
      prov, opts);

  add(rep, "c6",
      (n(-3) * d(C2, 1) - C1 * C2) * P_(7) +
          (n(-3) * D3 + n(4) * C1 + n(3) * r * d(C2, 2) - n(4) * r * C2 + n(2) * r * pow(C2, 2) + n(12) * r * D4) *
              P_(6) +
          (n(-4) * r + n(4) * r * C2) * P_(5) + (-r) * P_(4) - n(30) * pow(r, 2) * D5,
      prov, opts);

  add(rep, "c7",
      (n(-54) * d(D4, 1) + n(18) * d(C1, 2, 2) + n(3) * C2 * d(C1, 2) - n(72) * d(C2, 1, 2) -
       n(39) * C2 * d(C2, 1)) * P_(8) +
          (n(24) * d(C2, 1) + n(72) * rpp + n(12) * C2 * rp - n(6) * d(C1, 2) + n(36) * r * d(C2, 2, 2) -
           n(3) * r * C2 * d(C2, 2) + n(72) * rp * d(C2, 2) + n(33) * pow(C2, 2) * rp + n(108) * D4 * rp +
           n(54) * r * d(D4, 2) + n(36) * r * pow(C2, 2) + n(18) * r * d(C2, 2, 2)) * P_(7) +
          (n(-168) * rp - n(12) * r * C2 - n(138) * r * d(C2, 2) - n(24) * C2 * rp - n(33) * r * pow(C2, 2) -
           n(36) * r * D4) * P_(6) +
          (n(168) * r - n(228) * r * C2 + n(60) * rp) * P_(5) + (n(-120) * r) * P_(4) +
          (n(270) * D5 * ry + n(270) * r * d(D5, 1)) * P_(2) + (n(54) * pow(r, 2) * d(D5, 2) - n(810) * r * rp * D5) * P +
          n(2160) * pow(r, 2) * D5,
      prov, opts);

  const Expr H = compute_H(c, vars);
  add(rep, "c8", (-d(H, 1)) * P_(2) + (n(3) * H * rp + r * d(H, 2)) * P - n(3) * H * r, prov, opts);
  rep.H = H;

  rep.notes = {
      "ambiguous printed tokens, read as: r_{oyy} = d2 r0/dy2 and r_{oy'} = d r0/dy' in c3; "
      "r_{oyy'} = d2 r0/dy dy', r_{oy'} = d r0/dy' and c_2 = C2 in c4; d_2 = D2 and r_{oy} = d r0/dy in c5; "
      "33C_2^2r_{0y') = 33 C2^2 d r0/dy' and d_{4y'} = d D4/dy' in c7; r_0H_y' = r0 dH/dy' in c8",
      "these readings are low-confidence: coefficient sets with r0 = C1 = D1 = ... = D4 = 0 cannot "
      "discriminate between them",
  };
  finalize(rep);
  return rep;
}

ConstraintReport thm3_conditions(const FourthXY& c, const VarPair& vars, const ZeroTestOptions& opts) {
  const Partials d(vars);  // 1: y', 2: y''
  const Expr &a = c.a, &b = c.b, &cc = c.c, &dd = c.d;
  const Expr Q = Expr::variable(vars.second);
  auto n = [](long v) { return Expr(v); };
  ConstraintReport r;
  r.form = FormId::Thm3FourthXY;
  const std::string prov = "x,y-free fourth-order conditions, evaluated exactly as printed";
  add(r, "thm3-1",
      (n(3) * d(a, 1, 1)) * pow(Q, 4) +
          (n(2) * b * d(b, 1) - n(3) * cc * d(a, 1) - n(3) * a * d(cc, 1) - n(2) * d(b, 1, 2)) * pow(Q, 3) +
          (n(2) * d(b, 1) - b * d(cc, 2) + n(3) * d(a, 2) * dd + n(6) * a * d(dd, 2) - d(cc, 2, 2)) * pow(Q, 2) +
          (b * cc - n(9) * a * dd - n(3) * d(cc, 2)) * Q - cc,
      prov, opts);
  add(r, "thm3-2",
      d(b, 1, 1) * pow(Q, 4) +
          (d(b, 1) * cc + n(3) * d(dd, 2) * b - n(3) * d(dd, 1) * a - n(6) * d(a, 1) * dd - n(2) * d(cc, 1, 2)) *
              pow(Q, 3) +
          (d(cc, 1) + n(3) * d(dd, 2) - n(6) * b * dd + n(3) * d(b, 2) * dd - n(2) * cc * d(cc, 2) +
           n(3) * d(dd, 2, 2)) * pow(Q, 2) +
          (n(2) * pow(cc, 2) - n(6) * dd - n(12) * d(dd, 2)) * Q + n(15) * dd,
      prov, opts);
  r.notes = {"the leading factor (by'y') of the second condition is read as d2 b/dy'2"};
  finalize(r);
  return r;
}

ConstraintReport evaluate_constraints(const MatchedForm& m, const ZeroTestOptions& opts) {
  switch (m.form) {
    case FormId::LieCubic2: return tresse_conditions(std::get<Cubic2>(m.coeffs), m.vars, opts);
    case FormId::ImType1Third:
    case FormId::Type1FourthY: return type1_conditions(std::get<ThirdTypeI>(m.coeffs), m.vars, m.form, opts);
    case FormId::Thm1FourthX: return thm1_conditions(std::get<FourthXTypeI>(m.coeffs), m.vars, opts);
    case FormId::Thm2FourthX: return thm2_conditions(std::get<FourthXTypeII>(m.coeffs), m.vars, opts);
    case FormId::Thm3FourthXY: return thm3_conditions(std::get<FourthXY>(m.coeffs), m.vars, opts);
    case FormId::SwapRemark: {
      ConstraintReport r;
      r.form = m.form;
      r.overall = Verdict::Pass;
      r.notes = {"f is linear in " + m.jets.independent + " by construction of the match; no further conditions"};
      return r;
    }
    case FormId::ImType2Third:
    case FormId::Type2FourthYFormOnly: {
      ConstraintReport r;
      r.form = m.form;
      r.overall = Verdict::Unsupported;
      r.notes = {"the Type II third-order constraint system is not available; form match only"};
      return r;
    }
  }
  return {};
}

}  // namespace odelin
