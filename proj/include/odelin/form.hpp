#pragma once

// Normal forms that an ODE solved for its top derivative may take, and the
// extraction of their coefficient functions.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "odelin/expr.hpp"
#include "odelin/ode.hpp"

namespace odelin {

enum class FormId {
  LieCubic2,             // y'' + a1 y'^3 - a2 y'^2 + a3 y' - a4 = 0, coefficients in (x, y)
  ImType1Third,          // y''' + (a1 y' + a0) y'' + b3 y'^3 + ... + b0 = 0, in (x, y)
  ImType2Third,          // y''' + [-3 y''^2 + (c2 y'^2 + c1 y' + c0) y'' + d5 y'^5 + ... + d0]/(y' + r) = 0
  Thm1FourthX,           // y'''' + (A1 y'' + A0) y''' + B3 y''^3 + ... + B0 = 0, in (y, y')
  Thm2FourthX,           // y'''' + [-3 y'''^2 + ... + D0]/(y'' + r0) = 0, in (y, y')
  Thm3FourthXY,          // y'''' + a y'''^3 + b y'''^2 + c y''' + d = 0, in (y', y'')
  Type1FourthY,          // Type I shape one order up, in (x, y')
  Type2FourthYFormOnly,  // Type II shape one order up, in (x, y'); no constraint system
  SwapRemark,            // y'''' = -f(x,y) y'^5 + 10 y'' y'''/y' - 15 y''^3/y'^2, f linear in x
};

inline constexpr std::array<FormId, 9> kAllForms = {
    FormId::LieCubic2,    FormId::ImType1Third,   FormId::ImType2Third,
    FormId::Thm1FourthX,  FormId::Thm2FourthX,    FormId::Thm3FourthXY,
    FormId::Type1FourthY, FormId::Type2FourthYFormOnly, FormId::SwapRemark,
};

std::string_view form_name(FormId f);
std::optional<FormId> form_from_name(std::string_view name);
int form_order(FormId f);

struct Cubic2 {
  Expr a1, a2, a3, a4;
};
struct ThirdTypeI {
  Expr a0, a1, b0, b1, b2, b3;
};
struct ThirdTypeII {
  Expr r, c0, c1, c2;
  std::array<Expr, 6> d;  // d[k] multiplies p^k
};
struct FourthXTypeI {
  Expr A0, A1, B0, B1, B2, B3;
};
struct FourthXTypeII {
  Expr r0, C0, C1, C2;
  std::array<Expr, 6> D;
};
struct FourthXY {
  Expr a, b, c, d;
};
struct SwapForm {
  Expr f;
};

using CoeffSet = std::variant<Cubic2, ThirdTypeI, ThirdTypeII, FourthXTypeI, FourthXTypeII, FourthXY, SwapForm>;

/// Empty (all-zero) coefficient set of the variant a form uses.
CoeffSet empty_coeffs(FormId f);

/// Coefficient names in a fixed order, with references into `c`.
std::vector<std::pair<std::string, Expr*>> coefficient_slots(CoeffSet& c);
std::vector<std::pair<std::string, Expr>> named_coefficients(const CoeffSet& c);

/// The two variables the form's coefficients may depend on, for an ODE over `jets`.
std::pair<std::string, std::string> permitted_variables(FormId f, const JetSpace& jets);

struct MatchedForm {
  FormId form;
  JetSpace jets;
  CoeffSet coeffs;
  std::pair<std::string, std::string> vars;
};

struct NoMatch {
  std::string reason;       // order-mismatch, denominator, degree-excess, no-quadratic-part,
                            // variable-leakage, residual
  std::string detail;
  std::string coefficient;  // set for variable-leakage
  Expr residual;            // set for residual failures
};

template <class T>
using MatchResult = std::variant<T, NoMatch>;

/// Reads the form's coefficients off the canonical right-hand side and checks
/// that re-expanding them reproduces it.
MatchResult<MatchedForm> match_form(const NormalizedOde& ode, FormId form);

/// Type II pole: with c = (1/2) d^2 f / dq^2 for the second-highest jet q,
/// returns 3/c - p for the third-highest jet p.
MatchResult<Expr> recover_pole(const NormalizedOde& ode, FormId form);

/// The ODE whose right-hand side is the form's template with `coeffs`
/// inserted. Throws std::invalid_argument if the variant does not belong to
/// the form.
NormalizedOde expand_template(FormId form, const CoeffSet& coeffs, const JetSpace& jets = {});

MatchResult<MatchedForm> match_swap_form(const NormalizedOde& ode);

}  // namespace odelin
