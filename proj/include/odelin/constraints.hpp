#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "odelin/canonical.hpp"
#include "odelin/form.hpp"

namespace odelin {

enum class Verdict { Pass, Fail, Indeterminate, Unsupported };

std::string_view verdict_name(Verdict v);

struct Condition {
  std::string id;  // tresse-1, im1-3, thm1-5, c7, thm3-2, ...
  Expr residual;   // canonical left-hand side with the coefficients inserted
  ZeroVerdict verdict;
  std::string provenance;
};

struct ConstraintReport {
  FormId form = FormId::LieCubic2;
  std::vector<Condition> conditions;
  Verdict overall = Verdict::Unsupported;
  std::vector<std::string> notes;
  std::optional<Expr> H;  // Type II fourth-order forms only
};

using VarPair = std::pair<std::string, std::string>;

/// Dispatches on the matched form. Type II third-order shapes yield an
/// Unsupported report with no conditions.
ConstraintReport evaluate_constraints(const MatchedForm& m, const ZeroTestOptions& opts = {});

/// Two Tresse conditions for y'' + a1 y'^3 - a2 y'^2 + a3 y' - a4 = 0 with
/// coefficients in (independent, dependent) = vars.
ConstraintReport tresse_conditions(const Cubic2& c, const VarPair& vars, const ZeroTestOptions& opts = {});

/// Five Type I conditions over a variable pair (first: the variable that
/// plays x, second: the one that plays y).
ConstraintReport type1_conditions(const ThirdTypeI& c, const VarPair& vars, FormId form,
                                  const ZeroTestOptions& opts = {});

/// Five conditions for the x-free fourth-order Type I form; vars = (y, y').
ConstraintReport thm1_conditions(const FourthXTypeI& c, const VarPair& vars, const ZeroTestOptions& opts = {});

/// Eight conditions for the x-free fourth-order Type II form plus H.
ConstraintReport thm2_conditions(const FourthXTypeII& c, const VarPair& vars, const ZeroTestOptions& opts = {});
Expr compute_H(const FourthXTypeII& c, const VarPair& vars);

/// The two x,y-free fourth-order conditions exactly as printed; vars = (y', y'').
ConstraintReport thm3_conditions(const FourthXY& c, const VarPair& vars, const ZeroTestOptions& opts = {});

}  // namespace odelin
