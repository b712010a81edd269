#!/usr/bin/env python3
"""Independent SymPy checks of the odelin CLI's JSON output.

usage: sympy_oracle.py <odelin binary> <inputs dir>
"""

import json
import re
import subprocess
import sys
from pathlib import Path

import sympy as sp

x, Y, P, Q, R, y4 = sp.symbols("x Y P Q R Y4")  # y and its first four derivatives
u, u1, u2, u3 = sp.symbols("u u1 u2 u3")
t = sp.Symbol("t")

failures = []


def check(ok, what):
    print(("ok   " if ok else "FAIL ") + what)
    if not ok:
        failures.append(what)


def run(binary, *args):
    out = subprocess.run([binary, *args, "--json"], capture_output=True, text=True)
    return json.loads(out.stdout)


def parse(text, names):
    """Parses the tool's grammar: primes name jet symbols, ^ is a power."""
    code = re.sub(r"[A-Za-z_][A-Za-z_0-9]*'*", lambda m: names.get(m.group(0), m.group(0)), text)
    table = {str(v): v for v in (x, Y, P, Q, R, y4, u, u1, u2, u3)}
    table.update({f: getattr(sp, f) for f in ("exp", "log", "sin", "cos", "sqrt")})
    table["ln"] = sp.log
    return sp.sympify(code.replace("^", "**"), locals=table)


Y_NAMES = {"y''''": "Y4", "y'''": "R", "y''": "Q", "y'": "P", "y": "Y"}
U_NAMES = {"u'''": "u3", "u''": "u2", "u'": "u1", "u": "u"}


def same(a, b):
    return sp.simplify(sp.together(a - b)) == 0


def normalized_rhs(lhs):
    """y'''' = f from a polynomial left-hand side linear in y''''."""
    lead = sp.diff(lhs, y4)
    return sp.expand(sp.cancel(-(lhs - lead * y4) / lead))


def type1_coefficients(f):
    """A1, A0, B3, B2, B1, B0 of y'''' + (A1 y'' + A0) y''' + B3 y''^3 + ... = 0."""
    g = sp.expand(-f)
    a_part = sp.cancel(sp.diff(g, R))
    rest = sp.expand(sp.cancel(g - a_part * R))
    A1 = sp.cancel(sp.diff(a_part, Q))
    A0 = sp.cancel(a_part - A1 * Q)
    poly = sp.Poly(sp.cancel(rest * sp.denom(sp.together(rest))), Q)
    den = sp.denom(sp.together(rest))
    cs = {k[0]: sp.cancel(c / den) for k, c in zip(poly.monoms(), poly.coeffs())}
    return {"A1": A1, "A0": A0, "B3": cs.get(3, 0), "B2": cs.get(2, 0), "B1": cs.get(1, 0), "B0": cs.get(0, 0)}


def type1_conditions(c):
    A1, A0, B1, B2, B3, B0 = (sp.sympify(c[k]) for k in ("A1", "A0", "B1", "B2", "B3", "B0"))
    d = sp.diff
    return [
        P**2 * d(A1, Y) - P * d(A0, P) + A0,
        P**2 * (-3 * d(A0, Y, P)) + P * (3 * d(B1, P) + 3 * d(A0, Y) - 2 * A0 * d(A0, P)) + (-6 * B1 + 2 * A0**2),
        P**2 * (3 * d(A1, Y)) + P * (A0 * A1 - 3 * B2) + A0,
        P**2 * (3 * d(A1, P) - 9 * B3 + A1**2) - P * A1 - 5,
        P**4 * (-6 * d(A0, Y) * d(A1, Y))
        + P**3 * (9 * B1 * d(A1, Y) - 2 * A0**2 * d(A1, Y) + 9 * d(B1, Y, P))
        + P**2 * (-18 * d(B1, Y) - 9 * A1 * d(B0, P) - 9 * B0 * d(A1, P) + 3 * A0 * d(B1, P) - 27 * d(B0, P, P))
        + P * (27 * A1 * B0 - 6 * A0 * B1 + 126 * d(B0, P))
        - 180 * B0,
    ]


def H_formula(r0, C2, C1, D5, D4):
    d = sp.diff
    return (
        (d(D4, P) + sp.Rational(1, 3) * d(C2, P, P) + sp.Rational(2, 3) * C2 * d(C2, P)
         + sp.Rational(2, 3) * C2 * D4 + sp.Rational(4, 27) * C2**3)
        + (1 / P) * (-sp.Rational(4, 3) * d(C2, P) + sp.Rational(2, 3) * C2**2 - sp.Rational(4, 3) * D4
                     - sp.Rational(8, 9) * C2**2)
        + (1 / P**2) * (-sp.Rational(5, 9) * C2)
        + (1 / P**3) * sp.Rational(40, 27)
        + (1 / P**5) * (-2 * d(D5, Y) - sp.Rational(2, 3) * C1 * D5)
        + (1 / P**6) * (-3 * r0 * d(D5, P) - 5 * D5 * d(r0, P) - 2 * r0 * C2 * D5 - sp.Rational(8, 3) * r0 * D5)
        + (1 / P**7) * (24 * r0 * D5)
    )


def missing_x(lhs):
    """y' = u(y): substitute the chain rule and return the reduced left-hand side."""
    U = sp.Function("U")(t)
    yp = U
    ypp = U * sp.diff(U, t)
    yppp = U * sp.diff(ypp, t)
    ypppp = U * sp.diff(yppp, t)
    e = lhs.subs({y4: ypppp, R: yppp, Q: ypp, P: yp}).subs(Y, t)
    e = e.subs(sp.diff(U, t, 3), u3).subs(sp.diff(U, t, 2), u2).subs(sp.diff(U, t), u1).subs(U, u)
    return sp.expand(e.subs(t, Y))


def missing_xy(lhs):
    """y'' = u(y'): substitute and return the reduced left-hand side in u, u', u''."""
    U = sp.Function("U")(t)
    ypp = U
    yppp = U * sp.diff(U, t)
    ypppp = U * sp.diff(yppp, t)
    e = lhs.subs({y4: ypppp, R: yppp, Q: ypp}).subs(P, t)
    e = e.subs(sp.diff(U, t, 2), u2).subs(sp.diff(U, t), u1).subs(U, u)
    return sp.expand(e)


def reduced_rhs(lhs, top):
    lead = sp.diff(lhs, top)
    return sp.cancel(-(lhs - lead * top) / lead)


def main():
    binary, inputs = sys.argv[1], Path(sys.argv[2])
    ex1 = parse((inputs / "example1.ode").read_text().splitlines()[-1].split("=")[0], Y_NAMES)
    ex1_b = parse((inputs / "example1_perturbed.ode").read_text().splitlines()[-1].split("=")[0], Y_NAMES)
    ex3 = parse("y'*y''*y'''' - 3*y'*y'''^2 + 6*y'^3*y''^2*y''' - 4*y''^2*y''' - y'*y''^5", Y_NAMES)
    ex4 = parse((inputs / "example4.ode").read_text().strip().split("=")[0], Y_NAMES)

    # Example 1 coefficients against the tool.
    c1 = type1_coefficients(normalized_rhs(ex1))
    j1 = run(binary, "classify", str(inputs / "example1.ode"))
    tool = next(m for m in j1["form_matches"] if m["form"] == "thm1-fourth-x")["coefficients"]
    for k, v in c1.items():
        check(same(parse(tool[k], Y_NAMES), v), f"example 1 coefficient {k} = {v}")
    check(same(c1["B0"], 3 * P**4), "example 1 B0 is 3*y'^4 after normalizing")

    # Printed Type I conditions on Example 1 and on the B1 perturbation.
    res = [sp.simplify(c) for c in type1_conditions(c1)]
    check(all(r == 0 for r in res), "example 1 satisfies all five conditions")
    cb = type1_coefficients(normalized_rhs(ex1_b))
    res_b = [sp.simplify(c) for c in type1_conditions(cb)]
    jb = run(binary, "check", "--form", "thm1-fourth-x", str(inputs / "example1_perturbed.ode"))
    tool_overall = next(r for r in jb["constraint_reports"] if r["form"] == "thm1-fourth-x")["overall"]
    check((tool_overall == "Pass") == all(r == 0 for r in res_b),
          f"B1 perturbation: oracle residuals {res_b}, tool {tool_overall}")
    b = sp.Symbol("b")
    cgen = dict(c1, B1=b * P**2)
    check(all(sp.simplify(c) == 0 for c in type1_conditions(cgen)), "conditions hold for B1 = b*y'^2, any constant b")
    zero = type1_conditions({"A1": 0, "A0": 0, "B3": 0, "B2": 0, "B1": 0, "B0": 0})
    check(sp.simplify(zero[3]) == -5, "y''''=0 condition 4 is -5")

    # H for Example 3.
    C2 = 6 * P**2 - 4 / P
    H = sp.expand(sp.simplify(H_formula(sp.Integer(0), C2, sp.Integer(0), sp.Integer(-1), sp.Integer(0))))
    check(same(H, 32 * P**6 - 24 * P**3 + 22 - 28 / P**3), f"H expands to {H}")
    j3 = run(binary, "example", "3")
    tool_h = next(r for r in j3["constraint_reports"] if r["form"] == "thm2-fourth-x")["H"]
    check(tool_h is not None and same(parse(tool_h, Y_NAMES), H), f"tool H {tool_h}")

    # Example 3 direct reduction.
    red3 = reduced_rhs(missing_x(ex3), u3)
    expected3 = -(1 / u1) * (-3 * u2**2 + (6 * u**2 - 6 / u) * u1**2 * u2 + (6 * u - 6 / u**2) * u1**4 - u * u1**5)
    check(same(red3, expected3), "example 3 reduces by substitution to the non-printed equation")
    printed36 = -(1 / u1) * (-3 * u2**2 - Y * u1**5)
    check(not same(red3, printed36), "example 3 reduction differs from the printed one")
    tool3 = next(r for r in j3["reductions"] if r["method"] == "missing-x")["trace"]["reduced"]["normalized"]
    check(same(parse(tool3.split("=")[1], U_NAMES), red3), "tool example 3 reduction")

    # Example 1 reduction.
    red1 = reduced_rhs(missing_x(ex1), u3)
    printed30 = -(3 / u * u1 * u2 - 3 * u2 - 3 / u * u1**2 + 2 * u1 + 3 * u)
    check(same(red1, printed30), "example 1 reduces to the printed third-order equation")
    tool1 = next(r for r in j1["reductions"] if r["method"] == "missing-x")["trace"]["reduced"]["normalized"]
    check(same(parse(tool1.split("=")[1], U_NAMES), red1), "tool example 1 reduction")

    # Example 4 reduction (u as a function of y').
    red4 = reduced_rhs(missing_xy(ex4), u2)
    check(same(red4, -u1**3 + u1), f"example 4 reduces to u'' = {red4}")
    j4 = run(binary, "reduce", "--method", "missing-xy", str(inputs / "example4.ode"))
    tool4 = next(r for r in j4["reductions"] if r["method"] == "missing-xy")["trace"]["reduced"]["normalized"]
    check(same(parse(tool4.split("=")[1], U_NAMES), red4), "tool example 4 reduction")

    print(f"{len(failures)} failure(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
