"""Independent reference computations used by the jet tests and acceptance suite."""

import itertools
import math
from fractions import Fraction

import sympy

from bunchain.jets import default_variables, multi_indices


def sympy_jet(text, point, k):
    """Partial derivatives of a polynomial string, in graded-lex order, via sympy."""
    m = len(point)
    syms = sympy.symbols(default_variables(m))
    expr = sympy.sympify(text.replace("^", "**"), locals=dict(zip(default_variables(m), syms)))
    subs = {s: sympy.Rational(Fraction(v).numerator, Fraction(v).denominator) for s, v in zip(syms, point)}
    out = []
    for alpha in multi_indices(m, k):
        d = expr
        for s, a in zip(syms, alpha):
            d = sympy.diff(d, s, a)
        val = sympy.Rational(d.subs(subs))
        out.append(Fraction(int(val.p), int(val.q)))
    return out


def numeric_function(text, m):
    syms = sympy.symbols(default_variables(m))
    expr = sympy.sympify(text.replace("^", "**"), locals=dict(zip(default_variables(m), syms)))
    return sympy.lambdify(syms, expr, "math")


def finite_difference_jet(f, point, k, h=1e-4):
    """Central differences: the a-th difference in each coordinate, sampled at half-steps."""
    m = len(point)
    x0 = [float(v) for v in point]
    out = []
    for alpha in multi_indices(m, k):
        stencils = []
        for a in alpha:
            stencils.append([((-1) ** j * math.comb(a, j), (a / 2 - j) * h) for j in range(a + 1)])
        total = 0.0
        for combo in itertools.product(*stencils):
            weight = math.prod(w for w, _ in combo)
            shifted = [x + s for x, (_, s) in zip(x0, combo)]
            total += weight * f(*shifted)
        out.append(total / h ** sum(alpha))
    return out
