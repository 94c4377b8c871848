"""Sparse multivariate polynomials with exact rational coefficients.

A ``Poly`` stores ``{exponent tuple: Fraction}`` over an ordered tuple of
variable names.  Zero coefficients are never stored.  Text form follows a
small grammar: terms ``c * x^a * u^b`` joined by ``+``/``-``, rationals
written ``p/q``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import PolyParseError


def _frac(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a Fraction, int or 'p/q' string")
    return Fraction(value)


class Poly:
    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: Iterable[str], terms: Mapping | None = None):
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"repeated variable in {self.variables}")
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(self.variables) or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent tuple {exps} for variables {self.variables}")
            c = _frac(c)
            if c:
                clean[exps] = clean.get(exps, Fraction(0)) + c
        self.terms = {e: clean[e] for e in sorted(clean, key=_term_order) if clean[e]}
        self._hash = None

    # constructors

    @classmethod
    def constant(cls, variables, c) -> Poly:
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, variables, name) -> Poly:
        variables = tuple(variables)
        exps = tuple(int(v == name) for v in variables)
        if name not in variables:
            raise ValueError(f"{name!r} is not one of {variables}")
        return cls(variables, {exps: 1})

    @classmethod
    def monomial(cls, variables, exps, c=1) -> Poly:
        return cls(variables, {tuple(exps): c})

    # structure

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, name) -> int:
        i = self.variables.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def uses(self) -> set:
        return {v for i, v in enumerate(self.variables) if any(e[i] for e in self.terms)}

    def coefficient(self, exps) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def with_variables(self, variables) -> Poly:
        """Re-express over ``variables``; every used variable must be kept."""
        variables = tuple(variables)
        missing = self.uses() - set(variables)
        if missing:
            raise ValueError(f"variables {sorted(missing)} would be dropped")
        pos = [variables.index(v) if v in variables else None for v in self.variables]
        out = {}
        for exps, c in self.terms.items():
            new = [0] * len(variables)
            for p, e in zip(pos, exps):
                if p is not None:
                    new[p] = e
            out[tuple(new)] = c
        return Poly(variables, out)

    # arithmetic

    def _coerce(self, other) -> Poly:
        if isinstance(other, Poly):
            if other.variables != self.variables:
                raise ValueError(f"variable mismatch: {self.variables} vs {other.variables}")
            return other
        return Poly.constant(self.variables, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(self.variables, out)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        scalar = _frac(scalar)
        return Poly(self.variables, {e: c / scalar for e, c in self.terms.items()})

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers")
        result, base = Poly.constant(self.variables, 1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.variables == other.variables and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.constant(self.variables, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, tuple(self.terms.items())))
        return self._hash

    # calculus and evaluation

    def diff(self, name, times: int = 1) -> Poly:
        i = self.variables.index(name)
        out = {}
        for exps, c in self.terms.items():
            a = exps[i]
            if a < times:
                continue
            factor = 1
            for j in range(times):
                factor *= a - j
            new = list(exps)
            new[i] -= times
            out[tuple(new)] = c * factor
        return Poly(self.variables, out)

    def partial(self, alpha) -> Poly:
        """Mixed partial ``d^alpha`` with ``alpha`` aligned to ``variables``."""
        p = self
        for name, a in zip(self.variables, alpha):
            if a:
                p = p.diff(name, a)
        return p

    def evaluate(self, point) -> Fraction:
        """Value at ``point``: a mapping by name or a sequence aligned with ``variables``."""
        if isinstance(point, Mapping):
            vals = [_frac(point[v]) for v in self.variables]
        else:
            vals = [_frac(v) for v in point]
            if len(vals) != len(self.variables):
                raise ValueError(f"expected {len(self.variables)} values")
        total = Fraction(0)
        for exps, c in self.terms.items():
            term = c
            for v, e in zip(vals, exps):
                if e:
                    term *= v ** e
            total += term
        return total

    def substitute(self, mapping: Mapping[str, Poly], variables=None) -> Poly:
        """Replace each variable by a polynomial over ``variables``.

        Unmapped variables are kept as themselves and must appear in ``variables``.
        """
        if variables is None:
            sample = next(iter(mapping.values()), None)
            variables = sample.variables if sample is not None else self.variables
        variables = tuple(variables)
        images = []
        for v in self.variables:
            if v in mapping:
                img = mapping[v]
                img = img if isinstance(img, Poly) else Poly.constant(variables, img)
                images.append(img.with_variables(variables) if img.variables != variables else img)
            else:
                images.append(Poly.var(variables, v))
        powers = [{0: Poly.constant(variables, 1)} for _ in images]

        def power(i, e):
            cache = powers[i]
            if e not in cache:
                cache[e] = power(i, e - 1) * images[i]
            return cache[e]

        total = Poly(variables)
        for exps, c in self.terms.items():
            term = Poly.constant(variables, c)
            for i, e in enumerate(exps):
                if e:
                    term = term * power(i, e)
            total = total + term
        return total

    # text

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, c in reversed(list(self.terms.items())):
            factors = []
            for v, e in zip(self.variables, exps):
                if e == 1:
                    factors.append(v)
                elif e:
                    factors.append(f"{v}^{e}")
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = " * ".join(factors)
            else:
                body = " * ".join([str(mag)] + factors)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"Poly({self.variables!r}, {str(self)!r})"


def _term_order(exps):
    # lowest total degree first, then reverse-lex so that x precedes y
    return (sum(exps), tuple(-e for e in exps))


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*^]))")


def _tokens(text):
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolyParseError(f"unexpected character {text[pos:pos + 1]!r} at offset {pos} in {text!r}")
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return out


def parse(text: str, variables: Iterable[str]) -> Poly:
    """Parse the term grammar, e.g. ``"3/2 * x^2 * u - y + 1"``."""
    variables = tuple(variables)
    toks = _tokens(str(text))
    if not toks:
        raise PolyParseError("empty polynomial")
    i, terms = 0, {}

    def expect_factor(i):
        if i >= len(toks):
            raise PolyParseError(f"expression {text!r} ends after an operator")
        kind, val, at = toks[i]
        if kind == "num":
            if re.search(r"/0+$", val):
                raise PolyParseError(f"zero denominator in {val!r}")
            return _frac(val), None, i + 1
        if kind == "name":
            if val not in variables:
                raise PolyParseError(f"unknown variable {val!r} at offset {at}; expected one of {variables}")
            exp = 1
            if i + 1 < len(toks) and toks[i + 1][1] == "^":
                if i + 2 >= len(toks) or toks[i + 2][0] != "num" or "/" in toks[i + 2][1]:
                    raise PolyParseError(f"exponent after {val!r} must be a non-negative integer")
                exp = int(toks[i + 2][1])
                return None, (val, exp), i + 3
            return None, (val, exp), i + 1
        raise PolyParseError(f"unexpected {val!r} at offset {at}")

    first = True
    while i < len(toks):
        sign = 1
        if toks[i][0] == "op" and toks[i][1] in "+-":
            sign = -1 if toks[i][1] == "-" else 1
            i += 1
        elif not first:
            raise PolyParseError(f"expected '+' or '-' at offset {toks[i][2]} in {text!r}")
        first = False
        coeff, exps = Fraction(sign), [0] * len(variables)
        while True:
            c, power, i = expect_factor(i)
            if c is not None:
                coeff *= c
            else:
                exps[variables.index(power[0])] += power[1]
            if i < len(toks) and toks[i][1] == "*":
                i += 1
                continue
            break
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + coeff
    return Poly(variables, terms)
