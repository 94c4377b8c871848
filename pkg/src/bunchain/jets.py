"""k-jets of polynomial sections of the trivial line bundle over Q^m.

A section is ``x -> (x, u(x))`` with ``u`` a rational polynomial.  Its k-jet at
a point is the vector of partial derivatives ``d^alpha u`` for ``|alpha| <= k``,
listed in graded-lex order (u, u_x, u_y, u_xx, u_xy, u_yy, ...).

Bundle morphisms are limited to affine base maps ``x -> A x + b`` with ``A``
invertible, and a polynomial fibre map ``phi_f(x, u)``.  Prolongation
transports a jet along such a morphism through its Taylor representative.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import OrderTooHigh, SingularBaseMap
from .poly import Poly, parse
from .report import ProbeReport

FIBRE = "u"

# Some texts list J^2 coordinates over the plane as (u, u_x, u_y, u_xx, u_yy, u_xy).
# Graded-lex order swaps the last two; LITERATURE_ORDER_M2K2[i] is the graded-lex
# position of the i-th coordinate in that listing.
LITERATURE_COORDS_M2K2 = ("x", "y", "u", "u_x", "u_y", "u_xx", "u_yy", "u_xy")
LITERATURE_ORDER_M2K2 = (0, 1, 2, 3, 5, 4)


def default_variables(m: int) -> tuple:
    if m < 1:
        raise ValueError("base dimension must be at least 1")
    if m <= 3:
        return ("x", "y", "z")[:m]
    return tuple(f"x{i}" for i in range(1, m + 1))


@lru_cache(maxsize=None)
def multi_indices(m: int, k: int) -> tuple:
    """All alpha with |alpha| <= k, by total degree then lexicographically descending."""
    out = []
    for d in range(k + 1):
        out.extend(sorted(_compositions(m, d), reverse=True))
    return tuple(out)


def _compositions(m, d):
    if m == 1:
        return [(d,)]
    return [(a,) + rest for a in range(d + 1) for rest in _compositions(m - 1, d - a)]


def coordinate_name(alpha, names=None) -> str:
    names = names or default_variables(len(alpha))
    word = "".join(n * a for n, a in zip(names, alpha))
    return FIBRE + ("_" + word if word else "")


def jet_coordinates(m: int, k: int) -> list:
    """Coordinate names of J^k: base coordinates then jet coordinates."""
    names = default_variables(m)
    return list(names) + [coordinate_name(a, names) for a in multi_indices(m, k)]


def _alpha_factorial(alpha):
    return math.prod(math.factorial(a) for a in alpha)


def _point(x, m=None) -> tuple:
    if isinstance(x, (int, Fraction, str)):
        x = (x,)
    pt = tuple(Fraction(v) for v in x)
    if m is not None and len(pt) != m:
        raise ValueError(f"point {x} does not have {m} coordinates")
    return pt


@dataclass(frozen=True)
class PolySection:
    base_dim: int
    value: Poly

    def __post_init__(self):
        names = default_variables(self.base_dim)
        if self.value.variables != names:
            object.__setattr__(self, "value", self.value.with_variables(names))

    @classmethod
    def parse(cls, text, m) -> PolySection:
        return cls(m, parse(text, default_variables(m)))

    @property
    def variables(self):
        return default_variables(self.base_dim)

    def __call__(self, x):
        x = _point(x, self.base_dim)
        return x, self.value.evaluate(x)


@dataclass(frozen=True)
class Jet:
    base_point: tuple
    order: int
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "base_point", _point(self.base_point))
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))
        expected = math.comb(self.base_dim + self.order, self.order)
        if self.order < 0 or len(self.values) != expected:
            raise ValueError(f"a {self.order}-jet over Q^{self.base_dim} has {expected} entries")

    @property
    def base_dim(self) -> int:
        return len(self.base_point)

    @property
    def coeffs(self) -> dict:
        return dict(zip(multi_indices(self.base_dim, self.order), self.values))

    def __getitem__(self, alpha):
        return self.coeffs[tuple(alpha)]

    @property
    def value(self) -> Fraction:
        return self.values[0]

    def coordinates(self) -> dict:
        names = default_variables(self.base_dim)
        return {coordinate_name(a, names): v for a, v in self.coeffs.items()}

    def to_json(self):
        return {"base_point": [str(v) for v in self.base_point], "order": self.order,
                "coordinates": jet_coordinates(self.base_dim, self.order)[self.base_dim:],
                "values": [str(v) for v in self.values]}


def jet_of(phi: PolySection, x, k: int) -> Jet:
    if k < 0:
        raise ValueError("order must be non-negative")
    x = _point(x, phi.base_dim)
    return Jet(x, k, [phi.value.partial(a).evaluate(x) for a in multi_indices(phi.base_dim, k)])


def project(j: Jet, l: int) -> Jet:
    """pi^k_l: keep the entries of order at most l."""
    if l < 0 or l > j.order:
        raise OrderTooHigh(f"cannot project a {j.order}-jet to order {l}")
    return Jet(j.base_point, l, j.values[:math.comb(j.base_dim + l, l)])


def equivalent_to_order(phi: PolySection, psi: PolySection, x, k: int) -> bool:
    if phi.base_dim != psi.base_dim:
        raise ValueError("sections live over different base dimensions")
    return jet_of(phi, x, k) == jet_of(psi, x, k)


def taylor_polynomial(j: Jet) -> Poly:
    """Canonical representative: sum of coeff(alpha)/alpha! (x - x0)^alpha."""
    names = default_variables(j.base_dim)
    shifts = [Poly.var(names, n) - c for n, c in zip(names, j.base_point)]
    total = Poly(names)
    for alpha, c in j.coeffs.items():
        if not c:
            continue
        term = Poly.constant(names, c / _alpha_factorial(alpha))
        for s, a in zip(shifts, alpha):
            if a:
                term = term * s ** a
        total = total + term
    return total


def taylor_section(j: Jet) -> PolySection:
    return PolySection(j.base_dim, taylor_polynomial(j))


# affine base maps

def _identity_matrix(m):
    return tuple(tuple(Fraction(int(i == j)) for j in range(m)) for i in range(m))


def mat_inverse(A):
    """Exact Gauss-Jordan inverse over Q."""
    m = len(A)
    rows = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(m)] for i, row in enumerate(A)]
    for col in range(m):
        pivot = next((r for r in range(col, m) if rows[r][col]), None)
        if pivot is None:
            raise SingularBaseMap(f"base matrix {A} is singular")
        rows[col], rows[pivot] = rows[pivot], rows[col]
        p = rows[col][col]
        rows[col] = [v / p for v in rows[col]]
        for r in range(m):
            if r != col and rows[r][col]:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
    return tuple(tuple(row[m:]) for row in rows)


def _mat_mul(A, B):
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0])))
                 for i in range(len(A)))


def _mat_vec(A, v):
    return tuple(sum(a * x for a, x in zip(row, v)) for row in A)


def _affine_polys(A, b, names):
    """Coordinate polynomials of x -> A x + b over ``names``."""
    xs = [Poly.var(names, n) for n in names]
    return [sum((a * x for a, x in zip(row, xs)), Poly.constant(names, c)) for row, c in zip(A, b)]


@dataclass(frozen=True)
class MorphismSpec:
    """(f, fbar) with fbar(x) = A x + b and f(x, u) = (fbar(x), fibre_map(x, u))."""

    base_dim: int
    A: tuple
    b: tuple
    fibre_map: Poly

    def __post_init__(self):
        m = self.base_dim
        A = tuple(tuple(Fraction(v) for v in row) for row in self.A)
        if len(A) != m or any(len(row) != m for row in A):
            raise ValueError(f"base matrix must be {m} x {m}")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", _point(self.b, m))
        fvars = self.fibre_variables(m)
        if self.fibre_map.variables != fvars:
            object.__setattr__(self, "fibre_map", self.fibre_map.with_variables(fvars))
        object.__setattr__(self, "_A_inv", mat_inverse(A))
        self.check_inverse()

    @staticmethod
    def fibre_variables(m):
        return default_variables(m) + (FIBRE,)

    @classmethod
    def identity(cls, m) -> MorphismSpec:
        return cls(m, _identity_matrix(m), (0,) * m, Poly.var(cls.fibre_variables(m), FIBRE))

    @classmethod
    def parse(cls, m, A, b, fibre_map: str) -> MorphismSpec:
        return cls(m, A, b, parse(fibre_map, cls.fibre_variables(m)))

    @property
    def A_inv(self):
        return self._A_inv

    @property
    def b_inv(self):
        return tuple(-v for v in _mat_vec(self._A_inv, self.b))

    def base_map(self, x):
        return tuple(v + c for v, c in zip(_mat_vec(self.A, _point(x, self.base_dim)), self.b))

    def base_inverse(self, y):
        return tuple(v + c for v, c in zip(_mat_vec(self._A_inv, _point(y, self.base_dim)), self.b_inv))

    def inverse_polys(self):
        return _affine_polys(self._A_inv, self.b_inv, default_variables(self.base_dim))

    def check_inverse(self):
        """Symbolic check that fbar after fbar^-1 is the identity on coordinates."""
        names = default_variables(self.base_dim)
        inv = dict(zip(names, self.inverse_polys()))
        forward = _affine_polys(self.A, self.b, names)
        for n, p in zip(names, forward):
            if p.substitute(inv, names) != Poly.var(names, n):
                raise SingularBaseMap(f"affine inverse check failed on coordinate {n}")

    def to_json(self):
        return {"base_dim": self.base_dim, "A": [[str(v) for v in row] for row in self.A],
                "b": [str(v) for v in self.b], "fibre_map": str(self.fibre_map)}


def compose_specs(first: MorphismSpec, second: MorphismSpec) -> MorphismSpec:
    """``first`` then ``second``: base x -> A2(A1 x + b1) + b2, fibre phi2(fbar1(x), phi1(x, u))."""
    if first.base_dim != second.base_dim:
        raise ValueError("specs act on different base dimensions")
    m = first.base_dim
    names = default_variables(m)
    fvars = MorphismSpec.fibre_variables(m)
    A = _mat_mul(second.A, first.A)
    b = tuple(v + c for v, c in zip(_mat_vec(second.A, first.b), second.b))
    base1 = [p.with_variables(fvars) for p in _affine_polys(first.A, first.b, names)]
    mapping = dict(zip(names, base1))
    mapping[FIBRE] = first.fibre_map
    return MorphismSpec(m, A, b, second.fibre_map.substitute(mapping, fvars))


def transform_section(spec: MorphismSpec, phi: PolySection) -> PolySection:
    """The section y -> phi_f(fbar^-1(y), phi(fbar^-1(y))) of the target bundle."""
    if spec.base_dim != phi.base_dim:
        raise ValueError("section and morphism have different base dimensions")
    names = default_variables(spec.base_dim)
    inv = spec.inverse_polys()
    pulled = phi.value.substitute(dict(zip(names, inv)), names)
    mapping = dict(zip(names, inv))
    mapping[FIBRE] = pulled
    value = spec.fibre_map.substitute(mapping, names)
    assert value.variables == names  # a function of the base alone, hence a section
    return PolySection(spec.base_dim, value)


def prolong_section(spec: MorphismSpec, phi: PolySection, x, k: int) -> Jet:
    """j^k_{fbar(x)} of the transformed section."""
    return jet_of(transform_section(spec, phi), spec.base_map(x), k)


def prolong(spec: MorphismSpec, j: Jet) -> Jet:
    """j^k f applied to a jet, through its Taylor representative."""
    return prolong_section(spec, taylor_section(j), j.base_point, j.order)


# randomized consistency probe

def _random_fraction(rng, span=3, denominators=(1, 1, 2, 3)):
    return Fraction(rng.randint(-span, span), rng.choice(denominators))


def random_poly(rng, variables, degree, *, terms=None, span=3) -> Poly:
    variables = tuple(variables)
    monos = list(multi_indices(len(variables), degree))
    terms = terms if terms is not None else rng.randint(1, min(len(monos), 5))
    return Poly(variables, {a: _random_fraction(rng, span) for a in rng.sample(monos, terms)})


def _derivatives_at_zero(p: Poly, k):
    """[p(0), p'(0), ..., p^(k)(0)] for a polynomial in one variable."""
    return [p.coefficient((r,)) * math.factorial(r) for r in range(k + 1)]


def curve_probe(phi: PolySection, psi: PolySection, x, k: int, trials: int = 8, seed: int = 0,
                *, keep: int = 3) -> ProbeReport:
    """Compare d^r/dt^r at 0 of f(phi(gamma(t))) and f(psi(gamma(t))) for r <= k.

    Curves gamma have gamma(0) = x and degree <= k; observables f are random
    polynomials on E of degree <= k.  Trial 0 uses gamma(t) = x + t*v for a
    random direction v and f = u.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    m = phi.base_dim
    x = _point(x, m)
    rng = random.Random(seed)
    names = default_variables(m)
    evars = names + (FIBRE,)
    t = ("t",)
    T = Poly.var(t, "t")
    holds = fails = 0
    witnesses = []
    for trial in range(trials):
        if trial == 0:
            direction = [Fraction(rng.randint(1, 3)) for _ in range(m)]
            curve = [Poly.constant(t, c) + d * T for c, d in zip(x, direction)]
            observable = Poly.var(evars, FIBRE)
        else:
            curve = [Poly.constant(t, c) + sum((_random_fraction(rng) * T ** r for r in range(1, k + 1)),
                                                Poly(t)) for c in x]
            observable = random_poly(rng, evars, max(k, 1)) + _nonzero(rng) * Poly.var(evars, FIBRE)
        along = dict(zip(names, curve))
        results = []
        for section in (phi, psi):
            u_t = section.value.substitute(along, t)
            f_t = observable.substitute({**along, FIBRE: u_t}, t)
            results.append(_derivatives_at_zero(f_t, k))
        bad = next((r for r in range(k + 1) if results[0][r] != results[1][r]), None)
        if bad is None:
            holds += 1
        else:
            fails += 1
            if len(witnesses) < keep:
                witnesses.append({"trial": trial, "order": bad, "curve": [str(c) for c in curve],
                                  "observable": str(observable),
                                  "first": str(results[0][bad]), "second": str(results[1][bad])})
    return ProbeReport("curve_probe", trials, holds, fails, witnesses, seed)


def _nonzero(rng):
    return Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 2]))


def jet_chain_descriptor(m: int, kmax: int) -> list:
    """Stages J^kmax -> ... -> J^1 -> E -> M with coordinates and dimensions."""
    if kmax < 0:
        raise ValueError("kmax must be non-negative")
    names = list(default_variables(m))
    stages = []
    for k in range(kmax, 0, -1):
        coords = jet_coordinates(m, k)
        lower = jet_coordinates(m, k - 1)
        stages.append({"name": f"J^{k}", "coordinates": coords, "dimension": m + math.comb(m + k, k),
                       "drops": coords[len(lower):]})
    stages.append({"name": "E", "coordinates": names + [FIBRE], "dimension": m + 1, "drops": [FIBRE]})
    stages.append({"name": "M", "coordinates": names, "dimension": m, "drops": []})
    return stages
