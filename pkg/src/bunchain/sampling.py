"""Seeded random generators for every object type, used by probes and tests.

All generators take a ``random.Random`` instance so runs are reproducible.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

from ._util import sorted_labels
from .bundle import Bundle, BundleMorphism, FinMap, make_bundle, restrict_bundle
from .chains import BundleChain, iter_chain_morphisms, make_chain
from .exact import AbHom, FinAbGroup
from .jets import FIBRE, Jet, MorphismSpec, PolySection, default_variables, multi_indices, random_poly
from .poly import Poly


def random_bundle(rng: random.Random, max_total=6, max_base=3, *, prefix="", empty_fibres=True) -> Bundle:
    nb = rng.randint(1, max_base)
    base = [f"{prefix}b{j}" for j in range(nb)]
    ne = rng.randint(0 if empty_fibres else nb, max(max_total, 0 if empty_fibres else nb))
    total = [f"{prefix}e{j}" for j in range(ne)]
    proj = {e: rng.choice(base) for e in total}
    if not empty_fibres:
        for j, b in enumerate(base):  # one element per base point first
            proj[total[j]] = b
    return make_bundle(total, base, proj)


def random_restriction(rng: random.Random, X: Bundle, *, extra_base=0.3) -> Bundle:
    """A random subbundle: a subset of E, its image, and possibly more base points."""
    E = [e for e in sorted_labels(X.total) if rng.random() < 0.6]
    base = {X.p(e) for e in E}
    base |= {b for b in sorted_labels(X.base) if rng.random() < extra_base}
    if not base:
        base = {rng.choice(sorted_labels(X.base))}
    return restrict_bundle(X, E, base)


def random_nested_family(rng: random.Random, max_bundles=5, max_total=12, max_base=5) -> list:
    """A top bundle and random restrictions of it (so every member is a subbundle of the top)."""
    X = random_bundle(rng, max_total, max_base)
    family = [X]
    current = X
    for _ in range(rng.randint(0, max_bundles - 1)):
        source = current if rng.random() < 0.6 else X
        current = random_restriction(rng, source)
        family.append(current)
    return family


def random_bundle_morphism(rng: random.Random, src: Bundle, dst: Bundle) -> BundleMorphism | None:
    """A random morphism, chosen blockwise per base point; None if hom(src, dst) is empty."""
    total_map, base_map = {}, {}
    for b in sorted_labels(src.base):
        F = sorted_labels(src.fibres[b])
        targets = [b2 for b2 in sorted_labels(dst.base) if dst.fibres[b2] or not F]
        if not targets:
            return None
        b2 = rng.choice(targets)
        base_map[b] = b2
        G = sorted_labels(dst.fibres[b2])
        total_map.update({x: rng.choice(G) for x in F})
    return BundleMorphism(src, dst, FinMap(src.total, dst.total, total_map), FinMap(src.base, dst.base, base_map))


def random_chain(rng: random.Random, stages, max_total=3, max_base=2, *, tag="s", attempts=50) -> BundleChain:
    for _ in range(attempts):
        bundles = [random_bundle(rng, max_total, max_base, prefix=f"{tag}{i}.") for i in range(stages)]
        links = [random_bundle_morphism(rng, x, y) for x, y in zip(bundles, bundles[1:])]
        if all(link is not None for link in links):
            return make_chain(bundles, links)
    raise RuntimeError("could not sample a chain with nonempty link hom-sets")


def random_chain_morphism(rng: random.Random, c: BundleChain, d: BundleChain, limit=2000):
    homs = list(itertools.islice(iter_chain_morphisms(c, d), limit))
    return rng.choice(homs) if homs else None


def random_abgroup(rng: random.Random, max_order=64, max_factors=3) -> FinAbGroup:
    factors = []
    for _ in range(rng.randint(0, max_factors)):
        room = max_order // math.prod(factors) if factors else max_order
        if room < 1:
            break
        factors.append(rng.randint(1, room))
    return FinAbGroup(tuple(factors))


def random_abhom(rng: random.Random, G: FinAbGroup, H: FinAbGroup) -> AbHom:
    """Entries range over the well-defined values: multiples of n'_i / gcd(n_j, n'_i)."""
    matrix = []
    for nt in H.factors:
        row = []
        for ns in G.factors:
            step = nt // math.gcd(ns, nt)
            row.append(step * rng.randrange(nt // step))
        matrix.append(row)
    return AbHom(G, H, matrix)


def random_rational(rng: random.Random, span=3, denominators=(1, 1, 2, 3)) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.choice(denominators))


def random_point(rng: random.Random, m) -> tuple:
    return tuple(random_rational(rng) for _ in range(m))


def random_section(rng: random.Random, m, degree=3) -> PolySection:
    return PolySection(m, random_poly(rng, default_variables(m), degree))


def random_jet(rng: random.Random, m, k) -> Jet:
    return Jet(random_point(rng, m), k, [random_rational(rng) for _ in multi_indices(m, k)])


def random_invertible(rng: random.Random, m, span=2):
    while True:
        A = [[Fraction(rng.randint(-span, span)) for _ in range(m)] for _ in range(m)]
        if _det(A):
            return A


def _det(A):
    m = len(A)
    if m == 1:
        return A[0][0]
    return sum((-1) ** j * A[0][j] * _det([row[:j] + row[j + 1:] for row in A[1:]]) for j in range(m))


def random_spec(rng: random.Random, m, fibre_degree=3) -> MorphismSpec:
    fvars = MorphismSpec.fibre_variables(m)
    fibre = random_poly(rng, fvars, fibre_degree)
    fibre = fibre + random_rational(rng, denominators=(1, 2)) * Poly.var(fvars, FIBRE)
    return MorphismSpec(m, random_invertible(rng, m), random_point(rng, m), fibre)


def vanishing_perturbation(rng: random.Random, m, k, x, degree=None, terms=3) -> Poly:
    """A random polynomial whose k-jet at ``x`` is zero: a combination of (x - x0)^alpha, |alpha| > k."""
    names = default_variables(m)
    degree = degree if degree is not None else k + 2
    shifts = [Poly.var(names, n) - c for n, c in zip(names, x)]
    high = [a for a in multi_indices(m, degree) if sum(a) > k]
    total = Poly(names)
    for alpha in rng.sample(high, min(terms, len(high))):
        term = Poly.constant(names, random_rational(rng) or 1)
        for s, a in zip(shifts, alpha):
            term = term * s ** a
        total = total + term
    return total
