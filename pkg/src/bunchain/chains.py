"""Chains of bundles, ladders between them, subchains and fibre chains.

A chain is a finite window ``bundle_0 -> bundle_1 -> ... -> bundle_n`` of
bundles joined by bundle morphisms (its links).  A chain morphism is a
ladder of componentwise bundle morphisms ``(g_i, h_i)`` whose rungs commute
with the links::

    g_i ; u'_i == u_i ; g_{i+1}      (total sets)
    h_i ; f'_i == f_i ; h_{i+1}      (base sets)
"""

from __future__ import annotations

import itertools
import math
import random
from collections import defaultdict
from dataclasses import dataclass, field

from ._util import sorted_labels
from .bundle import (
    Bundle,
    BundleMorphism,
    FinMap,
    compose_morphisms,
    identity_morphism,
    is_subbundle,
    iter_morphisms,
    count_morphisms,
    make_bundle,
    validate_morphism,
)
from .errors import (
    BasePointMissing,
    ComponentSquareFails,
    ConstructionCostOverflow,
    DomainMismatch,
    ImageOutsideCodomain,
    LadderFails,
    LengthMismatch,
    LinkSquareFails,
    NotComposable,
    NotNested,
    NotSubchain,
    PartialMap,
    SquareFails,
)
from .fincat import SubobjectChoice, concrete_category, verify_subobject_choice
from .report import ProbeReport, VerificationReport

#: cap on candidate component tuples enumerated for a chain category
CHAIN_ENUMERATION_CAP = 10 ** 7


@dataclass(frozen=True)
class BundleChain:
    bundles: tuple
    links: tuple
    name: str | None = field(default=None, compare=False)

    @property
    def length(self) -> int:
        """Number of links."""
        return len(self.links)

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<BundleChain{label}: {len(self.bundles)} stages>"

    def to_json(self):
        return {
            "bundles": [b.to_json() for b in self.bundles],
            "links": [m.to_json() for m in self.links],
        }


@dataclass(frozen=True)
class ChainMorphism:
    source: BundleChain
    target: BundleChain
    components: tuple

    def __repr__(self):
        return f"<ChainMorphism {self.source.name or '?'} -> {self.target.name or '?'}>"

    def to_json(self):
        return {"components": [m.to_json() for m in self.components]}


def _link(i, link, src, dst):
    if isinstance(link, BundleMorphism):
        if link.source != src or link.target != dst:
            raise LinkSquareFails(i, "link endpoints differ from the neighbouring bundles")
        u, f = link.total_map, link.base_map
    else:
        u, f = link
    try:
        return validate_morphism(src, dst, u, f)
    except SquareFails as exc:
        raise LinkSquareFails(i, {"element": exc.element, "via_top": exc.via_top,
                                  "via_bottom": exc.via_bottom}) from None
    except (DomainMismatch, PartialMap, ImageOutsideCodomain) as exc:
        raise LinkSquareFails(i, str(exc)) from None


def make_chain(bundles, links, name=None) -> BundleChain:
    """Validate links ``(u_i, f_i)`` (pairs or BundleMorphisms) between consecutive bundles."""
    bundles = tuple(bundles)
    links = list(links)
    if not bundles or len(links) != len(bundles) - 1:
        raise LengthMismatch(f"{len(bundles)} bundles need {max(len(bundles) - 1, 0)} links, got {len(links)}")
    checked = tuple(_link(i, link, bundles[i], bundles[i + 1]) for i, link in enumerate(links))
    return BundleChain(bundles, checked, name)


def ladder_witness(c: BundleChain, d: BundleChain, components):
    """First failing ladder square as ``(index, element, level)``, or None."""
    for i in range(c.length):
        g, g2 = components[i], components[i + 1]
        u, u2 = c.links[i], d.links[i]
        for e in sorted_labels(c.bundles[i].total):
            if u2.total_map(g.total_map(e)) != g2.total_map(u.total_map(e)):
                return i, e, "total"
        for b in sorted_labels(c.bundles[i].base):
            if u2.base_map(g.base_map(b)) != g2.base_map(u.base_map(b)):
                return i, b, "base"
    return None


def validate_chain_morphism(c: BundleChain, d: BundleChain, components) -> ChainMorphism:
    components = list(components)
    if len(c.bundles) != len(d.bundles) or len(components) != len(c.bundles):
        raise LengthMismatch("chains and components must have equal lengths")
    checked = []
    for i, comp in enumerate(components):
        if isinstance(comp, BundleMorphism):
            g, h = comp.total_map, comp.base_map
        else:
            g, h = comp
        try:
            checked.append(validate_morphism(c.bundles[i], d.bundles[i], g, h))
        except SquareFails as exc:
            raise ComponentSquareFails(i, exc.element) from None
    bad = ladder_witness(c, d, checked)
    if bad is not None:
        raise LadderFails(*bad)
    return ChainMorphism(c, d, tuple(checked))


def identity_chain_morphism(c: BundleChain) -> ChainMorphism:
    return ChainMorphism(c, c, tuple(identity_morphism(b) for b in c.bundles))


def compose_chain_morphisms(m: ChainMorphism, n: ChainMorphism) -> ChainMorphism:
    """``m`` then ``n``, componentwise; the result is revalidated."""
    if m.target != n.source:
        raise NotComposable("target chain of the first morphism is not the source of the second")
    comps = [compose_morphisms(a, b) for a, b in zip(m.components, n.components)]
    return validate_chain_morphism(m.source, n.target, comps)


def is_subchain(c: BundleChain, d: BundleChain) -> bool:
    if len(c.bundles) != len(d.bundles):
        return False
    if not all(is_subbundle(x, y) for x, y in zip(c.bundles, d.bundles)):
        return False
    for i in range(c.length):
        u, u2 = c.links[i], d.links[i]
        if any(u2.total_map(e) != u.total_map(e) for e in c.bundles[i].total):
            return False
        if any(u2.base_map(b) != u.base_map(b) for b in c.bundles[i].base):
            return False
    return True


def subchain_inclusion(c: BundleChain, d: BundleChain) -> ChainMorphism:
    if not is_subchain(c, d):
        raise NotSubchain(f"{c!r} is not a subchain of {d!r}")
    comps = [BundleMorphism(x, y, FinMap.inclusion(x.total, y.total), FinMap.inclusion(x.base, y.base))
             for x, y in zip(c.bundles, d.bundles)]
    return validate_chain_morphism(c, d, comps)


# --- the chain category on a finite family ----------------------------------


def chain_hom_cost(c: BundleChain, d: BundleChain) -> int:
    """Candidate component tuples before ladder filtering."""
    return math.prod(count_morphisms(x, y) for x, y in zip(c.bundles, d.bundles))


def iter_chain_morphisms(c: BundleChain, d: BundleChain):
    """Every chain morphism ``c -> d``.

    Stage ``i + 1`` candidates are indexed by their values on the images of
    the links of ``c``, which the ladder squares pin down from stage ``i``.
    """
    if len(c.bundles) != len(d.bundles):
        raise LengthMismatch("chains of different lengths")
    n = len(c.bundles)
    stages = [list(iter_morphisms(x, y)) for x, y in zip(c.bundles, d.bundles)]
    indexes = []
    for i in range(n - 1):
        im_u = sorted_labels(c.links[i].total_map.image())
        im_f = sorted_labels(c.links[i].base_map.image())
        idx = defaultdict(list)
        for m in stages[i + 1]:
            idx[(tuple(m.total_map(x) for x in im_u), tuple(m.base_map(y) for y in im_f))].append(m)
        indexes.append((im_u, im_f, idx))

    def required(i, g):
        need_u, need_f = {}, {}
        u, u2 = c.links[i], d.links[i]
        for e in c.bundles[i].total:
            y = u2.total_map(g.total_map(e))
            if need_u.setdefault(u.total_map(e), y) != y:
                return None
        for b in c.bundles[i].base:
            y = u2.base_map(g.base_map(b))
            if need_f.setdefault(u.base_map(b), y) != y:
                return None
        im_u, im_f, _ = indexes[i]
        return tuple(need_u[x] for x in im_u), tuple(need_f[y] for y in im_f)

    def extend(prefix):
        if len(prefix) == n:
            yield ChainMorphism(c, d, tuple(prefix))
            return
        key = required(len(prefix) - 1, prefix[-1])
        if key is None:
            return
        for m in indexes[len(prefix) - 1][2].get(key, ()):
            yield from extend(prefix + [m])

    for m in stages[0]:
        yield from extend([m])


def _named_chains(family):
    named, seen = {}, set()
    for i, c in enumerate(family):
        if c in seen:
            continue
        seen.add(c)
        name = c.name or f"C{i}"
        while name in named:
            name += "'"
        named[name] = c
    return named


def chain_category(family, *, cap=CHAIN_ENUMERATION_CAP):
    """The category of all chain morphisms among ``family``.

    Returns ``(category, arrows, objects)`` like :func:`bundle_category`.
    """
    objects = _named_chains(family)
    lengths = {len(c.bundles) for c in objects.values()}
    if len(lengths) > 1:
        raise LengthMismatch(f"chains in the family have different lengths {sorted(lengths)}")
    cost = sum(chain_hom_cost(x, y) for x in objects.values() for y in objects.values())
    if cost > cap:
        raise ConstructionCostOverflow(f"{cost} candidate component tuples exceed the cap {cap}")
    homs = {(a, b): list(iter_chain_morphisms(x, y)) for a, x in objects.items() for b, y in objects.items()}
    cat, arrows = concrete_category(objects, homs, compose_chain_morphisms,
                                    lambda a: identity_chain_morphism(objects[a]), name="Chain(Bun)")
    return cat, arrows, objects


def verify_chaincat_subobject_axioms(family, *, cap=CHAIN_ENUMERATION_CAP,
                                     task="chain_subobjects") -> VerificationReport:
    """Check that subchain inclusions are a choice of subobjects on ``family``."""
    cat, arrows, objects = chain_category(family, cap=cap)
    incl = {(a, b): subchain_inclusion(x, y)
            for a, x in objects.items() for b, y in objects.items() if is_subchain(x, y)}
    wanted = set(incl.values())
    P = frozenset(mid for mid, m in arrows.items() if m in wanted)
    report = verify_subobject_choice(SubobjectChoice(cat, P), task)
    ids = {(cat.source(mid), cat.target(mid)): mid for mid in P}
    witness = None
    for (c, e), f in sorted(ids.items()):
        for (d, e2), g in sorted(ids.items()):
            if e2 != e or witness:
                continue
            for h in cat.hom(c, d):
                if cat.compose(h, g) == f and arrows[h] != incl.get((c, d)):
                    witness = {"f": f, "g": g, "h": h}
                    break
    report.add("factorization_closure", witness is None, witness,
               "every h with h;j(d,e) = j(c,e) is the subchain inclusion j(c,d)")
    report.data.update(objects=len(objects), morphisms=len(cat.morphisms))
    return report


# --- fibre chains ------------------------------------------------------------


@dataclass(frozen=True)
class FibreChain:
    base_point: object
    stages: tuple
    links: tuple

    def to_json(self):
        return {"base_point": self.base_point, "stages": [sorted_labels(s) for s in self.stages]}


def fibre_chain(nested, b) -> FibreChain:
    """Fibres over ``b`` of an ascending chain of subbundles, joined by inclusions."""
    nested = list(nested)
    if not nested:
        raise NotNested("empty chain of subbundles")
    for i in range(len(nested) - 1):
        if not is_subbundle(nested[i], nested[i + 1]):
            raise NotNested(f"bundle {i} is not a subbundle of bundle {i + 1}")
    if b not in nested[0].base:
        raise BasePointMissing(f"{b!r} is not in the smallest base")
    stages = tuple(x.fibres[b] for x in nested)
    for s, t in zip(stages, stages[1:]):
        assert s <= t
    links = tuple(FinMap.inclusion(s, t) for s, t in zip(stages, stages[1:]))
    return FibreChain(b, stages, links)


# --- probing the sufficient condition for subchains ---------------------------


def _random_injective_bundle(rng, max_total, max_base, tag):
    k = rng.randint(1, max_base)
    base = [f"{tag}b{j}" for j in range(k)]
    chosen = rng.sample(base, rng.randint(1, min(k, max_total)))
    return make_bundle([f"{tag}e{j}" for j in range(len(chosen))], base,
                       {f"{tag}e{j}": b for j, b in enumerate(chosen)})


def _random_morphism(rng, src, dst):
    ms = list(itertools.islice(iter_morphisms(src, dst), 5000))
    return rng.choice(ms) if ms else None


def _restricted_link(link, src, dst):
    u = {e: link.total_map(e) for e in src.total}
    f = {b: link.base_map(b) for b in src.base}
    if not set(u.values()) <= dst.total or not set(f.values()) <= dst.base:
        return None
    return (u, f)


def probe_subchain_sufficiency(samples, *, seed=0, max_stages=3, max_total=4, max_base=3,
                               mode="mixed", keep=5) -> ProbeReport:
    """Randomized evidence for a sufficient condition on subchains.

    Samples chains ``d`` with injective projections and stagewise
    subbundles ``c`` with surjective projections, then records whether the
    two ladder conditions of a subchain hold.  ``mode="identity"`` samples
    only constant chains linked by identities.
    """
    rng = random.Random(seed)
    report = ProbeReport("subchain_sufficiency", seed=seed)
    while report.samples < samples:
        n = rng.randint(1, max_stages)
        if mode == "identity":
            X = _random_injective_bundle(rng, max_total, max_base, "s")
            d_bundles = [X] * n
            d_links = [identity_morphism(X)] * (n - 1)
        else:
            d_bundles = [_random_injective_bundle(rng, max_total, max_base, f"s{i}") for i in range(n)]
            d_links = [_random_morphism(rng, x, y) for x, y in zip(d_bundles, d_bundles[1:])]
            if any(m is None for m in d_links):
                continue
        d = make_chain(d_bundles, d_links)
        c_bundles = []
        for i, X in enumerate(d_bundles):
            if mode == "identity" and i > 0:
                c_bundles.append(c_bundles[0])
                continue
            E = rng.sample(sorted_labels(X.total), rng.randint(0, len(X.total)))
            c_bundles.append(make_bundle(E, {X.p(e) for e in E}, {e: X.p(e) for e in E}))
        c_links = []
        for i in range(n - 1):
            src, dst = c_bundles[i], c_bundles[i + 1]
            link = _restricted_link(d_links[i], src, dst)
            if mode == "mixed" and (link is None or rng.random() < 0.5):
                link = _random_morphism(rng, src, dst)
            c_links.append(link)
        if any(link is None for link in c_links):
            continue
        c = make_chain(c_bundles, c_links)
        assert all(x.projection.is_surjective() for x in c.bundles)
        assert all(y.projection.is_injective() for y in d.bundles)
        report.samples += 1
        if is_subchain(c, d):
            report.holds += 1
        else:
            report.fails += 1
            if len(report.witnesses) < keep:
                report.witnesses.append({"c": c, "d": d})
    return report
