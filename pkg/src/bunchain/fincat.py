"""Finite categories with explicit composition.

Composition is written in diagrammatic order everywhere in this package:
``compose(f, g)`` means "f, then g" and is defined exactly when
``target(f) == source(g)``.  A product written ``hg`` in the usual
left-to-right arrow notation is therefore ``compose(h, g)`` here.

Morphisms are compared by id.  Categories built from concrete arrows
(functions, bundle morphisms, ...) intern equal arrows to a single id, see
:func:`concrete_category`.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from collections.abc import Mapping
from dataclasses import dataclass

from ._util import sorted_labels
from .errors import (
    MalformedCategory,
    MalformedChoice,
    NonComposable,
    NotMono,
    NotReflexive,
    NotTransitive,
    TargetMismatch,
    UnknownMorphism,
)
from .report import VerificationReport


class FinCategory:
    """A finite category.

    ``morphisms`` maps each morphism id to its ``(source, target)`` pair,
    ``identity`` maps objects to identity ids and ``table`` maps composable
    pairs ``(f, g)`` to the id of "f then g".  ``table`` may be any mapping,
    including a lazily evaluated one; plain dicts are checked for shape on
    construction.
    """

    def __init__(self, objects, morphisms, identity, table, *, name=None):
        self.name = name
        self.objects = tuple(objects)
        self.morphisms = dict(morphisms)
        self.identity = dict(identity)
        self.table = table
        self._homs = defaultdict(list)
        for f, (s, t) in self.morphisms.items():
            self._homs[(s, t)].append(f)
        self._homs = {k: tuple(v) for k, v in self._homs.items()}
        self._check_shape()

    def _check_shape(self):
        objs = set(self.objects)
        if len(objs) != len(self.objects):
            raise MalformedCategory("duplicate objects")
        for f, (s, t) in self.morphisms.items():
            if s not in objs or t not in objs:
                raise MalformedCategory(f"morphism {f!r} has an endpoint outside the objects")
        for a in self.objects:
            i = self.identity.get(a)
            if i is None or self.morphisms.get(i) != (a, a):
                raise MalformedCategory(f"object {a!r} has no identity morphism {a!r} -> {a!r}")
        if not isinstance(self.table, dict):
            return
        for (f, g), h in self.table.items():
            if f not in self.morphisms or g not in self.morphisms or h not in self.morphisms:
                raise MalformedCategory(f"composition ({f!r}, {g!r}) mentions an unknown morphism")
            if self.target(f) != self.source(g):
                raise MalformedCategory(f"composition ({f!r}, {g!r}) defined on a non-composable pair")
            if self.morphisms[h] != (self.source(f), self.target(g)):
                raise MalformedCategory(f"composite of ({f!r}, {g!r}) has the wrong endpoints")
        for f in self.morphisms:
            for g in self.out_of(self.target(f)):
                if (f, g) not in self.table:
                    raise MalformedCategory(f"composition ({f!r}, {g!r}) is missing")

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<FinCategory{label}: {len(self.objects)} objects, {len(self.morphisms)} morphisms>"

    def __contains__(self, f):
        return f in self.morphisms

    def source(self, f):
        try:
            return self.morphisms[f][0]
        except KeyError:
            raise UnknownMorphism(f) from None

    def target(self, f):
        try:
            return self.morphisms[f][1]
        except KeyError:
            raise UnknownMorphism(f) from None

    def hom(self, a, b):
        return self._homs.get((a, b), ())

    def out_of(self, a):
        for b in self.objects:
            yield from self.hom(a, b)

    def into(self, b):
        for a in self.objects:
            yield from self.hom(a, b)

    def compose(self, f, g):
        if self.target(f) != self.source(g):
            raise NonComposable(0, f, g)
        return self.table[(f, g)]


def compose_path(cat, path):
    """Fold a path of morphism ids left to right."""
    if not path:
        raise ValueError("empty path")
    result = path[0]
    cat.source(result)
    for i, g in enumerate(path[1:]):
        if cat.target(path[i]) != cat.source(g):
            raise NonComposable(i, path[i], g)
        result = cat.compose(result, g)
    return result


# --- categories from concrete arrows --------------------------------------


class _ConcreteTable(Mapping):
    """Composition table computed on demand from concrete arrows."""

    def __init__(self, morphisms, arrows, ids, compose_fn, homs_out):
        self._morphisms = morphisms
        self._arrows = arrows
        self._ids = ids
        self._compose = compose_fn
        self._homs_out = homs_out
        self._memo = {}

    def __getitem__(self, key):
        try:
            return self._memo[key]
        except KeyError:
            pass
        f, g = key
        if f not in self._morphisms or g not in self._morphisms:
            raise KeyError(key)
        (s, mid), (mid2, t) = self._morphisms[f], self._morphisms[g]
        if mid != mid2:
            raise KeyError(key)
        value = self._compose(self._arrows[f], self._arrows[g])
        try:
            h = self._ids[(s, t, value)]
        except KeyError:
            raise MalformedCategory(f"composite of {f!r} and {g!r} is not among the arrows {s!r} -> {t!r}") from None
        self._memo[key] = h
        return h

    def __iter__(self):
        for f, (_, t) in self._morphisms.items():
            for g in self._homs_out[t]:
                yield (f, g)

    def __len__(self):
        return sum(len(self._homs_out[t]) for _, t in self._morphisms.values())


def concrete_category(objects, homs, compose_fn, identity_fn, *, label=None, name=None):
    """Build a category whose morphisms are concrete hashable arrows.

    ``homs[(a, b)]`` lists the arrows a -> b; equal arrows are interned to one
    id.  ``compose_fn(x, y)`` is "x then y".  Returns ``(category, arrows)``
    where ``arrows`` maps ids back to the concrete arrows.
    """
    objects = list(objects)
    if label is None:
        def label(a, b, k, arrow):
            return f"{a}->{b}#{k}"
    morphisms, arrows, ids = {}, {}, {}
    homs_out = defaultdict(list)
    for a in objects:
        for b in objects:
            for arrow in homs.get((a, b), ()):
                if (a, b, arrow) in ids:
                    continue
                mid = label(a, b, len(homs_out[(a, b)]), arrow)
                if mid in morphisms:
                    raise MalformedCategory(f"duplicate morphism id {mid!r}")
                morphisms[mid] = (a, b)
                arrows[mid] = arrow
                ids[(a, b, arrow)] = mid
                homs_out[(a, b)].append(mid)
    identity = {}
    for a in objects:
        key = (a, a, identity_fn(a))
        if key not in ids:
            raise MalformedCategory(f"identity arrow of {a!r} is missing from hom({a!r}, {a!r})")
        identity[a] = ids[key]
    out_of = defaultdict(list)
    for (a, _), fs in homs_out.items():
        out_of[a].extend(fs)
    table = _ConcreteTable(morphisms, arrows, ids, compose_fn, out_of)
    return FinCategory(objects, morphisms, identity, table, name=name), arrows


def finset_category(sets, *, name="FinSet"):
    """The full category on a family of finite sets.

    ``sets`` maps object names to iterables of elements.  Morphism ids are
    triples ``(a, b, images)`` where ``images`` lists the image of each
    element of ``a`` in sorted order, so equal functions share one id.
    """
    carriers = {a: tuple(sorted_labels(set(xs))) for a, xs in sets.items()}
    morphisms = {}
    homs_out = defaultdict(list)
    for a, xs in carriers.items():
        for b, ys in carriers.items():
            for images in itertools.product(ys, repeat=len(xs)):
                f = (a, b, images)
                morphisms[f] = (a, b)
                homs_out[a].append(f)
    identity = {a: (a, a, xs) for a, xs in carriers.items()}
    index = {a: {x: i for i, x in enumerate(xs)} for a, xs in carriers.items()}
    table = _FinSetTable(morphisms, index, homs_out)
    return FinCategory(list(carriers), morphisms, identity, table, name=name)


class _FinSetTable(Mapping):
    def __init__(self, morphisms, index, homs_out):
        self._morphisms = morphisms
        self._index = index
        self._homs_out = homs_out

    def __getitem__(self, key):
        f, g = key
        if f not in self._morphisms or g not in self._morphisms or f[1] != g[0]:
            raise KeyError(key)
        pos = self._index[f[1]]
        return (f[0], g[1], tuple(g[2][pos[y]] for y in f[2]))

    def __iter__(self):
        for f in self._morphisms:
            for g in self._homs_out[f[1]]:
                yield (f, g)

    def __len__(self):
        return sum(len(self._homs_out[f[1]]) for f in self._morphisms)


def finset_morphism(cat, a, b, mapping):
    """Id of the function ``mapping`` from ``a`` to ``b`` in a finite-set category."""
    images = tuple(mapping[x] for x in cat.identity[a][2])
    f = (a, b, images)
    if f not in cat.morphisms:
        raise UnknownMorphism(f)
    return f


def finset_function(cat, f):
    """The ``{element: image}`` dict underlying a finite-set morphism id."""
    return dict(zip(cat.identity[f[0]][2], f[2]))


# --- monomorphisms and epimorphisms ---------------------------------------


def mono_witness(cat, f):
    """A pair ``(g, h)`` with g != h and g;f == h;f, or None if f is monic."""
    src = cat.source(f)
    for c in cat.objects:
        seen = {}
        for g in cat.hom(c, src):
            k = cat.compose(g, f)
            if k in seen:
                return seen[k], g
            seen[k] = g
    return None


def epi_witness(cat, f):
    """A pair ``(g, h)`` with g != h and f;g == f;h, or None if f is epic."""
    tgt = cat.target(f)
    for c in cat.objects:
        seen = {}
        for g in cat.hom(tgt, c):
            k = cat.compose(f, g)
            if k in seen:
                return seen[k], g
            seen[k] = g
    return None


def is_monomorphism(cat, f) -> bool:
    return mono_witness(cat, f) is None


def is_epimorphism(cat, f) -> bool:
    return epi_witness(cat, f) is None


def mono_preceq(cat, f, g) -> bool:
    """Whether f factors through g, i.e. f == compose(h, g) for some h.

    Both arguments must be monomorphisms into the same object.
    """
    for m in (f, g):
        if not is_monomorphism(cat, m):
            raise NotMono(m)
    if cat.target(f) != cat.target(g):
        raise TargetMismatch(f"{f!r} and {g!r} have different targets")
    return any(cat.compose(h, g) == f for h in cat.hom(cat.source(f), cat.source(g)))


def mono_equiv(cat, f, g) -> bool:
    return mono_preceq(cat, f, g) and mono_preceq(cat, g, f)


# --- preorders --------------------------------------------------------------


@dataclass(frozen=True)
class QuasiOrder:
    carrier: frozenset
    relation: frozenset

    def __post_init__(self):
        object.__setattr__(self, "carrier", frozenset(self.carrier))
        object.__setattr__(self, "relation", frozenset(tuple(p) for p in self.relation))

    def validate(self):
        for x in sorted_labels(self.carrier):
            if (x, x) not in self.relation:
                raise NotReflexive(x)
        for a, b in self.relation:
            if a not in self.carrier or b not in self.carrier:
                raise ValueError(f"pair ({a!r}, {b!r}) leaves the carrier")
        for a, b in self.relation:
            for b2, c in self.relation:
                if b == b2 and (a, c) not in self.relation:
                    raise NotTransitive(a, b, c)
        return self

    def is_antisymmetric(self) -> bool:
        return all(a == b or (b, a) not in self.relation for a, b in self.relation)

    @classmethod
    def closure(cls, carrier, pairs):
        """Reflexive-transitive closure of ``pairs`` on ``carrier``."""
        rel = {(x, x) for x in carrier} | {tuple(p) for p in pairs}
        changed = True
        while changed:
            extra = {(a, c) for a, b in rel for b2, c in rel if b == b2} - rel
            rel |= extra
            changed = bool(extra)
        return cls(frozenset(carrier), frozenset(rel))


def preorder_category(q: QuasiOrder) -> FinCategory:
    """One object per element and one morphism ``(x, y)`` per related pair."""
    q.validate()
    objects = sorted_labels(q.carrier)
    morphisms = {(a, b): (a, b) for a, b in q.relation}
    identity = {x: (x, x) for x in objects}
    table = {((a, b), (b2, c)): (a, c) for a, b in q.relation for b2, c in q.relation if b == b2}
    return FinCategory(objects, morphisms, identity, table, name="preorder")


def is_strict_preorder(cat) -> bool:
    return _strictness_witness(cat, cat.morphisms) is None


def _strictness_witness(cat, morphisms):
    homs = defaultdict(list)
    for f in morphisms:
        homs[(cat.source(f), cat.target(f))].append(f)
    for key in homs:
        if len(homs[key]) > 1:
            return {"kind": "parallel", "morphisms": homs[key][:2]}
    for (a, b), fs in homs.items():
        if a != b and (b, a) in homs:
            return {"kind": "antisymmetry", "morphisms": [fs[0], homs[(b, a)][0]]}
    return None


# --- choices of subobjects ------------------------------------------------


@dataclass(frozen=True)
class SubobjectChoice:
    category: FinCategory
    included: frozenset

    def __post_init__(self):
        object.__setattr__(self, "included", frozenset(self.included))

    def check_subcategory(self):
        cat, P = self.category, self.included
        for f in P:
            if f not in cat:
                raise MalformedChoice(f"{f!r} is not a morphism of the category")
        for f in P:
            for end in (cat.source(f), cat.target(f)):
                if cat.identity[end] not in P:
                    raise MalformedChoice(f"{f!r} is included but the identity of {end!r} is not")
        for f in P:
            for g in P:
                if cat.target(f) == cat.source(g) and cat.compose(f, g) not in P:
                    raise MalformedChoice(f"composite of {f!r} and {g!r} is not included")
        return self


def verify_subobject_choice(choice: SubobjectChoice, task="subobject_choice") -> VerificationReport:
    """Check the three axioms of a choice of subobjects.

    (a) the chosen morphisms form a strict preorder containing every
    identity; (b) each chosen morphism is monic in the whole category;
    (c) whenever f = h;g with f, g chosen, h is chosen.  All three are
    evaluated and reported, each with its first counterexample.
    """
    choice.check_subcategory()
    cat, P = choice.category, choice.included
    report = VerificationReport(task)

    witness = _strictness_witness(cat, sorted(P, key=repr))
    if witness is None:
        for a in cat.objects:
            if cat.identity[a] not in P:
                witness = {"kind": "missing_identity", "object": a}
                break
    report.add("axiom_a", witness is None, witness,
               "chosen morphisms form a strict preorder spanning every object")

    bad = []
    for f in sorted(P, key=repr):
        pair = mono_witness(cat, f)
        if pair is not None:
            bad.append({"morphism": f, "pair": list(pair)})
    report.add("axiom_b", not bad, bad[0] if bad else None,
               f"{len(P) - len(bad)} of {len(P)} chosen morphisms are monic")

    witness, violations = None, 0
    chosen_into = defaultdict(list)
    for f in sorted(P, key=repr):
        chosen_into[cat.target(f)].append(f)
    for fs in chosen_into.values():
        for f in fs:
            for g in fs:
                for h in cat.hom(cat.source(f), cat.source(g)):
                    if h not in P and cat.compose(h, g) == f:
                        violations += 1
                        if witness is None:
                            witness = {"f": f, "g": g, "h": h}
    report.add("axiom_c", witness is None, witness,
               "factorizations through chosen morphisms stay chosen"
               + (f" ({violations} violations)" if violations else ""))
    return report


def check_category_laws(cat, task="category_laws") -> VerificationReport:
    """Exhaustive audit of typing, identity and associativity laws."""
    report = VerificationReport(task)
    witness = None
    for f in cat.morphisms:
        for g in cat.morphisms:
            composable = cat.target(f) == cat.source(g)
            try:
                h = cat.table[(f, g)]
            except KeyError:
                h = None
            if composable and (h is None or cat.morphisms.get(h) != (cat.source(f), cat.target(g))):
                witness = {"pair": [f, g], "problem": "composite missing or mistyped"}
            elif not composable and h is not None:
                witness = {"pair": [f, g], "problem": "composite defined on a non-composable pair"}
            if witness:
                break
        if witness:
            break
    report.add("typing", witness is None, witness)
    if witness is not None:
        report.skip("identity_laws", "typing failed")
        report.skip("associativity", "typing failed")
        return report

    witness = None
    for f in cat.morphisms:
        s, t = cat.morphisms[f]
        if cat.compose(cat.identity[s], f) != f or cat.compose(f, cat.identity[t]) != f:
            witness = {"morphism": f}
            break
    report.add("identity_laws", witness is None, witness)

    witness = None
    for f in cat.morphisms:
        for g in cat.out_of(cat.target(f)):
            fg = cat.compose(f, g)
            for h in cat.out_of(cat.target(g)):
                if cat.compose(fg, h) != cat.compose(f, cat.compose(g, h)):
                    witness = {"triple": [f, g, h]}
                    break
            if witness:
                break
        if witness:
            break
    report.add("associativity", witness is None, witness)
    return report


def category_from_json(payload) -> FinCategory:
    """Build a category from the explicit ``category`` document payload."""
    morphisms = {m["id"]: (m["source"], m["target"]) for m in payload["morphisms"]}
    table = {(f, g): h for f, g, h in payload["compose"]}
    return FinCategory(payload["objects"], morphisms, payload["identities"], table,
                       name=payload.get("name"))
