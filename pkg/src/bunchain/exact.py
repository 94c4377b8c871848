"""Finite abelian groups, homomorphisms, exactness and ladders of sequences.

Groups are products of cyclic groups ``Z/n_1 x ... x Z/n_k``; elements are
residue tuples.  Homomorphisms are integer matrices acting on residues.
Kernels and images are found by enumeration, so every group involved must
stay small (see ``MAX_ORDER``).

Sequences are finite windows listed from the highest grade down::

    G_m --d_m--> G_{m-1} --> ... --d_1--> G_0

so ``groups[k]`` is ``G_{m-k}`` and ``maps[k]`` goes ``groups[k] -> groups[k+1]``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .errors import (
    BoundaryPosition,
    ElementOutOfRange,
    GroupTooLarge,
    IllDefinedHom,
    ShapeMismatch,
)
from .report import VerificationReport

MAX_ORDER = 10 ** 5


@dataclass(frozen=True)
class FinAbGroup:
    factors: tuple

    def __post_init__(self):
        factors = tuple(int(n) for n in self.factors)
        if any(n < 1 for n in factors):
            raise ValueError("cyclic orders must be at least 1")
        object.__setattr__(self, "factors", factors)

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def zero(self) -> tuple:
        return (0,) * len(self.factors)

    def elements(self):
        if self.order > MAX_ORDER:
            raise GroupTooLarge(f"group of order {self.order} exceeds {MAX_ORDER}")
        return itertools.product(*(range(n) for n in self.factors))

    def contains(self, x) -> bool:
        return len(x) == len(self.factors) and all(0 <= a < n for a, n in zip(x, self.factors))

    def add(self, x, y):
        return tuple((a + b) % n for a, b, n in zip(x, y, self.factors))

    def neg(self, x):
        return tuple(-a % n for a, n in zip(x, self.factors))

    def __str__(self):
        return " x ".join(f"Z/{n}" for n in self.factors) or "0"


def cyclic(n) -> FinAbGroup:
    return FinAbGroup((n,))


TRIVIAL = FinAbGroup(())


@dataclass(frozen=True)
class AbHom:
    """``x -> M x`` reduced factorwise; ``matrix[i][j]`` maps source factor j to target factor i."""

    source: FinAbGroup
    target: FinAbGroup
    matrix: tuple
    role: str | None = None

    def __post_init__(self):
        matrix = tuple(tuple(int(v) for v in row) for row in self.matrix)
        object.__setattr__(self, "matrix", matrix)
        if len(matrix) != len(self.target.factors) or any(len(r) != len(self.source.factors) for r in matrix):
            raise ShapeMismatch("matrix shape must be (target factors) x (source factors)")
        for i, nt in enumerate(self.target.factors):
            for j, ns in enumerate(self.source.factors):
                if matrix[i][j] * ns % nt:
                    raise IllDefinedHom(
                        f"entry ({i}, {j}) = {matrix[i][j]} does not respect orders Z/{ns} -> Z/{nt}")

    @classmethod
    def zero(cls, source, target, role=None):
        return cls(source, target, tuple((0,) * len(source.factors) for _ in target.factors), role)

    @classmethod
    def identity(cls, group, role=None):
        k = len(group.factors)
        return cls(group, group, tuple(tuple(int(i == j) for j in range(k)) for i in range(k)), role)

    def __call__(self, x):
        return hom_apply(self, x)

    def then(self, other: AbHom) -> AbHom:
        """Diagrammatic composite: ``self`` first."""
        if self.target != other.source:
            raise ShapeMismatch("composable homomorphisms must share the middle group")
        prod = tuple(
            tuple(sum(other.matrix[i][k] * self.matrix[k][j] for k in range(len(self.target.factors)))
                  for j in range(len(self.source.factors)))
            for i in range(len(other.target.factors)))
        return AbHom(self.source, other.target, prod)

    def to_json(self):
        out = {"source": list(self.source.factors), "target": list(self.target.factors),
               "matrix": [list(r) for r in self.matrix]}
        if self.role:
            out["role"] = self.role
        return out


def hom_apply(h: AbHom, x) -> tuple:
    x = tuple(x)
    if not h.source.contains(x):
        raise ElementOutOfRange(f"{x} is not an element of {h.source}")
    return tuple(sum(m * a for m, a in zip(row, x)) % n for row, n in zip(h.matrix, h.target.factors))


def kernel(h: AbHom) -> frozenset:
    zero = h.target.zero
    out = frozenset(x for x in h.source.elements() if hom_apply(h, x) == zero)
    assert h.source.zero in out
    return out


def image(h: AbHom) -> frozenset:
    out = frozenset(hom_apply(h, x) for x in h.source.elements())
    assert h.target.zero in out
    return out


def is_subgroup(group: FinAbGroup, subset) -> bool:
    subset = set(subset)
    return (group.zero in subset
            and all(group.add(x, y) in subset for x in subset for y in subset)
            and all(group.neg(x) in subset for x in subset))


@dataclass(frozen=True)
class GradedSequence:
    groups: tuple
    maps: tuple

    def __post_init__(self):
        object.__setattr__(self, "groups", tuple(self.groups))
        object.__setattr__(self, "maps", tuple(self.maps))
        if len(self.maps) != max(len(self.groups) - 1, 0):
            raise ShapeMismatch(f"{len(self.groups)} groups need {len(self.groups) - 1} maps")
        for k, d in enumerate(self.maps):
            if d.source != self.groups[k] or d.target != self.groups[k + 1]:
                raise ShapeMismatch(f"map {k} does not connect groups {k} and {k + 1}")

    @property
    def top(self) -> int:
        """Grade of the first group."""
        return len(self.groups) - 1

    def group(self, grade):
        return self.groups[self.top - grade]

    def outgoing(self, grade) -> AbHom:
        """The map out of ``G_grade``."""
        return self.maps[self.top - grade]

    @classmethod
    def from_maps(cls, maps):
        maps = list(maps)
        return cls([maps[0].source] + [d.target for d in maps], maps)


def is_exact_at(seq: GradedSequence, i) -> bool:
    """``kernel(d_i) == image(d_{i+1})`` at an interior grade ``1 <= i <= top - 1``."""
    if not 1 <= i <= seq.top - 1:
        raise BoundaryPosition(f"grade {i} lacks an incoming or outgoing map")
    return kernel(seq.outgoing(i)) == image(seq.outgoing(i + 1))


def is_exact(seq: GradedSequence, task="exactness") -> VerificationReport:
    report = VerificationReport(task)
    for i in range(seq.top, -1, -1):
        name = f"exact_at[{i}]"
        if not 1 <= i <= seq.top - 1:
            report.skip(name, "boundary, not checked")
            continue
        ker, im = kernel(seq.outgoing(i)), image(seq.outgoing(i + 1))
        witness = None
        if ker != im:
            witness = {"grade": i, "kernel": sorted(ker), "image": sorted(im)}
        report.add(name, witness is None, witness, f"{seq.group(i)}")
    return report


@dataclass(frozen=True)
class SequenceLadder:
    """Vertical maps ``top.groups[k] -> bottom.groups[k]`` between two sequences."""

    top: GradedSequence
    bottom: GradedSequence
    verticals: tuple

    def __post_init__(self):
        object.__setattr__(self, "verticals", tuple(self.verticals))
        if len(self.top.groups) != len(self.bottom.groups) or len(self.verticals) != len(self.top.groups):
            raise ShapeMismatch("ladder rows and verticals must have equal lengths")
        for k, v in enumerate(self.verticals):
            if v.source != self.top.groups[k] or v.target != self.bottom.groups[k]:
                raise ShapeMismatch(f"vertical {k} has the wrong source or target")


def square_witness(top_map, down_before, down_after, bottom_map):
    """First x where down_before;bottom_map and top_map;down_after differ."""
    for x in top_map.source.elements():
        left = hom_apply(bottom_map, hom_apply(down_before, x))
        right = hom_apply(down_after, hom_apply(top_map, x))
        if left != right:
            return {"element": list(x), "down_then_across": list(left), "across_then_down": list(right)}
    return None


def validate_ladder(ladder: SequenceLadder, task="ladder") -> VerificationReport:
    """Commutativity of every square; squares on maps with role "boundary" are also summarized."""
    report = VerificationReport(task)
    top, bottom, V = ladder.top, ladder.bottom, ladder.verticals
    boundary = []
    for k, d in enumerate(top.maps):
        grade = top.top - k
        witness = square_witness(d, V[k], V[k + 1], bottom.maps[k])
        is_boundary = d.role == "boundary" or bottom.maps[k].role == "boundary"
        report.add(f"square[{grade}]", witness is None, witness,
                   "boundary square" if is_boundary else None)
        if is_boundary:
            boundary.append(witness is None)
    if boundary:
        report.add("boundary_compatibility", all(boundary), None,
                   f"{sum(boundary)} of {len(boundary)} boundary squares commute")
    else:
        report.skip("boundary_compatibility", "no map is marked as a boundary map")
    return report


def compose_ladders(l1: SequenceLadder, l2: SequenceLadder) -> SequenceLadder:
    if l1.bottom != l2.top:
        raise ShapeMismatch("bottom row of the first ladder must be the top row of the second")
    return SequenceLadder(l1.top, l2.bottom, [a.then(b) for a, b in zip(l1.verticals, l2.verticals)])


def is_injective(h: AbHom) -> bool:
    return kernel(h) == {h.source.zero}


def is_subsequence(inner: GradedSequence, outer: GradedSequence, embeddings) -> bool:
    """Whether levelwise ``embeddings`` exhibit ``inner`` as a subsequence of ``outer``.

    Each embedding must be injective and commute with the connecting maps.
    """
    ladder = SequenceLadder(inner, outer, embeddings)
    for g, h in zip(inner.groups, outer.groups):
        if len(g.factors) != len(h.factors) or any(n % m for m, n in zip(g.factors, h.factors)):
            raise ShapeMismatch(f"{g} is not a factorwise sub-order group of {h}")
    if not all(is_injective(e) for e in ladder.verticals):
        return False
    return validate_ladder(ladder).passed
