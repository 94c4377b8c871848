"""Turn schema-valid task payloads into domain objects.

Every loader takes the JSON path of the value it reads and raises
:class:`MalformedDocument` with that path when the content is semantically
wrong (a partial projection, an ill-defined homomorphism, an unparsable
polynomial, ...).
"""

from __future__ import annotations

from contextlib import contextmanager
from fractions import Fraction

from .bundle import Bundle, FinGroup, FinMap, GroupAction, make_bundle
from .errors import BunchainError, MalformedDocument
from .exact import AbHom, FinAbGroup, GradedSequence
from .jets import MorphismSpec, PolySection
from .poly import parse


@contextmanager
def at(path):
    """Re-raise library errors as MalformedDocument located at ``path``."""
    try:
        yield
    except MalformedDocument:
        raise
    except (BunchainError, ValueError, ZeroDivisionError) as exc:
        raise MalformedDocument(path, str(exc)) from None


def load_set(value, path) -> frozenset:
    if isinstance(value, dict):
        return frozenset(str(i) for i in range(value["range"]))
    if len(set(value)) != len(value):
        raise MalformedDocument(path, "repeated label")
    return frozenset(value)


def _as_int(label, path):
    try:
        return int(label)
    except ValueError:
        raise MalformedDocument(path, f"rule needs integer labels, got {label!r}") from None


def load_map(value, domain, codomain, path) -> FinMap:
    rule = value.get("rule")
    if rule == "identity":
        mapping = {x: x for x in domain}
    elif rule == "mod":
        n = value["modulus"]
        mapping = {x: str(_as_int(x, path) % n) for x in domain}
    elif rule == "constant":
        mapping = {x: value["value"] for x in domain}
    else:
        mapping = dict(value)
    with at(path):
        return FinMap(domain, codomain, mapping)


def load_bundle(value, path) -> Bundle:
    total = load_set(value["total"], f"{path}.total")
    base = load_set(value["base"], f"{path}.base")
    projection = load_map(value["projection"], total, base, f"{path}.projection")
    with at(path):
        return make_bundle(total, base, projection, value.get("name"))


def load_bundles(values, path) -> list:
    return [load_bundle(v, f"{path}[{i}]") for i, v in enumerate(values)]


def load_link(value, src: Bundle, dst: Bundle, path):
    """The pair (total map, base map); squares are checked by the caller."""
    u = load_map(value["total_map"], src.total, dst.total, f"{path}.total_map")
    f = load_map(value["base_map"], src.base, dst.base, f"{path}.base_map")
    return u, f


def load_group(value, path) -> FinGroup:
    if "cyclic" in value:
        return FinGroup.cyclic(value["cyclic"])
    elements, table = value["elements"], value["table"]
    if len(table) != len(elements) or any(len(row) != len(elements) for row in table):
        raise MalformedDocument(f"{path}.table", "table must be square over the elements")
    known = set(elements)
    for i, row in enumerate(table):
        for j, v in enumerate(row):
            if v not in known:
                raise MalformedDocument(f"{path}.table[{i}][{j}]", f"{v!r} is not a group element")
    if value["identity"] not in known:
        raise MalformedDocument(f"{path}.identity", "identity is not a group element")
    pairs = {(g, h): table[i][j] for i, g in enumerate(elements) for j, h in enumerate(elements)}
    return FinGroup.from_table(elements, pairs, value["identity"])


def load_action(value, bundle: Bundle, path) -> GroupAction:
    group = load_group(value["group"], f"{path}.group")
    if value.get("rule") == "add_mod":
        n, step = value["modulus"], value["step"]
        for x in bundle.total:
            _as_int(x, path)

        def act(x, g):
            return str((int(x) + step * int(g)) % n)
    else:
        images = value["images"]
        index = {g: i for i, g in enumerate(group.elements)}
        for x in bundle.total:
            row = images.get(x)
            if row is None or len(row) != len(group.elements):
                raise MalformedDocument(f"{path}.images", f"{x!r} needs one image per group element")

        def act(x, g):
            return images[x][index[g]]
    return GroupAction(group, bundle.total, act)


def load_abgroup(value) -> FinAbGroup:
    return FinAbGroup(tuple(value))


def load_hom(value, source, target, path) -> AbHom:
    with at(path):
        return AbHom(source, target, value["matrix"], value.get("role"))


def load_sequence(value, path) -> GradedSequence:
    groups = [load_abgroup(g) for g in value["groups"]]
    maps = value["maps"]
    if len(maps) != len(groups) - 1:
        raise MalformedDocument(f"{path}.maps", f"{len(groups)} groups need {len(groups) - 1} maps")
    homs = [load_hom(m, groups[k], groups[k + 1], f"{path}.maps[{k}]") for k, m in enumerate(maps)]
    with at(path):
        return GradedSequence(groups, homs)


def load_verticals(values, top, bottom, path) -> list:
    if len(values) != len(top.groups) or len(top.groups) != len(bottom.groups):
        raise MalformedDocument(path, "ladder rows and verticals must have equal lengths")
    return [load_hom(v, top.groups[k], bottom.groups[k], f"{path}[{k}]") for k, v in enumerate(values)]


def load_rational(value, path) -> Fraction:
    with at(path):
        return Fraction(value)


def load_point(values, m, path) -> tuple:
    if len(values) != m:
        raise MalformedDocument(path, f"expected {m} coordinates")
    return tuple(load_rational(v, f"{path}[{i}]") for i, v in enumerate(values))


def load_section(text, m, path) -> PolySection:
    with at(path):
        return PolySection.parse(text, m)


def load_spec(value, m, path) -> MorphismSpec:
    A = [[load_rational(v, f"{path}.A[{i}][{j}]") for j, v in enumerate(row)]
         for i, row in enumerate(value["A"])]
    b = load_point(value["b"], m, f"{path}.b")
    with at(f"{path}.fibre_map"):
        fibre = parse(value["fibre_map"], MorphismSpec.fibre_variables(m))
    with at(path):
        return MorphismSpec(m, A, b, fibre)
