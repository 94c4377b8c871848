import random

import pytest
from hypothesis import given, settings, strategies as st

from bunchain.bundle import FinMap, identity_morphism, make_bundle, product_bundle, restrict_bundle
from bunchain.chains import (
    compose_chain_morphisms,
    fibre_chain,
    identity_chain_morphism,
    is_subchain,
    make_chain,
    probe_subchain_sufficiency,
    subchain_inclusion,
    validate_chain_morphism,
    verify_chaincat_subobject_axioms,
)
from bunchain.errors import (
    BasePointMissing,
    ConstructionCostOverflow,
    LadderFails,
    LengthMismatch,
    LinkSquareFails,
    NotComposable,
    NotNested,
    NotSubchain,
)
from bunchain.sampling import random_bundle, random_chain, random_chain_morphism, random_restriction


def mod_bundle(n_base):
    labels = [str(i) for i in range(180)]
    return make_bundle(labels, [str(i) for i in range(n_base)], {z: str(int(z) % n_base) for z in labels})


def z180_chain():
    orders = [180, 45, 9, 1]
    bundles = [mod_bundle(n) for n in orders]
    links = [(FinMap.identity(x.total), {b: str(int(b) % n) for b in x.base})
             for x, n in zip(bundles, orders[1:])]
    return make_chain(bundles, links, "z180")


def restrict_chain(c, keep):
    """Restrict each stage to totals satisfying ``keep``; links restrict when images stay inside."""
    bundles = [restrict_bundle(x, {e for e in x.total if keep(e)}) for x in c.bundles]
    links = [({e: link.total_map(e) for e in x.total}, {b: link.base_map(b) for b in x.base})
             for link, x in zip(c.links, bundles)]
    return make_chain(bundles, links)


def product_chain():
    top = product_bundle("abc", [0, 1])
    return make_chain([top, top], [identity_morphism(top)], "P")


# --- construction ----------------------------------------------------------------


def test_single_bundle_chain():
    c = make_chain([product_bundle("a", [0])], [])
    assert c.length == 0


def test_z180_chain_valid():
    c = z180_chain()
    assert c.length == 3
    assert c.links[2].base_map("8") == "0"


def test_broken_link():
    x = product_bundle("ab", [0])
    u = {("a", 0): ("b", 0), ("b", 0): ("b", 0)}
    with pytest.raises(LinkSquareFails) as info:
        make_chain([x, x], [(u, FinMap.identity(x.base))])
    assert info.value.index == 0
    with pytest.raises(LengthMismatch):
        make_chain([x, x], [])


# --- chain morphisms ------------------------------------------------------------------


def test_identity_morphism_valid():
    c = z180_chain()
    m = validate_chain_morphism(c, c, [(FinMap.identity(x.total), FinMap.identity(x.base)) for x in c.bundles])
    assert m == identity_chain_morphism(c)


def test_restriction_inclusion_into_z180():
    c = z180_chain()
    sub = restrict_chain(c, lambda e: int(e) % 2 == 0)
    assert is_subchain(sub, c)
    inc = subchain_inclusion(sub, c)
    assert all(comp.total_map.is_injective() for comp in inc.components)


def test_inconsistent_permutation_is_ladder_failure():
    x = product_bundle("a", [0, 1])
    c = make_chain([x, x], [identity_morphism(x)])
    flip = {("a", 0): ("a", 1), ("a", 1): ("a", 0)}
    comps = [(flip, FinMap.identity(x.base)), (FinMap.identity(x.total), FinMap.identity(x.base))]
    with pytest.raises(LadderFails) as info:
        validate_chain_morphism(c, c, comps)
    assert (info.value.index, info.value.level) == (0, "total")


def test_compose_chain_morphisms_examples():
    c = product_chain()
    mid = restrict_chain(c, lambda e: e[0] != "c")
    low = restrict_chain(mid, lambda e: e[0] == "a")
    i1, i2 = subchain_inclusion(low, mid), subchain_inclusion(mid, c)
    assert compose_chain_morphisms(i1, i2) == subchain_inclusion(low, c)
    assert compose_chain_morphisms(i1, identity_chain_morphism(mid)) == i1
    with pytest.raises(NotComposable):
        compose_chain_morphisms(i1, i1)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31), st.integers(1, 3))
def test_composites_revalidate(seed, stages):
    rng = random.Random(seed)
    c, d, e = (random_chain(rng, stages, tag=t) for t in "cde")
    m, n = random_chain_morphism(rng, c, d), random_chain_morphism(rng, d, e)
    if m is None or n is None:
        return
    out = compose_chain_morphisms(m, n)
    assert validate_chain_morphism(c, e, out.components) == out


# --- subchains ---------------------------------------------------------------------------


def test_subchain_examples():
    c = product_chain()
    sub = restrict_chain(c, lambda e: e[0] == "a")
    assert is_subchain(c, c) and is_subchain(sub, c)
    assert subchain_inclusion(c, c) == identity_chain_morphism(c)
    # same stages, but the link sends (a,0) to (a,1): disagrees with the identity link of c
    x = sub.bundles[0]
    twisted = make_chain([x, x], [({("a", 0): ("a", 1), ("a", 1): ("a", 1)}, FinMap.identity(x.base))])
    assert not is_subchain(twisted, c)
    with pytest.raises(NotSubchain):
        subchain_inclusion(twisted, c)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31))
def test_subchain_partial_order(seed):
    rng = random.Random(seed)
    c = random_chain(rng, 2, 4, 2)
    family = [c]
    for _ in range(3):
        keep = {e for x in family[-1].bundles for e in x.total if rng.random() < 0.7}
        try:
            family.append(restrict_chain(family[-1], keep.__contains__))
        except LinkSquareFails:
            break
    for x in family:
        assert is_subchain(x, x)
        for y in family:
            if is_subchain(x, y) and is_subchain(y, x):
                assert x == y
            for z in family:
                if is_subchain(x, y) and is_subchain(y, z):
                    assert is_subchain(x, z)


# --- the chain category -------------------------------------------------------------------


def test_single_chain_family():
    assert verify_chaincat_subobject_axioms([product_chain()]).passed


def test_three_nested_restrictions():
    c = product_chain()
    mid = restrict_chain(c, lambda e: e[0] != "c")
    low = restrict_chain(mid, lambda e: e == ("a", 0))
    report = verify_chaincat_subobject_axioms([c, mid, low])
    assert report.passed, report.failures()
    assert report["factorization_closure"].verdict == "pass"


def test_family_errors():
    x = product_bundle("a", [0])
    with pytest.raises(LengthMismatch):
        verify_chaincat_subobject_axioms([make_chain([x], []), make_chain([x, x], [identity_morphism(x)])])
    with pytest.raises(ConstructionCostOverflow):
        verify_chaincat_subobject_axioms([product_chain()], cap=10)


# --- fibre chains ------------------------------------------------------------------------------


def test_fibre_chain_examples():
    x = product_bundle("a", [0, 1])
    assert fibre_chain([x], "a").stages == (x.total,)
    small = restrict_bundle(x, {("a", 0)})
    fc = fibre_chain([small, x], "a")
    assert fc.stages == (frozenset({("a", 0)}), x.total)
    assert fc.links[0].is_injective()
    with pytest.raises(BasePointMissing):
        fibre_chain([x], "z")
    with pytest.raises(NotNested):
        fibre_chain([x, small], "a")


def test_fibre_chains_over_distinct_points_are_incomparable():
    # fibres over different base points are disjoint, so no stage includes into the other
    x = make_bundle(["a0", "a1", "b0"], ["a", "b"], {"a0": "a", "a1": "a", "b0": "b"})
    over_a, over_b = fibre_chain([x], "a"), fibre_chain([x], "b")
    assert over_a.stages[0].isdisjoint(over_b.stages[0])
    assert not any(s <= t or t <= s for s in over_a.stages for t in over_b.stages)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31))
def test_fibre_chain_restriction_coherence(seed):
    rng = random.Random(seed)
    family = [random_bundle(rng, 10, 4)]
    for _ in range(rng.randint(0, 4)):
        family.append(random_restriction(rng, family[-1]))
    family.reverse()  # ascending
    for b in family[0].base:
        fc = fibre_chain(family, b)
        top = fc.stages[-1]
        for stage, x in zip(fc.stages, family):
            assert stage == top & x.total


# --- sufficiency probe -----------------------------------------------------------------------------


def test_probe_zero_samples():
    report = probe_subchain_sufficiency(0)
    assert (report.samples, report.holds, report.fails) == (0, 0, 0)


def test_probe_identity_chains_hold():
    report = probe_subchain_sufficiency(100, seed=3, mode="identity")
    assert report.samples == 100 and report.fails == 0


def test_probe_is_deterministic():
    a = probe_subchain_sufficiency(200, seed=11)
    b = probe_subchain_sufficiency(200, seed=11)
    assert a.to_json() == b.to_json()
    assert a.holds + a.fails == 200
