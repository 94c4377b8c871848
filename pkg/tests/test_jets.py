import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from bunchain.errors import OrderTooHigh, SingularBaseMap
from bunchain.jets import (
    LITERATURE_COORDS_M2K2,
    LITERATURE_ORDER_M2K2,
    Jet,
    MorphismSpec,
    PolySection,
    compose_specs,
    curve_probe,
    equivalent_to_order,
    jet_chain_descriptor,
    jet_coordinates,
    jet_of,
    multi_indices,
    project,
    prolong,
    prolong_section,
    taylor_polynomial,
    taylor_section,
    transform_section,
)
from bunchain.poly import parse
from bunchain.sampling import random_jet, random_point, random_section, random_spec, vanishing_perturbation
from oracles import finite_difference_jet, numeric_function, sympy_jet

F = Fraction


def sec(text, m):
    return PolySection.parse(text, m)


# --- jets and projections ------------------------------------------------------------


def test_constant_jet():
    j = jet_of(sec("7", 2), (3, -1), 2)
    assert j.value == 7 and all(v == 0 for v in j.values[1:])


def test_worked_example():
    j = jet_of(sec("x^2*y", 2), (1, 2), 2)
    assert j.values == (2, 4, 1, 4, 2, 0)
    assert j.coordinates() == {"u": 2, "u_x": 4, "u_y": 1, "u_xx": 4, "u_xy": 2, "u_yy": 0}
    assert len(multi_indices(2, 2)) == 6 == len(LITERATURE_COORDS_M2K2) - 2


def test_worked_example_projection():
    j = jet_of(sec("x^2*y", 2), (1, 2), 2)
    assert project(j, 1).values == (2, 4, 1)
    assert project(j, 2) == j
    assert project(project(j, 1), 0) == project(j, 0)
    with pytest.raises(OrderTooHigh):
        project(j, 3)


def test_literature_permutation():
    ours = jet_coordinates(2, 2)
    assert ours[:2] == ["x", "y"]
    fibre = ours[2:]
    assert tuple(ours[:2] + [fibre[i] for i in LITERATURE_ORDER_M2K2]) == LITERATURE_COORDS_M2K2
    assert sorted(LITERATURE_ORDER_M2K2) == list(range(6))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**31), st.integers(1, 3), st.integers(0, 3))
def test_jet_matches_sympy(seed, m, k):
    rng = random.Random(seed)
    phi = random_section(rng, m, 4)
    x = random_point(rng, m)
    assert list(jet_of(phi, x, k).values) == sympy_jet(str(phi.value), x, k)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31), st.integers(1, 2))
def test_jet_matches_finite_differences(seed, m):
    rng = random.Random(seed)
    phi = random_section(rng, m, 3)
    x = random_point(rng, m)
    exact = jet_of(phi, x, 2).values
    approx = finite_difference_jet(numeric_function(str(phi.value), m), x, 2, 1e-4)
    scale = max(1.0, *(abs(float(v)) for v in exact))
    assert all(abs(float(a) - b) <= 1e-5 * scale for a, b in zip(exact, approx))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**31), st.integers(1, 3), st.integers(0, 4))
def test_projection_coherence(seed, m, k):
    j = random_jet(random.Random(seed), m, k)
    for lo in range(k + 1):
        for mid in range(lo, k + 1):
            assert project(project(j, mid), lo) == project(j, lo)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**31), st.integers(1, 3), st.integers(0, 3))
def test_taylor_representative_reproduces_jet(seed, m, k):
    j = random_jet(random.Random(seed), m, k)
    assert jet_of(taylor_section(j), j.base_point, k) == j
    assert taylor_polynomial(j).degree() <= k


def test_jet_shape_checked():
    with pytest.raises(ValueError):
        Jet((0, 0), 1, [1, 2])


# --- equivalence and the curve probe ------------------------------------------------------


def test_equivalence_examples():
    phi, psi = sec("x^2", 1), sec("x^2 + x^3", 1)
    assert equivalent_to_order(phi, phi, 5, 3)
    assert equivalent_to_order(phi, psi, 0, 2)
    assert not equivalent_to_order(phi, psi, 0, 3)
    assert not equivalent_to_order(sec("x", 1), sec("x + 1", 1), 4, 0)


def test_curve_probe_examples():
    phi, psi = sec("x^2", 1), sec("x^2 + x^3", 1)
    assert curve_probe(phi, phi, 0, 3, trials=5).fails == 0
    assert curve_probe(phi, psi, 0, 2, trials=5).fails == 0
    report = curve_probe(phi, psi, 0, 3, trials=5)
    first = report.witnesses[0]
    assert first["trial"] == 0 and first["observable"] == "u" and first["order"] == 3
    # trial 0 runs along x + v*t, so the third derivative of t -> (v*t)^3 is 6*v^3
    v = parse(first["curve"][0], ("t",)).coefficient((1,))
    assert (first["first"], first["second"]) == ("0", str(6 * v ** 3))


def test_curve_probe_deterministic():
    phi, psi = sec("x*y", 2), sec("x*y + y^3", 2)
    a = curve_probe(phi, psi, (1, 0), 3, trials=6, seed=4)
    b = curve_probe(phi, psi, (1, 0), 3, trials=6, seed=4)
    assert a.to_json() == b.to_json()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31), st.integers(1, 2), st.integers(0, 3), st.booleans())
def test_curve_probe_agrees_with_jets(seed, m, k, perturb_low):
    rng = random.Random(seed)
    phi = random_section(rng, m, 3)
    x = random_point(rng, m)
    if perturb_low:
        alpha = rng.choice(multi_indices(m, k))
        bump = PolySection.parse("1", m).value
        for name, c, a in zip(("x", "y"), x, alpha):
            bump = bump * (PolySection.parse(name, m).value - c) ** a
        psi = PolySection(m, phi.value + F(rng.choice([1, 2, -1]), rng.choice([1, 3])) * bump)
    else:
        psi = PolySection(m, phi.value + vanishing_perturbation(rng, m, k, x))
    eq = equivalent_to_order(phi, psi, x, k)
    assert eq is not perturb_low
    assert (curve_probe(phi, psi, x, k, seed=seed).fails == 0) == eq


# --- morphisms and prolongation ---------------------------------------------------------------


def test_transform_examples():
    phi = sec("x^2", 1)
    assert transform_section(MorphismSpec.identity(1), phi) == phi
    shift = MorphismSpec.parse(1, [[1]], [1], "u")
    assert transform_section(shift, phi) == sec("x^2 - 2*x + 1", 1)
    scale = MorphismSpec.parse(1, [[2]], [0], "3*u")
    assert transform_section(scale, sec("x", 1)) == sec("3/2*x", 1)


def test_prolong_examples():
    shift = MorphismSpec.parse(1, [[1]], [1], "u")
    out = prolong(shift, jet_of(sec("x^2", 1), 0, 2))
    assert out.base_point == (1,) and out.values == (0, 0, 2)
    scale = MorphismSpec.parse(1, [[2]], [0], "3*u")
    out = prolong(scale, jet_of(sec("x", 1), 1, 1))
    assert out.base_point == (2,) and out.values == (3, F(3, 2))


def test_singular_base_map():
    with pytest.raises(SingularBaseMap):
        MorphismSpec.parse(2, [[1, 2], [2, 4]], [0, 0], "u")


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**31), st.integers(1, 3), st.integers(0, 3))
def test_identity_prolongation(seed, m, k):
    j = random_jet(random.Random(seed), m, k)
    assert prolong(MorphismSpec.identity(m), j) == j


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31), st.integers(1, 2), st.integers(0, 3))
def test_functoriality(seed, m, k):
    rng = random.Random(seed)
    s1, s2 = random_spec(rng, m), random_spec(rng, m)
    j = random_jet(rng, m, k)
    assert prolong(compose_specs(s1, s2), j) == prolong(s2, prolong(s1, j))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31), st.integers(1, 2), st.integers(0, 3))
def test_well_defined(seed, m, k):
    rng = random.Random(seed)
    spec = random_spec(rng, m)
    x = random_point(rng, m)
    phi = random_section(rng, m)
    psi = PolySection(m, phi.value + vanishing_perturbation(rng, m, k, x))
    assert equivalent_to_order(phi, psi, x, k)
    assert prolong_section(spec, phi, x, k) == prolong_section(spec, psi, x, k)
    assert prolong(spec, jet_of(phi, x, k)) == prolong_section(spec, phi, x, k)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31), st.integers(1, 2), st.integers(1, 3))
def test_projection_naturality(seed, m, k):
    rng = random.Random(seed)
    spec = random_spec(rng, m)
    j = random_jet(rng, m, k)
    assert project(prolong(spec, j), k - 1) == prolong(spec, project(j, k - 1))


# --- the jet chain --------------------------------------------------------------------------------


def test_descriptor_m2():
    stages = jet_chain_descriptor(2, 2)
    assert [s["coordinates"] for s in stages] == [
        ["x", "y", "u", "u_x", "u_y", "u_xx", "u_xy", "u_yy"],
        ["x", "y", "u", "u_x", "u_y"],
        ["x", "y", "u"],
        ["x", "y"],
    ]
    assert stages[0]["drops"] == ["u_xx", "u_xy", "u_yy"]


def test_descriptor_small_and_large():
    assert [s["coordinates"] for s in jet_chain_descriptor(1, 0)] == [["x", "u"], ["x"]]
    assert jet_chain_descriptor(3, 2)[0]["dimension"] == 3 + math.comb(5, 2) == 13
