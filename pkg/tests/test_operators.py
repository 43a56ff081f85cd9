import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from conftest import k3
from maghodge import operators as ops
from maghodge.cochains import (Cochain0, Cochain1, Cochain2, dbtilde, gauge_act, inner,
                               random_cochain, tilde)
from maghodge.complex import WeightedTriangulation, from_cells
from maghodge.field import MagneticPotential, flat_difference, gauge_transform_potential, is_trivial
from maghodge.generators import gen_random


def _canon_edges(T, d):
    return np.array([d[e] for e in T.edges])


def _canon_faces(T, d):
    return np.array([d[f] for f in T.faces])


@pytest.mark.parametrize("seed", range(6))
def test_operators_match_oriented_oracle(seed):
    rng = np.random.default_rng(seed)
    T, a = gen_random(seed, 9, 0.5, 0.8)
    R = oracles.Raw(T)
    f = random_cochain(T, 0, rng)
    phi = random_cochain(T, 1, rng)
    psi = random_cochain(T, 2, rng)
    fd = dict(zip(T.vertices, f.values))
    pd = R.edge_dict(T, phi.values)
    sd = R.face_dict(T, psi.values)

    o = oracles.d0(R, fd)
    assert np.allclose(ops.d0(T, a, f).values, _canon_edges(T, o), rtol=1e-14, atol=1e-14)
    o = oracles.delta0(R, pd)
    assert np.allclose(ops.delta0(T, a, phi).values, [o[v] for v in T.vertices], rtol=1e-14, atol=1e-14)
    o = oracles.d1(R, pd)
    assert np.allclose(ops.d1(T, a, phi).values, _canon_faces(T, o), rtol=1e-14, atol=1e-14)
    o = oracles.delta1(R, sd)
    assert np.allclose(ops.delta1(T, a, psi).values, _canon_edges(T, o), rtol=1e-14, atol=1e-14)


def test_oracle_outputs_are_skew():
    # the formulas themselves produce skew / alternating values when alpha is skew
    rng = np.random.default_rng(1)
    T, a = gen_random(1, 8, 0.5, 0.9)
    R = oracles.Raw(T)
    fd = {v: complex(*rng.normal(size=2)) for v in T.vertices}
    pd = R.edge_dict(T, rng.normal(size=T.n_edges) + 0j)
    o = oracles.d0(R, fd)
    assert all(abs(o[(x, y)] + o[(y, x)]) < 1e-14 for x, y in R.E)
    o = oracles.d1(R, pd)
    for (x, y, z) in R.F:
        assert abs(o[(x, y, z)] + o[(y, x, z)]) < 1e-14
        assert abs(o[(x, y, z)] - o[(y, z, x)]) < 1e-14


def test_d0_examples():
    T = from_cells("ab", [("a", "b")])
    a = MagneticPotential(T, [math.pi])
    out = ops.d0(T, a, Cochain0.dirac(T, "a"))
    assert out.at("a", "b") == pytest.approx(-1j, abs=1e-15)
    flat = ops.d0(T, None, Cochain0(T, [2.0, 5.0]))
    assert flat.values[0] == 3.0
    assert np.all(ops.d0(T, MagneticPotential(T), Cochain0(T, [4, 4])).values == 0)


def test_delta1_vanishes_off_faces():
    T = from_cells("abcd", [("a", "b"), ("b", "c"), ("a", "c"), ("c", "d")], [("a", "b", "c")])
    out = ops.delta1(T, MagneticPotential(T, [0.1, 0.2, 0.3, 0.4]), Cochain2(T, [1.0]))
    assert out.at("c", "d") == 0
    assert abs(out.at("a", "b")) > 0


def test_classical_limit_d1_d0_zero():
    T, _ = gen_random(3, 10, 0.5, 0.9)
    flat = MagneticPotential(T)
    # integer values telescope without rounding
    f = Cochain0(T, np.random.default_rng(0).integers(-50, 50, T.n_vertices))
    assert np.max(np.abs(ops.d1(T, flat, ops.d0(T, flat, f)).values)) == 0.0
    f = random_cochain(T, 0, np.random.default_rng(0))
    out = ops.d1(T, flat, ops.d0(T, flat, f))
    assert np.max(np.abs(out.values)) <= 1e-15 * np.max(np.abs(f.values)) * 4


@given(st.integers(0, 2**31))
def test_adjointness_property(seed):
    rng = np.random.default_rng(seed)
    T, a = gen_random(seed, int(rng.integers(3, 14)), 0.5, 0.7)
    f, phi, psi = (random_cochain(T, k, rng) for k in range(3))
    lhs, rhs = inner(ops.d0(T, a, f), phi), inner(f, ops.delta0(T, a, phi))
    assert abs(lhs - rhs) <= 1e-13 * max(1.0, abs(lhs))
    lhs, rhs = inner(ops.d1(T, a, phi), psi), inner(phi, ops.delta1(T, a, psi))
    assert abs(lhs - rhs) <= 1e-13 * max(1.0, abs(lhs))


@given(st.integers(0, 2**31))
def test_gauge_equivariance_all_degrees(seed):
    rng = np.random.default_rng(seed)
    T, a = gen_random(seed, 8, 0.5, 0.8)
    f = rng.uniform(-5, 5, T.n_vertices)
    b = gauge_transform_potential(a, f)
    g, phi, psi = (random_cochain(T, k, rng) for k in range(3))
    pairs = [
        (ops.d0(T, b, gauge_act(0, f, g)), gauge_act(1, f, ops.d0(T, a, g))),
        (ops.delta0(T, b, gauge_act(1, f, phi)), gauge_act(0, f, ops.delta0(T, a, phi))),
        (ops.d1(T, b, gauge_act(1, f, phi)), gauge_act(2, f, ops.d1(T, a, phi))),
        (ops.delta1(T, b, gauge_act(2, f, psi)), gauge_act(1, f, ops.delta1(T, a, psi))),
    ]
    for lhs, rhs in pairs:
        scale = max(1.0, float(np.max(np.abs(rhs.values), initial=0.0)))
        assert np.max(np.abs(lhs.values - rhs.values), initial=0.0) <= 1e-13 * scale


def test_trivial_potential_conjugates_to_flat():
    T, _ = gen_random(4, 12)
    w = np.random.default_rng(2).normal(size=T.n_vertices)
    a = MagneticPotential(T, flat_difference(T, w))
    wit = is_trivial(T, a)
    g = random_cochain(T, 0, np.random.default_rng(3))
    flat = MagneticPotential(T)
    lhs = ops.d0(T, a, g).values
    rhs = gauge_act(1, wit, ops.d0(T, flat, gauge_act(0, -wit, g))).values
    assert np.max(np.abs(lhs - rhs)) <= 1e-13 * np.max(np.abs(lhs))


def test_flat_wedge_against_independent_oracle():
    rng = np.random.default_rng(5)
    T, _ = gen_random(5, 9, 0.6, 0.9)
    R = oracles.Raw(T, np.zeros(T.n_edges))
    xi = rng.normal(size=T.n_edges)
    phi = random_cochain(T, 1, rng)
    xd, pd = R.edge_dict(T, xi), R.edge_dict(T, phi.values)
    want = [sum((xd[(o, p)] + xd[(o, q)]) * pd[(p, q)]
                for p, q, o in ((x, y, z), (y, z, x), (z, x, y))) for x, y, z in T.faces]
    got = ops.wedge_alpha(T, MagneticPotential(T), xi, phi).values
    assert np.array_equal(got, np.array(want))
    assert np.all(ops.wedge_alpha(T, MagneticPotential(T), np.zeros(T.n_edges), phi).values == 0)


def test_wedge_is_alternating():
    rng = np.random.default_rng(6)
    T, a = gen_random(6, 8, 0.6, 0.9)
    R = oracles.Raw(T)
    xi = rng.normal(size=T.n_edges)
    phi = random_cochain(T, 1, rng)
    xd, pd = R.edge_dict(T, xi), R.edge_dict(T, phi.values)
    got = ops.wedge_alpha(T, a, xi, phi)
    for (x, y, z) in R.F:
        val = sum(cmath.exp(-1j * (R.alpha[(o, p)] + R.alpha[(o, q)]) / 6)
                  * (xd[(o, p)] + xd[(o, q)]) * pd[(p, q)]
                  for p, q, o in ((x, y, z), (y, z, x), (z, x, y)))
        assert got.at(x, y, z) == pytest.approx(val, abs=1e-13)


def test_leibniz_hand_value_on_path():
    # path a - b - c, alpha = 0, c(b) = 2, r(a,b) = 3, r(b,c) = 0.5
    T = WeightedTriangulation({"a": 1, "b": 2, "c": 1}, [("a", "b", 3.0), ("b", "c", 0.5)])
    f = Cochain0(T, [1.0, 2.0, 4.0])
    phi = Cochain1(T, [1.0, 2.0])
    lhs = ops.delta0(T, None, Cochain1(T, tilde(T, f) * phi.values))
    assert lhs.at("b") == pytest.approx(0.75, abs=1e-15)
    rep = ops.leibniz_suite(T, None, f, Cochain0(T, [1, 1, 1]), phi, Cochain2(T))
    assert rep["delta0_product"]["residual"] <= 1e-15


def test_leibniz_with_constant_function_is_exact():
    rng = np.random.default_rng(8)
    T, a = gen_random(8, 10, 0.5, 0.8)
    one = Cochain0(T, np.ones(T.n_vertices))
    rep = ops.leibniz_suite(T, a, one, random_cochain(T, 0, rng), random_cochain(T, 1, rng),
                            random_cochain(T, 2, rng))
    for name, r in rep.items():
        assert r["residual"] <= 1e-15 * r["scale"], name


@given(st.integers(0, 2**31))
def test_leibniz_property(seed):
    rng = np.random.default_rng(seed)
    T, a = gen_random(seed, 8, 0.5, 0.8)
    args = [random_cochain(T, k, rng) for k in (0, 0, 1, 2)]
    for name, r in ops.leibniz_suite(T, a, *args).items():
        assert r["residual"] <= 1e-13 * r["scale"], name


def test_closed_form_calibration():
    """Measure composition / closed form on one triangle; the ratio must be the frozen factor."""
    T, a = k3(0.37)
    T = T.with_alpha(a.values + np.array([0.05, -0.11, 0.02]))
    a = MagneticPotential.of(T)
    for x in T.vertices:
        f = Cochain0.dirac(T, x)
        comp = ops.curvature_d1d0(T, a, f).values[0]
        bare = ops.curvature_d1d0_closed_form(T, a, f, factor=1.0).values[0]
        assert comp / bare == pytest.approx(ops.CURVATURE_D1D0_FACTOR, abs=1e-13)
    psi = Cochain2(T, [1.0])
    comp = ops.curvature_delta0delta1(T, a, psi).values
    bare = ops.curvature_delta0delta1_closed_form(T, a, psi, factor=1.0).values
    assert np.allclose(comp / bare, ops.CURVATURE_DELTA_FACTOR, atol=1e-13)
    assert ops.CURVATURE_D1D0_FACTOR == 2j


@given(st.integers(0, 2**31))
def test_curvature_closed_forms_and_mutual_adjointness(seed):
    rng = np.random.default_rng(seed)
    T, a = gen_random(seed, 9, 0.5, 0.8)
    f, psi = random_cochain(T, 0, rng), random_cochain(T, 2, rng)
    c1 = ops.curvature_d1d0(T, a, f)
    c2 = ops.curvature_delta0delta1(T, a, psi)
    assert np.allclose(c1.values, ops.curvature_d1d0_closed_form(T, a, f).values, rtol=1e-13, atol=1e-13)
    assert np.allclose(c2.values, ops.curvature_delta0delta1_closed_form(T, a, psi).values,
                       rtol=1e-13, atol=1e-12)
    lhs, rhs = inner(c1, psi), inner(f, c2)
    assert abs(lhs - rhs) <= 1e-13 * max(1.0, abs(lhs))


@pytest.mark.parametrize("theta", [math.pi / 3, math.pi / 2, math.pi])
def test_bohr_sommerfeld_dirac_on_triangle(theta):
    T, a = k3(theta)
    for x in T.vertices:
        out = ops.d1(T, a, ops.d0(T, a, Cochain0.dirac(T, x))).values[0]
        assert abs(out) == pytest.approx(2 * abs(math.sin(theta / 2)), abs=1e-13)


def test_curvature_vanishes_iff_sine_vanishes():
    # flux 6 pi: nonzero holonomy but sin(flux / 6) = 0
    T, a = k3(2 * math.pi)
    assert is_trivial(T, a) is None
    for x in T.vertices:
        out = ops.curvature_d1d0(T, a, Cochain0.dirac(T, x)).values
        assert np.max(np.abs(out)) <= 1e-14
    T, a = k3(0.2)
    assert max(abs(ops.curvature_d1d0(T, a, Cochain0.dirac(T, x)).values[0]) for x in T.vertices) > 0.1


def test_gauss_bonnet_symmetric_and_laplacian_positive(rng):
    T, a = gen_random(12, 10, 0.5, 0.8)
    F = tuple(random_cochain(T, k, rng) for k in range(3))
    G = tuple(random_cochain(T, k, rng) for k in range(3))
    lhs, rhs = inner(ops.gauss_bonnet(T, a, F), G), inner(F, ops.gauss_bonnet(T, a, G))
    assert abs(lhs - rhs) <= 1e-13 * abs(lhs)
    TF = ops.gauss_bonnet(T, a, F)
    q = inner(ops.laplacian(T, a, F), F)
    assert q.real == pytest.approx(inner(TF, TF).real, rel=1e-13)
    assert abs(q.imag) <= 1e-12 * abs(q)
    zero = tuple(type(c)(T) for c in F)
    assert all(np.all(c.values == 0) for c in ops.laplacian(T, a, zero))


def test_double_tilde_is_face_average(triangle):
    T, _ = triangle
    assert dbtilde(T, [3.0, 6.0, 9.0])[0] == 6.0
