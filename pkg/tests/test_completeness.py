import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import k3
from maghodge.complex import ComplexError, WeightedTriangulation, from_cells
from maghodge.completeness import (CutoffFamily, bounded_curvature_audit, bounded_trend,
                                   canonical_cutoffs, chi_alpha_obstruction,
                                   chi_completeness_audit, combinatorial_distance,
                                   degree_growth_check, strictly_increasing_run)
from maghodge.field import MagneticPotential, gauge_transform_potential
from maghodge.generators import (BookLikeSpec, gen_book_like, gen_onedim, gen_random,
                                 potential_sphere_pi)


def _brute_distance(T, origin):
    """Shortest simple path by enumerating vertex sequences."""
    best = {origin: 0}
    others = [v for v in T.vertices if v != origin]
    for k in range(1, len(others) + 1):
        for seq in itertools.permutations(others, k):
            path = (origin,) + seq
            if all(T.has_edge(a, b) for a, b in zip(path, path[1:])):
                best[seq[-1]] = min(best.get(seq[-1], k), k)
    return best


@pytest.mark.parametrize("seed", range(5))
def test_distance_matches_path_enumeration(seed):
    T, _ = gen_random(seed, 7, 0.2, 0.0)
    origin = T.vertices[seed % T.n_vertices]
    assert combinatorial_distance(T, origin) == _brute_distance(T, origin)


def test_distance_basics_and_disconnected():
    T, _ = k3()
    d = combinatorial_distance(T, "a")
    assert d == {"a": 0, "b": 1, "c": 1}
    T2 = WeightedTriangulation({"a": 1, "b": 1, "c": 1}, [("a", "b", 1)], check=False)
    with pytest.raises(ComplexError):
        combinatorial_distance(T2, "a")


@pytest.mark.parametrize("seed", range(8))
def test_canonical_cutoff_invariants(seed):
    T, _ = gen_random(seed, 25, 0.08, 0.5)
    origin = T.vertices[0]
    dist = combinatorial_distance(T, origin)
    fam = canonical_cutoffs(T, origin, 6)
    assert fam.violations() == []
    for n, chi in enumerate(fam.chis):
        for v in T.vertices:
            x = chi[T.vindex[v]]
            if dist[v] <= n + 1:
                assert x == 1.0
            if dist[v] >= 2 * (n + 1):
                assert x == 0.0
        # floats agree with the exact values up to rounding
        grad = np.abs(chi[T.heads] - chi[T.tails])
        assert np.all(grad <= (1.0 / (n + 1)) * (1 + 4e-16))
    # the bound itself is checked in exact rational arithmetic
    for n, g in enumerate(fam.exact_gradient_sup()):
        assert g <= Fraction(1, n + 1)


def test_family_validator_catches_bad_input():
    T, _ = k3()
    fam = CutoffFamily(T, [frozenset("ab"), frozenset("a")],
                       [np.array([1.0, 1.0, 0.5]), np.array([1.0, 1.2, 0.0])])
    msgs = " ".join(fam.violations())
    assert "leaves [0, 1]" in msgs and "not increasing" in msgs
    with pytest.raises(ComplexError):
        chi_completeness_audit(T, fam)


def test_single_triangle_constants_vanish():
    T, _ = k3()
    rep = chi_completeness_audit(T, canonical_cutoffs(T, "a", 3))
    assert rep.C1_constant == 0 and rep.C2_constant == 0 and rep.C2_minus_constant == 0


def test_two_face_complex_against_direct_sums():
    # square a-b-c-d with diagonal a-c, faces abc and acd, non-uniform weights
    T = WeightedTriangulation({"a": 1.5, "b": 0.5, "c": 2.0, "d": 1.0},
                              [("a", "b", 1.0), ("b", "c", 2.0), ("c", "d", 0.5),
                               ("a", "d", 3.0), ("a", "c", 1.5)],
                              [(("a", "b", "c"), 2.0), (("a", "c", "d"), 0.25)])
    chi = {"a": 1.0, "b": 0.6, "c": 0.2, "d": 0.0}
    fam = CutoffFamily(T, [frozenset("a")], [np.array([chi[v] for v in T.vertices])])
    rep = chi_completeness_audit(T, fam)
    c1 = max(sum(T.edge_weight(x, y) * (chi[x] - chi[y]) ** 2 for y in T.neighbors[x])
             / T.vertex_weight(x) for x in T.vertices)
    c2p, c2m = [], []
    for x, y in T.edges:
        plus = minus = 0.0
        for t in T.F_xy(x, y):
            s = T.face_weight(x, y, t)
            plus += s * ((chi[x] - chi[t]) + (chi[y] - chi[t])) ** 2
            minus += s * ((chi[x] - chi[t]) - (chi[y] - chi[t])) ** 2
        c2p.append(plus / T.edge_weight(x, y))
        c2m.append(minus / T.edge_weight(x, y))
    assert rep.C1_constant == pytest.approx(c1, abs=1e-15)
    assert rep.C2_constant == pytest.approx(max(c2p), abs=1e-15)
    assert rep.C2_minus_constant == pytest.approx(max(c2m), abs=1e-15)


def test_c1_bounded_by_degree_over_n_squared():
    T, _, _ = gen_book_like(BookLikeSpec(20, 1.0))
    rep = chi_completeness_audit(T, canonical_cutoffs(T, "000.0000", 20))
    for row in rep.per_n:
        assert row["C1"] <= row["C1_bound"] + 1e-15
    assert bounded_trend([r["C1"] for r in rep.per_n])
    assert bounded_trend([r["C2"] for r in rep.per_n])


def test_obstruction_examples():
    T, _ = gen_random(2, 10)
    zero = chi_alpha_obstruction(T, MagneticPotential(T))
    assert all(v == 0 for v in zero.values())
    two_pi = chi_alpha_obstruction(T, MagneticPotential(T, np.full(T.n_edges, 2 * math.pi)))
    assert max(two_pi.values()) < 1e-30


def test_obstruction_counts_cross_sphere_neighbours():
    T, dec = gen_onedim([1, 3, 4, 5], intra="path")
    vals = chi_alpha_obstruction(T, potential_sphere_pi(T, dec))
    for x in T.vertices:
        n = dec.level[x]
        cross = sum(1 for y in T.neighbors[x] if dec.level[y] != n)
        assert vals[x] == pytest.approx(cross, abs=1e-12)
        # intra-sphere neighbours do not contribute, so this differs from val(x)
        if any(dec.level[y] == n for y in T.neighbors[x]):
            assert vals[x] < len(T.neighbors[x])


def test_bounded_curvature_examples():
    T, a = k3(math.pi)  # flux 3 pi
    rep = bounded_curvature_audit(T, a)
    assert rep.constant == pytest.approx(1.0, abs=1e-15)
    assert rep.argmax == "a"
    assert bounded_curvature_audit(T, MagneticPotential(T)).constant == 0.0
    T, dec = gen_onedim([1, 3, 3, 3])
    assert bounded_curvature_audit(T, potential_sphere_pi(T, dec)).constant < 1e-30


@given(st.integers(0, 10**6))
def test_bounded_curvature_gauge_invariant(seed):
    T, a = gen_random(seed, 9, 0.5, 0.8)
    f = np.random.default_rng(seed).normal(size=T.n_vertices)
    b = gauge_transform_potential(a, f)
    assert bounded_curvature_audit(T, b).constant == pytest.approx(
        bounded_curvature_audit(T, a).constant, rel=1e-12, abs=1e-14)


def _comb_of_stars(levels):
    """Path p0 - p1 - ... with 2**k pendant leaves hanging off p_k."""
    verts, edges = [], []
    for k in range(levels):
        p = f"p{k:02d}"
        verts.append(p)
        if k:
            edges.append((f"p{k - 1:02d}", p))
        for j in range(2 ** k):
            leaf = f"q{k:02d}.{j:05d}"
            verts.append(leaf)
            edges.append((p, leaf))
    return from_cells(verts, edges)


def test_degree_growth_flags():
    T, _, _ = gen_book_like(BookLikeSpec(20, 2.0))
    rep = degree_growth_check(T, "000.0000")
    assert rep["bounded_V"] and rep["bounded_E"]
    assert "not decidable" in rep["note"]
    star = _comb_of_stars(12)
    rep = degree_growth_check(star, "p00")
    assert not rep["bounded_V"]
    tri = degree_growth_check(k3()[0], "a", 5)
    assert tri["bounded_V"]
    assert tri["rows"][-1]["ratio_V"] == pytest.approx(2 / 25)


def test_trend_helpers():
    assert strictly_increasing_run([1, 2, 3, 2, 3, 4, 5, 6]) == 5
    assert strictly_increasing_run([]) == 0
    assert bounded_trend([3, 1, 1, 1])
    assert not bounded_trend([1, 2, 4, 8, 16])
