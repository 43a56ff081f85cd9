"""Finite truncations of the example families, plus a seeded random complex.

Vertex ids encode the sphere: ``"LLL.KKKK"`` (sphere index, position), so
string order agrees with sphere order and the origin ``"000.0000"`` is the
smallest vertex.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .complex import ComplexError, ValidationError, WeightedTriangulation, validate
from .field import MagneticPotential

__all__ = [
    "BookLikeSpec",
    "SphereDecomposition",
    "book_like_sphere_sizes",
    "book_like_valence",
    "gen_book_like",
    "gen_onedim",
    "divided_degrees",
    "potential_sphere_pi",
    "gen_random",
]


def _vid(level: int, k: int) -> str:
    return f"{level:03d}.{k:04d}"


@dataclass
class SphereDecomposition:
    """Partition of the vertices into spheres S_0, S_1, ...; edges join equal or consecutive spheres."""

    spheres: list

    def __post_init__(self):
        self.spheres = [tuple(s) for s in self.spheres]
        self.level = {v: n for n, s in enumerate(self.spheres) for v in s}

    def violations(self, T) -> list[str]:
        out = []
        if set(self.level) != set(T.vertices):
            out.append("decomposition does not partition the vertex set")
        if sum(len(s) for s in self.spheres) != len(self.level):
            out.append("a vertex appears in two spheres")
        for u, v in T.edges:
            if u in self.level and v in self.level and abs(self.level[u] - self.level[v]) > 1:
                out.append(f"edge {u},{v} skips a sphere")
        return out


@dataclass
class BookLikeSpec:
    depth: int
    beta: float = 1.0
    weights: str = "simple"  # or "beta"

    def __post_init__(self):
        if not (0 < self.beta <= 2):
            raise ComplexError(f"beta must lie in (0, 2], got {self.beta}")
        if self.depth < 1:
            raise ComplexError("depth must be at least 1")
        if self.weights not in ("simple", "beta"):
            raise ComplexError(f"unknown weight scheme {self.weights!r}")


def _odd_valence(n: int, beta: float) -> int:
    # valence prescribed on S_{2n+1}; the small epsilon guards floor() against
    # (2n+1)**beta landing a hair under an integer, e.g. 9**0.5
    return math.floor((2 * n + 1) ** beta + 1e-9) + 4


def book_like_sphere_sizes(depth: int, beta: float) -> list[int]:
    """Sizes |S_0|, ..., |S_depth|; even sizes solve val = |S_2n| + |S_2n+2| + 1."""
    sizes = [1]
    for level in range(1, depth + 1):
        if level % 2:
            sizes.append(2)
        else:
            n = (level - 2) // 2
            size = _odd_valence(n, beta) - 1 - sizes[level - 2]
            if size <= 0:
                raise ComplexError(f"sphere S_{level} would have non-positive size {size}")
            sizes.append(size)
    return sizes


def book_like_valence(level: int, beta: float) -> int:
    """Valence in the infinite family (not the truncation)."""
    if level == 0:
        return 2
    if level % 2:
        return _odd_valence((level - 1) // 2, beta)
    return 4


def gen_book_like(spec: BookLikeSpec):
    """Book-like triangulation truncated to the spheres S_0 .. S_depth.

    Every even-sphere vertex is joined to both vertices of each neighbouring
    odd sphere; the two odd-sphere vertices are joined to each other; faces
    are the triples (x, x', z) with {x, x'} an odd sphere and z in an adjacent
    even sphere.  Returns ``(T, alpha, decomposition)`` with alpha = 0.
    """
    sizes = book_like_sphere_sizes(spec.depth, spec.beta)
    spheres = [[_vid(n, k) for k in range(m)] for n, m in enumerate(sizes)]
    level = {v: n for n, s in enumerate(spheres) for v in s}
    edges, faces = [], []
    for n in range(1, spec.depth + 1, 2):
        x, y = spheres[n]
        edges.append((x, y))
        for m in (n - 1, n + 1):
            if m > spec.depth:
                continue
            for z in spheres[m]:
                edges.extend([(x, z), (y, z)])
                faces.append((x, y, z))

    if spec.weights == "simple":
        def r(u, v):
            return 1.0
    else:
        def r(u, v):
            lu, lv = level[u], level[v]
            return (book_like_valence(lu, spec.beta) * book_like_valence(lv, spec.beta)
                    / (max(lu, 1) * max(lv, 1)))

    verts = [(v, 1.0) for s in spheres for v in s]
    wedges = [(u, v, r(u, v)) for u, v in edges]
    wfaces = [((x, y, z), r(x, y) * r(y, z) * r(z, x)) for x, y, z in faces]
    T = WeightedTriangulation(verts, wedges, wfaces)
    return T, MagneticPotential(T), SphereDecomposition(spheres)


_INTRA = ("none", "path", "cycle", "complete")
_CROSS = ("full", "nearest")
_FACES = ("none", "all", "cross")


def gen_onedim(sizes, intra="path", cross="full", faces="all", weight=1.0):
    """Triangulation with a prescribed 1-dimensional decomposition.

    Parameters
    ----------
    sizes : list of int
        Sphere sizes |S_0|, |S_1|, ...
    intra : {"none", "path", "cycle", "complete"} or callable
        Edges inside a sphere.  A callable receives the sphere's vertex list
        and returns pairs.
    cross : {"full", "nearest"} or callable
        Edges between consecutive spheres: complete bipartite, or each vertex
        joined to the one or two positionally nearest vertices of the next
        sphere.  A callable receives (S_n, S_{n+1}) and returns pairs.
    faces : {"none", "all", "cross"} or callable
        "all" promotes every 3-cycle; "cross" only 3-cycles meeting two
        spheres.  A callable receives (T_graph_edges set, triple) -> bool.
    """
    sizes = list(sizes)
    if not sizes or min(sizes) < 1:
        raise ComplexError("sphere sizes must be positive")
    spheres = [[_vid(n, k) for k in range(m)] for n, m in enumerate(sizes)]
    level = {v: n for n, s in enumerate(spheres) for v in s}
    edges = set()

    def add(u, v):
        if u != v:
            edges.add((u, v) if u < v else (v, u))

    for s in spheres:
        if callable(intra):
            pairs = intra(s)
        elif intra == "none":
            pairs = []
        elif intra == "path":
            pairs = list(zip(s, s[1:]))
        elif intra == "cycle":
            pairs = list(zip(s, s[1:])) + ([(s[-1], s[0])] if len(s) > 2 else [])
        elif intra == "complete":
            pairs = list(itertools.combinations(s, 2))
        else:
            raise ComplexError(f"intra must be one of {_INTRA}")
        for u, v in pairs:
            add(u, v)
    for a, b in zip(spheres, spheres[1:]):
        if callable(cross):
            pairs = cross(a, b)
        elif cross == "full":
            pairs = [(u, v) for u in a for v in b]
        elif cross == "nearest":
            pairs = []
            for i, u in enumerate(a):
                pos = i * (len(b) - 1) / max(len(a) - 1, 1)
                for j in {math.floor(pos), math.ceil(pos)}:
                    pairs.append((u, b[j]))
            for j, v in enumerate(b):
                pos = j * (len(a) - 1) / max(len(b) - 1, 1)
                pairs.append((a[round(pos)], v))
        else:
            raise ComplexError(f"cross must be one of {_CROSS}")
        for u, v in pairs:
            add(u, v)

    nbrs = {v: set() for v in level}
    for u, v in edges:
        nbrs[u].add(v)
        nbrs[v].add(u)
    tri = []
    if faces != "none":
        for u, v in sorted(edges):
            for w in sorted(nbrs[u] & nbrs[v]):
                if w <= v:
                    continue
                t = (u, v, w)
                if callable(faces):
                    keep = faces(edges, t)
                elif faces == "all":
                    keep = True
                elif faces == "cross":
                    keep = len({level[x] for x in t}) > 1
                else:
                    raise ComplexError(f"faces must be one of {_FACES}")
                if keep:
                    tri.append(t)
    T = WeightedTriangulation([(v, 1.0) for v in sorted(level)],
                              [(u, v, weight) for u, v in sorted(edges)],
                              [(t, weight ** 3) for t in tri], check=False)
    problems = validate(T)
    dec = SphereDecomposition(spheres)
    problems += dec.violations(T)
    if problems:
        raise ValidationError(problems)
    return T, dec


def divided_degrees(T, dec: SphereDecomposition) -> dict:
    """Per-sphere divided degrees eta, beta, gamma (both signs) and the series term xi.

    Returns lists indexed by sphere; ``xi[n]`` couples S_n and S_{n+1} and
    ``partial_sums[n]`` is the partial sum of 1/sqrt(xi) up to n.
    """
    N = len(dec.spheres)
    lv = dec.level
    eta = {+1: [0] * N, -1: [0] * N}
    beta = {+1: [0] * N, -1: [0] * N}
    gamma = {+1: [0] * N, -1: [0] * N}
    for n, s in enumerate(dec.spheres):
        for x in s:
            for sgn in (+1, -1):
                cnt = sum(1 for y in T.neighbors[x] if lv[y] == n + sgn)
                eta[sgn][n] = max(eta[sgn][n], cnt)
    for u, v in T.edges:
        nu, nv = lv[u], lv[v]
        third = T.F_xy(u, v)
        if nu == nv:
            for sgn in (+1, -1):
                cnt = sum(1 for t in third if lv[t] == nu + sgn)
                gamma[sgn][nu] = max(gamma[sgn][nu], cnt)
        else:
            lo, hi = min(nu, nv), max(nu, nv)
            beta[+1][lo] = max(beta[+1][lo], len(third))
            beta[-1][hi] = max(beta[-1][hi], len(third))
    xi = [eta[+1][n] + eta[-1][n + 1] + beta[+1][n] + gamma[+1][n] + gamma[-1][n + 1]
          for n in range(N - 1)]
    partial, acc = [], 0.0
    for x in xi:
        acc += 1.0 / math.sqrt(x) if x > 0 else math.inf
        partial.append(acc)
    return {"eta_plus": eta[+1], "eta_minus": eta[-1], "beta_plus": beta[+1],
            "beta_minus": beta[-1], "gamma_plus": gamma[+1], "gamma_minus": gamma[-1],
            "xi": xi, "partial_sums": partial}


def potential_sphere_pi(T, dec: SphereDecomposition) -> MagneticPotential:
    """alpha(x, y) = (|x| - |y|) * pi with |.| the sphere index."""
    lv = dec.level
    return MagneticPotential.from_function(T, lambda u, v: (lv[u] - lv[v]) * math.pi)


def gen_random(seed, n_vertices, edge_density=0.3, face_density=0.5, c_range=(0.5, 2.0),
               r_range=(0.5, 2.0), s_range=(0.5, 2.0), alpha_range=(-math.pi, math.pi)):
    """Seeded random connected weighted triangulation with a random potential.

    The draw order is fixed: spanning tree, extra edges, faces, weights c, r,
    s, then alpha, all from ``numpy.random.default_rng(seed)`` (PCG64).
    Faces are sampled among the 3-cycles of the graph, each kept with
    probability ``face_density``.
    """
    if n_vertices < 1:
        raise ComplexError("need at least one vertex")
    if not (0 <= edge_density <= 1 and 0 <= face_density <= 1):
        raise ComplexError("densities must lie in [0, 1]")
    for lo, hi in (c_range, r_range, s_range):
        if not (0 < lo <= hi):
            raise ComplexError("weight ranges must be positive intervals")
    rng = np.random.default_rng(seed)
    width = max(2, len(str(n_vertices - 1)))
    names = [f"v{i:0{width}d}" for i in range(n_vertices)]
    edges = set()
    perm = rng.permutation(n_vertices)
    for k in range(1, n_vertices):
        j = perm[rng.integers(0, k)]
        a, b = sorted((names[perm[k]], names[j]))
        edges.add((a, b))
    for i, j in itertools.combinations(range(n_vertices), 2):
        draw = rng.random()
        if draw < edge_density:
            edges.add((names[i], names[j]))
    edges = sorted(edges)
    nb = {v: set() for v in names}
    for u, v in edges:
        nb[u].add(v)
        nb[v].add(u)
    cycles = [(u, v, w) for u, v in edges for w in sorted(nb[u] & nb[v]) if w > v]
    faces = [t for t in cycles if rng.random() < face_density]
    c = rng.uniform(*c_range, size=n_vertices)
    r = rng.uniform(*r_range, size=len(edges))
    s = rng.uniform(*s_range, size=len(faces))
    a = rng.uniform(*alpha_range, size=len(edges))
    T = WeightedTriangulation(list(zip(names, c)),
                              [(u, v, ri, ai) for (u, v), ri, ai in zip(edges, r, a)],
                              list(zip(faces, s)))
    return T, MagneticPotential.of(T)
