"""Audits of the geometric hypotheses on finite truncations.

Everything here is an exact computation over a finite complex.  Statements
about n -> infinity (uniform bounds, O(n^2) growth) are reported only as
trends over the computed range, with the raw tables attached; a truncation
cannot decide them.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .complex import ComplexError, WeightedTriangulation, degree_edge, degree_vertex
from .field import MagneticPotential, face_fluxes

__all__ = [
    "combinatorial_distance",
    "CutoffFamily",
    "canonical_cutoffs",
    "CompletenessReport",
    "chi_completeness_audit",
    "chi_alpha_obstruction",
    "CurvatureAudit",
    "bounded_curvature_audit",
    "degree_growth_check",
    "bounded_trend",
    "strictly_increasing_run",
]


def combinatorial_distance(T: WeightedTriangulation, origin) -> dict:
    """BFS distance |x| from ``origin`` to every vertex."""
    T._vi(origin)
    dist = {origin: 0}
    queue = deque([origin])
    while queue:
        x = queue.popleft()
        for y in T.neighbors[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    if len(dist) != T.n_vertices:
        raise ComplexError("complex is not connected")
    return dist


@dataclass
class CutoffFamily:
    """Exhaustion sets B_n with cut-off functions chi_n (real arrays over vertices).

    When ``numerators`` is given, chi_n = numerators[n] / (n + 1) exactly and
    :meth:`exact_gradient_sup` can check gradient bounds without rounding.
    """

    T: WeightedTriangulation
    balls: list
    chis: list
    ns: list = field(default_factory=list)
    numerators: list | None = None

    def __post_init__(self):
        if not self.ns:
            self.ns = list(range(len(self.chis)))

    def violations(self) -> list[str]:
        """Check 0 <= chi <= 1, chi = 1 on its set, and that the sets increase."""
        out = []
        vi = self.T.vindex
        prev = set()
        for n, B, chi in zip(self.ns, self.balls, self.chis):
            chi = np.asarray(chi)
            if chi.shape != (self.T.n_vertices,):
                out.append(f"n={n}: cut-off has the wrong length")
                continue
            if np.any(chi < 0) or np.any(chi > 1):
                out.append(f"n={n}: cut-off leaves [0, 1]")
            if any(chi[vi[v]] != 1 for v in B):
                out.append(f"n={n}: cut-off is not 1 on its exhaustion set")
            if not prev <= set(B):
                out.append(f"n={n}: exhaustion sets are not increasing")
            prev = set(B)
        return out

    def exact_gradient_sup(self) -> list:
        """Per n, max over edges of |chi_n(y) - chi_n(x)| as a Fraction."""
        if self.numerators is None:
            raise ComplexError("family carries no exact representation")
        T = self.T
        out = []
        for n, num in zip(self.ns, self.numerators):
            diff = np.abs(num[T.heads] - num[T.tails])
            out.append(Fraction(int(diff.max()) if diff.size else 0, n + 1))
        return out

    def exhaustive(self) -> bool:
        """Whether the last set already covers the whole (finite) vertex set."""
        return bool(self.balls) and set(self.balls[-1]) == set(self.T.vertices)


def canonical_cutoffs(T, origin, n_max: int) -> CutoffFamily:
    """chi_n(x) = min(max(2 - |x|/(n+1), 0), 1) for n = 0..n_max; B_n is the ball of radius n+1."""
    dist = combinatorial_distance(T, origin)
    d = np.array([dist[v] for v in T.vertices], dtype=np.int64)
    balls, chis, nums = [], [], []
    for n in range(n_max + 1):
        # (n+1) * chi_n(x) = clamp(2(n+1) - |x|, 0, n+1), an integer
        num = np.clip(2 * (n + 1) - d, 0, n + 1)
        nums.append(num)
        chis.append(num / (n + 1))
        balls.append(frozenset(v for v in T.vertices if dist[v] <= n + 1))
    return CutoffFamily(T, balls, chis, numerators=nums)


@dataclass
class CompletenessReport:
    """Sup-constants of (C1)(ii) and (C2) over a finite cut-off family.

    ``C2_constant`` uses the sum d0chi(t,x) + d0chi(t,y); ``C2_minus_constant``
    the difference variant.  ``per_n`` holds one row per cut-off index.
    """

    C1_constant: float
    C2_constant: float
    C2_minus_constant: float
    per_n: list

    def to_dict(self) -> dict:
        return {"C1_constant": self.C1_constant, "C2_constant": self.C2_constant,
                "C2_minus_constant": self.C2_minus_constant, "per_n": self.per_n}


def _c1_values(T, chi):
    """Per vertex: (1/c(x)) sum over edges e ending at x of r(e) |d0 chi(e)|^2."""
    g2 = T.r * (chi[T.heads] - chi[T.tails]) ** 2
    out = np.zeros(T.n_vertices)
    np.add.at(out, T.heads, g2)
    np.add.at(out, T.tails, g2)
    return out / T.c


def _c2_values(T, chi):
    """Per edge: (1/r) sum_t s |d0chi(t,x) +- d0chi(t,y)|^2, both signs."""
    plus = np.zeros(T.n_edges)
    minus = np.zeros(T.n_edges)
    for fi, (x, y, z) in enumerate(T.faces):
        ix, iy, iz = T.face_vidx[fi]
        s = T.s[fi]
        for k, (a, b, t) in enumerate(((ix, iy, iz), (iy, iz, ix), (iz, ix, iy))):
            e = T.face_eidx[fi, k]
            da = chi[a] - chi[t]
            db = chi[b] - chi[t]
            plus[e] += s * (da + db) ** 2
            minus[e] += s * (da - db) ** 2
    return plus / T.r, minus / T.r


def chi_completeness_audit(T, family: CutoffFamily) -> CompletenessReport:
    problems = family.violations()
    if problems:
        raise ComplexError("; ".join(problems))
    rows = []
    for n, chi in zip(family.ns, family.chis):
        chi = np.asarray(chi, dtype=float)
        c1 = _c1_values(T, chi)
        c2p, c2m = _c2_values(T, chi)
        grad = np.abs(chi[T.heads] - chi[T.tails])
        touched = np.zeros(T.n_vertices, dtype=bool)
        touched[T.heads[grad > 0]] = True
        touched[T.tails[grad > 0]] = True
        degs = np.array([degree_vertex(T, v) for v in T.vertices])
        sup_deg = float(degs[touched].max()) if touched.any() else 0.0
        rows.append({
            "n": n,
            "C1": float(c1.max()) if c1.size else 0.0,
            "C1_argmax": T.vertices[int(np.argmax(c1))] if c1.size else None,
            "C2": float(c2p.max()) if c2p.size else 0.0,
            "C2_minus": float(c2m.max()) if c2m.size else 0.0,
            "max_gradient": float(grad.max()) if grad.size else 0.0,
            "sup_deg_on_support": sup_deg,
            "C1_bound": sup_deg / (n + 1) ** 2,
        })
    return CompletenessReport(
        C1_constant=max((r["C1"] for r in rows), default=0.0),
        C2_constant=max((r["C2"] for r in rows), default=0.0),
        C2_minus_constant=max((r["C2_minus"] for r in rows), default=0.0),
        per_n=rows,
    )


def chi_alpha_obstruction(T, alpha) -> dict:
    """Per vertex (1/c(x)) * sum over neighbours y of r(x,y) sin^2(alpha(x,y)/2).

    Each incident edge counts once.
    """
    if not isinstance(alpha, MagneticPotential):
        alpha = MagneticPotential(T, alpha)
    w = T.r * np.sin(alpha.forward / 2.0) ** 2
    out = np.zeros(T.n_vertices)
    np.add.at(out, T.heads, w)
    np.add.at(out, T.tails, w)
    out /= T.c
    return {v: float(x) for v, x in zip(T.vertices, out)}


@dataclass
class CurvatureAudit:
    constant: float
    argmax: object
    per_vertex: dict

    def __float__(self):
        return self.constant


def bounded_curvature_audit(T, alpha) -> CurvatureAudit:
    """sup over x of (1/c(x)) sum over faces at x of s sin^2(flux/6)."""
    if not isinstance(alpha, MagneticPotential):
        alpha = MagneticPotential(T, alpha)
    out = np.zeros(T.n_vertices)
    if T.n_faces:
        w = T.s * np.sin(face_fluxes(alpha) / 6.0) ** 2
        for k in range(3):
            np.add.at(out, T.face_vidx[:, k], w)
    out /= T.c
    i = int(np.argmax(out)) if out.size else 0
    return CurvatureAudit(float(out.max()) if out.size else 0.0,
                          T.vertices[i] if out.size else None,
                          {v: float(x) for v, x in zip(T.vertices, out)})


def bounded_trend(values, slack: float = 0.25) -> bool:
    """Heuristic boundedness of a finite sequence.

    True when the maximum over the second half does not exceed the maximum
    over the first half by more than ``slack`` (relative).  Growth without
    bound shows up as a tail that keeps beating the head.
    """
    vals = [v for v in values if v is not None and math.isfinite(v)]
    if len(vals) < 2:
        return True
    half = len(vals) // 2
    head, tail = max(vals[:half]), max(vals[half:])
    return tail <= (1.0 + slack) * head + 1e-15


def strictly_increasing_run(values) -> int:
    """Length of the longest strictly increasing run of consecutive entries."""
    best = run = 1 if values else 0
    for a, b in zip(values, values[1:]):
        run = run + 1 if b > a else 1
        best = max(best, run)
    return best


def degree_growth_check(T, origin, n_max=None, slack: float = 0.25) -> dict:
    """Sup-degrees over balls B_n and their ratios to n^2.

    ``deg_E`` sup runs over edges (x, y) with x in B_n (so y in B_{n+1}).
    The ``bounded`` flags come from :func:`bounded_trend` and are heuristic.
    """
    dist = combinatorial_distance(T, origin)
    radius = max(dist.values())
    if n_max is None:
        n_max = radius + 1
    dv = {v: degree_vertex(T, v) for v in T.vertices}
    de = {e: degree_edge(T, e) for e in T.edges}
    rows = []
    for n in range(n_max + 1):
        sv = max((d for v, d in dv.items() if dist[v] <= n), default=0.0)
        se = max((d for (u, v), d in de.items() if min(dist[u], dist[v]) <= n), default=0.0)
        rows.append({"n": n, "sup_deg_V": sv, "sup_deg_E": se,
                     "ratio_V": sv / n ** 2 if n else None,
                     "ratio_E": se / n ** 2 if n else None})
    rv = [r["ratio_V"] for r in rows[1:]]
    re_ = [r["ratio_E"] for r in rows[1:]]
    return {
        "origin": origin,
        "radius": radius,
        "rows": rows,
        "bounded_V": bounded_trend(rv, slack),
        "bounded_E": bounded_trend(re_, slack),
        "max_ratio_V": max(rv, default=0.0),
        "max_ratio_E": max(re_, default=0.0),
        "note": "trend over a finite truncation; O(n^2) growth is not decidable from it",
    }
