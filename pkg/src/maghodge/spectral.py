"""Matrix realisations, Hermiticity checks, spectra and the cross-term probe.

Cells are ordered vertices, then canonical edges, then canonical faces.  The
matrices are filled entry by entry from scalar potential lookups and share no
code with the vectorised operators in :mod:`maghodge.operators`, so comparing
the two is a real cross-check.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cochains import Cochain0, Cochain1, Cochain2
from .complex import ComplexError, WeightedTriangulation
from .completeness import bounded_curvature_audit
from .field import _as_potential, gauge_transform_potential

__all__ = [
    "OperatorMatrix",
    "assemble",
    "hermitize_and_check",
    "spectrum",
    "gauge_spectrum_check",
    "supersymmetry_check",
    "crosscheck_assembly",
    "lemma_constant_probe",
    "DEFAULT_CELL_CAP",
]

DEFAULT_CELL_CAP = 4000
OPERATORS = ("d0", "delta0", "d1", "delta1", "T_alpha", "Delta_alpha")


@dataclass
class OperatorMatrix:
    """A dense matrix between direct sums of cochain spaces.

    ``domain`` / ``codomain`` are tuples of degrees; ``w_dom`` / ``w_cod``
    are the diagonal Gram weights (c, r, s) of each side in cell order.
    """

    matrix: np.ndarray
    domain: tuple
    codomain: tuple
    w_dom: np.ndarray
    w_cod: np.ndarray

    @property
    def shape(self):
        return self.matrix.shape

    def adjoint(self) -> "OperatorMatrix":
        """Formal adjoint: W_dom^-1 M^H W_cod."""
        m = (self.matrix.conj().T * self.w_cod[None, :]) / self.w_dom[:, None]
        return OperatorMatrix(m, self.codomain, self.domain, self.w_cod, self.w_dom)

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if self.domain != other.codomain:
            raise ComplexError("operator spaces do not compose")
        return OperatorMatrix(self.matrix @ other.matrix, other.domain, self.codomain,
                              other.w_dom, self.w_cod)

    def apply(self, x):
        """Apply to a cochain or a tuple of cochains, returning the same kind."""
        T_cls = {0: Cochain0, 1: Cochain1, 2: Cochain2}
        parts = x if isinstance(x, tuple) else (x,)
        T = parts[0].T
        y = self.matrix @ np.concatenate([p.values for p in parts])
        out, k = [], 0
        for deg in self.codomain:
            n = _size(T, deg)
            out.append(T_cls[deg](T, y[k:k + n]))
            k += n
        return tuple(out) if len(out) > 1 else out[0]


def _size(T, deg):
    return (T.n_vertices, T.n_edges, T.n_faces)[deg]


def _weights(T, deg):
    return np.asarray((T.c, T.r, T.s)[deg], dtype=float)


def _d0(T, a):
    m = np.zeros((T.n_edges, T.n_vertices), dtype=complex)
    for i, (u, v) in enumerate(T.edges):
        m[i, T.vindex[v]] += np.exp(0.5j * a.at(v, u))
        m[i, T.vindex[u]] -= np.exp(0.5j * a.at(u, v))
    return m


def _delta0(T, a):
    # one term per oriented edge (p, x) ending at x; phi(p, x) = sign * phi(canonical)
    m = np.zeros((T.n_vertices, T.n_edges), dtype=complex)
    for x in T.vertices:
        ix = T.vindex[x]
        for p in T.neighbors[x]:
            i, sign = T.edge_index(p, x)
            m[ix, i] += sign * T.r[i] * np.exp(0.5j * a.at(p, x)) / T.c[ix]
    return m


def _face_sides(face):
    x, y, z = face
    return (((x, y), z), ((y, z), x), ((z, x), y))


def _d1(T, a):
    m = np.zeros((T.n_faces, T.n_edges), dtype=complex)
    for fi, face in enumerate(T.faces):
        for (p, q), o in _face_sides(face):
            i, sign = T.edge_index(p, q)
            m[fi, i] += sign * np.exp(1j * (a.at(p, o) + a.at(q, o)) / 6.0)
    return m


def _delta1(T, a):
    m = np.zeros((T.n_edges, T.n_faces), dtype=complex)
    for fi, face in enumerate(T.faces):
        for (p, q), o in _face_sides(face):
            i, sign = T.edge_index(p, q)
            # psi(canonical edge, o) = sign * psi(face)
            m[i, fi] += sign * T.s[fi] * np.exp(1j * (a.at(o, p) + a.at(o, q)) / 6.0) / T.r[i]
    return m


def _gauss_bonnet(T, a):
    nv, ne, nf = T.n_vertices, T.n_edges, T.n_faces
    n = nv + ne + nf
    m = np.zeros((n, n), dtype=complex)
    m[:nv, nv:nv + ne] = _delta0(T, a)
    m[nv:nv + ne, :nv] = _d0(T, a)
    m[nv:nv + ne, nv + ne:] = _delta1(T, a)
    m[nv + ne:, nv:nv + ne] = _d1(T, a)
    return m


def assemble(T: WeightedTriangulation, alpha, which: str) -> OperatorMatrix:
    """Dense matrix of one of d0, delta0, d1, delta1, T_alpha, Delta_alpha."""
    a = _as_potential(T, alpha)
    full = (0, 1, 2)
    w_all = np.concatenate([_weights(T, k) for k in full])
    if which == "d0":
        return OperatorMatrix(_d0(T, a), (0,), (1,), _weights(T, 0), _weights(T, 1))
    if which == "delta0":
        return OperatorMatrix(_delta0(T, a), (1,), (0,), _weights(T, 1), _weights(T, 0))
    if which == "d1":
        return OperatorMatrix(_d1(T, a), (1,), (2,), _weights(T, 1), _weights(T, 2))
    if which == "delta1":
        return OperatorMatrix(_delta1(T, a), (2,), (1,), _weights(T, 2), _weights(T, 1))
    if which == "T_alpha":
        return OperatorMatrix(_gauss_bonnet(T, a), full, full, w_all, w_all)
    if which == "Delta_alpha":
        g = _gauss_bonnet(T, a)
        return OperatorMatrix(g @ g, full, full, w_all, w_all)
    raise ComplexError(f"unknown operator {which!r}; expected one of {', '.join(OPERATORS)}")


def hermitize_and_check(M: OperatorMatrix, tol: float = 1e-12) -> dict:
    """Symmetrise with the metric and measure the failure of Hermiticity.

    S = W^{1/2} M W^{-1/2}; passes iff max|S - S^H| <= tol * max|S|.
    """
    if M.matrix.shape[0] != M.matrix.shape[1] or M.domain != M.codomain:
        raise ComplexError("Hermiticity needs an operator from a space to itself")
    sq = np.sqrt(M.w_dom)
    S = sq[:, None] * M.matrix / sq[None, :]
    err = float(np.max(np.abs(S - S.conj().T))) if S.size else 0.0
    scale = float(np.max(np.abs(S))) if S.size else 0.0
    return {"max_asymmetry": err, "max_entry": scale, "tol": tol,
            "passed": err <= tol * scale, "symmetrized": S}


_BLOCKS = {"0": (0,), "1": (1,), "2": (2,), "even": (0, 2), "odd": (1,), "full": (0, 1, 2)}


def _laplace_block(T, a, degrees):
    """Metric-symmetrised Laplacian restricted to the given degrees."""
    g = _gauss_bonnet(T, a)
    L = g @ g
    w = np.concatenate([_weights(T, k) for k in (0, 1, 2)])
    offs = np.cumsum([0, T.n_vertices, T.n_edges, T.n_faces])
    idx = np.concatenate([np.arange(offs[k], offs[k + 1]) for k in degrees]).astype(int)
    sq = np.sqrt(w[idx])
    S = sq[:, None] * L[np.ix_(idx, idx)] / sq[None, :]
    return 0.5 * (S + S.conj().T)


def spectrum(T, alpha, degree="full", cap: int = DEFAULT_CELL_CAP) -> list:
    """Sorted eigenvalues of the Laplacian block ``degree`` (0, 1, 2, even, odd or full)."""
    key = str(degree)
    if key not in _BLOCKS:
        raise ComplexError(f"unknown degree {degree!r}")
    if T.n_cells > cap:
        raise ComplexError(f"complex has {T.n_cells} cells, above the dense cap {cap}; "
                           "truncate it or raise the cap")
    S = _laplace_block(T, _as_potential(T, alpha), _BLOCKS[key])
    if S.size == 0:
        return []
    return [float(x) for x in np.linalg.eigvalsh(S)]


def gauge_spectrum_check(T, alpha, f, degree="full", tol: float = 1e-10, cap=DEFAULT_CELL_CAP):
    """Spectra before and after alpha -> alpha + d0 f."""
    a = _as_potential(T, alpha)
    before = spectrum(T, a, degree, cap)
    after = spectrum(T, gauge_transform_potential(a, f), degree, cap)
    diff = float(np.max(np.abs(np.subtract(before, after)))) if before else 0.0
    return {"before": before, "after": after, "max_abs_difference": diff, "tol": tol,
            "passed": diff <= tol}


def supersymmetry_check(T, alpha, tol: float = 1e-9, zero_tol: float = 1e-8, cap=DEFAULT_CELL_CAP):
    """Nonzero spectra of the even (0+2) and odd (1) blocks must coincide.

    An eigenvalue counts as zero below ``zero_tol`` times the largest one.
    """
    even = np.array(spectrum(T, alpha, "even", cap))
    odd = np.array(spectrum(T, alpha, "odd", cap))
    top = max([1.0] + [float(np.max(x)) for x in (even, odd) if x.size])
    ev = even[even > zero_tol * top]
    od = odd[odd > zero_tol * top]
    if ev.size != od.size:
        return {"passed": False, "even_nonzero": ev.size, "odd_nonzero": od.size,
                "max_abs_difference": float("inf"), "tol": tol}
    diff = float(np.max(np.abs(ev - od))) if ev.size else 0.0
    return {"passed": diff <= tol, "even_nonzero": int(ev.size), "odd_nonzero": int(od.size),
            "max_abs_difference": diff, "tol": tol}


def crosscheck_assembly(T, alpha, rng, trials: int = 64, tol: float = 1e-13) -> dict:
    """Compare matrix-vector products with the map-level operators on random cochains."""
    from . import operators as ops
    from .cochains import random_cochain

    a = _as_potential(T, alpha)
    maps = {
        "d0": (0, lambda u: ops.d0(T, a, u)),
        "delta0": (1, lambda u: ops.delta0(T, a, u)),
        "d1": (1, lambda u: ops.d1(T, a, u)),
        "delta1": (2, lambda u: ops.delta1(T, a, u)),
        "T_alpha": (None, lambda u: ops.gauss_bonnet(T, a, u)),
        "Delta_alpha": (None, lambda u: ops.laplacian(T, a, u)),
    }
    out = {}
    for name, (deg, fn) in maps.items():
        M = assemble(T, a, name)
        worst = 0.0
        for _ in range(trials):
            if deg is None:
                u = tuple(random_cochain(T, k, rng) for k in (0, 1, 2))
            else:
                u = random_cochain(T, deg, rng)
            want = fn(u)
            got = M.apply(u)
            if not isinstance(want, tuple):
                want, got = (want,), (got,)
            w = np.concatenate([p.values for p in want])
            g = np.concatenate([p.values for p in got])
            if w.size:
                scale = max(float(np.max(np.abs(w))), float(np.max(np.abs(g))), 1e-300)
                worst = max(worst, float(np.max(np.abs(w - g))) / scale)
        out[name] = {"max_relative_difference": worst, "passed": worst <= tol}
    return out


def lemma_constant_probe(T, alpha, trials: int = 256, seed=0xC0FFEE, slack: float = 1e-9) -> dict:
    """Monte-Carlo bound on |<d0 g, delta1 eta>| / (|g| |eta|) against 3 sqrt(C).

    C is the bounded-curvature constant.  The report also carries the exact
    weighted operator norm of d1 d0, which is the supremum of that ratio, and
    the Cauchy-Schwarz bound 2 sqrt(3 C).  ``factor_flag`` is set when the
    measured ratio beats 3 sqrt(C) but stays within twice it.

    ``max_ratio_via_curvature`` evaluates the same pairing as
    <d1 d0 g, eta>; with alpha = 0 the composed matrix is exactly zero, so
    this ratio is exactly 0 where the edge-side pairing only reaches rounding.
    """
    if trials < 1:
        raise ComplexError("trials must be at least 1")
    a = _as_potential(T, alpha)
    C = bounded_curvature_audit(T, a).constant
    D0 = _d0(T, a)
    D1 = _d1(T, a)
    Dl1 = _delta1(T, a)
    wv, we, wf = _weights(T, 0), _weights(T, 1), _weights(T, 2)
    curv = D1 @ D0
    rng = np.random.default_rng(seed)
    ratio = ratio_curv = 0.0
    for _ in range(trials):
        g = rng.standard_normal(T.n_vertices) + 1j * rng.standard_normal(T.n_vertices)
        eta = rng.standard_normal(T.n_faces) + 1j * rng.standard_normal(T.n_faces)
        ng = np.sqrt(np.sum(wv * np.abs(g) ** 2))
        ne = np.sqrt(np.sum(wf * np.abs(eta) ** 2))
        if ng == 0 or ne == 0:
            continue
        val = abs(np.sum(we * (D0 @ g) * np.conj(Dl1 @ eta)))
        ratio = max(ratio, float(val / (ng * ne)))
        # same pairing moved onto faces: <d1 d0 g, eta>
        val = abs(np.sum(wf * (curv @ g) * np.conj(eta)))
        ratio_curv = max(ratio_curv, float(val / (ng * ne)))
    K = np.sqrt(wf)[:, None] * curv / np.sqrt(wv)[None, :]
    exact = float(np.linalg.norm(K, 2)) if K.size else 0.0
    bound = 3.0 * np.sqrt(C)
    within = ratio <= bound + slack
    flag = (not within) and ratio <= 2.0 * bound + slack
    return {
        "C": C,
        "nominal_bound": float(bound),
        "cauchy_schwarz_bound": float(2.0 * np.sqrt(3.0 * C)),
        "max_ratio": ratio,
        "max_ratio_via_curvature": ratio_curv,
        "exact_norm": exact,
        "trials": trials,
        "within_nominal_bound": bool(within),
        "factor_flag": bool(flag),
        "passed": bool(ratio <= bound * (1 + flag) + slack),
    }
