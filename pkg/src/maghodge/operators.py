"""Magnetic difference / exterior derivative operators and their formal adjoints.

Every operator here is map-level: cochain in, cochain out, vectorised over
canonical cells.  Matrix realisations live in :mod:`maghodge.spectral` and are
assembled independently, entry by entry.

Face-local notation used below: a canonical face (x, y, z) has sides
k = 0, 1, 2 equal to (x, y), (y, z), (z, x).  ``A[k]`` is the potential read
along side k in the face's direction, ``B[k]`` along the reversed side.
"""
from __future__ import annotations

import numpy as np

from .cochains import Cochain0, Cochain1, Cochain2, dbtilde, tilde
from .field import MagneticPotential, face_fluxes

__all__ = [
    "d0",
    "delta0",
    "d1",
    "delta1",
    "wedge_alpha",
    "gauss_bonnet",
    "laplacian",
    "curvature_d1d0",
    "curvature_delta0delta1",
    "curvature_d1d0_closed_form",
    "curvature_delta0delta1_closed_form",
    "CURVATURE_D1D0_FACTOR",
    "CURVATURE_DELTA_FACTOR",
    "leibniz_suite",
]

# The displayed closed forms for d1.d0 and delta0.delta1 differ from the
# actual compositions by constant factors.  Measured on a single triangle
# (tests/test_operators.py::test_closed_form_calibration) and frozen here:
#   d1(d0 f)         = CURVATURE_D1D0_FACTOR  * closed form
#   delta0(delta1 q) = CURVATURE_DELTA_FACTOR * closed form
CURVATURE_D1D0_FACTOR = 2j
CURVATURE_DELTA_FACTOR = -1j / 3


def _pot(T, alpha):
    if isinstance(alpha, MagneticPotential):
        return alpha
    if alpha is None:
        return MagneticPotential.of(T)
    return MagneticPotential(T, alpha)


def _sides(T, alpha):
    """Potential along / against each face side, shape (n_faces, 3)."""
    A = alpha.oriented(T.face_eidx, T.face_esign)
    B = alpha.oriented(T.face_eidx, -T.face_esign)
    return A, B


def _side_values(T, phi):
    """1-cochain values on the three sides of every face, in face direction."""
    return T.face_esign * phi.values[T.face_eidx]


_NEXT = np.array([1, 2, 0])
_PREV = np.array([2, 0, 1])


def d0(T, alpha, g: Cochain0) -> Cochain1:
    """d0_a g(x,y) = exp(i a(y,x)/2) g(y) - exp(i a(x,y)/2) g(x)."""
    alpha = _pot(T, alpha)
    v = g.values
    out = (np.exp(0.5j * alpha.backward) * v[T.heads]
           - np.exp(0.5j * alpha.forward) * v[T.tails])
    return Cochain1(T, out)


def delta0(T, alpha, phi: Cochain1) -> Cochain0:
    """(delta0_a phi)(x) = 1/c(x) * sum over e with head x of r(e) exp(i a_e/2) phi(e)."""
    alpha = _pot(T, alpha)
    out = np.zeros(T.n_vertices, dtype=complex)
    # e = (u, v) ends at v; e = (v, u) ends at u with phi(v, u) = -phi(u, v)
    np.add.at(out, T.heads, T.r * np.exp(0.5j * alpha.forward) * phi.values)
    np.add.at(out, T.tails, -T.r * np.exp(0.5j * alpha.backward) * phi.values)
    return Cochain0(T, out / T.c)


def d1(T, alpha, phi: Cochain1) -> Cochain2:
    """Exterior magnetic derivative on 1-cochains."""
    alpha = _pot(T, alpha)
    if T.n_faces == 0:
        return Cochain2(T)
    A, B = _sides(T, alpha)
    P = _side_values(T, phi)
    phase = (B[:, _PREV] + A[:, _NEXT]) / 6.0
    return Cochain2(T, np.sum(np.exp(1j * phase) * P, axis=1))


def delta1(T, alpha, psi: Cochain2) -> Cochain1:
    """delta1_a psi(x,y) = 1/r * sum over t in F_xy of s exp(i(a(t,x)+a(t,y))/6) psi(x,y,t)."""
    alpha = _pot(T, alpha)
    out = np.zeros(T.n_edges, dtype=complex)
    if T.n_faces:
        A, B = _sides(T, alpha)
        # side k = (a, b), third vertex t: a(t, a) = A[k+2], a(t, b) = B[k+1]
        phase = (A[:, _PREV] + B[:, _NEXT]) / 6.0
        contrib = (T.s[:, None] * np.exp(1j * phase) * T.face_esign
                   * psi.values[:, None])
        np.add.at(out, T.face_eidx.ravel(), contrib.ravel())
    return Cochain1(T, out / T.r)


def wedge_alpha(T, alpha, xi, phi: Cochain1) -> Cochain2:
    """Wedge of a scalar 1-form ``xi`` with a bundle-valued 1-form ``phi``.

    ``xi`` is a skew edge function: a :class:`Cochain1` or an array on
    canonical edges.  With zero potential this is the flat discrete wedge.
    """
    alpha = _pot(T, alpha)
    if T.n_faces == 0:
        return Cochain2(T)
    xv = xi.values if isinstance(xi, Cochain1) else np.asarray(xi)
    A, B = _sides(T, alpha)
    X = T.face_esign * xv[T.face_eidx]
    P = _side_values(T, phi)
    # term k: opposite vertex w at position k+2; a(w, .) = A[k+2], B[k+1]
    phase = -(A[:, _PREV] + B[:, _NEXT]) / 6.0
    coef = X[:, _PREV] - X[:, _NEXT]
    return Cochain2(T, np.sum(np.exp(1j * phase) * coef * P, axis=1))


def gauss_bonnet(T, alpha, F):
    """T_a(f, phi, psi) = (delta0 phi, d0 f + delta1 psi, d1 phi)."""
    f, phi, psi = F
    return (delta0(T, alpha, phi), d0(T, alpha, f) + delta1(T, alpha, psi), d1(T, alpha, phi))


def laplacian(T, alpha, F):
    """Magnetic Hodge Laplacian, the square of the Gauss-Bonnet operator."""
    return gauss_bonnet(T, alpha, gauss_bonnet(T, alpha, F))


def curvature_d1d0(T, alpha, f: Cochain0) -> Cochain2:
    return d1(T, alpha, d0(T, alpha, f))


def curvature_delta0delta1(T, alpha, psi: Cochain2) -> Cochain0:
    return delta0(T, alpha, delta1(T, alpha, psi))


def curvature_d1d0_closed_form(T, alpha, f: Cochain0, factor=CURVATURE_D1D0_FACTOR) -> Cochain2:
    """factor * (-sin(flux/6)) * sum over face vertices p of exp(i(a(p,.)+a(p,.))/3) f(p)."""
    alpha = _pot(T, alpha)
    if T.n_faces == 0:
        return Cochain2(T)
    A, B = _sides(T, alpha)
    flux = face_fluxes(alpha)
    # vertex at position k leaves along side k and back along side k+2
    phase = (A + B[:, _PREV]) / 3.0
    fv = f.values[T.face_vidx]
    val = -np.sin(flux / 6.0) * np.sum(np.exp(1j * phase) * fv, axis=1)
    return Cochain2(T, factor * val)


def curvature_delta0delta1_closed_form(T, alpha, psi: Cochain2,
                                       factor=CURVATURE_DELTA_FACTOR) -> Cochain0:
    """factor * (-3/c(x)) * sum over ordered faces (x,y,z) of s sin(flux/6) exp(-i(..)/3) psi.

    Both orderings (x,y,z) and (x,z,y) of a face enter the sum; they give
    equal terms.
    """
    alpha = _pot(T, alpha)
    out = np.zeros(T.n_vertices, dtype=complex)
    if T.n_faces:
        A, B = _sides(T, alpha)
        flux = face_fluxes(alpha)
        phase = (A + B[:, _PREV]) / 3.0
        term = 2.0 * (T.s * np.sin(flux / 6.0) * psi.values)[:, None] * np.exp(-1j * phase)
        np.add.at(out, T.face_vidx.ravel(), term.ravel())
    return Cochain0(T, factor * (-3.0) * out / T.c)


# -- Leibniz identities ----------------------------------------------------

def _resid(lhs, rhs, terms):
    lhs = np.asarray(lhs)
    rhs = np.asarray(rhs)
    if lhs.size == 0:
        return {"residual": 0.0, "scale": 1.0}
    scale = max(1.0, float(np.max(np.abs(lhs))), max(float(np.max(np.abs(t))) for t in terms))
    return {"residual": float(np.max(np.abs(lhs - rhs))), "scale": scale}


def leibniz_suite(T, alpha, f: Cochain0, g: Cochain0, phi: Cochain1, psi: Cochain2) -> dict:
    """Evaluate the four product rules cell by cell.

    The left side uses the vectorised operators on products; the right side
    is evaluated with explicit loops over cells and orientation-aware reads.
    Returns ``{name: {"residual": max abs difference, "scale": data scale}}``.
    """
    alpha = _pot(T, alpha)
    fv = f.values

    # d0(fg)(x,y) = f(y) d0 g(x,y) + exp(i a(x,y)/2) (f(y)-f(x)) g(x)
    lhs = d0(T, alpha, Cochain0(T, fv * g.values)).values
    dg = d0(T, alpha, g)
    t1, t2, rhs = [], [], []
    for x, y in T.edges:
        a = f.at(y) * dg.at(x, y)
        b = np.exp(0.5j * alpha.at(x, y)) * (f.at(y) - f.at(x)) * g.at(x)
        t1.append(a)
        t2.append(b)
        rhs.append(a + b)
    out = {"d0_product": _resid(lhs, rhs, [t1, t2])}

    # symmetric form: f~ d0 g + (exp(i a/2) g(e-) + exp(-i a/2) g(e+))/2 * d0 f
    t1, t2, rhs = [], [], []
    for x, y in T.edges:
        a = 0.5 * (f.at(x) + f.at(y)) * dg.at(x, y)
        ea = alpha.at(x, y)
        b = 0.5 * (np.exp(0.5j * ea) * g.at(x) + np.exp(-0.5j * ea) * g.at(y)) * (f.at(y) - f.at(x))
        t1.append(a)
        t2.append(b)
        rhs.append(a + b)
    out["d0_product_symmetric"] = _resid(lhs, rhs, [t1, t2])

    # delta0(f~ phi)(x) = f(x) delta0 phi(x) - 1/(2c) sum r exp(-i a(x,y)/2) d0f(x,y) phi(x,y)
    lhs = delta0(T, alpha, Cochain1(T, tilde(T, f) * phi.values)).values
    dphi = delta0(T, alpha, phi)
    t1, t2, rhs = [], [], []
    for x in T.vertices:
        a = f.at(x) * dphi.at(x)
        b = 0.0
        for y in T.neighbors[x]:
            b += (T.edge_weight(x, y) * np.exp(-0.5j * alpha.at(x, y))
                  * (f.at(y) - f.at(x)) * phi.at(x, y))
        b *= -1.0 / (2.0 * T.vertex_weight(x))
        t1.append(a)
        t2.append(b)
        rhs.append(a + b)
    out["delta0_product"] = _resid(lhs, rhs, [t1, t2])

    # d1(f~ phi) = f~~ d1 phi + (1/6) d0f ^_a phi
    lhs = d1(T, alpha, Cochain1(T, tilde(T, f) * phi.values)).values
    d1phi = d1(T, alpha, phi)
    df = Cochain1(T, fv[T.heads] - fv[T.tails])
    t1, t2, rhs = [], [], []
    for x, y, z in T.faces:
        a = (f.at(x) + f.at(y) + f.at(z)) / 3.0 * d1phi.at(x, y, z)
        w = 0.0
        for p, q, o in ((x, y, z), (y, z, x), (z, x, y)):
            # o is the vertex opposite the side (p, q)
            w += (np.exp(-1j * (alpha.at(o, p) + alpha.at(o, q)) / 6.0)
                  * (df.at(o, p) + df.at(o, q)) * phi.at(p, q))
        t1.append(a)
        t2.append(w / 6.0)
        rhs.append(a + w / 6.0)
    out["d1_product"] = _resid(lhs, rhs, [t1, t2])

    # delta1(f~~ psi)(e) = f~(e) delta1 psi(e) + 1/(6r) sum_t s exp(i(a(t,e-)+a(t,e+))/6)
    #                      (d0f(e-,t) + d0f(e+,t)) psi(e,t)
    lhs = delta1(T, alpha, Cochain2(T, dbtilde(T, f) * psi.values)).values
    d1psi = delta1(T, alpha, psi)
    t1, t2, rhs = [], [], []
    for x, y in T.edges:
        a = 0.5 * (f.at(x) + f.at(y)) * d1psi.at(x, y)
        b = 0.0
        for t in T.F_xy(x, y):
            b += (T.face_weight(x, y, t) * np.exp(1j * (alpha.at(t, x) + alpha.at(t, y)) / 6.0)
                  * ((f.at(t) - f.at(x)) + (f.at(t) - f.at(y))) * psi.at(x, y, t))
        b /= 6.0 * T.edge_weight(x, y)
        t1.append(a)
        t2.append(b)
        rhs.append(a + b)
    out["delta1_product"] = _resid(lhs, rhs, [t1, t2])
    return out
