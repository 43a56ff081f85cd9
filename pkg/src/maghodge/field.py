"""Magnetic potentials: holonomy, face flux, triviality and gauge shifts."""
from __future__ import annotations

from collections import deque

import numpy as np

from .complex import ComplexError, WeightedTriangulation

__all__ = [
    "MagneticPotential",
    "holonomy",
    "face_flux",
    "face_fluxes",
    "is_trivial",
    "gauge_transform_potential",
    "flat_difference",
]

HOLONOMY_TOL = 1e-9


class MagneticPotential:
    """Real edge function, stored on canonical edges.

    ``skew=False`` makes the reversed orientation return the *same* value
    instead of its negation.  That is never a valid potential; it exists so
    the Hermiticity checks have a negative control.
    """

    def __init__(self, T: WeightedTriangulation, values=None, skew: bool = True):
        self.T = T
        if values is None:
            values = np.zeros(T.n_edges)
        values = np.array(values, dtype=float)
        if values.shape != (T.n_edges,):
            raise ComplexError("potential needs one value per canonical edge")
        self.values = values
        self.skew = skew

    @classmethod
    def of(cls, T: WeightedTriangulation) -> "MagneticPotential":
        """The potential carried by the complex (the ``alpha`` field of the document)."""
        return cls(T, T.alpha)

    @classmethod
    def from_function(cls, T, fn):
        return cls(T, [fn(u, v) for u, v in T.edges])

    @property
    def forward(self) -> np.ndarray:
        return self.values

    @property
    def backward(self) -> np.ndarray:
        return -self.values if self.skew else self.values

    def oriented(self, idx, sign) -> np.ndarray:
        """Vectorised lookup: values on edges ``idx`` read in orientation ``sign``."""
        idx = np.asarray(idx)
        return np.where(np.asarray(sign) > 0, self.forward[idx], self.backward[idx])

    def at(self, x, y) -> float:
        i, sign = self.T.edge_index(x, y)
        return float(self.forward[i] if sign > 0 else self.backward[i])

    def __add__(self, other):
        if isinstance(other, MagneticPotential):
            other = other.values
        return MagneticPotential(self.T, self.values + np.asarray(other, dtype=float), self.skew)

    def __repr__(self):
        return f"MagneticPotential({self.values!r})"


def _as_potential(T, alpha):
    if isinstance(alpha, MagneticPotential):
        return alpha
    if alpha is None:
        return MagneticPotential.of(T)
    return MagneticPotential(T, alpha)


def holonomy(alpha: MagneticPotential, path) -> float:
    """Sum of the potential along consecutive steps of a vertex path."""
    path = list(path)
    total = 0.0
    for a, b in zip(path, path[1:]):
        if not alpha.T.has_edge(a, b):
            raise ComplexError(f"path step {a}->{b} is not an edge")
        total += alpha.at(a, b)
    return total


def face_flux(alpha: MagneticPotential, face) -> float:
    """Holonomy around the boundary of an oriented face."""
    x, y, z = face
    alpha.T.face_index(x, y, z)
    return alpha.at(x, y) + alpha.at(y, z) + alpha.at(z, x)


def face_fluxes(alpha: MagneticPotential) -> np.ndarray:
    """Flux of every canonical face, in its canonical orientation."""
    T = alpha.T
    a = alpha.oriented(T.face_eidx, T.face_esign)
    return a.sum(axis=1) if T.n_faces else np.zeros(0)


def flat_difference(T, f) -> np.ndarray:
    """Flat d0: f(head) - f(tail) on canonical edges."""
    f = np.asarray(f.values if hasattr(f, "values") else f)
    return f[T.heads] - f[T.tails]


def is_trivial(T: WeightedTriangulation, alpha, tol: float = HOLONOMY_TOL):
    """Integrate the potential along a BFS tree; return the primitive or None.

    The tree is rooted at the smallest vertex, where the primitive is 0.
    Returns ``None`` as soon as some edge outside the tree closes a cycle with
    holonomy larger than ``tol``.
    """
    alpha = _as_potential(T, alpha)
    if T.n_vertices == 0:
        return np.zeros(0)
    f = np.full(T.n_vertices, np.nan)
    root = T.vertices[0]
    f[T.vindex[root]] = 0.0
    queue = deque([root])
    while queue:
        x = queue.popleft()
        fx = f[T.vindex[x]]
        for y in T.neighbors[x]:
            j = T.vindex[y]
            if np.isnan(f[j]):
                f[j] = fx + alpha.at(x, y)
                queue.append(y)
    if np.isnan(f).any():
        raise ComplexError("complex is not connected")
    residual = flat_difference(T, f) - alpha.forward
    if T.n_edges and np.max(np.abs(residual)) > tol:
        return None
    if not alpha.skew and T.n_edges and np.max(np.abs(alpha.backward + alpha.forward)) > tol:
        return None
    return f


def gauge_transform_potential(alpha: MagneticPotential, f) -> MagneticPotential:
    """alpha + d0 f."""
    f = np.asarray(f.values.real if hasattr(f, "values") else f, dtype=float)
    return alpha + flat_difference(alpha.T, f)
