"""Cochains of degree 0, 1, 2 with their weighted inner products and the gauge action.

Values are dense complex arrays indexed by canonical cell order.  Reading a
1-cochain on a reversed edge, or a 2-cochain on an odd permutation of its
face, returns the negated value, so skew-symmetry cannot be violated.

Inner products run over canonical cells only.  The normalisations 1/2 and
1/6 in the definitions exactly cancel the 2 orientations of an edge and the
6 orderings of a face, which leaves plain weighted sums.
"""
from __future__ import annotations

import json

import numpy as np

from .complex import ComplexError, WeightedTriangulation

__all__ = [
    "Cochain0",
    "Cochain1",
    "Cochain2",
    "inner0",
    "inner1",
    "inner2",
    "inner",
    "norm",
    "tilde",
    "dbtilde",
    "gauge_act",
    "random_cochain",
    "cochain_to_json",
    "cochain_from_json",
]


class _Cochain:
    degree = -1

    def __init__(self, T: WeightedTriangulation, values=None):
        self.T = T
        n = self._size(T)
        if values is None:
            values = np.zeros(n, dtype=complex)
        else:
            values = np.array(values, dtype=complex)
            if values.shape != (n,):
                raise ComplexError(f"degree-{self.degree} cochain needs {n} values, got {values.shape}")
        self.values = values

    @staticmethod
    def _size(T):
        raise NotImplementedError

    def _same(self, other):
        if not isinstance(other, type(self)) or other.T is not self.T:
            raise ComplexError("cochains live on different complexes or degrees")

    def __add__(self, other):
        self._same(other)
        return type(self)(self.T, self.values + other.values)

    def __sub__(self, other):
        self._same(other)
        return type(self)(self.T, self.values - other.values)

    def __neg__(self):
        return type(self)(self.T, -self.values)

    def __mul__(self, k):
        """Scalar, or a pointwise factor aligned with canonical cells (symmetric function)."""
        if isinstance(k, _Cochain):
            raise TypeError("use an array of symmetric values, not a cochain")
        return type(self)(self.T, self.values * np.asarray(k))

    __rmul__ = __mul__

    def conj(self):
        return type(self)(self.T, self.values.conj())

    def copy(self):
        return type(self)(self.T, self.values.copy())

    def __repr__(self):
        return f"{type(self).__name__}({self.values!r})"


class Cochain0(_Cochain):
    degree = 0

    @staticmethod
    def _size(T):
        return T.n_vertices

    @classmethod
    def from_function(cls, T, fn):
        return cls(T, [fn(v) for v in T.vertices])

    @classmethod
    def dirac(cls, T, x):
        out = cls(T)
        out.values[T._vi(x)] = 1.0
        return out

    def at(self, x):
        return self.values[self.T._vi(x)]


class Cochain1(_Cochain):
    degree = 1

    @staticmethod
    def _size(T):
        return T.n_edges

    def at(self, x, y):
        i, sign = self.T.edge_index(x, y)
        return sign * self.values[i]

    @classmethod
    def from_function(cls, T, fn):
        """Build from ``fn(u, v)`` evaluated on canonical edges only."""
        return cls(T, [fn(u, v) for u, v in T.edges])


class Cochain2(_Cochain):
    degree = 2

    @staticmethod
    def _size(T):
        return T.n_faces

    def at(self, x, y, z):
        i, sign = self.T.face_index(x, y, z)
        return sign * self.values[i]

    @classmethod
    def from_function(cls, T, fn):
        return cls(T, [fn(*f) for f in T.faces])


_CLASSES = {0: Cochain0, 1: Cochain1, 2: Cochain2}


def _check_pair(a, b, cls):
    if not isinstance(a, cls) or not isinstance(b, cls):
        raise ComplexError(f"expected two {cls.__name__} arguments")
    if a.T is not b.T:
        raise ComplexError("cochains live on different complexes")


def inner0(T, f1: Cochain0, f2: Cochain0) -> complex:
    _check_pair(f1, f2, Cochain0)
    if f1.T is not T:
        raise ComplexError("cochain does not belong to this complex")
    return complex(np.sum(T.c * f1.values * f2.values.conj()))


def inner1(T, p1: Cochain1, p2: Cochain1) -> complex:
    _check_pair(p1, p2, Cochain1)
    if p1.T is not T:
        raise ComplexError("cochain does not belong to this complex")
    return complex(np.sum(T.r * p1.values * p2.values.conj()))


def inner2(T, q1: Cochain2, q2: Cochain2) -> complex:
    _check_pair(q1, q2, Cochain2)
    if q1.T is not T:
        raise ComplexError("cochain does not belong to this complex")
    return complex(np.sum(T.s * q1.values * q2.values.conj()))


def inner(a, b) -> complex:
    """Inner product dispatched on degree; also accepts (f, phi, psi) triples."""
    if isinstance(a, tuple):
        return sum(inner(x, y) for x, y in zip(a, b))
    return {0: inner0, 1: inner1, 2: inner2}[a.degree](a.T, a, b)


def norm(a) -> float:
    return float(np.sqrt(max(inner(a, a).real, 0.0)))


def _vertex_values(T, f):
    if isinstance(f, Cochain0):
        return f.values
    if isinstance(f, dict):
        return np.array([f[v] for v in T.vertices])
    f = np.asarray(f)
    if f.shape != (T.n_vertices,):
        raise ComplexError("vertex function has the wrong length")
    return f


def tilde(T, f) -> np.ndarray:
    """Edge symmetrisation (f(e-) + f(e+)) / 2 on canonical edges."""
    g = _vertex_values(T, f)
    return 0.5 * (g[T.tails] + g[T.heads])


def dbtilde(T, f) -> np.ndarray:
    """Face symmetrisation (f(x) + f(y) + f(z)) / 3 on canonical faces."""
    g = _vertex_values(T, f)
    idx = T.face_vidx
    return (g[idx[:, 0]] + g[idx[:, 1]] + g[idx[:, 2]]) / 3.0


def gauge_act(k: int, f, omega):
    """Multiply a k-cochain by exp(i f), exp(i f~) or exp(i f~~) according to its degree."""
    T = omega.T
    if omega.degree != k:
        raise ComplexError(f"expected a degree-{k} cochain")
    g = np.asarray(_vertex_values(T, f), dtype=float)
    if k == 0:
        phase = g
    elif k == 1:
        phase = tilde(T, g)
    else:
        phase = dbtilde(T, g)
    return type(omega)(T, np.exp(1j * phase) * omega.values)


def random_cochain(T, k: int, rng, scale=1.0):
    cls = _CLASSES[k]
    n = cls._size(T)
    return cls(T, scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n)))


# -- JSON ----------------------------------------------------------------

def _keys(T, k):
    if k == 0:
        return [f"v:{v}" for v in T.vertices]
    if k == 1:
        return [f"e:{u},{v}" for u, v in T.edges]
    return ["f:" + ",".join(f) for f in T.faces]


def cochain_to_json(omega) -> str:
    keys = _keys(omega.T, omega.degree)
    doc = {k: [float(z.real), float(z.imag)] for k, z in zip(keys, omega.values)}
    return json.dumps(doc, sort_keys=True)


def cochain_from_json(T, k: int, text: str):
    """Parse a cochain map.  Non-canonical keys are accepted and re-signed."""
    doc = json.loads(text)
    out = _CLASSES[k](T)
    for key, (re, im) in doc.items():
        tag, _, body = key.partition(":")
        verts = body.split(",")
        z = complex(re, im)
        if tag == "v" and k == 0:
            out.values[T._vi(body)] = z
        elif tag == "e" and k == 1 and len(verts) == 2:
            i, sign = T.edge_index(*verts)
            out.values[i] = sign * z
        elif tag == "f" and k == 2 and len(verts) == 3:
            i, sign = T.face_index(*verts)
            out.values[i] = sign * z
        else:
            raise ComplexError(f"key {key!r} does not name a degree-{k} cell")
    return out
