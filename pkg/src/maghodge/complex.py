"""Weighted triangulations: vertices, edges and triangular faces with weights.

Edges are stored once, in canonical orientation (tail < head).  Faces are
stored once, rotated so that the smallest vertex comes first; the listed
cyclic order fixes the positive orientation of the face.  The complex is
immutable after construction and carries precomputed adjacency maps.

A magnetic potential may ride along with the complex (``alpha``, one real
value per canonical edge); it is what the JSON document stores in the
``alpha`` field of each edge.
"""
from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "ComplexError",
    "ParseError",
    "ValidationError",
    "OrientedEdge",
    "OrientedFace",
    "WeightedTriangulation",
    "degree_vertex",
    "degree_edge",
    "validate",
    "load",
    "loads",
    "save",
    "dumps",
    "document_violations",
]


class ComplexError(ValueError):
    """Base error for malformed complexes and bad cell lookups."""


class ParseError(ComplexError):
    pass


class ValidationError(ComplexError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations) or "invalid complex")


@dataclass(frozen=True)
class OrientedEdge:
    tail: str
    head: str

    def __neg__(self) -> "OrientedEdge":
        return OrientedEdge(self.head, self.tail)

    def __iter__(self):
        yield self.tail
        yield self.head


def _perm_sign(seq: Sequence, ref: Sequence) -> int:
    """Sign of the permutation taking ``ref`` to ``seq`` (three entries)."""
    idx = [ref.index(v) for v in seq]
    inversions = sum(1 for i in range(3) for j in range(i + 1, 3) if idx[i] > idx[j])
    return -1 if inversions % 2 else 1


def _rotate_min_first(verts: Sequence[str]) -> tuple:
    k = min(range(3), key=lambda i: verts[i])
    return tuple(verts[k:]) + tuple(verts[:k])


@dataclass(frozen=True)
class OrientedFace:
    """An ordered vertex triple; cyclic rotations give the same orientation."""

    verts: tuple

    def __post_init__(self):
        if len(self.verts) != 3 or len(set(self.verts)) != 3:
            raise ComplexError(f"a face needs three distinct vertices, got {self.verts!r}")
        object.__setattr__(self, "verts", tuple(self.verts))

    def canonical(self) -> tuple:
        return _rotate_min_first(self.verts)

    def sign_against(self, ref: Sequence[str]) -> int:
        """+1 when this face has the orientation of ``ref``, -1 otherwise."""
        return _perm_sign(self.verts, tuple(ref))

    def reversed(self) -> "OrientedFace":
        x, y, z = self.verts
        return OrientedFace((y, x, z))

    def __eq__(self, other):
        if not isinstance(other, OrientedFace):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())


class WeightedTriangulation:
    """Finite weighted 2-complex with triangular faces.

    Parameters
    ----------
    vertices : mapping or iterable of (id, c)
    edges : iterable of (u, v, r) or (u, v, r, alpha)
    faces : iterable of ((x, y, z), s)
    check : run :func:`validate` and raise :class:`ValidationError`.

    Attributes
    ----------
    vertices, edges, faces : tuples of canonical cells
    c, r, s : float arrays of weights aligned with the cell tuples
    alpha : float array, magnetic potential on canonical edges
    """

    def __init__(self, vertices, edges, faces=(), check=True):
        vitems = list(vertices.items()) if isinstance(vertices, dict) else list(vertices)
        ids = [str(v) for v, _ in vitems]
        if len(set(ids)) != len(ids):
            raise ParseError("duplicate vertex id")
        order = sorted(range(len(ids)), key=lambda i: ids[i])
        self.vertices = tuple(ids[i] for i in order)
        self.c = np.array([float(vitems[i][1]) for i in order])
        self.vindex = {v: i for i, v in enumerate(self.vertices)}

        erows = {}
        for item in edges:
            u, v, r = str(item[0]), str(item[1]), float(item[2])
            a = float(item[3]) if len(item) > 3 else 0.0
            if u > v:
                u, v, a = v, u, -a
            key = (u, v)
            if key in erows:
                raise ParseError(f"duplicate edge {u},{v}")
            erows[key] = (r, a)
        ekeys = sorted(erows)
        self.edges = tuple(ekeys)
        self.r = np.array([erows[k][0] for k in ekeys])
        self.alpha = np.array([erows[k][1] for k in ekeys])
        self.eindex = {k: i for i, k in enumerate(ekeys)}

        frows = {}
        for verts, s in faces:
            verts = tuple(str(v) for v in verts)
            canon = OrientedFace(verts).canonical()
            key = frozenset(canon)
            if key in frows:
                raise ParseError(f"duplicate face {','.join(sorted(key))}")
            frows[key] = (canon, float(s))
        fl = sorted(frows.values())
        self.faces = tuple(f for f, _ in fl)
        self.s = np.array([s for _, s in fl])
        self.findex = {frozenset(f): i for i, f in enumerate(self.faces)}

        self._build_adjacency()
        if check:
            problems = validate(self)
            if problems:
                raise ValidationError(problems)

    def _build_adjacency(self):
        nb = {v: [] for v in self.vertices}
        for u, v in self.edges:
            if u in nb:
                nb[u].append(v)
            if v in nb:
                nb[v].append(u)
        self.neighbors = {v: tuple(sorted(ns)) for v, ns in nb.items()}
        fe = {e: [] for e in self.edges}
        fx = {v: [] for v in self.vertices}
        for fi, (x, y, z) in enumerate(self.faces):
            for a, b, t in ((x, y, z), (y, z, x), (z, x, y)):
                key = (a, b) if a < b else (b, a)
                fe.setdefault(key, []).append((t, fi))
                fx.setdefault(t, []).append((key, fi))
        self._faces_of_edge = {e: tuple(sorted(v)) for e, v in fe.items()}
        self._faces_of_vertex = {v: tuple(sorted(l)) for v, l in fx.items()}
        self.tails = np.array([self.vindex.get(u, -1) for u, _ in self.edges], dtype=int)
        self.heads = np.array([self.vindex.get(v, -1) for _, v in self.edges], dtype=int)
        # per face: vertex indices, and edge index / orientation sign of the
        # sides (x,y), (y,z), (z,x)
        nf = len(self.faces)
        self.face_vidx = np.full((nf, 3), -1, dtype=int)
        self.face_eidx = np.full((nf, 3), -1, dtype=int)
        self.face_esign = np.ones((nf, 3), dtype=int)
        for fi, (x, y, z) in enumerate(self.faces):
            for k, (a, b) in enumerate(((x, y), (y, z), (z, x))):
                self.face_vidx[fi, k] = self.vindex.get(a, -1)
                key = (a, b) if a < b else (b, a)
                self.face_eidx[fi, k] = self.eindex.get(key, -1)
                self.face_esign[fi, k] = 1 if a < b else -1

    # -- sizes -----------------------------------------------------------
    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    @property
    def n_cells(self) -> int:
        return self.n_vertices + self.n_edges + self.n_faces

    def __repr__(self):
        return (f"WeightedTriangulation(|V|={self.n_vertices}, |E|={self.n_edges}, "
                f"|F|={self.n_faces})")

    # -- lookups ---------------------------------------------------------
    def has_edge(self, x, y) -> bool:
        return ((x, y) if x < y else (y, x)) in self.eindex

    def edge_index(self, x, y):
        """Return ``(i, sign)`` with sign +1 when (x, y) is the canonical orientation."""
        if x < y:
            i = self.eindex.get((x, y))
            sign = 1
        else:
            i = self.eindex.get((y, x))
            sign = -1
        if i is None:
            raise ComplexError(f"({x},{y}) is not an edge")
        return i, sign

    def face_index(self, x, y, z):
        """Return ``(i, sign)`` for an ordered vertex triple."""
        i = self.findex.get(frozenset((x, y, z)))
        if i is None or len({x, y, z}) != 3:
            raise ComplexError(f"({x},{y},{z}) is not a face")
        return i, _perm_sign((x, y, z), self.faces[i])

    def edge_weight(self, x, y) -> float:
        return float(self.r[self.edge_index(x, y)[0]])

    def face_weight(self, x, y, z) -> float:
        return float(self.s[self.face_index(x, y, z)[0]])

    def vertex_weight(self, x) -> float:
        return float(self.c[self._vi(x)])

    def _vi(self, x) -> int:
        try:
            return self.vindex[x]
        except KeyError:
            raise ComplexError(f"unknown vertex {x!r}") from None

    def F_xy(self, x, y) -> tuple:
        """Third vertices t with {x, y, t} a face."""
        key = (x, y) if x < y else (y, x)
        if key not in self.eindex:
            raise ComplexError(f"({x},{y}) is not an edge")
        return tuple(t for t, _ in self._faces_of_edge.get(key, ()))

    def faces_of_edge(self, x, y) -> tuple:
        """Pairs (t, face index) for faces containing the edge {x, y}."""
        key = (x, y) if x < y else (y, x)
        return self._faces_of_edge.get(key, ())

    def F_x(self, x) -> tuple:
        """Canonical edges e such that {x} with e spans a face."""
        self._vi(x)
        return tuple(e for e, _ in self._faces_of_vertex.get(x, ()))

    def faces_of_vertex(self, x) -> tuple:
        return self._faces_of_vertex.get(x, ())

    def is_simple(self) -> bool:
        return bool(np.all(self.c == 1) and np.all(self.r == 1) and np.all(self.s == 1))

    def with_alpha(self, alpha) -> "WeightedTriangulation":
        """Copy of the complex carrying a different potential on canonical edges."""
        alpha = np.asarray(alpha, dtype=float)
        if alpha.shape != (self.n_edges,):
            raise ComplexError("alpha must have one entry per canonical edge")
        new = object.__new__(WeightedTriangulation)
        new.__dict__.update(self.__dict__)
        new.alpha = alpha.copy()
        return new

    def structurally_equal(self, other) -> bool:
        return (self.vertices == other.vertices and self.edges == other.edges
                and self.faces == other.faces and np.array_equal(self.c, other.c)
                and np.array_equal(self.r, other.r) and np.array_equal(self.s, other.s)
                and np.array_equal(self.alpha, other.alpha))


def degree_vertex(T: WeightedTriangulation, x) -> float:
    """Weighted vertex degree (1/c(x)) * sum of r(x, y) over neighbours y."""
    i = T._vi(x)
    total = sum(T.edge_weight(x, y) for y in T.neighbors[x])
    return total / T.c[i]


def degree_edge(T: WeightedTriangulation, e) -> float:
    """Weighted edge degree (1/r(x, y)) * sum of s(x, y, t) over t in F_xy."""
    x, y = e
    i, _ = T.edge_index(x, y)
    total = sum(T.s[fi] for _, fi in T.faces_of_edge(x, y))
    return float(total / T.r[i])


def validate(T: WeightedTriangulation) -> list[str]:
    """List every invariant violation; empty when the complex is well formed."""
    out = []
    vs = set(T.vertices)
    for v, c in zip(T.vertices, T.c):
        if not (c > 0 and math.isfinite(c)):
            out.append(f"vertex {v}: non-positive weight c={c!r}")
    for (u, v), r in zip(T.edges, T.r):
        if u == v:
            out.append(f"edge {u},{v}: loop")
        for w in (u, v):
            if w not in vs:
                out.append(f"edge {u},{v}: unknown vertex {w}")
        if not (r > 0 and math.isfinite(r)):
            out.append(f"edge {u},{v}: non-positive weight r={r!r}")
    for f, s in zip(T.faces, T.s):
        x, y, z = f
        name = ",".join(f)
        for w in f:
            if w not in vs:
                out.append(f"face {name}: unknown vertex {w}")
        if not all(T.has_edge(a, b) for a, b in ((x, y), (y, z), (z, x))):
            out.append(f"face {name}: face not a 3-cycle")
        if not (s > 0 and math.isfinite(s)):
            out.append(f"face {name}: non-positive weight s={s!r}")
    if T.vertices and not _connected(T):
        out.append("complex: not connected")
    return out


def _connected(T) -> bool:
    start = T.vertices[0]
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in T.neighbors.get(x, ()):
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return len(seen) == T.n_vertices


# -- JSON document -------------------------------------------------------

def _num(x: float):
    x = float(x)
    if x.is_integer() and abs(x) < 2**53:
        return int(x)
    return x


def to_document(T: WeightedTriangulation) -> dict:
    return {
        "vertices": [{"id": v, "c": _num(c)} for v, c in zip(T.vertices, T.c)],
        "edges": [{"u": u, "v": v, "r": _num(r), "alpha": _num(a)}
                  for (u, v), r, a in zip(T.edges, T.r, T.alpha)],
        "faces": [{"verts": list(f), "s": _num(s)} for f, s in zip(T.faces, T.s)],
    }


def _require(obj, key, where):
    try:
        return obj[key]
    except (KeyError, TypeError):
        raise ParseError(f"{where}: missing field {key!r}") from None


def from_document(doc: dict, check=True) -> WeightedTriangulation:
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object")
    try:
        verts = [(str(_require(v, "id", "vertex")), float(_require(v, "c", "vertex")))
                 for v in _require(doc, "vertices", "document")]
        edges = [(str(_require(e, "u", "edge")), str(_require(e, "v", "edge")),
                  float(_require(e, "r", "edge")), float(e.get("alpha", 0.0)))
                 for e in _require(doc, "edges", "document")]
        faces = []
        for f in doc.get("faces", []):
            vv = _require(f, "verts", "face")
            if len(vv) != 3:
                raise ParseError(f"face {vv!r}: needs exactly three vertices")
            faces.append((tuple(str(v) for v in vv), float(_require(f, "s", "face"))))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ComplexError):
            raise
        raise ParseError(f"malformed document: {exc}") from exc
    return WeightedTriangulation(verts, edges, faces, check=check)


def document_violations(doc: dict) -> list[str]:
    """Check a raw document for orientation defects before canonicalisation.

    Reports edges listed in both orientations whose potential is not
    negated (or whose weights differ).  Duplicates with identical
    orientation are left to the parser.
    """
    seen = {}
    out = []
    for e in doc.get("edges", []):
        u, v = str(e.get("u")), str(e.get("v"))
        a = float(e.get("alpha", 0.0))
        r = float(e.get("r", float("nan")))
        if (v, u) in seen:
            r2, a2 = seen[(v, u)]
            if not math.isclose(a, -a2, rel_tol=0, abs_tol=1e-12):
                out.append(f"edge {u},{v}: alpha not skew-symmetric ({a2!r} vs {a!r})")
            if r != r2:
                out.append(f"edge {u},{v}: weight r not symmetric")
        seen[(u, v)] = (r, a)
    return out


def dumps(T: WeightedTriangulation) -> str:
    """Canonical JSON text (floats in shortest round-trip form)."""
    return json.dumps(to_document(T), indent=1, ensure_ascii=False) + "\n"


def loads(text: str, check=True) -> WeightedTriangulation:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return from_document(doc, check=check)


def load(source, check=True) -> WeightedTriangulation:
    """Load from a path or a text stream."""
    if isinstance(source, (str, Path)):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = source.read()
    return loads(text, check=check)


def save(T: WeightedTriangulation, dest) -> None:
    text = dumps(T)
    if isinstance(dest, (str, Path)):
        Path(dest).write_text(text, encoding="utf-8")
    else:
        dest.write(text)


def from_cells(vertices: Iterable, edges: Iterable, faces: Iterable = (), *, c=1.0, r=1.0,
               s=1.0, check=True) -> WeightedTriangulation:
    """Shortcut for complexes with constant weights.

    ``edges`` are pairs, ``faces`` triples; weights default to 1 (a simple complex).
    """
    return WeightedTriangulation([(v, c) for v in vertices], [(u, v, r) for u, v in edges],
                                 [(f, s) for f in faces], check=check)
