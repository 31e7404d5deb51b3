"""Shared domain types: graphs, simplicial complexes, symmetric matrices, factor parameters.

Vertex convention: the Python API is 0-based throughout; JSON files (the CLI
boundary) label vertices 1..m.  Faces are kept as sorted tuples of vertex
indices, and the canonical total order on faces is by (size, lexicographic),
which fixes every tie-break in the library.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from .errors import AsymmetricInput

Face = tuple[int, ...]

ASYMMETRY_RTOL = 1e-12


def face_key(face: Iterable[int]) -> tuple[int, Face]:
    """Sort key realizing the canonical face order: size first, then lexicographic."""
    f = tuple(sorted(face))
    return (len(f), f)


def as_face(vertices: Iterable[int]) -> Face:
    f = tuple(sorted(set(vertices)))
    if not f:
        raise ValueError("empty face")
    return f


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..m-1."""

    m: int
    edges: frozenset[Face]

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("graph needs at least one vertex")
        for e in self.edges:
            if len(e) != 2 or e[0] == e[1]:
                raise ValueError(f"bad edge {e}")
            if not (0 <= e[0] < e[1] < self.m):
                raise ValueError(f"edge {e} outside vertex range 0..{self.m - 1}")

    @classmethod
    def from_edges(cls, m: int, edges: Iterable[Iterable[int]]) -> "Graph":
        norm = frozenset(tuple(sorted(e)) for e in edges)
        return cls(m, norm)

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        nbrs = [set() for _ in range(self.m)]
        for i, j in self.edges:
            nbrs[i].add(j)
            nbrs[j].add(i)
        return tuple(frozenset(s) for s in nbrs)

    def neighbors(self, v: int) -> frozenset[int]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def is_clique(self, vertices: Iterable[int]) -> bool:
        vs = sorted(set(vertices))
        return all(self.has_edge(a, b) for a, b in itertools.combinations(vs, 2))

    def to_json_dict(self) -> dict:
        return {"m": self.m, "edges": [[i + 1, j + 1] for i, j in sorted(self.edges)]}

    @classmethod
    def from_json_dict(cls, d: Mapping) -> "Graph":
        m = int(d["m"])
        return cls.from_edges(m, ((int(i) - 1, int(j) - 1) for i, j in d["edges"]))


def path_graph(m: int) -> Graph:
    return Graph.from_edges(m, ((i, i + 1) for i in range(m - 1)))


def cycle_graph(m: int) -> Graph:
    if m < 3:
        raise ValueError("cycle needs m >= 3")
    return Graph.from_edges(m, [(i, (i + 1) % m) for i in range(m)])


def complete_graph(m: int) -> Graph:
    return Graph.from_edges(m, itertools.combinations(range(m), 2))


@dataclass(frozen=True)
class SimplicialComplex:
    """Downward-closed set system on ground set 0..m-1, stored by its facets.

    The face set is implicitly all nonempty subsets of the facets.  Every
    vertex must occur in some facet (so all singletons are faces), and no
    facet may contain another.
    """

    m: int
    facets: tuple[Face, ...]

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("ground set must be nonempty")
        seen = set()
        covered = set()
        fsets = [frozenset(f) for f in self.facets]
        for f in self.facets:
            if not f or tuple(sorted(f)) != f or len(set(f)) != len(f):
                raise ValueError(f"facet {f} must be a sorted duplicate-free tuple")
            if not all(0 <= v < self.m for v in f):
                raise ValueError(f"facet {f} outside ground set")
            if f in seen:
                raise ValueError(f"duplicate facet {f}")
            seen.add(f)
            covered.update(f)
        for a, b in itertools.permutations(fsets, 2):
            if a < b:
                raise ValueError("facets must be inclusion-maximal")
        if covered != set(range(self.m)):
            missing = sorted(set(range(self.m)) - covered)
            raise ValueError(f"vertices {missing} not covered by any facet")
        if list(self.facets) != sorted(self.facets, key=face_key):
            raise ValueError("facets must be in canonical order; build via from_facets")

    @classmethod
    def from_facets(cls, m: int, facets: Iterable[Iterable[int]]) -> "SimplicialComplex":
        """Normalize, drop dominated sets, and add singleton facets for uncovered vertices."""
        tuples = [tuple(f) for f in facets]
        fsets = {frozenset(t) for t in tuples if t}
        covered = set().union(*fsets) if fsets else set()
        fsets |= {frozenset([v]) for v in range(m) if v not in covered}
        maximal = [f for f in fsets if not any(f < g for g in fsets)]
        canon = tuple(sorted((as_face(f) for f in maximal), key=face_key))
        return cls(m, canon)

    @cached_property
    def faces(self) -> tuple[Face, ...]:
        """All faces in canonical order (size, then lexicographic)."""
        out = set()
        for facet in self.facets:
            for k in range(1, len(facet) + 1):
                out.update(itertools.combinations(facet, k))
        return tuple(sorted(out, key=face_key))

    @cached_property
    def face_index(self) -> dict[Face, int]:
        return {f: k for k, f in enumerate(self.faces)}

    def has_face(self, face: Iterable[int]) -> bool:
        fs = frozenset(face)
        if not fs:
            return False
        return any(fs <= frozenset(facet) for facet in self.facets)

    def incidences(self):
        """Iterate (face, vertex) pairs: every face with each of its vertices."""
        for f in self.faces:
            for i in f:
                yield f, i

    def to_json_dict(self) -> dict:
        return {"m": self.m, "facets": [[v + 1 for v in f] for f in self.facets]}

    @classmethod
    def from_json_dict(cls, d: Mapping) -> "SimplicialComplex":
        m = int(d["m"])
        return cls.from_facets(m, ([int(v) - 1 for v in f] for f in d["facets"]))


def edge_complex(g: Graph) -> SimplicialComplex:
    """The complex whose facets are the edges of g (plus isolated singletons)."""
    return SimplicialComplex.from_facets(g.m, g.edges)


def underlying_graph(delta: SimplicialComplex) -> Graph:
    """Graph on the ground set whose edges are exactly the 2-element faces."""
    return Graph.from_edges(delta.m, (f for f in delta.faces if len(f) == 2))


def induced_vertex_map(subset: Iterable[int]) -> dict[int, int]:
    """Old-vertex -> new-vertex map used when restricting to a subset (sorted order)."""
    return {v: k for k, v in enumerate(sorted(set(subset)))}


def induced_subcomplex(delta: SimplicialComplex, subset: Iterable[int]) -> SimplicialComplex:
    """Faces of delta contained in the subset, relabeled via induced_vertex_map."""
    a = sorted(set(subset))
    if not a:
        raise ValueError("subset must be nonempty")
    if not all(0 <= v < delta.m for v in a):
        raise ValueError("subset outside ground set")
    relabel = induced_vertex_map(a)
    aset = frozenset(a)
    restricted = [tuple(sorted(relabel[v] for v in set(f) & aset))
                  for f in delta.facets if set(f) & aset]
    return SimplicialComplex.from_facets(len(a), restricted)


class SymmetricMatrix:
    """Dense real symmetric matrix; ingest symmetrizes and rejects asymmetric input."""

    __slots__ = ("a",)

    def __init__(self, array):
        arr = np.asarray(array, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("matrix entries must be finite")
        amax = float(np.abs(arr).max()) if arr.size else 0.0
        skew = float(np.abs(arr - arr.T).max())
        if skew > ASYMMETRY_RTOL * max(amax, 1e-300):
            raise AsymmetricInput(
                f"asymmetry {skew:.3e} exceeds {ASYMMETRY_RTOL:.0e} relative to max entry {amax:.3e}"
            )
        sym = (arr + arr.T) / 2.0
        sym.setflags(write=False)
        self.a = sym

    @property
    def m(self) -> int:
        return self.a.shape[0]

    def entry(self, i: int, j: int) -> float:
        return float(self.a[i, j])

    def scale(self) -> float:
        """max(1, largest absolute entry); the reference magnitude for tolerances."""
        return max(1.0, float(np.abs(self.a).max()))

    def submatrix(self, subset: Iterable[int]) -> "SymmetricMatrix":
        idx = sorted(set(subset))
        return SymmetricMatrix(self.a[np.ix_(idx, idx)])

    def pattern_graph(self, tol: float = 1e-12) -> Graph:
        """Graph of off-diagonal entries exceeding tol relative to the matrix scale."""
        thr = tol * self.scale()
        edges = [(i, j) for i in range(self.m) for j in range(i + 1, self.m)
                 if abs(self.a[i, j]) > thr]
        return Graph.from_edges(self.m, edges)

    def respects_pattern(self, g: Graph, tol: float = 1e-12) -> bool:
        thr = tol * self.scale()
        for i in range(self.m):
            for j in range(i + 1, self.m):
                if abs(self.a[i, j]) > thr and not g.has_edge(i, j):
                    return False
        return True

    def allclose(self, other: "SymmetricMatrix", rtol: float = 1e-9) -> bool:
        ref = max(self.scale(), other.scale())
        return bool(np.abs(self.a - other.a).max() <= rtol * ref)

    def __repr__(self):
        return f"SymmetricMatrix(m={self.m})"

    def to_json_dict(self) -> dict:
        return {"m": self.m, "entries": [[float(x) for x in row] for row in self.a]}

    @classmethod
    def from_json_dict(cls, d: Mapping) -> "SymmetricMatrix":
        m = int(d["m"])
        arr = np.asarray(d["entries"], dtype=float)
        if arr.shape != (m, m):
            raise ValueError(f"entries shape {arr.shape} does not match m={m}")
        return cls(arr)


@dataclass(frozen=True)
class FactorParams:
    """Parameter vector gamma indexed by (face, vertex-in-face) incidences.

    Storage is sparse: missing valid incidences read as 0.  Invalid keys
    (face not in the complex, or vertex outside the face) are rejected.
    """

    complex: SimplicialComplex
    values: dict[tuple[Face, int], float] = field(default_factory=dict)

    def __post_init__(self):
        for (face, i), v in self.values.items():
            if i not in face or not self.complex.has_face(face):
                raise ValueError(f"invalid incidence ({face}, {i})")
            if not np.isfinite(v):
                raise ValueError(f"non-finite parameter at ({face}, {i})")

    @classmethod
    def zeros(cls, delta: SimplicialComplex) -> "FactorParams":
        return cls(delta, {})

    @classmethod
    def build(cls, delta: SimplicialComplex, mapping: Mapping) -> "FactorParams":
        vals = {(as_face(f), int(i)): float(v) for (f, i), v in mapping.items()}
        return cls(delta, vals)

    def get(self, face: Iterable[int], vertex: int) -> float:
        f = as_face(face)
        if vertex not in f or not self.complex.has_face(f):
            raise KeyError(f"invalid incidence ({f}, {vertex})")
        return self.values.get((f, vertex), 0.0)

    def gamma_singleton(self, i: int) -> float:
        return self.get((i,), i)

    def gamma_edge(self, i: int, j: int) -> float:
        """gamma_{i,{i,j}}: the parameter of vertex i on edge {i,j}."""
        return self.get((i, j), i)

    def items(self):
        """Nonzero incidences in canonical order."""
        for key in sorted(self.values, key=lambda k: (face_key(k[0]), k[1])):
            v = self.values[key]
            if v != 0.0:
                yield key, v

    def scaled(self, c: float) -> "FactorParams":
        return FactorParams(self.complex, {k: c * v for k, v in self.values.items()})

    def with_value(self, face, vertex, value) -> "FactorParams":
        vals = dict(self.values)
        vals[(as_face(face), int(vertex))] = float(value)
        return FactorParams(self.complex, vals)

    def column(self, face: Face) -> np.ndarray:
        """The face's column of Gamma(gamma) as a length-m vector."""
        v = np.zeros(self.complex.m)
        for i in face:
            v[i] = self.values.get((face, i), 0.0)
        return v

    def to_json_dict(self) -> dict:
        return {
            "values": [
                {"face": [v + 1 for v in face], "vertex": i + 1, "gamma": val}
                for (face, i), val in self.items()
            ]
        }

    @classmethod
    def from_json_dict(cls, delta: SimplicialComplex, d: Mapping) -> "FactorParams":
        vals = {}
        for rec in d["values"]:
            face = as_face(int(v) - 1 for v in rec["face"])
            vals[(face, int(rec["vertex"]) - 1)] = float(rec["gamma"])
        return cls(delta, vals)


@dataclass(frozen=True, eq=False)
class FactorMatrix:
    """Dense view of Gamma(gamma): rows are vertices, columns are faces in canonical order."""

    faces: tuple[Face, ...]
    array: np.ndarray

    def __post_init__(self):
        if self.array.shape[1] != len(self.faces):
            raise ValueError("column count must match face count")
        for k, f in enumerate(self.faces):
            outside = np.delete(self.array[:, k], list(f))
            if outside.size and np.abs(outside).max() != 0.0:
                raise ValueError(f"column for face {f} has support outside the face")

    @property
    def m(self) -> int:
        return self.array.shape[0]

    def column(self, face: Face) -> np.ndarray:
        return self.array[:, self.faces.index(face)]


# --- JSON file helpers (the CLI boundary; vertices are 1-based on disk) ---

def load_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def load_matrix(path) -> SymmetricMatrix:
    return SymmetricMatrix.from_json_dict(load_json(path))


def load_complex(path) -> SimplicialComplex:
    return SimplicialComplex.from_json_dict(load_json(path))


def load_graph(path) -> Graph:
    return Graph.from_json_dict(load_json(path))


def load_params(delta: SimplicialComplex, path) -> FactorParams:
    return FactorParams.from_json_dict(delta, load_json(path))
