"""Chordality, clique complexes, and exact fiber recovery for chordal graphs.

For a chordal graph the parametrization over the clique complex is onto the
whole zero-constrained PSD cone, and a preimage can be read off a sparse
Cholesky factor after permuting the matrix into a perfect elimination
ordering: each factor column is then supported on a clique.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .core import (FactorParams, Graph, SimplicialComplex, SymmetricMatrix,
                   as_face, underlying_graph)
from .errors import (InternalInconsistency, NotChordal, NotPsd,
                     PatternViolation, TooManyCliques)
from .linalg import DEFAULT_TOL, _semidef_cholesky, is_psd

PATTERN_TOL = 1e-12

CLIQUE_GUARD = 10 ** 6


@dataclass(frozen=True)
class EliminationOrdering:
    """A vertex order; perfect when every vertex's later neighbors form a clique."""

    order: tuple[int, ...]
    is_perfect: bool


def maximum_cardinality_search(g: Graph) -> list[int]:
    """MCS visit order; ties broken by smallest vertex index."""
    weight = [0] * g.m
    visited = [False] * g.m
    order = []
    for _ in range(g.m):
        v = max(range(g.m), key=lambda u: (not visited[u], weight[u], -u))
        visited[v] = True
        order.append(v)
        for w in g.neighbors(v):
            if not visited[w]:
                weight[w] += 1
    return order


def _perfect_check(g: Graph, order: list[int]):
    """Return None if the order is a perfect elimination ordering, else a violating triple."""
    pos = {v: k for k, v in enumerate(order)}
    for v in order:
        later = sorted((w for w in g.neighbors(v) if pos[w] > pos[v]),
                       key=lambda w: pos[w])
        for a in range(len(later)):
            for b in range(a + 1, len(later)):
                if not g.has_edge(later[a], later[b]):
                    return v, later[a], later[b]
    return None


def _chordless_cycle_through(g: Graph, v: int, x: int, y: int):
    """Shortest chordless cycle through v using non-adjacent neighbors x, y of v."""
    banned = (g.neighbors(v) | {v}) - {x, y}
    prev = {x: None}
    queue = deque([x])
    while queue:
        cur = queue.popleft()
        if cur == y:
            path = []
            while cur is not None:
                path.append(cur)
                cur = prev[cur]
            return tuple([v] + path[::-1])
        for w in g.neighbors(cur):
            if w not in banned and w not in prev:
                prev[w] = cur
                queue.append(w)
    return None


def find_chordless_cycle(g: Graph) -> tuple[int, ...] | None:
    """Some induced cycle of length >= 4, or None if the graph is chordal."""
    order = maximum_cardinality_search(g)
    bad = _perfect_check(g, order[::-1])
    if bad is None:
        return None
    v, x, y = bad
    cyc = _chordless_cycle_through(g, v, x, y)
    if cyc is None:
        # the PEO violation guarantees some non-adjacent neighbor pair works
        for v in range(g.m):
            nbrs = sorted(g.neighbors(v))
            for i, x in enumerate(nbrs):
                for y in nbrs[i + 1:]:
                    if not g.has_edge(x, y):
                        cyc = _chordless_cycle_through(g, v, x, y)
                        if cyc is not None:
                            return cyc
        raise InternalInconsistency("imperfect ordering but no chordless cycle found")
    return cyc


def is_chordal(g: Graph):
    """(True, EliminationOrdering) or (False, chordless-cycle witness of length >= 4).

    The candidate ordering is the reverse of a maximum cardinality search.
    """
    order = tuple(maximum_cardinality_search(g)[::-1])
    if _perfect_check(g, list(order)) is None:
        return True, EliminationOrdering(order, True)
    witness = find_chordless_cycle(g)
    if witness is None or len(witness) < 4:
        raise InternalInconsistency("MCS ordering imperfect on a chordal graph")
    return False, witness


def clique_complex(g: Graph, guard: int = CLIQUE_GUARD) -> SimplicialComplex:
    """Simplicial complex of all cliques; facets via Bron-Kerbosch with pivoting."""
    cliques: list[tuple[int, ...]] = []

    def expand(r: set, p: set, x: set):
        if not p and not x:
            cliques.append(tuple(sorted(r)))
            if len(cliques) > guard:
                raise TooManyCliques(f"more than {guard} maximal cliques")
            return
        pivot = max(sorted(p | x), key=lambda u: len(g.neighbors(u) & p))
        for v in sorted(p - g.neighbors(pivot)):
            expand(r | {v}, p & g.neighbors(v), x & g.neighbors(v))
            p = p - {v}
            x = x | {v}

    expand(set(), set(range(g.m)), set())
    return SimplicialComplex.from_facets(g.m, cliques)


def _check_pattern(sigma: SymmetricMatrix, g: Graph):
    thr = PATTERN_TOL * sigma.scale()
    for i in range(sigma.m):
        for j in range(i + 1, sigma.m):
            if abs(sigma.a[i, j]) > thr and not g.has_edge(i, j):
                raise PatternViolation(
                    f"entry ({i},{j})={sigma.a[i, j]:.3e} nonzero at a non-edge"
                )


def chordal_fiber(g: Graph, sigma: SymmetricMatrix, tol: float = DEFAULT_TOL) -> FactorParams:
    """A preimage of sigma under the clique-complex parametrization of a chordal graph.

    Permute by a perfect elimination ordering, factor, and assign each factor
    column to the clique given by its support.  Supports of distinct nonzero
    columns are distinct (each contains its own pivot as least element), so
    every column lands on its own face.
    """
    if sigma.m != g.m:
        raise ValueError("matrix and graph sizes differ")
    ok, info = is_chordal(g)
    if not ok:
        raise NotChordal(f"graph has chordless cycle {tuple(v + 1 for v in info)}")
    _check_pattern(sigma, g)
    report = is_psd(sigma, tol)
    if not report.is_psd:
        raise NotPsd(f"min eigenvalue {report.min_eigenvalue:.3e}")

    perm = list(info.order)
    arr = np.array(sigma.a[np.ix_(perm, perm)])
    # exact zeros off the pattern make the factor's clique structure exact
    for a in range(len(perm)):
        for b in range(a + 1, len(perm)):
            if not g.has_edge(perm[a], perm[b]):
                arr[a, b] = 0.0
                arr[b, a] = 0.0
    ell = _semidef_cholesky(arr, tol)

    delta = clique_complex(g)
    values: dict = {}
    for k in range(g.m):
        col = ell[:, k]
        supp = np.nonzero(col)[0]
        if supp.size == 0:
            continue
        clique = as_face(perm[i] for i in supp)
        if not g.is_clique(clique):
            raise InternalInconsistency(
                f"factor column support {clique} is not a clique"
            )
        for i in supp:
            values[(clique, perm[i])] = float(col[i])
    return FactorParams(delta, values)


def is_surjective(delta: SimplicialComplex) -> bool:
    """True iff the underlying graph is chordal and delta is its clique complex."""
    g = underlying_graph(delta)
    ok, _ = is_chordal(g)
    if not ok:
        return False
    return clique_complex(g).facets == delta.facets
