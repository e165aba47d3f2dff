"""Simplicial complexes: Vietoris-Rips construction, boundary matrices,
barycentric subdivision and elementary collapses.

Simplices are stored as sorted tuples of hashable vertex ids grouped by
dimension; the vertex order of the tuple fixes the orientation used by the
boundary matrices.
"""

from __future__ import annotations

from itertools import combinations
from typing import Hashable, Iterable, Optional, Sequence

import numpy as np


class SimplicialError(ValueError):
    pass


class SimplicialComplex:
    """A finite abstract simplicial complex, closed under faces."""

    def __init__(self, simplices: Iterable[Sequence[Hashable]] = ()):
        self._by_dim: list[list[tuple]] = []
        self._index: list[dict] = []   # per dimension: tuple -> position
        for s in simplices:
            self.add(s)

    def add(self, simplex: Sequence[Hashable]) -> None:
        """Insert a simplex and all of its faces."""
        s = tuple(sorted(set(simplex)))
        if not s:
            raise SimplicialError("empty simplex")
        for k in range(1, len(s) + 1):
            for face in combinations(s, k):
                d = k - 1
                while len(self._by_dim) <= d:
                    self._by_dim.append([])
                    self._index.append({})
                if face not in self._index[d]:
                    self._index[d][face] = len(self._by_dim[d])
                    self._by_dim[d].append(face)

    @property
    def dimension(self) -> int:
        return len(self._by_dim) - 1

    def simplices(self, dim: int) -> list[tuple]:
        if 0 <= dim < len(self._by_dim):
            return self._by_dim[dim]
        return []

    def all_simplices(self) -> list[tuple]:
        return [s for level in self._by_dim for s in level]

    def __contains__(self, simplex) -> bool:
        s = tuple(sorted(set(simplex)))
        d = len(s) - 1
        return 0 <= d < len(self._index) and s in self._index[d]

    def __len__(self) -> int:
        return sum(len(level) for level in self._by_dim)

    def f_vector(self) -> list[int]:
        return [len(level) for level in self._by_dim]

    def index(self, simplex) -> int:
        s = tuple(sorted(set(simplex)))
        return self._index[len(s) - 1][s]

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * len(level) for d, level in enumerate(self._by_dim))

    def boundary_sparse(self, dim: int) -> list[dict]:
        """Boundary map C_dim -> C_{dim-1} as sparse columns (row -> coeff)."""
        cols = self.simplices(dim)
        if dim <= 0 or not cols:
            return [dict() for _ in cols]
        row_ix = self._index[dim - 1]
        out = []
        for s in cols:
            col = {}
            for i in range(len(s)):
                face = s[:i] + s[i + 1:]
                col[row_ix[face]] = (-1) ** i
            out.append(col)
        return out

    def boundary_matrix(self, dim: int) -> np.ndarray:
        """Integer matrix of the boundary map C_dim -> C_{dim-1}."""
        rows = self.simplices(dim - 1)
        cols = self.simplices(dim)
        mat = np.zeros((len(rows), len(cols)), dtype=np.int64)
        if dim <= 0 or not cols:
            return mat
        row_ix = self._index[dim - 1]
        for j, s in enumerate(cols):
            for i in range(len(s)):
                face = s[:i] + s[i + 1:]
                mat[row_ix[face], j] = (-1) ** i
        return mat


# ---------------------------------------------------------------------------
# Vietoris-Rips
# ---------------------------------------------------------------------------

def rips_graph(pairwise: np.ndarray, threshold: float, strict: bool = True,
               tol: float = 1e-9) -> list[list[int]]:
    """Neighbor lists of the graph whose edges have diameter below threshold.

    Strict mode keeps pairs with d < threshold (tolerance-resolved); otherwise
    d <= threshold.
    """
    n = pairwise.shape[0]
    adj: list[list[int]] = [[] for _ in range(n)]
    scaled = tol * max(1.0, threshold)
    for i in range(n):
        for j in range(i + 1, n):
            d = pairwise[i, j]
            if abs(d - threshold) <= scaled:
                keep = not strict
            else:
                keep = d < threshold if strict else d <= threshold
            if keep:
                adj[i].append(j)
                adj[j].append(i)
    return adj


def vietoris_rips(pairwise: np.ndarray, threshold: float, max_dim: int,
                  strict: bool = True, tol: float = 1e-9,
                  max_simplices: Optional[int] = None) -> SimplicialComplex:
    """Vietoris-Rips complex up to dimension max_dim by clique expansion.

    Two-phase: build the threshold graph, then grow cliques incrementally
    (each k-simplex from a (k-1)-simplex plus a common lower neighbor).
    """
    n = pairwise.shape[0]
    adj = rips_graph(pairwise, threshold, strict=strict, tol=tol)
    nbr = [set(a) for a in adj]
    cx = SimplicialComplex()
    count = 0

    def bump(k):
        nonlocal count
        count += k
        if max_simplices is not None and count > max_simplices:
            raise SimplicialError(
                f"Rips complex exceeds cap of {max_simplices} simplices")

    frontier = [(i,) for i in range(n)]
    for v in frontier:
        cx.add(v)
    bump(n)
    dim = 0
    while frontier and dim < max_dim:
        nxt = []
        for s in frontier:
            common = nbr[s[0]]
            for v in s[1:]:
                common = common & nbr[v]
            for u in common:
                if u > s[-1]:
                    t = s + (u,)
                    nxt.append(t)
        for t in nxt:
            cx.add(t)
        bump(len(nxt))
        frontier = nxt
        dim += 1
    return cx


def connected_components(n: int, adj: list[list[int]]) -> int:
    """Component count of a graph by union-find."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = n
    for i, neigh in enumerate(adj):
        for j in neigh:
            if j > i:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
                    comps -= 1
    return comps


# ---------------------------------------------------------------------------
# subdivision and collapses
# ---------------------------------------------------------------------------

def barycentric_subdivision(cx: SimplicialComplex) -> SimplicialComplex:
    """Complex whose vertices are the simplices of cx and whose simplices are
    the chains of proper faces (the order complex of the face poset)."""
    out = SimplicialComplex()
    maximal = maximal_simplices(cx)
    for top in maximal:
        _chains_under(top, (), out)
    return out


def maximal_simplices(cx: SimplicialComplex) -> list[tuple]:
    """Simplices of cx not contained in any larger simplex."""
    maximal = []
    for d in range(cx.dimension, -1, -1):
        for s in cx.simplices(d):
            sv = set(s)
            if not any(sv < set(m) for m in maximal):
                maximal.append(s)
    return maximal


def _chains_under(simplex: tuple, chain: tuple, out: SimplicialComplex) -> None:
    chain = chain + (simplex,)
    out.add(chain)
    if len(simplex) > 1:
        for face in combinations(simplex, len(simplex) - 1):
            _chains_under(face, chain, out)


def elementary_collapse(cx: SimplicialComplex) -> SimplicialComplex:
    """Repeatedly remove free faces; the result is homotopy equivalent.

    A face is free when it lies in exactly one strictly larger simplex.
    """
    alive: set[tuple] = set(cx.all_simplices())
    cofaces: dict[tuple, set[tuple]] = {s: set() for s in alive}
    for s in alive:
        if len(s) > 1:
            for i in range(len(s)):
                cofaces[s[:i] + s[i + 1:]].add(s)

    queue = [s for s in alive if len(cofaces[s]) == 1]

    def drop(dead: tuple) -> None:
        # dead is removed: its codim-1 faces each lose one coface
        for i in range(len(dead)):
            f = dead[:i] + dead[i + 1:]
            if f not in cofaces or f not in alive:
                continue
            cofaces[f].discard(dead)
            if len(cofaces[f]) == 1:
                queue.append(f)
            elif not cofaces[f]:
                # f became maximal: its single-coface faces become free
                for j in range(len(f)):
                    g = f[:j] + f[j + 1:]
                    if g in cofaces and g in alive and len(cofaces[g]) == 1:
                        queue.append(g)

    while queue:
        s = queue.pop()
        if s not in alive or len(cofaces[s]) != 1:
            continue
        (t,) = cofaces[s]
        # t must itself be maximal, or (s, t) is not a free pair
        if t not in alive or cofaces[t]:
            continue
        alive.discard(s)
        alive.discard(t)
        drop(t)
        drop(s)
    out = SimplicialComplex()
    for d in range(cx.dimension, -1, -1):
        for s in cx.simplices(d):
            if s in alive:
                out.add(s)
    return out
