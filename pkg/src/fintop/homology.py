"""Simplicial homology and induced maps.

Betti numbers come from exact ranks of boundary matrices: over the
rationals by default, over GF(p) on request, and over the integers (Smith
normal form, reporting torsion) for single complexes.  Vertex maps induce
chain maps with the usual sorting sign and degenerate-image-to-zero
convention; ranks of induced homology maps use a block identity so that
only sparse ranks are ever needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional

import numpy as np

from . import linalg as L
from .finite_space import FiniteSpace
from .simplicial import SimplicialComplex, elementary_collapse


class HomologyError(ValueError):
    pass


def parse_field(spec: str):
    """'q' | 'p:PRIME' | 'z' -> a rank function and a tag."""
    s = spec.lower()
    if s == "q":
        return L.rank_q, ("q", None)
    if s == "z":
        return L.rank_q, ("z", None)
    if s.startswith("p:"):
        p = int(s[2:])
        return (lambda m: L.rank_gfp(m, p)), ("p", p)
    raise HomologyError(f"unknown field {spec!r} (use q, z, or p:PRIME)")


@dataclass
class HomologyResult:
    betti: list[int]
    field: str
    torsion: Optional[list[list[int]]] = None   # per degree, integer mode only
    f_vector: list[int] = field(default_factory=list)


def betti_numbers(cx: SimplicialComplex, k_max: int, field_spec: str = "q",
                  collapse: bool = True,
                  max_simplices: Optional[int] = None) -> HomologyResult:
    """Betti numbers b_0..b_k_max of a complex.

    The complex must contain simplices up to dimension k_max + 1 wherever
    they exist, or the top Betti number would be overcounted.  Collapsing
    first removes free pairs and is homology-neutral.
    """
    if max_simplices is not None and len(cx) > max_simplices:
        raise HomologyError(
            f"complex has {len(cx)} simplices, above the cap of {max_simplices}")
    original_f = cx.f_vector()
    if collapse:
        cx = elementary_collapse(cx)
    rank_fn, (tag, p) = parse_field(field_spec)
    counts = [len(cx.simplices(d)) for d in range(k_max + 2)]
    boundaries = [cx.boundary_sparse(d) for d in range(k_max + 2)]
    ranks = [0] + [rank_fn(b) for b in boundaries[1:]]
    betti = [counts[d] - ranks[d] - ranks[d + 1] for d in range(k_max + 1)]
    torsion = None
    if tag == "z":
        torsion = []
        for d in range(k_max + 1):
            inv = (L.smith_normal_form(cx.boundary_matrix(d + 1))
                   if counts[d + 1] else [])
            torsion.append([v for v in inv if v > 1])
    label = {"q": "Q", "z": "Z", "p": f"GF({p})"}[tag]
    return HomologyResult(betti=betti, field=label, torsion=torsion,
                          f_vector=original_f)


def betti_of_space(space: FiniteSpace, k_max: int, field_spec: str = "q",
                   collapse: bool = True,
                   max_simplices: Optional[int] = None) -> HomologyResult:
    """Betti numbers of a finite space through its order complex."""
    cx = space.order_complex(max_chain=k_max + 2)
    return betti_numbers(cx, k_max, field_spec, collapse=collapse,
                         max_simplices=max_simplices)


# ---------------------------------------------------------------------------
# chain maps induced by vertex maps
# ---------------------------------------------------------------------------

def _sort_sign(seq: tuple) -> tuple[tuple, int]:
    """Sorted tuple and the sign of the sorting permutation (0 if repeats)."""
    if len(set(seq)) != len(seq):
        return (), 0
    inversions = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq))
                     if seq[i] > seq[j])
    return tuple(sorted(seq)), -1 if inversions % 2 else 1


def chain_map(src: SimplicialComplex, dst: SimplicialComplex,
              vertex_map: Mapping, k_max: int) -> list[list[L.SparseCol]]:
    """Degreewise matrices of the chain map induced by a vertex map.

    Degenerate images are sent to zero.  An image simplex missing from the
    target is an error: the vertex map is not simplicial into dst.
    """
    out = []
    for d in range(k_max + 1):
        cols: list[L.SparseCol] = []
        for s in src.simplices(d):
            image = tuple(vertex_map[v] for v in s)
            t, sign = _sort_sign(image)
            if sign == 0:
                cols.append({})
                continue
            if t not in dst:
                raise HomologyError(
                    f"image simplex {t} missing from the target complex")
            cols.append({dst.index(t): sign})
        out.append(cols)
    return out


def compose_sparse(a: list[L.SparseCol], b: list[L.SparseCol]) -> list[L.SparseCol]:
    """Matrix product a @ b of sparse column lists."""
    out = []
    for col in b:
        acc: L.SparseCol = {}
        for k, v in col.items():
            for r, w in a[k].items():
                nv = acc.get(r, 0) + v * w
                if nv:
                    acc[r] = nv
                else:
                    acc.pop(r, None)
        out.append(acc)
    return out


def sparse_equal(a: list[L.SparseCol], b: list[L.SparseCol]) -> bool:
    return len(a) == len(b) and all(x == y for x, y in zip(a, b))


def induced_rank(src: SimplicialComplex, dst: SimplicialComplex,
                 vertex_map: Mapping, k: int, field_spec: str = "q") -> int:
    """Rank of H_k of the map induced by a vertex map."""
    rank_fn, _ = parse_field(field_spec)
    fk = chain_map(src, dst, vertex_map, k)[k]
    dx = L.to_sparse_columns(src.boundary_matrix(k))
    dy1 = L.to_sparse_columns(dst.boundary_matrix(k + 1))
    return L.induced_map_rank(dy1, fk, dx, rows_y_k=len(dst.simplices(k)),
                              rank_fn=rank_fn)


def homology_basis_of(cx: SimplicialComplex, k: int) -> L.SparseHomology:
    """Sparse homology basis of a complex in one degree, cached on it."""
    cache = getattr(cx, "_homology_cache", None)
    if cache is None:
        cache = {}
        cx._homology_cache = cache
    if k not in cache:
        cache[k] = L.SparseHomology(cx.boundary_sparse(k),
                                    cx.boundary_sparse(k + 1))
    return cache[k]


def induced_matrix(src: SimplicialComplex, dst: SimplicialComplex,
                   vertex_map: Mapping, k: int) -> list[list[Fraction]]:
    """Matrix of H_k of the induced map, in reduction-chosen rational bases.

    The bases are deterministic per complex and degree (and cached), so
    matrices of composable maps multiply exactly.
    """
    fk = chain_map(src, dst, vertex_map, k)[k]
    basis_x = homology_basis_of(src, k)
    basis_y = homology_basis_of(dst, k)
    cols = []
    for z in basis_x.reps:
        image: dict = {}
        for j, coeff in z.items():
            for r, v in fk[j].items():
                nv = image.get(r, Fraction(0)) + coeff * v
                if nv:
                    image[r] = nv
                else:
                    image.pop(r, None)
        cols.append(basis_y.express(image))
    # rows indexed by the target basis, columns by the source basis
    return [[cols[j][i] for j in range(len(cols))]
            for i in range(basis_y.betti)]


def component_count(pairwise: np.ndarray, threshold: float,
                    strict: bool = True) -> int:
    """Connected components of the threshold graph (union-find oracle)."""
    from .simplicial import connected_components, rips_graph
    adj = rips_graph(pairwise, threshold, strict=strict)
    return connected_components(pairwise.shape[0], adj)
