"""Finite T0 topological spaces as partial orders.

A finite T0 space is stored through its specialization order: the minimal
open set of a point x is the up-set {y : x <= y} of the stored order, and a
map between finite spaces is continuous exactly when it preserves the
order.  The order complex (chains) and the face poset of a simplicial
complex translate between the finite and simplicial worlds.
"""

from __future__ import annotations

from itertools import combinations
from typing import Callable, Hashable, Iterable, Mapping, Optional

from .simplicial import SimplicialComplex


class FiniteSpaceError(ValueError):
    pass


class FiniteSpace:
    """A poset on hashable elements; reflexive order stored as up-sets."""

    def __init__(self, elements: Iterable[Hashable],
                 leq_pairs: Iterable[tuple] = (),
                 leq: Optional[Callable[[Hashable, Hashable], bool]] = None):
        self.elements = list(elements)
        eset = set(self.elements)
        if len(eset) != len(self.elements):
            raise FiniteSpaceError("duplicate elements")
        up = {x: {x} for x in self.elements}
        if leq is not None:
            for x in self.elements:
                for y in self.elements:
                    if x is not y and leq(x, y):
                        up[x].add(y)
        for a, b in leq_pairs:
            if a not in eset or b not in eset:
                raise FiniteSpaceError("relation mentions unknown element")
            up[a].add(b)
        # transitive closure
        changed = True
        while changed:
            changed = False
            for x in self.elements:
                grown = set(up[x])
                for y in up[x]:
                    grown |= up[y]
                if len(grown) != len(up[x]):
                    up[x] = grown
                    changed = True
        for x in self.elements:
            for y in up[x]:
                if x != y and x in up[y]:
                    raise FiniteSpaceError("order is not antisymmetric (space is not T0)")
        self._up = {x: frozenset(s) for x, s in up.items()}

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x) -> bool:
        return x in self._up

    def leq(self, a, b) -> bool:
        return b in self._up[a]

    def min_open(self, x) -> frozenset:
        """Minimal open set of x: the up-set of the stored order."""
        return self._up[x]

    def closure(self, x) -> frozenset:
        return frozenset(y for y in self.elements if x in self._up[y])

    def opposite(self) -> "FiniteSpace":
        """The same elements with the order reversed."""
        op = FiniteSpace.__new__(FiniteSpace)
        op.elements = list(self.elements)
        down: dict = {x: set() for x in self.elements}
        for x, ups in self._up.items():
            for y in ups:
                down[y].add(x)
        op._up = {x: frozenset(s) for x, s in down.items()}
        return op

    def covers(self) -> list[tuple]:
        """Covering pairs (a, b) with a < b and nothing strictly between."""
        out = []
        for a in self.elements:
            strict = self._up[a] - {a}
            for b in strict:
                if not any(c != b and b in self._up[c] for c in strict):
                    out.append((a, b))
        return out

    def is_order_preserving(self, f: Mapping, target: "FiniteSpace") -> bool:
        """Continuity test: x <= y must give f(x) <= f(y)."""
        for x in self.elements:
            fx = f[x]
            if fx not in target:
                return False
            for y in self._up[x] - {x}:
                if not target.leq(fx, f[y]):
                    return False
        return True

    def pointwise_comparable(self, f: Mapping, g: Mapping,
                             target: "FiniteSpace") -> bool:
        """True when f(x) and g(x) are comparable in the target for all x."""
        return all(target.leq(f[x], g[x]) or target.leq(g[x], f[x])
                   for x in self.elements)

    def order_complex(self, max_chain: Optional[int] = None) -> SimplicialComplex:
        """Simplicial complex of nonempty chains, at most max_chain long.

        Vertices are integer positions into self.elements, so that element
        identity survives the canonical sorting of simplex tuples.
        """
        cx = SimplicialComplex()
        pos = {x: i for i, x in enumerate(self.elements)}
        strict_up = {pos[x]: sorted(pos[y] for y in self._up[x] if y != x)
                     for x in self.elements}
        cap = max_chain if max_chain is not None else len(self.elements)

        def grow(chain: tuple, top: int) -> None:
            cx.add(chain)
            if len(chain) >= cap:
                return
            for y in strict_up[top]:
                grow(chain + (y,), y)

        for i in range(len(self.elements)):
            grow((i,), i)
        return cx


def face_poset(cx: SimplicialComplex) -> FiniteSpace:
    """Finite space of the simplices of cx ordered by inclusion."""
    elems = cx.all_simplices()
    pairs = []
    for s in elems:
        if len(s) > 1:
            for k in range(1, len(s)):
                for face in combinations(s, k):
                    pairs.append((face, s))
    return FiniteSpace(elems, leq_pairs=pairs)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _label(x) -> str:
    if isinstance(x, frozenset):
        return "{" + ",".join(str(v) for v in sorted(x)) + "}"
    if isinstance(x, tuple):
        return "(" + ",".join(_label(v) for v in x) + ")"
    return str(x)


def to_json_dict(space: FiniteSpace, orientation: str = "up-sets-open") -> dict:
    labels = {x: _label(x) for x in space.elements}
    if len(set(labels.values())) != len(labels):
        labels = {x: f"e{i}" for i, x in enumerate(space.elements)}
    return {
        "orientation": orientation,
        "elements": [labels[x] for x in space.elements],
        "covers": [[labels[a], labels[b]] for a, b in space.covers()],
    }


def from_json_dict(data: dict) -> FiniteSpace:
    return FiniteSpace(data["elements"],
                       leq_pairs=[tuple(p) for p in data["covers"]])


def to_dot(space: FiniteSpace, name: str = "finite_space",
           max_elements: int = 500) -> str:
    """Hasse diagram in DOT format, lower elements drawn below."""
    if len(space) > max_elements:
        raise FiniteSpaceError(
            f"space has {len(space)} elements, above the DOT cap of {max_elements}")
    labels = {x: _label(x) for x in space.elements}
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=box];"]
    for x in space.elements:
        lines.append(f'  "{labels[x]}";')
    for a, b in space.covers():
        lines.append(f'  "{labels[a]}" -> "{labels[b]}";')
    lines.append("}")
    return "\n".join(lines)
