"""Bounded monotone path search under window colorings.

A coloring assigns a color to each increasing ``k``-tuple of a finite poset.
``find_bounded_path`` looks for an increasing sequence of length ``L`` whose
consecutive ``k``-windows use at most ``c`` colors. A found path is a finite
shadow of an infinite one; a "none" answer says nothing about infinite paths.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Hashable

from .errors import InputError, ResourceError, StructuralError


@dataclass(frozen=True)
class FinitePoset:
    nodes: tuple
    less: frozenset  # pairs (p, q) meaning p < q

    def __post_init__(self):
        known = set(self.nodes)
        if len(known) != len(self.nodes):
            raise StructuralError("poset has repeated nodes")
        for p, q in self.less:
            if p not in known or q not in known:
                raise StructuralError(f"order pair ({p!r}, {q!r}) uses an unknown node")
            if p == q:
                raise StructuralError(f"order is not irreflexive at {p!r}")
        for p, q in self.less:
            for r in self.above[q]:
                if (p, r) not in self.less:
                    raise StructuralError(f"order is not transitive: {p!r} < {q!r} < {r!r}")

    @cached_property
    def above(self) -> dict:
        """Each node's strict successors, in node order."""
        pos = {v: i for i, v in enumerate(self.nodes)}
        out = {v: [] for v in self.nodes}
        for p, q in self.less:
            out[p].append(q)
        return {v: tuple(sorted(s, key=pos.__getitem__)) for v, s in out.items()}

    @classmethod
    def chain(cls, n: int) -> "FinitePoset":
        return cls(tuple(range(n)), frozenset((i, j) for i in range(n) for j in range(i + 1, n)))

    def to_json(self) -> dict:
        pos = {v: i for i, v in enumerate(self.nodes)}
        return {"nodes": list(self.nodes),
                "less": sorted([p, q] for p, q in ((pos[a], pos[b]) for a, b in self.less))}

    @classmethod
    def from_json(cls, doc) -> "FinitePoset":
        nodes = tuple(doc["nodes"])
        return cls(nodes, frozenset((nodes[i], nodes[j]) for i, j in doc["less"]))


@dataclass(frozen=True)
class Coloring:
    """Colors of increasing ``k``-windows, given by a table or a function."""

    k: int
    color: Callable[[tuple], Hashable]

    def __call__(self, window: tuple):
        return self.color(tuple(window))

    @classmethod
    def from_table(cls, k: int, table: dict) -> "Coloring":
        def look(w):
            try:
                return table[w]
            except KeyError:
                raise InputError(f"coloring undefined on window {list(w)}") from None
        return cls(k, look)


@dataclass(frozen=True)
class PathResult:
    path: tuple | None
    palette: frozenset
    length: int
    max_colors: int
    nodes_visited: int


def window_colors(col: Coloring, path) -> list:
    return [col(tuple(path[j:j + col.k])) for j in range(len(path) - col.k + 1)]


def find_bounded_path(p: FinitePoset, col: Coloring, length: int, max_colors: int,
                      budget: int | None = None) -> PathResult:
    """Exhaustive search; ``budget`` caps visited search nodes."""
    k = col.k
    if length < k:
        raise InputError(f"path length {length} is shorter than the window size {k}")
    failed = set()
    visited = 0

    def extend(path, palette):
        nonlocal visited
        visited += 1
        if budget is not None and visited > budget:
            raise ResourceError(f"path search exceeded {budget} nodes", budget)
        if len(path) == length:
            return path
        key = (path[-max(k - 1, 1):], palette, length - len(path))
        if key in failed:
            return None
        for q in p.above[path[-1]]:
            nxt = path + (q,)
            pal = palette
            if len(nxt) >= k:
                pal = palette | {col(nxt[-k:])}
                if len(pal) > max_colors:
                    continue
            found = extend(nxt, pal)
            if found is not None:
                return found
        failed.add(key)
        return None

    for start in p.nodes:
        found = extend((start,), frozenset())
        if found is not None:
            return PathResult(found, frozenset(window_colors(col, found)), length,
                              max_colors, visited)
    return PathResult(None, frozenset(), length, max_colors, visited)


def domination_poset(seqs, horizon: int, gap: int) -> FinitePoset:
    """``f < g`` when ``g(n) - f(n) >= gap`` on ``[horizon // 2, horizon)``."""
    if gap < 1:
        raise InputError("gap must be positive")
    for i, s in enumerate(seqs):
        if len(s) < horizon:
            raise InputError(f"sequence {i} is shorter than horizon {horizon}")
    window = range(horizon // 2, horizon)
    less = frozenset((i, j) for i, f in enumerate(seqs) for j, g in enumerate(seqs)
                     if i != j and all(g[n] - f[n] >= gap for n in window))
    return FinitePoset(tuple(range(len(seqs))), less)
