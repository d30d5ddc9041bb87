"""Finite free ideals, their stage-bounded sigma-completions, and set families.

A finite ground set stands in for the infinite set the ideal lives on. The
ideal ``J`` is given by generators and is kept intensional: ``X`` is in ``J``
when it is covered by at most ``j_width`` generators, and in the completion
``<J>`` when it is covered by at most ``sigma_stage_bound`` generators.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Sequence

from .errors import InputError, StructuralError

Atom = Hashable


def freeze_atom(a):
    # JSON gives labeled pairs back as lists
    return tuple(freeze_atom(x) for x in a) if isinstance(a, list) else a


def thaw_atom(a):
    return [thaw_atom(x) for x in a] if isinstance(a, tuple) else a


@dataclass(frozen=True)
class GroundSet:
    elements: tuple

    def __post_init__(self):
        if len(set(self.elements)) != len(self.elements):
            raise InputError("ground set has repeated atoms")

    @property
    def size(self):
        return len(self.elements)

    @cached_property
    def position(self):
        return {a: i for i, a in enumerate(self.elements)}

    def sort(self, atoms: Iterable[Atom]) -> list:
        """Atoms in canonical (ground) order."""
        pos = self.position
        return sorted(atoms, key=pos.__getitem__)

    def key(self, s: frozenset) -> tuple:
        """Canonical sort key for a subset: size first, then positions."""
        return (len(s), tuple(sorted(self.position[a] for a in s)))


@dataclass(frozen=True)
class IdealInstance:
    ground: GroundSet
    generators: tuple  # of frozenset
    sigma_stage_bound: int
    j_width: int | None = None

    @property
    def width(self) -> int:
        return self.sigma_stage_bound if self.j_width is None else self.j_width

    @cached_property
    def _gens_by_atom(self):
        table = {a: [] for a in self.ground.elements}
        for i, g in enumerate(self.generators):
            for a in g:
                if a in table:
                    table[a].append(i)
        return table

    def cover_number(self, x: Iterable[Atom], limit: int | None = None) -> int | None:
        """Least number of generators whose union contains ``x``.

        Returns None when ``x`` has an uncovered atom or needs more than
        ``limit`` generators.
        """
        x = frozenset(x)
        if not x:
            return 0
        limit = len(self.generators) if limit is None else limit
        order = self.ground.sort(x) if all(a in self.ground.position for a in x) else None
        if order is None:
            return None
        table = self._gens_by_atom
        if any(not table[a] for a in order):
            return None
        failed = set()

        def search(remaining, budget):
            if not remaining:
                return True
            if budget == 0 or (remaining, budget) in failed:
                return False
            first = next(a for a in order if a in remaining)
            # a generator whose trace is inside another's trace is never needed
            traces = {self.generators[gi] & remaining for gi in table[first]}
            useful = [t for t in traces if not any(t < u for u in traces)]
            useful.sort(key=lambda t: (-len(t), self.ground.key(t)))
            for t in useful:
                if search(remaining - t, budget - 1):
                    return True
            failed.add((remaining, budget))
            return False

        for w in range(1, limit + 1):
            if search(x, w):
                return w
        return None

    def in_J(self, x) -> bool:
        return self.cover_number(x, self.width) is not None

    def in_sigma(self, x) -> bool:
        return self.cover_number(x, self.sigma_stage_bound) is not None

    def sigma_set(self, stages: Sequence[int]) -> "SigmaSet":
        stages = tuple(stages)
        if len(stages) > self.sigma_stage_bound:
            raise InputError(
                f"stage list of length {len(stages)} exceeds bound {self.sigma_stage_bound}")
        for i in stages:
            if not 0 <= i < len(self.generators):
                raise InputError(f"generator index {i} out of range")
        realized = frozenset().union(*(self.generators[i] for i in stages))
        return SigmaSet(stages, realized)

    @classmethod
    def build(cls, ground, generators, sigma_stage_bound, j_width=None):
        g = GroundSet(tuple(freeze_atom(a) for a in ground))
        gens = tuple(frozenset(freeze_atom(a) for a in gen) for gen in generators)
        return cls(g, gens, int(sigma_stage_bound), j_width)


@dataclass(frozen=True)
class SigmaSet:
    stages: tuple
    realized: frozenset

    def union(self, other: "SigmaSet", inst: IdealInstance) -> "SigmaSet":
        return inst.sigma_set(self.stages + other.stages)


def validate_instance(inst: IdealInstance) -> list[str]:
    """Every violated invariant, each with a witness. Empty means valid."""
    problems = []
    ground = set(inst.ground.elements)
    covered = set().union(*inst.generators) if inst.generators else set()
    for i, g in enumerate(inst.generators):
        stray = g - ground
        if stray:
            problems.append(f"generator {i} has atoms outside ground: {sorted(stray, key=repr)}")
        if g == ground:
            problems.append(f"generator {i} equals ground")
    for a in inst.ground.elements:
        if a not in covered:
            problems.append(f"atom {a!r} uncovered")
    if inst.sigma_stage_bound < 1:
        problems.append("sigma_stage_bound must be positive")
    if inst.j_width is not None and not 1 <= inst.j_width <= inst.sigma_stage_bound:
        problems.append("j_width must lie in [1, sigma_stage_bound]")
    return problems


@dataclass(frozen=True)
class FamilySpec:
    """A finite family of distinct sets, optionally with generator stage lists."""

    members: tuple
    stages: tuple | None = None
    ground: GroundSet | None = field(default=None, compare=False)

    def __post_init__(self):
        if len(set(self.members)) != len(self.members):
            raise StructuralError("family members are not distinct as sets")
        if self.stages is not None and len(self.stages) != len(self.members):
            raise InputError("stage lists do not match members")

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    @cached_property
    def index(self) -> dict:
        return {m: i for i, m in enumerate(self.members)}

    @cached_property
    def strict_subset_edges(self) -> frozenset:
        ms = self.members
        return frozenset((i, j) for i, a in enumerate(ms) for j, b in enumerate(ms)
                         if i != j and a < b)

    @cached_property
    def below(self) -> tuple:
        """below[j] = indices i with members[i] a proper subset of members[j]."""
        out = [[] for _ in self.members]
        for i, j in sorted(self.strict_subset_edges):
            out[j].append(i)
        return tuple(tuple(x) for x in out)

    @classmethod
    def from_stage_lists(cls, inst: IdealInstance, lists) -> "FamilySpec":
        sig = [inst.sigma_set(s) for s in lists]
        return cls(tuple(s.realized for s in sig), tuple(s.stages for s in sig), inst.ground)

    @classmethod
    def of(cls, sets, ground: GroundSet | None = None) -> "FamilySpec":
        return cls(tuple(frozenset(s) for s in sets), None, ground)


def rank_family(fam: FamilySpec, edges=None) -> list[int]:
    """Height of each member in the strict-subset order (minimal ranks).

    ``edges`` may override the computed order; a cycle in it is a
    structural error.
    """
    n = len(fam)
    edges = fam.strict_subset_edges if edges is None else frozenset(edges)
    preds = [[] for _ in range(n)]
    indeg = [0] * n
    succ = [[] for _ in range(n)]
    for i, j in edges:
        preds[j].append(i)
        succ[i].append(j)
        indeg[j] += 1
    rank = [0] * n
    ready = [i for i in range(n) if indeg[i] == 0]
    seen = 0
    while ready:
        i = ready.pop()
        seen += 1
        for j in succ[i]:
            rank[j] = max(rank[j], rank[i] + 1)
            indeg[j] -= 1
            if indeg[j] == 0:
                ready.append(j)
    if seen != n:
        stuck = [i for i in range(n) if indeg[i] > 0]
        raise StructuralError(f"cycle in family order among members {stuck}")
    return rank


def locally_small_check(fam: FamilySpec, bound: int) -> tuple[bool, list[int]]:
    """Members whose down-set (members below or equal) exceeds ``bound``."""
    bad = [j for j in range(len(fam)) if len(fam.below[j]) + 1 > bound]
    return (not bad, bad)


def down_set(fam: FamilySpec, j: int) -> frozenset:
    return frozenset(fam.below[j]) | {j}
