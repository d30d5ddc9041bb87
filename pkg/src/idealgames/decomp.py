"""Coherent decompositions of finite families.

A decomposition assigns each member ``A`` an increasing chain of stages
``A^0 <= ... <= A^{N-1} = A``. It is coherent when every proper inclusion
``A < B`` is eventually respected stage by stage.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import ceil

from .errors import ConstructionError, InputError
from .ideal import FamilySpec, IdealInstance, down_set, rank_family, thaw_atom


def canonical(fam: FamilySpec, atoms) -> list:
    """Atoms in the family's canonical order."""
    if fam.ground is not None:
        return fam.ground.sort(atoms)
    try:
        return sorted(atoms)
    except TypeError:
        return sorted(atoms, key=repr)


@dataclass(frozen=True)
class Decomposition:
    stages: dict  # member index -> tuple of frozensets, all of length stage_count
    stage_count: int

    def stage(self, member: int, n: int) -> frozenset:
        return self.stages[member][n]

    def to_json(self, fam: FamilySpec) -> dict:
        return {str(i): [[thaw_atom(a) for a in canonical(fam, s)] for s in chain]
                for i, chain in sorted(self.stages.items())}

    @classmethod
    def from_json(cls, doc: dict) -> "Decomposition":
        from .ideal import freeze_atom
        stages = {int(k): tuple(frozenset(freeze_atom(a) for a in s) for s in v)
                  for k, v in doc.items()}
        counts = {len(v) for v in stages.values()}
        if len(counts) > 1:
            raise InputError("members have different stage counts")
        return cls(stages, counts.pop() if counts else 0)


@dataclass(frozen=True)
class SizeLadder:
    bounds: tuple

    def __post_init__(self):
        b = self.bounds
        if not b or any(x <= 0 for x in b) or any(x >= y for x, y in zip(b, b[1:])):
            raise InputError(f"ladder must be strictly increasing positive integers, got {list(b)}")


def _exhaust(order: list, n_stages: int) -> list[int]:
    """Prefix lengths of an even canonical exhaustion ending at the full list."""
    size = len(order)
    return [ceil((n + 1) * size / n_stages) for n in range(n_stages)]


def _by_rank(fam: FamilySpec) -> list[int]:
    rank = rank_family(fam)
    return sorted(range(len(fam)), key=lambda i: (rank[i], i))


def _plain(fam: FamilySpec, n_stages: int) -> dict:
    out = {}
    for b in _by_rank(fam):
        order = canonical(fam, fam.members[b])
        pos = {a: k for k, a in enumerate(order)}
        base = _exhaust(order, n_stages)
        # f(n) as a prefix length: dominate every g_A(n) and the base exhaustion
        lengths, running = [], 0
        for n in range(n_stages):
            need = base[n]
            for a in fam.below[b]:
                s = out[a][n]
                if s:
                    need = max(need, 2 + max(pos[x] for x in s))
            running = min(max(running, need), len(order))
            lengths.append(running)
        lengths[-1] = len(order)
        out[b] = tuple(frozenset(order[:k]) for k in lengths)
    return out


def decompose_locally_small(fam: FamilySpec, stage_count: int,
                            inst: IdealInstance | None = None) -> Decomposition:
    """Rank-driven coherent decomposition.

    With ``inst`` given and stage lists present on the family, the lifting
    construction is used: the down-sets ``Gamma(A)`` are decomposed first and
    ``A^n`` is the union of ``S_j(B)`` for ``j <= n`` and ``B`` in
    ``Gamma(A)^n``.
    """
    if stage_count < 1:
        raise InputError("stage_count must be positive")
    if inst is None or fam.stages is None:
        return Decomposition(_plain(fam, stage_count), stage_count)

    longest = max((len(s) for s in fam.stages), default=0)
    if stage_count < longest:
        j = max(range(len(fam)), key=lambda i: len(fam.stages[i]))
        raise ConstructionError(
            f"stage_count {stage_count} cannot exhaust the stage list of member {j}",
            member=j, minimal_stage_count=longest)
    gammas = FamilySpec.of([down_set(fam, i) for i in range(len(fam))])
    gdec = _plain(gammas, stage_count)
    stages = {}
    for a in range(len(fam)):
        chain = []
        for n in range(stage_count):
            parts = [inst.generators[g]
                     for b in gdec[a][n] for g in fam.stages[b][:n + 1]]
            chain.append(frozenset().union(*parts))
        stages[a] = tuple(chain)
    return Decomposition(stages, stage_count)


def decompose_bounded(fam: FamilySpec, ladder: SizeLadder) -> Decomposition:
    """Coherent decomposition with ``|A^n| <= ladder.bounds[n]``.

    ``F_n(B)`` is the longest canonical prefix of the members below ``B`` whose
    stages fit the capacity, and ``X_n`` the longest canonical prefix of ``B``
    that still fits on top. Both must grow with ``n``.
    """
    lam = ladder.bounds
    n_stages = len(lam)
    out = {}
    for b in _by_rank(fam):
        order = canonical(fam, fam.members[b])
        if len(order) > lam[-1]:
            raise ConstructionError(
                f"ladder too tight: member {b} has {len(order)} elements, top bound {lam[-1]}",
                member=b)
        below = list(fam.below[b])
        chain, f_len, c_len = [], 0, 0
        for n in range(n_stages):
            k = len(below) if n == n_stages - 1 else f_len
            while k < len(below):
                trial = frozenset().union(*(out[a][n] for a in below[:k + 1]))
                if len(trial) > lam[n]:
                    break
                k += 1
            union = frozenset().union(*(out[a][n] for a in below[:k]))
            if k < f_len or len(union) > lam[n]:
                raise ConstructionError(
                    f"ladder too tight: member {b} cannot keep its lower members at stage {n}",
                    member=b, stage=n)
            f_len = k
            c = len(order)
            while c > c_len and len(union | frozenset(order[:c])) > lam[n]:
                c -= 1
            stage = union | frozenset(order[:c])
            if len(stage) > lam[n] or c < c_len:
                raise ConstructionError(
                    f"ladder too tight: member {b} cannot grow within bound at stage {n}",
                    member=b, stage=n)
            c_len = c
            chain.append(stage)
        out[b] = tuple(chain)
    return Decomposition(out, n_stages)


@dataclass(frozen=True)
class CoherenceFailure:
    stage: int
    element: object


def verify_coherence(fam: FamilySpec, dec: Decomposition) -> dict:
    """Least threshold per comparable pair, or a witness at the final stage."""
    out = {}
    last = dec.stage_count - 1
    for i, j in sorted(fam.strict_subset_edges):
        a, b = dec.stages[i], dec.stages[j]
        if not a[last] <= b[last]:
            e = canonical(fam, a[last] - b[last])[0]
            out[(i, j)] = CoherenceFailure(last, e)
            continue
        m = last
        while m > 0 and a[m - 1] <= b[m - 1]:
            m -= 1
        out[(i, j)] = m
    return out


def structure_problems(fam: FamilySpec, dec: Decomposition,
                       inst: IdealInstance | None = None) -> list[str]:
    """Violations of the per-member decomposition invariants."""
    problems = []
    for i, member in enumerate(fam.members):
        chain = dec.stages.get(i)
        if chain is None or len(chain) != dec.stage_count:
            problems.append(f"member {i} lacks {dec.stage_count} stages")
            continue
        for n in range(len(chain) - 1):
            if not chain[n] <= chain[n + 1]:
                problems.append(f"member {i} shrinks between stages {n} and {n + 1}")
        if chain[-1] != member:
            problems.append(f"member {i} final stage differs from the member")
        if inst is not None:
            for n, s in enumerate(chain):
                if not inst.in_J(s):
                    problems.append(f"member {i} stage {n} is not in J")
    return problems
