"""The 3-tactic for the very strong game.

ONE's moves are members of a finite family. A strictly increasing chain
``C_0 < C_1 < ...`` of ``<J>`` sets measures how far each member reaches:
``xi(A)`` is the first index whose ``C`` escapes ``A``. Members below ``A``
are listed by a fixed enumeration ``J_xi(A)``, and the trees ``tau(A, B)``
collect the descending sequences those listings allow.

The auxiliary family ``B`` consists of the down-sets ``Gamma(A)`` (sets of
member indices). It carries its own coherent decomposition and a pair
coloring ``K``. The members of the main family carry ``J``-pieces ``A^n``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable

from ..decomp import CoherenceFailure, Decomposition, decompose_locally_small, verify_coherence
from ..errors import ConstructionError, ContractError, StructuralError
from ..game import Tactic
from ..ideal import FamilySpec, down_set, rank_family
from ..paths import Coloring


@dataclass
class VsgThreeInputs:
    fam: FamilySpec
    c_chain: tuple
    enumerations: dict          # member -> tuple listing every member inside it
    pieces: Decomposition       # J-pieces A^n of the family members
    bfam: FamilySpec            # down-sets Gamma(A), as sets of member indices
    bdec: Decomposition
    kcol: Coloring              # pair coloring on bfam members
    phi3: Callable | None = None
    _xi: dict = field(default_factory=dict, repr=False)

    def xi(self, a: frozenset) -> int:
        """Least index whose chain set is not inside ``a``."""
        if a not in self._xi:
            i = next((i for i, c in enumerate(self.c_chain) if not c <= a), None)
            if i is None:
                raise ConstructionError("the C-chain stays inside a member",
                                        member=sorted(a, key=repr))
            self._xi[a] = i
        return self._xi[a]

    def gamma(self, a: frozenset) -> frozenset:
        return self.bfam.members[self.fam.index[a]]

    def check(self) -> None:
        """Raise StructuralError naming the first broken invariant."""
        for a, b in zip(self.c_chain, self.c_chain[1:]):
            if not a < b:
                raise StructuralError("C-chain is not strictly increasing")
        for i, a in enumerate(self.fam.members):
            listing = self.enumerations.get(a)
            below = {x for x in self.fam.members if x <= a}
            if listing is None or len(listing) != len(below) or set(listing) != below:
                raise StructuralError(f"enumeration of member {i} is not a bijective listing "
                                      "of the members inside it")
            self.xi(a)
        if self.bfam.members != tuple(down_set(self.fam, i) for i in range(len(self.fam))):
            raise StructuralError("auxiliary family is not the family of down-sets")
        if self.pieces.stage_count != self.bdec.stage_count:
            raise StructuralError("pieces and auxiliary decomposition differ in stage count")
        for pair, m in verify_coherence(self.bfam, self.bdec).items():
            if isinstance(m, CoherenceFailure):
                raise StructuralError(f"auxiliary decomposition is not coherent on {pair}")


def descending_enumeration(fam: FamilySpec) -> dict:
    """Each member lists the members inside it, largest first (itself at 0)."""
    key = fam.ground.key if fam.ground is not None else (lambda s: (len(s), sorted(s, key=repr)))
    return {a: tuple(sorted((x for x in fam.members if x <= a), key=key, reverse=True))
            for a in fam.members}


def rank_pair_coloring(bfam: FamilySpec, offset: int) -> Coloring:
    """``K({P, Q}) = offset + rank(Q)`` on increasing pairs of the auxiliary family."""
    rank = rank_family(bfam)
    table = {(bfam.members[i], bfam.members[j]): offset + rank[j]
             for i, j in bfam.strict_subset_edges}
    return Coloring.from_table(2, table)


def build_three_inputs(fam: FamilySpec, pieces: Decomposition, c_chain, stage_count: int,
                       offset: int = 2, enumerations: dict | None = None) -> VsgThreeInputs:
    """Down-set family, its decomposition and the rank pair coloring, checked."""
    bfam = FamilySpec.of([down_set(fam, i) for i in range(len(fam))])
    bdec = decompose_locally_small(bfam, stage_count)
    inputs = VsgThreeInputs(fam, tuple(frozenset(c) for c in c_chain),
                            descending_enumeration(fam) if enumerations is None else enumerations,
                            pieces, bfam, bdec, rank_pair_coloring(bfam, offset))
    inputs.check()
    return inputs


# tau trees -------------------------------------------------------------------------

def _children(inputs: VsgThreeInputs, prev: frozenset, cur: frozenset) -> list:
    """Members ``J_xi(cur)`` with ``C_xi < prev``, properly below ``cur``."""
    out = []
    for xi, x in enumerate(inputs.enumerations[cur]):
        if xi >= len(inputs.c_chain):
            break
        if inputs.c_chain[xi] < prev and x < cur:
            out.append(x)
    return out


def tau(inputs: VsgThreeInputs, a: frozenset, b: frozenset, limit: int = 200_000) -> list:
    """Every sequence ``(S_1, ..., S_n)`` of ``tau(A, B)`` by tree expansion."""
    if not a < b:
        raise ContractError("tau needs A properly inside B")
    out, stack = [], [(b, a)]
    while stack:
        seq = stack.pop()
        out.append(seq)
        if len(out) > limit:
            raise ConstructionError("tau tree exceeds the expansion limit", limit=limit)
        for x in _children(inputs, seq[-2], seq[-1]):
            stack.append(seq + (x,))
    return sorted(out, key=lambda s: (len(s), [inputs.fam.index[x] for x in s]))


def tau_enumerated(inputs: VsgThreeInputs, a: frozenset, b: frozenset) -> list:
    """Second construction of ``tau(A, B)``: filter every member sequence by the clauses."""
    ms = inputs.fam.members
    chain = inputs.c_chain
    out = []
    for n in range(2, len(ms) + 2):
        for tail in product(ms, repeat=n - 2):
            s = (b, a) + tail
            ok = True
            for j in range(1, n - 1):  # S_{j+2} against S_{j+1} and S_j (0-based)
                listing = inputs.enumerations[s[j]]
                if s[j + 1] not in listing or not s[j + 1] < s[j]:
                    ok = False
                    break
                xi = listing.index(s[j + 1])
                if xi >= len(chain) or not chain[xi] < s[j - 1]:
                    ok = False
                    break
            if ok:
                out.append(s)
    return sorted(out, key=lambda s: (len(s), [inputs.fam.index[x] for x in s]))


def f_set(inputs: VsgThreeInputs, a: frozenset, b: frozenset) -> frozenset:
    """Members occurring in some sequence of ``tau(A, B)``."""
    return frozenset(x for s in tau(inputs, a, b) for x in s)


def phi1_materialized(inputs: VsgThreeInputs, a: frozenset, b: frozenset) -> frozenset:
    """Least auxiliary member containing the union of ``F(X, Y)`` over comparable
    pairs inside sequences of ``tau(A, B)``, computed from the trees."""
    q = set()
    for s in tau(inputs, a, b):
        for x in s:
            for y in s:
                if x < y:
                    q |= f_set(inputs, x, y)
    idx = frozenset(inputs.fam.index[x] for x in q)
    return min((m for m in inputs.bfam.members if idx <= m), key=lambda m: (len(m), sorted(m)))


# the tactic -----------------------------------------------------------------------

def build_vsg_three_tactic(inputs: VsgThreeInputs) -> Tactic:
    """Cases 1 to 4 of the 3-tactic, with ``Phi_1(A, B) = Gamma(B)``.

    Every sequence of ``tau(A, B)`` starts with ``B`` and stays below it, so
    the least down-set containing the union of the ``F`` values is exactly
    ``Gamma(B)``; ``phi1_materialized`` recomputes it from the trees.
    """
    fam, chain = inputs.fam, inputs.c_chain
    top = inputs.bdec.stage_count - 1
    by_key = sorted(fam.members, key=fam.ground.key) if fam.ground is not None else \
        sorted(fam.members, key=lambda s: (len(s), sorted(s, key=repr)))

    def least_above(x):
        m = next((m for m in by_key if x <= m), None)
        if m is None:
            raise ConstructionError("no member contains a required set", set=sorted(x, key=repr))
        return m

    def member(x):
        if x not in fam.index:
            raise ContractError("ONE's move is not a family member")
        return x

    def phi1(a, b):
        return inputs.gamma(b)

    def phi2(a, b):
        if not a < b:
            raise ContractError("Phi_2 needs A properly inside B")
        xi = inputs.enumerations[b].index(a)
        if xi >= len(chain):
            raise ConstructionError("enumeration index beyond the C-chain", index=xi)
        union_b = frozenset().union(*(fam.members[i] for i in phi1(a, b)))
        return least_above(chain[xi] | chain[inputs.xi(b)] | union_b)

    def phi3(a):
        if inputs.phi3 is not None:
            return inputs.phi3(a)
        return least_above(a | chain[inputs.xi(a)])

    def pair(a, b):
        if not a < b:
            return frozenset(), phi3(b)
        return frozenset(), phi2(a, b)

    def move(window):
        window = tuple(member(x) for x in window)
        if len(window) == 1:
            return frozenset(), phi3(window[0])
        if len(window) == 2:
            return pair(*window)
        a, b, c = window
        if a < b < c and phi2(a, b) <= c:
            p, q = phi1(a, b), phi1(b, c)
            bdec = inputs.bdec
            pi, qi = inputs.bfam.index[p], inputs.bfam.index[q]
            m = inputs.kcol((p, q))
            while m <= top and not all(bdec.stages[pi][n] <= bdec.stages[qi][n]
                                       for n in range(m, top + 1)):
                m += 1
            if m > top:
                raise ConstructionError(
                    "stage budget exhausted for a triple",
                    triple=[fam.index[a], fam.index[b], fam.index[c]], stage=m)
            d = frozenset().union(*(inputs.pieces.stages[i][m] for i in bdec.stages[qi][m]))
            return d, phi2(b, c)
        return pair(b, c)

    return Tactic(3, move, name="vsg3")
