"""The coloring-plus-decomposition k-tactic for the monotone game."""
from __future__ import annotations

from ..decomp import Decomposition
from ..errors import ConstructionError, ContractError
from ..game import Tactic
from ..ideal import FamilySpec
from ..paths import Coloring, FinitePoset


def family_poset(fam: FamilySpec) -> FinitePoset:
    """Member indices ordered by proper inclusion."""
    return FinitePoset(tuple(range(len(fam))), fam.strict_subset_edges)


def index_coloring(col: Coloring, fam: FamilySpec) -> Coloring:
    """The same coloring, read on member indices instead of sets."""
    return Coloring(col.k, lambda w: col(tuple(fam.members[i] for i in w)))


def chain_threshold(dec: Decomposition, idx: tuple) -> int:
    """Least m with ``X_1^n <= ... <= X_j^n`` for every stage ``n >= m``."""
    m = dec.stage_count
    while m > 0 and all(dec.stages[a][m - 1] <= dec.stages[b][m - 1]
                        for a, b in zip(idx, idx[1:])):
        m -= 1
    return m


def build_mg_tactic(fam: FamilySpec, dec: Decomposition, col: Coloring, k: int) -> Tactic:
    """Short windows get their first stages; full windows get the stages at
    the least ``m`` that reaches both the window color and the window's
    coherence threshold."""
    if col.k != k:
        raise ContractError(f"coloring arity {col.k} differs from window size {k}")
    top = dec.stage_count - 1

    def move(window):
        try:
            idx = tuple(fam.index[x] for x in window)
        except KeyError:
            raise ContractError("window holds a set outside the family") from None
        if len(window) < k:
            return frozenset().union(*(dec.stages[i][1 if top >= 1 else 0] for i in idx))
        m = max(col(window), chain_threshold(dec, idx))
        if m > top:
            raise ConstructionError(
                f"window {list(idx)} needs stage {m} beyond the last stage {top}",
                window=list(idx), stage=m)
        return frozenset().union(*(dec.stages[i][m] for i in idx))

    return Tactic(k, move, name="upsilon")
