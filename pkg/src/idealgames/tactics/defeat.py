"""Adversaries built from a tactic's own responses.

``extract_coloring`` turns a tactic into a window coloring along a chain of
ONE moves. ``targeted_defeat`` looks for an increasing path through the chain
along which TWO's responses leave part of ONE's first move uncovered, replays
it through the engine and returns the losing transcript.
"""
from __future__ import annotations

import random

from ..decomp import SizeLadder
from ..errors import ConstructionError, ContractError
from ..game import Game, Tactic, Transcript, run_play
from ..paths import Coloring

OVERFLOW = "overflow"


def extract_coloring(tactic: Tactic, chain, ladder: SizeLadder | None = None) -> Coloring:
    """Colors of increasing windows of ``chain`` (tuples of chain indices).

    With a ladder, the color of a window is the least ladder index bounding
    the size of the covered part of the tactic's cumulative response over the
    window's prefixes, or ``OVERFLOW``. Without one, the color is that covered
    set itself (the trace variant).
    """
    chain = tuple(frozenset(c) for c in chain)

    def covered(w):
        out = set()
        for i in range(1, len(w) + 1):
            out |= Game.covered_part(tactic.fn(tuple(chain[j] for j in w[:i])))
        return frozenset(out)

    if ladder is None:
        return Coloring(tactic.k, covered)

    def sized(w):
        size = len(covered(w))
        return next((i for i, b in enumerate(ladder.bounds) if size <= b), OVERFLOW)

    return Coloring(tactic.k, sized)


def _trace_search(tactic: Tactic, chain: tuple, length: int, lag: int, budget: int):
    """Increasing index path of ``length`` whose responses leave an atom of the
    first ``length - lag`` moves uncovered. Returns (path, atom) or None."""
    k = tactic.k
    memo: dict = {}
    failed = set()
    visited = 0

    def reply(path):
        w = tuple(path[-k:])
        if w not in memo:
            memo[w] = Game.covered_part(tactic.fn(tuple(chain[i] for i in w)))
        return memo[w]

    def search(path, cover):
        nonlocal visited
        visited += 1
        if visited > budget:
            return None
        checked = length - lag
        if len(path) == length:
            owed = frozenset().union(*(chain[i] for i in path[:checked]))
            missing = owed - cover
            return (tuple(path), min(missing, key=repr)) if missing else None
        key = (tuple(path[-k:]), cover, len(path))
        if key in failed:
            return None
        start = path[-1] + 1 if path else 0
        for nxt in range(start, len(chain)):
            if path and not chain[path[-1]] < chain[nxt]:
                continue
            new = path + [nxt]
            try:
                c = cover | reply(new)
            except Exception:  # a crashing response is itself a defeat
                return tuple(new), None
            if len(new) > checked and checked >= 1:
                owed = frozenset().union(*(chain[i] for i in new[:checked]))
                if owed <= c:
                    continue
            found = search(new, c)
            if found is not None:
                return found
        failed.add(key)
        return None

    return search([], frozenset())


def targeted_defeat(game: Game, tactic: Tactic, menu_chain, depth: int,
                    lag: int | None = None, budget: int = 1_000_000) -> Transcript | None:
    """A play along ``menu_chain`` that TWO loses, confirmed by the engine.

    The search follows the tactic's trace coloring, keeping the union of its
    responses below ONE's owed moves. Returns None when no such path exists.
    """
    lag = tactic.k + 1 if lag is None else lag
    chain = tuple(frozenset(c) for c in menu_chain)
    if any(not a < b for a, b in zip(chain, chain[1:])):
        raise ContractError("menu chain is not strictly increasing")
    found = _trace_search(tactic, chain, depth, lag, budget)
    if found is None:
        return None
    path, _ = found
    moves = [chain[i] for i in path]

    def one(ones, twos):
        return moves[len(ones)] if len(ones) < len(moves) else None

    t = run_play(game, one, tactic, depth, lag)
    if t.verdict != "lose":
        raise ConstructionError("engine does not confirm the defeat", path=list(path))
    return t


# candidate tactics ---------------------------------------------------------------

def random_window_tactic(seed: int, k: int, responses, extra=None) -> Tactic:
    """A pseudo-random function from windows to ``responses``, fixed by ``seed``.

    ``extra(window)``, when given, is added to every response.
    """
    responses = tuple(responses)

    def move(window):
        key = (seed, tuple(tuple(sorted(map(repr, w))) for w in window))
        out = responses[random.Random(repr(key)).randrange(len(responses))]
        return out | extra(window) if extra is not None else out

    return Tactic(k, move, name=f"random{seed}")


def greedy_cover_tactic(k: int, pieces, extra=None) -> Tactic:
    """Answer with the piece covering most of ONE's latest move, ties to the first."""
    pieces = tuple(pieces)

    def move(window):
        last = window[-1]
        best = max(pieces, key=lambda p: (len(p & last), -pieces.index(p)))
        return best | extra(window) if extra is not None else best

    return Tactic(k, move, name="greedy")
