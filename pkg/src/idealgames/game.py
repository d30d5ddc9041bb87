"""Rules, play loop and exhaustive verifier for the covering games.

Kinds:

* ``mg`` / ``mg_full``: ONE plays a strictly growing chain, TWO plays sets in J.
* ``smg``: ONE must swallow TWO's last move, ``O_n | T_n <= O_{n+1}``.
* ``vsg``: TWO plays a pair ``(T, S)`` in ``J x <J>``, and ONE must swallow both.

ONE always chooses from a finite menu. TWO wins a finite play of ``N``
innings with lag ``L`` when every ONE move up to inning ``N - L`` lies inside
the union of TWO's ``T`` moves.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Callable

from .errors import ContractError, InputError, ResourceError
from .ideal import GroundSet, thaw_atom

KINDS = ("mg", "mg_full", "smg", "vsg")
DEFAULT_BUDGET = 5_000_000


def node_budget(explicit: int | None = None) -> int:
    if explicit is not None:
        return explicit
    env = os.environ.get("IDEALGAMES_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


@dataclass(frozen=True)
class Tactic:
    """TWO's move as a pure function of ONE's last ``k`` moves.

    ``fn(window)``, or ``fn(window, inning)`` when ``markov`` is set.
    """

    k: int
    fn: Callable
    markov: bool = False
    name: str = ""

    def respond(self, window: tuple, inning: int):
        return self.fn(window, inning) if self.markov else self.fn(window)


def window_at(ones: list, k: int) -> tuple:
    """ONE's moves visible to a ``k``-tactic after the latest inning."""
    return tuple(ones[-k:])


class Game:
    def __init__(self, kind: str, inst, menu):
        # ``inst`` is anything with ``in_J`` and ``in_sigma``, usually an IdealInstance
        if kind not in KINDS:
            raise InputError(f"unknown game kind {kind!r}")
        menu = tuple(frozenset(m) for m in menu)
        if not menu:
            raise InputError("menu is empty")
        if len(set(menu)) != len(menu):
            raise InputError("menu repeats a set")
        self.kind, self.inst, self.menu = kind, inst, menu
        self._j, self._s = {}, {}

    def in_J(self, x) -> bool:
        x = frozenset(x)
        if x not in self._j:
            self._j[x] = self.inst.in_J(x)
        return self._j[x]

    def in_sigma(self, x) -> bool:
        x = frozenset(x)
        if x not in self._s:
            self._s[x] = self.inst.in_sigma(x)
        return self._s[x]

    @staticmethod
    def covered_part(two_move) -> frozenset:
        """The part of TWO's move that counts toward covering."""
        return two_move[0] if isinstance(two_move, tuple) else two_move

    @staticmethod
    def absorbed_part(two_move) -> frozenset:
        """The part of TWO's move ONE must swallow next inning."""
        return two_move[0] | two_move[1] if isinstance(two_move, tuple) else two_move

    def one_legal(self, prev_one, prev_two, move) -> tuple[bool, str]:
        if move not in self.menu:
            return False, "ONE move is not on the menu"
        if not self.in_sigma(move):
            return False, "ONE move is not in <J>"
        if prev_one is None:
            return True, "ok"
        if self.kind in ("mg", "mg_full"):
            if not prev_one < move:
                return False, "ONE move is not a proper superset of the previous one"
            return True, "ok"
        need = prev_one | self.absorbed_part(prev_two)
        if not need <= move:
            rule = "O_n | T_n | S_n" if self.kind == "vsg" else "O_n | T_n"
            return False, f"ONE move does not contain {rule}"
        return True, "ok"

    def two_legal(self, move) -> tuple[bool, str]:
        if self.kind == "vsg":
            if not (isinstance(move, tuple) and len(move) == 2):
                return False, "TWO move must be a pair (T, S)"
            t, s = move
            if not isinstance(t, frozenset) or not isinstance(s, frozenset):
                return False, "TWO move components must be sets"
            if not self.in_J(t):
                return False, "T is not in J"
            if not self.in_sigma(s):
                return False, "S is not in <J>"
            return True, "ok"
        if not isinstance(move, frozenset):
            return False, "TWO move must be a set"
        if not self.in_J(move):
            return False, "TWO move is not in J"
        return True, "ok"

    def one_options(self, prev_one, prev_two) -> list:
        return [m for m in self.menu if self.one_legal(prev_one, prev_two, m)[0]]


def legal_move(game: Game, history: list, move) -> tuple[bool, str]:
    """Check the next move; ``history`` alternates ONE and TWO moves."""
    if len(history) % 2 == 0:
        prev_one = history[-2] if history else None
        prev_two = history[-1] if history else None
        return game.one_legal(prev_one, prev_two, move)
    return game.two_legal(move)


def finite_win(ones: list, twos: list, lag: int):
    """``(verdict, witness)``: ``win``/``lose``/``inconclusive`` and an uncovered atom."""
    checked = len(ones) - lag
    if checked < 1:
        return "inconclusive", None
    cover = frozenset().union(*(Game.covered_part(t) for t in twos)) if twos else frozenset()
    for o in ones[:checked]:
        missing = o - cover
        if missing:
            return "lose", _first(missing)
    return "win", None


def _first(atoms):
    try:
        return min(atoms)
    except TypeError:
        return min(atoms, key=repr)


# transcripts -----------------------------------------------------------------

@dataclass
class Transcript:
    kind: str
    ones: list
    twos: list
    depth: int
    lag: int
    k: int
    verdict: str
    witness: object = None
    fault: str | None = None  # "ONE" or "TWO" when a party broke the rules
    reason: str = ""
    notes: list = field(default_factory=list)

    def lines(self, ground: GroundSet | None = None) -> list[str]:
        def enc(s):
            items = ground.sort(s) if ground is not None else sorted(s, key=repr)
            return [thaw_atom(a) for a in items]

        out = []
        for i, o in enumerate(self.ones):
            row = {"inning": i + 1, "one": enc(o)}
            if i < len(self.twos):
                t = self.twos[i]
                if isinstance(t, tuple) and len(t) == 2 and all(isinstance(p, frozenset) for p in t):
                    row["two"] = enc(t[0])
                    row["two_s"] = enc(t[1])
                elif isinstance(t, frozenset):
                    row["two"] = enc(t)
                else:
                    row["two"] = repr(t)
            out.append(json.dumps(row, sort_keys=True, separators=(",", ":")))
        tail = {"verdict": self.verdict, "kind": self.kind, "depth": self.depth,
                "lag": self.lag, "k": self.k, "witness": thaw_atom(self.witness),
                "fault": self.fault, "reason": self.reason}
        out.append(json.dumps(tail, sort_keys=True, separators=(",", ":")))
        return out


def _respond(tactic: Tactic, ones: list, cache: dict | None, audit: bool):
    """TWO's reply, with an optional determinism audit. Returns (move, error)."""
    window = window_at(ones, tactic.k)
    key = (window, len(ones)) if tactic.markov else window
    if cache is not None and key in cache:
        return cache[key]
    try:
        move = tactic.respond(window, len(ones))
        if audit and tactic.respond(window, len(ones)) != move:
            result = (None, "tactic is not deterministic on a repeated window")
        else:
            result = (move, None)
    except Exception as exc:  # a crashing tactic loses the play
        result = (None, f"tactic raised {type(exc).__name__}: {exc}")
    if cache is not None:
        cache[key] = result
    return result


def run_play(game: Game, one_strategy: Callable, tactic: Tactic, depth: int,
             lag: int | None = None, audit: bool = True) -> Transcript:
    """One play. ``one_strategy(ones, twos)`` returns a move or None to resign."""
    lag = tactic.k + 1 if lag is None else lag
    ones, twos = [], []
    for _ in range(depth):
        move = one_strategy(list(ones), list(twos))
        if move is None:
            break
        move = frozenset(move)
        ok, why = game.one_legal(ones[-1] if ones else None, twos[-1] if twos else None, move)
        if not ok:
            return Transcript(game.kind, ones, twos, depth, lag, tactic.k, "inconclusive",
                              fault="ONE", reason=why)
        ones.append(move)
        reply, err = _respond(tactic, ones, None, audit)
        if err is None:
            ok, err = game.two_legal(reply)
            err = None if ok else err
        if err is not None:
            return Transcript(game.kind, ones, twos, depth, lag, tactic.k, "lose",
                              witness=_first(ones[-1]) if ones[-1] else None,
                              fault="TWO", reason=err)
        twos.append(reply)
    verdict, witness = finite_win(ones, twos, lag)
    return Transcript(game.kind, ones, twos, depth, lag, tactic.k, verdict, witness)


# exhaustive verification ------------------------------------------------------

@dataclass(frozen=True)
class AllWins:
    plays: int
    stuck: int
    nodes: int


@dataclass(frozen=True)
class Defeat:
    transcript: Transcript
    plays: int
    nodes: int


def verify_tactic(game: Game, tactic: Tactic, depth: int, lag: int | None = None,
                  budget: int | None = None, audit: bool = True):
    """Search every full-length legal ONE line from the menu, in menu order.

    Lines where ONE has no legal continuation before ``depth`` innings are
    discarded and counted as ``stuck``. Returns ``AllWins`` or the first
    ``Defeat`` found.
    """
    lag = tactic.k + 1 if lag is None else lag
    limit = node_budget(budget)
    cache: dict = {}
    ones, twos = [], []
    stats = {"nodes": 0, "plays": 0, "stuck": 0}

    def defeat(verdict_reason, witness, fault=None):
        t = Transcript(game.kind, list(ones), list(twos), depth, lag, tactic.k, "lose",
                       witness, fault, verdict_reason)
        return Defeat(t, stats["plays"], stats["nodes"])

    def dfs():
        if len(ones) == depth:
            stats["plays"] += 1
            verdict, witness = finite_win(ones, twos, lag)
            if verdict == "lose":
                return defeat("uncovered ONE move", witness)
            return None
        options = game.one_options(ones[-1] if ones else None, twos[-1] if twos else None)
        if not options:
            stats["stuck"] += 1
            return None
        for move in options:
            stats["nodes"] += 1
            if stats["nodes"] > limit:
                raise ResourceError(f"game search exceeded {limit} nodes", limit)
            ones.append(move)
            reply, err = _respond(tactic, ones, cache, audit)
            if err is None:
                ok, why = game.two_legal(reply)
                err = None if ok else why
            if err is not None:
                found = defeat(err, _first(move) if move else None, "TWO")
                ones.pop()
                return found
            twos.append(reply)
            found = dfs()
            twos.pop()
            ones.pop()
            if found is not None:
                return found
        return None

    found = dfs()
    if found is not None:
        return found
    if stats["plays"] == 0:
        raise ContractError(f"menu admits no legal ONE line of {depth} innings")
    return AllWins(stats["plays"], stats["stuck"], stats["nodes"])


def replay(game: Game, transcript: Transcript, tactic: Tactic) -> Transcript:
    """Re-run a transcript's ONE moves against the tactic."""
    moves = list(transcript.ones)

    def one(ones, twos):
        return moves[len(ones)] if len(ones) < len(moves) else None

    return run_play(game, one, tactic, transcript.depth, transcript.lag)


# stock tactics ---------------------------------------------------------------

def copy_tactic(k: int = 1) -> Tactic:
    """TWO answers with ONE's latest move."""
    return Tactic(k, lambda w: w[-1], name="copy")


def empty_tactic(k: int = 1, kind: str = "mg") -> Tactic:
    empty = frozenset()
    if kind == "vsg":
        return Tactic(k, lambda w: (empty, empty), name="empty")
    return Tactic(k, lambda w: empty, name="empty")
