"""Banach-Mazur games on finite spaces and on truncated cone spaces.

ONE and TWO alternately play nonempty open sets, each inside the previous
one; TWO wins when the sets played have a common point.

On a finite space the game reduces to structure: the opens split into ``n``
families with the finite intersection property, ``n`` being the largest
number of pairwise disjoint nonempty opens, and meeting a fixed maximal
disjoint family gives TWO a 1-tactic.

Cone spaces stand in for spaces where every nonempty open set contains
infinitely many disjoint open sets: opens are finite unions of cones ``[s]``
over binary words of length at most ``depth``. The refinement
``J_m([s]) = [s 0^(m-1) 1]`` turns a Markov tactic into a plain one.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

from .errors import ConstructionError, ContractError, InputError, ResourceError
from .game import AllWins, Defeat, Tactic, Transcript, node_budget


def _key(s: frozenset) -> tuple:
    return (len(s), tuple(sorted(s, key=repr)))


# finite spaces ------------------------------------------------------------------

@dataclass(frozen=True)
class FiniteSpace:
    points: tuple
    opens: frozenset  # of frozensets, closed under union and intersection

    def __post_init__(self):
        whole = frozenset(self.points)
        opens = frozenset(frozenset(o) for o in self.opens) | {frozenset(), whole}
        object.__setattr__(self, "opens", opens)
        for o in opens:
            if not o <= whole:
                raise InputError(f"open set {sorted(o, key=repr)} leaves the point set")
        for a, b in combinations(opens, 2):
            if a | b not in opens or a & b not in opens:
                raise InputError("opens are not closed under union and intersection")

    @property
    def nonempty(self) -> list:
        return sorted((o for o in self.opens if o), key=_key)

    def is_open(self, x) -> bool:
        return frozenset(x) in self.opens

    def to_json(self) -> dict:
        return {"points": list(self.points),
                "opens": [sorted(o, key=repr) for o in sorted(self.opens, key=_key)]}

    @classmethod
    def from_json(cls, doc: dict) -> "FiniteSpace":
        return cls(tuple(doc["points"]), frozenset(frozenset(o) for o in doc["opens"]))


def all_spaces(points) -> list:
    """Every family of subsets containing the empty and the whole set and closed
    under union and intersection, in canonical order."""
    points = tuple(points)
    whole = frozenset(points)
    middle = [frozenset(c) for r in range(1, len(points))
              for c in combinations(points, r)]
    out = []
    for mask in range(1 << len(middle)):
        fam = {frozenset(), whole} | {m for i, m in enumerate(middle) if mask >> i & 1}
        if all(a | b in fam and a & b in fam for a, b in combinations(fam, 2)):
            out.append(FiniteSpace(points, frozenset(fam)))
    return out


@dataclass(frozen=True)
class FipDecomposition:
    n: int
    seeds: tuple      # pairwise disjoint U_1, ..., U_n
    families: tuple   # tau_1, ..., tau_n, each a tuple of opens


def max_disjoint(space: FiniteSpace) -> tuple:
    """A largest family of pairwise disjoint nonempty opens (canonically first)."""
    opens = space.nonempty
    best: tuple = ()

    def grow(chosen, start):
        nonlocal best
        if len(chosen) > len(best):
            best = tuple(chosen)
        for i in range(start, len(opens)):
            o = opens[i]
            if all(not (o & c) for c in chosen):
                grow(chosen + [o], i + 1)

    grow([], 0)
    return best


def fip_decompose(space: FiniteSpace) -> FipDecomposition:
    """Greedy maximal pairwise-meeting families seeded at a largest disjoint family."""
    seeds = max_disjoint(space)
    families = []
    for u in seeds:
        fam = [u]
        for o in space.nonempty:
            if o != u and all(o & f for f in fam):
                fam.append(o)
        families.append(tuple(sorted(fam, key=_key)))
    return FipDecomposition(len(seeds), seeds, tuple(families))


def fip_problems(space: FiniteSpace, dec: FipDecomposition) -> list:
    """Every failed property of a decomposition, each with a witness."""
    out = []
    opens = space.nonempty
    # n is the largest disjoint-family size, checked by brute force over subsets
    for r in range(dec.n + 1, len(opens) + 1):
        for fam in combinations(opens, r):
            if all(not (a & b) for a, b in combinations(fam, 2)):
                out.append(f"{r} pairwise disjoint opens exceed n = {dec.n}")
                break
        else:
            continue
        break
    for i, fam in enumerate(dec.families):
        for a, b in combinations(fam, 2):
            if not a & b:
                out.append(f"family {i + 1} has disjoint members")
        if fam and not frozenset.intersection(*fam):
            out.append(f"family {i + 1} lacks the finite intersection property")
    covered = set().union(*dec.families) if dec.families else set()
    for o in opens:
        if o not in covered:
            out.append(f"open {sorted(o, key=repr)} is in no family")
    return out


def fip_one_tactic(space: FiniteSpace, dec: FipDecomposition) -> Tactic:
    """``G(U) = U_j & U`` for the least ``j`` with ``U_j`` meeting ``U``."""
    def move(window):
        u = window[-1]
        for s in dec.seeds:
            if s & u:
                return s & u
        raise ContractError("no seed meets the open set; the disjoint family is not maximal")
    return Tactic(1, move, name="fip")


# cone spaces ------------------------------------------------------------------------

@dataclass(frozen=True)
class ConeSpace:
    """Opens are canonical antichains of root words of length at most ``depth``."""

    depth: int

    def canon(self, roots) -> frozenset:
        roots = set(roots)
        for r in roots:
            if len(r) > self.depth or set(r) - {"0", "1"}:
                raise InputError(f"word {r!r} is not a binary word of length <= {self.depth}")
        return frozenset(r for r in roots
                         if not any(r != q and r.startswith(q) for q in roots))

    def cone(self, word: str) -> frozenset:
        return self.canon({word})

    def meet(self, u: frozenset, v: frozenset) -> frozenset:
        out = set()
        for r in u:
            for q in v:
                if r.startswith(q):
                    out.add(r)
                elif q.startswith(r):
                    out.add(q)
        return self.canon(out)

    def leq(self, u: frozenset, v: frozenset) -> bool:
        return all(any(r.startswith(q) for q in v) for r in u)

    @staticmethod
    def least_root(u: frozenset) -> str:
        return min(u, key=lambda r: (len(r), r))

    def has_full_branch(self, u: frozenset) -> bool:
        return bool(u) and all(len(r) <= self.depth for r in u)

    def cones_up_to(self, length: int) -> list:
        return [self.cone("".join(bits)) for n in range(length + 1)
                for bits in _words(n)]


def _words(n: int):
    if n == 0:
        yield ()
        return
    for w in _words(n - 1):
        yield w + ("0",)
        yield w + ("1",)


@dataclass(frozen=True)
class ConeScheme:
    """``J_m(U) = [r 0^(m-1) 1]`` for the least root ``r`` of ``U``."""

    space: ConeSpace

    def j(self, u: frozenset, m: int) -> frozenset:
        if m < 1:
            raise InputError("refinement index starts at 1")
        if not u:
            raise ContractError("cannot refine the empty set")
        word = self.space.least_root(u) + "0" * (m - 1) + "1"
        if len(word) > self.space.depth:
            raise ConstructionError("refinement leaves the truncated tree", index=m, word=word)
        return self.space.cone(word)

    def index(self, u: frozenset, v: frozenset) -> int | None:
        """The ``m`` with ``V <= J_m(U)``, or None."""
        r = self.space.least_root(u)
        found = set()
        for w in v:
            tail = w[len(r):]
            if not w.startswith(r) or "1" not in tail:
                return None
            found.add(tail.index("1") + 1)
        return found.pop() if len(found) == 1 else None

    def validate(self, u: frozenset, bound: int) -> list:
        """Problems with ``J_1(U), ..., J_bound(U)`` that fit in the tree."""
        out, parts = [], []
        for m in range(1, bound + 1):
            try:
                part = self.j(u, m)
            except ConstructionError:
                break
            if not part or not self.space.leq(part, u):
                out.append(f"J_{m} is empty or not inside U")
            parts.append((m, part))
        for (a, p), (b, q) in combinations(parts, 2):
            if self.space.meet(p, q):
                out.append(f"J_{a} and J_{b} meet")
        return out


def markov_to_plain(markov: Tactic, scheme: ConeScheme) -> Tactic:
    """Plain ``k``-tactic from a Markov one, recovering the inning from the nesting."""
    if not markov.markov:
        raise ContractError("markov_to_plain needs a Markov tactic")
    k = markov.k
    F = markov.fn

    def single(u):
        return F((scheme.j(u, 2),), 1)

    def move(window):
        if len(window) == 1:
            return single(window[0])
        m = scheme.index(window[0], window[1])
        if m is not None and m >= 2:
            l = m - 2
            if all(scheme.index(window[i], window[i + 1]) == l + i + 2
                   for i in range(len(window) - 1)):
                s = tuple(scheme.j(window[i], l + i + 2) for i in range(len(window)))
                return F(s, l + len(window))
        return single(window[-1])

    return Tactic(k, move, name=f"plain({markov.name})")


def child_by_inning(k: int = 2) -> Tactic:
    """Markov tactic: descend from the last set's least root to child ``inning mod 2``."""
    def move(window, inning):
        return frozenset({ConeSpace.least_root(window[-1]) + str(inning % 2)})
    return Tactic(k, move, markov=True, name="child")


def embedding_problems(ones: list, twos: list, markov: Tactic, scheme: ConeScheme) -> list:
    """Check ``O_1 >= S_1 >= T_1 >= O_2 >= ...`` and ``T_j = F(S..., j)``
    with ``S_n = J_{n+1}(O_n)`` on one play."""
    leq = scheme.space.leq
    out = []
    s = [scheme.j(o, n + 2) for n, o in enumerate(ones[:len(twos)])]
    for n, t in enumerate(twos):
        if not (leq(s[n], ones[n]) and leq(t, s[n])):
            out.append(f"inning {n + 1}: chain O >= S >= T fails")
        if n + 1 < len(ones) and not leq(ones[n + 1], t):
            out.append(f"inning {n + 2}: ONE left TWO's set")
        lo = max(0, n + 1 - markov.k)
        expected = markov.fn(tuple(s[lo:n + 1]), n + 1)
        if t != expected:
            out.append(f"inning {n + 1}: T differs from the Markov tactic on the S sequence")
    return out


def random_cone_strategy(seed: int, space: ConeSpace, max_len: int):
    """ONE picks a cone of length at most 2, then random subcones up to ``max_len``."""
    rng = random.Random(seed)

    def one(ones, twos):
        if not ones:
            return space.cone("".join(rng.choice("01") for _ in range(rng.randint(0, 2))))
        root = ConeSpace.least_root(twos[-1])
        if len(root) > max_len:
            return None
        extra = rng.randint(0, max(0, min(2, max_len - len(root))))
        return space.cone(root + "".join(rng.choice("01") for _ in range(extra)))

    return one


# play and verification --------------------------------------------------------------

class _Rules:
    """Legality for either space kind."""

    def __init__(self, space):
        self.space = space
        self.cones = isinstance(space, ConeSpace)

    def is_open(self, x) -> bool:
        if self.cones:
            return isinstance(x, frozenset) and all(isinstance(r, str) for r in x)
        return self.space.is_open(x)

    def leq(self, a, b) -> bool:
        return self.space.leq(a, b) if self.cones else a <= b

    def legal_two(self, prev_one, move) -> tuple:
        if not isinstance(move, frozenset) or not self.is_open(move):
            return False, "TWO move is not an open set"
        if not move:
            return False, "TWO move is empty"
        if not self.leq(move, prev_one):
            return False, "TWO move is not inside ONE's move"
        return True, "ok"

    def common_point(self, moves) -> bool:
        last = moves[-1]
        return self.space.has_full_branch(last) if self.cones else bool(last)


def bm_play(space, one_strategy, tactic: Tactic, depth: int) -> Transcript:
    """One play; ``one_strategy(ones, twos)`` returns an open set or None to stop."""
    rules = _Rules(space)
    ones, twos = [], []
    for _ in range(depth):
        move = one_strategy(list(ones), list(twos))
        if move is None:
            break
        if not move or (twos and not rules.leq(move, twos[-1])):
            return Transcript("bm", ones, twos, depth, 0, tactic.k, "inconclusive",
                              fault="ONE", reason="ONE move is empty or outside TWO's set")
        ones.append(move)
        window = tuple(ones[-tactic.k:])
        try:
            reply = tactic.respond(window, len(ones))
        except Exception as exc:
            return Transcript("bm", ones, twos, depth, 0, tactic.k, "lose", fault="TWO",
                              reason=f"tactic raised {type(exc).__name__}: {exc}")
        ok, why = rules.legal_two(move, reply)
        if not ok:
            return Transcript("bm", ones, twos, depth, 0, tactic.k, "lose", fault="TWO",
                              reason=why)
        twos.append(reply)
    verdict = "win" if twos and rules.common_point(twos) else "inconclusive"
    return Transcript("bm", ones, twos, depth, 0, tactic.k, verdict)


def bm_verify(space, tactic: Tactic, depth: int, one_menu=None, budget: int | None = None):
    """Every line of ``depth`` innings with ONE's moves from ``one_menu`` (default:
    every nonempty open of a finite space). Lines where ONE has no legal move
    are discarded as stuck."""
    rules = _Rules(space)
    if one_menu is None:
        if rules.cones:
            raise InputError("cone spaces need an explicit ONE menu")
        one_menu = space.nonempty
    menu = [frozenset(m) for m in one_menu]
    limit = node_budget(budget)
    stats = {"nodes": 0, "plays": 0, "stuck": 0}
    ones, twos = [], []

    def defeat(reason):
        t = Transcript("bm", list(ones), list(twos), depth, 0, tactic.k, "lose",
                       fault="TWO", reason=reason)
        return Defeat(t, stats["plays"], stats["nodes"])

    def dfs():
        if len(ones) == depth:
            stats["plays"] += 1
            return None if rules.common_point(twos) else defeat("no common point")
        options = [m for m in menu if m and (not twos or rules.leq(m, twos[-1]))]
        if not options:
            stats["stuck"] += 1
            return None
        for m in options:
            stats["nodes"] += 1
            if stats["nodes"] > limit:
                raise ResourceError(f"game search exceeded {limit} nodes", limit)
            ones.append(m)
            try:
                reply = tactic.respond(tuple(ones[-tactic.k:]), len(ones))
                ok, why = rules.legal_two(m, reply)
            except Exception as exc:
                ok, why = False, f"tactic raised {type(exc).__name__}: {exc}"
            if not ok:
                found = defeat(why)
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
