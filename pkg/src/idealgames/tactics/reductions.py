"""Two-move tactics for the strong games built from a monotone-game tactic,
and the translations between the strongly monotonic and very strong games."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable

from ..errors import ConstructionError, StructuralError
from ..game import Tactic
from ..ideal import FamilySpec


def _members_by_key(fam: FamilySpec) -> list:
    if fam.ground is None:
        return sorted(fam.members, key=lambda m: (len(m), sorted(m, key=repr)))
    return sorted(fam.members, key=fam.ground.key)


def least_member_above(fam: FamilySpec, x: frozenset, strict: bool = True):
    """Canonically least member containing ``x`` (properly, if ``strict``)."""
    for m in _members_by_key(fam):
        if (x < m) if strict else (x <= m):
            return m
    return None


# Phi maps ---------------------------------------------------------------------

@dataclass
class PhiMaps:
    phi1: Callable
    phi2: Callable
    enumeration: dict
    validated: bool = False
    domain: tuple = ()


def default_enumeration(fam: FamilySpec) -> dict:
    """Each atom of the family indexes the least member containing it."""
    out = {}
    for m in _members_by_key(fam):
        for a in m:
            out.setdefault(a, m)
    return out


def build_phi_maps(fam: FamilySpec, enumeration: dict | None = None,
                   universe=None, domain=None) -> PhiMaps:
    """Hull-based ``Phi_2`` and two-point ``Phi_1``.

    ``hull(X)`` iterates ``X -> union of A_a for a in X`` to a fixed point;
    ``Phi_2(X)`` is the least member properly containing ``X`` and its hull;
    ``Phi_1(X) = {z_X, rho_X}`` with ``z_X`` the first atom of the universe
    outside ``Phi_2(X)`` and ``rho_X`` the first atom outside it whose indexed
    member properly contains ``Phi_2(X)``. Invariants are checked over
    ``domain`` before the maps are marked validated.
    """
    enum = default_enumeration(fam) if enumeration is None else dict(enumeration)
    for a, m in enum.items():
        if a not in m:
            raise StructuralError(f"enumerated member for {a!r} does not contain it")
    if universe is None:
        # atoms outside every member are the natural escape points at the top
        universe = (frozenset(fam.ground.elements) if fam.ground is not None
                    else frozenset().union(*fam.members))
    order = fam.ground.sort(universe) if fam.ground is not None else sorted(universe)
    memo2: dict = {}

    def hull(x):
        cur = frozenset(x)
        while True:
            try:
                nxt = frozenset().union(cur, *(enum[a] for a in cur))
            except KeyError as e:
                raise ConstructionError(f"atom {e.args[0]!r} has no enumerated member",
                                        atom=e.args[0]) from None
            if nxt == cur:
                return cur
            cur = nxt

    def phi2(x):
        x = frozenset(x)
        if x not in memo2:
            h = hull(x)
            m = next((m for m in _members_by_key(fam) if h <= m and x < m), None)
            if m is None:
                raise ConstructionError("no member contains the hull", set=sorted(x, key=repr))
            memo2[x] = m
        return memo2[x]

    def phi1(x):
        p = phi2(x)
        z = next((a for a in order if a not in p), None)
        rho = next((a for a in order if a not in p and p < enum.get(a, frozenset())), None)
        if z is None or rho is None:
            raise ConstructionError("no escape point above Phi_2", set=sorted(x, key=repr))
        return frozenset({z, rho})

    maps = PhiMaps(phi1, phi2, enum)
    if domain is not None:
        validate_phi_maps(maps, domain)
    return maps


def validate_phi_maps(maps: PhiMaps, domain) -> None:
    """Check ``A < Phi_2(A)`` and monotonicity over ``domain``; raises with a witness."""
    domain = [frozenset(d) for d in domain]
    for a in domain:
        if not a < maps.phi2(a):
            raise StructuralError(f"Phi_2 fails to properly contain {sorted(a, key=repr)}")
    for a in domain:
        grown = a | maps.phi1(a)
        for b in domain:
            if grown <= b and not maps.phi2(a) < maps.phi2(b):
                raise StructuralError(
                    f"Phi_2 not increasing from {sorted(a, key=repr)} to {sorted(b, key=repr)}")
    maps.validated = True
    maps.domain = tuple(domain)


# strongly monotonic game ----------------------------------------------------------

def build_smg_two_tactic(base: Tactic, maps: PhiMaps) -> Tactic:
    """Feed the base tactic the ladder ``A_1 = Phi_2(A), A_{j+1} = Phi_2(A_j)``."""
    k = base.k
    F = base.fn

    def ladder(a):
        out = [maps.phi2(a)]
        while len(out) < k:
            out.append(maps.phi2(out[-1]))
        return out

    def psi(a, lad):
        return frozenset().union(maps.phi1(a), *(maps.phi1(x) for x in lad))

    def single(a):
        lad = ladder(a)
        parts = [F(tuple(lad[:i])) for i in range(1, k + 1)]
        return frozenset().union(*parts, psi(a, lad))

    def move(window):
        if len(window) == 1:
            return single(window[0])
        a, b = window
        la, lb = ladder(a), ladder(b)
        if la[-1] < lb[0]:
            seq = la + lb
            parts = [F(tuple(seq[i:i + k])) for i in range(1, k + 1)]
            return frozenset().union(*parts, psi(b, lb))
        return single(b)

    return Tactic(2, move, name="smg2")


# very strong game ------------------------------------------------------------------

def build_vsg_two_tactic(base: Tactic, fam: FamilySpec) -> Tactic:
    """``A_1(X)`` is the least member properly above ``X``, each next rung the
    least member properly above the last, and ``Psi(X)`` one rung higher."""
    k = base.k
    F = base.fn

    def rungs(x):
        out = []
        cur = x
        for _ in range(k + 1):
            cur = least_member_above(fam, cur)
            if cur is None:
                raise ConstructionError("family has no member properly above a reachable set",
                                        set=sorted(x, key=repr))
            out.append(cur)
        return out[:k], out[k]

    def single(x):
        lad, psi = rungs(x)
        return frozenset().union(*(F(tuple(lad[:i])) for i in range(1, k + 1))), psi

    def move(window):
        if len(window) == 1:
            return single(window[0])
        x, y = window
        lx, psi_x = rungs(x)
        if psi_x <= y:
            ly, psi_y = rungs(y)
            seq = lx + ly
            t = frozenset().union(*(F(tuple(seq[i:i + k])) for i in range(1, k + 1)))
            return t, psi_y
        return single(y)

    return Tactic(2, move, name="vsg2")


# translations ------------------------------------------------------------------------

@dataclass
class CofinalChain:
    members: tuple
    escape: tuple  # escape[i] lies outside members[i]

    def __post_init__(self):
        for a, b in zip(self.members, self.members[1:]):
            if not a < b:
                raise StructuralError("chain is not strictly increasing")
        for i, (m, z) in enumerate(zip(self.members, self.escape)):
            if z in m:
                raise StructuralError(f"escape point {z!r} lies inside chain member {i}")

    def alpha(self, x: frozenset) -> int:
        for i, m in enumerate(self.members):
            if x < m:
                return i
        raise ConstructionError("chain is not cofinal over a reachable set",
                                set=sorted(x, key=repr))


def build_cofinal_chain(vsg_tactic: Tactic, fam: FamilySpec, length: int,
                        menu=(), universe=None) -> CofinalChain:
    """Greedy chain in the family absorbing every response on earlier windows.

    ``M_{i+1}`` is the least member properly containing ``M_i``, both parts of
    every tactic response on increasing windows ending at ``M_i``, and the
    ``i``-th menu set, so the chain is cofinal over the menu. The chain
    stops early once the tactic has no answer at its top.
    """
    menu = [frozenset(m) for m in menu]
    if universe is None:
        # atoms outside every member are the natural escape points at the top
        universe = (frozenset(fam.ground.elements) if fam.ground is not None
                    else frozenset().union(*fam.members))
    order = fam.ground.sort(universe) if fam.ground is not None else sorted(universe)
    k = vsg_tactic.k
    first = least_member_above(fam, menu[0] if menu else frozenset(), strict=False)
    members = [first]
    while len(members) < length:
        i = len(members) - 1
        need = set(members[i])
        try:
            for w in _index_windows(i, k):
                u, t = vsg_tactic.fn(tuple(members[j] for j in w))
                need |= u | t
        except ConstructionError:
            # the tactic has no answer this high up, so the chain ends here
            break
        if i < len(menu):
            need |= menu[i]
        nxt = least_member_above(fam, frozenset(need))
        if nxt is None:
            break
        members.append(nxt)
    escape = []
    for i, m in enumerate(members):
        # prefer a point of the next rung, so ONE can still stay inside the chain
        nxt = members[i + 1] if i + 1 < len(members) else universe
        z = next((a for a in order if a not in m and a in nxt), None)
        if z is None:
            raise ConstructionError("chain member exhausts the universe")
        escape.append(z)
    return CofinalChain(tuple(members), tuple(escape))


def _index_windows(last: int, k: int):
    """Strictly increasing index tuples of length <= k ending at ``last``."""
    for size in range(1, k + 1):
        for head in combinations(range(last), size - 1):
            yield head + (last,)


def smg_to_vsg(tactic: Tactic) -> Tactic:
    def move(window):
        f = tactic.fn(window)
        return f, window[-1] | f
    return Tactic(tactic.k, move, name=f"vsg({tactic.name})")


def vsg_to_smg(tactic: Tactic, chain: CofinalChain) -> Tactic:
    def move(window):
        alphas = [chain.alpha(x) for x in window]
        # the escape point lies outside M_alpha, so ONE's next alpha is larger
        z = frozenset({chain.escape[alphas[-1]]})
        if all(p < q for p, q in zip(alphas, alphas[1:])):
            u, _ = tactic.fn(tuple(chain.members[a] for a in alphas))
            return u | z
        return z
    return Tactic(tactic.k, move, name=f"smg({tactic.name})")


def translate_smg_vsg(tactic: Tactic, direction: str, chain: CofinalChain | None = None) -> Tactic:
    if direction == "smg->vsg":
        return smg_to_vsg(tactic)
    if direction == "vsg->smg":
        if chain is None:
            raise ConstructionError("the vsg->smg direction needs a cofinal chain")
        return vsg_to_smg(tactic, chain)
    raise ConstructionError(f"unknown direction {direction!r}")


def answerable_members(tactic: Tactic, members) -> list:
    """Members ``X`` on which the tactic answers every strictly increasing
    window of at most ``k`` members ending at ``X``.

    On a finite family the ladders run out near the top; restricting ONE's
    menu to these members keeps every play inside the tactic's reach.
    """
    members = [frozenset(m) for m in members]
    out = []
    for x in members:
        below = [m for m in members if m < x]
        ok = True
        for size in range(tactic.k):
            for head in combinations(below, size):
                if not all(p < q for p, q in zip(head, head[1:])):
                    continue
                try:
                    tactic.fn(head + (x,))
                except ConstructionError:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(x)
    return out
