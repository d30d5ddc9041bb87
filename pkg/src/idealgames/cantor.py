"""Block sets on Cantor space at a finite bit horizon.

A ``BlockSystem`` is a cut list ``f(0)=0 < ... < f(K)`` and a word ``x`` of
length ``f(K)``. Stage ``B^n`` holds the words that differ from ``x`` on every
block ``[f(k), f(k+1))`` with ``k >= n``; ``B^m <= B^n`` for ``m < n``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import count, product

import numpy as np

from .errors import ConstructionError, ContractError, InputError

EXHAUSTIVE_LIMIT = 20
ORACLE_LIMIT = 26


@dataclass(frozen=True)
class BlockSystem:
    cuts: tuple
    word: str

    def __post_init__(self):
        c = self.cuts
        if not c or c[0] != 0 or any(p >= q for p, q in zip(c, c[1:])):
            raise InputError(f"cuts must start at 0 and increase strictly: {list(c)}")
        if len(self.word) != c[-1] or set(self.word) - {"0", "1"}:
            raise InputError(f"word must be a bit string of length {c[-1]}")

    @property
    def blocks(self) -> int:
        return len(self.cuts) - 1

    @property
    def horizon(self) -> int:
        return self.cuts[-1]

    def block(self, k: int) -> tuple:
        return self.cuts[k], self.cuts[k + 1]

    def to_json(self) -> dict:
        return {"cuts": list(self.cuts), "word": self.word}

    @classmethod
    def from_json(cls, doc) -> "BlockSystem":
        return cls(tuple(int(c) for c in doc["cuts"]), str(doc["word"]))


def stage_membership(z: str, sys: BlockSystem, n: int) -> bool:
    if len(z) < sys.horizon:
        raise InputError(f"word of length {len(z)} is shorter than horizon {sys.horizon}")
    if not 0 <= n < sys.blocks:
        raise InputError(f"stage {n} outside [0, {sys.blocks})")
    for k in range(n, sys.blocks):
        lo, hi = sys.block(k)
        if z[lo:hi] == sys.word[lo:hi]:
            return False
    return True


# verdicts -------------------------------------------------------------------

@dataclass(frozen=True)
class ProperSubsetFrom:
    m: int
    anchors: dict = field(compare=False)  # g-block n >= m -> least matching f-block


@dataclass(frozen=True)
class Equal:
    shift: int


@dataclass(frozen=True)
class NotSubset:
    bad_blocks: tuple


@dataclass(frozen=True)
class Inconclusive:
    m: int
    bad_blocks: tuple


def _matching_blocks(a: BlockSystem, b: BlockSystem, n: int) -> list[int]:
    """f-blocks inside g-block ``n`` on which the two words agree."""
    lo, hi = b.block(n)
    out = []
    for k in range(a.blocks):
        p, q = a.block(k)
        if p >= hi:
            break
        if lo <= p and q <= hi and a.word[p:q] == b.word[p:q]:
            out.append(k)
    return out


def _equal_shift(a: BlockSystem, b: BlockSystem, slack: int):
    ka, kb = a.blocks, b.blocks
    shift = kb - ka
    if abs(shift) > max(ka, kb) // 2:
        return None
    tail = 0
    while tail < min(ka, kb) and a.cuts[ka - tail - 1] == b.cuts[kb - tail - 1]:
        tail += 1
    if tail < min(slack, ka, kb):
        return None
    start = a.cuts[ka - tail]
    if a.word[start:] != b.word[start:]:
        return None
    return shift


def subset_decide(a: BlockSystem, b: BlockSystem, slack: int = 3):
    """Finite form of the block criterion for ``B_a`` inside ``B_b``.

    A g-block is good when it contains an f-block on which both words agree.
    The verdict needs a good tail of at least ``slack`` blocks; a bad final
    block gives ``NotSubset``; anything in between is ``Inconclusive``.
    """
    if a.horizon != b.horizon:
        raise InputError(f"horizons differ: {a.horizon} vs {b.horizon}")
    shift = _equal_shift(a, b, slack)
    if shift is not None:
        return Equal(shift)
    matches = [_matching_blocks(a, b, n) for n in range(b.blocks)]
    bad = tuple(n for n, ms in enumerate(matches) if not ms)
    m = bad[-1] + 1 if bad else 0
    tail = b.blocks - m
    if tail == 0:
        return NotSubset(bad)
    if tail >= min(slack, b.blocks):
        return ProperSubsetFrom(m, {n: matches[n][0] for n in range(m, b.blocks)})
    return Inconclusive(m, bad)


def block_case(a: BlockSystem, b: BlockSystem, n: int) -> str:
    """Which branch of the separation argument a bad g-block falls under."""
    lo, hi = b.block(n)
    inside = [k for k in range(a.blocks) if lo <= a.cuts[k] and a.cuts[k + 1] <= hi]
    if inside:
        return "1"
    if any(lo <= c < hi for c in a.cuts[:-1]):
        return "2A"
    return "2B"


@dataclass(frozen=True)
class Witness:
    z: str
    blocks: tuple  # chosen g-blocks, where z copies y
    cases: dict
    stage: int  # z lies in every a-stage and outside b-stages up to this index


def separating_witness(a: BlockSystem, b: BlockSystem, slack: int = 3) -> Witness:
    verdict = subset_decide(a, b, slack)
    if not isinstance(verdict, (NotSubset, Inconclusive)):
        raise ContractError(f"no separating word exists: verdict is {type(verdict).__name__}")
    chosen, used = [], set()
    for n in reversed(verdict.bad_blocks):
        lo, hi = b.block(n)
        touching = {k for k in range(a.blocks) if a.cuts[k] < hi and lo < a.cuts[k + 1]}
        if touching & used:
            continue
        chosen.append(n)
        used |= touching
    chosen.sort()
    bits = ["1" if c == "0" else "0" for c in a.word]
    for n in chosen:
        lo, hi = b.block(n)
        bits[lo:hi] = b.word[lo:hi]
    return Witness("".join(bits), tuple(chosen),
                   {n: block_case(a, b, n) for n in chosen}, chosen[-1])


def domination_check(f, g, gap: int, start: int) -> bool:
    end = min(len(f), len(g))
    if start >= end or start < 0:
        raise InputError(f"empty domination window [{start}, {end})")
    return all(g[n] - f[n] >= gap for n in range(start, end))


def domination_index(a: BlockSystem, b: BlockSystem, verdict: ProperSubsetFrom):
    """First cut index from which ``g`` exceeds ``f`` by the anchor argument."""
    for n in range(verdict.m + 1, b.blocks + 1):
        if n <= a.blocks and verdict.anchors[n - 1] >= n:
            return n
    return None


def stage_inclusion_structural(a: BlockSystem, b: BlockSystem, n: int) -> bool:
    """``B^n_a <= B^n_b`` from block geometry alone."""
    return all(any(k >= n for k in _matching_blocks(a, b, j)) for j in range(n, b.blocks))


def coherence_threshold(a: BlockSystem, b: BlockSystem, slack: int = 3) -> int:
    verdict = subset_decide(a, b, slack)
    if not isinstance(verdict, ProperSubsetFrom):
        raise ContractError(f"coherence threshold needs a proper subset, got {type(verdict).__name__}")
    top = min(a.blocks, b.blocks)
    m = top
    while m > 0 and stage_inclusion_structural(a, b, m - 1):
        m -= 1
    return m


# oracle ---------------------------------------------------------------------

def _last_match(sys: BlockSystem, z: np.ndarray) -> np.ndarray:
    out = np.full(z.shape, -1, dtype=np.int8)
    x = int(sys.word[::-1], 2) if sys.word else 0
    for k in range(sys.blocks):
        lo, hi = sys.block(k)
        mask = (1 << (hi - lo)) - 1
        out[((z >> lo) & mask) == ((x >> lo) & mask)] = k
    return out


@lru_cache(maxsize=4096)
def _exhaustive_table(a: BlockSystem, b: BlockSystem) -> tuple:
    z = np.arange(1 << a.horizon, dtype=np.int64)
    la, lb = _last_match(a, z), _last_match(b, z)
    # worst[n] = largest b-match index over words in B^n_a
    worst, running = [], -2
    for n in range(a.blocks + 1):
        sel = la == n - 1
        if sel.any():
            running = max(running, int(lb[sel].max()))
        worst.append(running)
    return tuple(worst)


def _candidate_word(a: BlockSystem, b: BlockSystem, j: int) -> str:
    lo, hi = b.block(j)
    flipped = "".join("1" if c == "0" else "0" for c in a.word)
    return flipped[:lo] + b.word[lo:hi] + flipped[hi:]


def brute_inclusion(a: BlockSystem, b: BlockSystem, n: int, m: int, mode: str = "auto") -> bool:
    """Whether ``B^n_a`` lies inside ``B^m_b``, by enumeration.

    ``exhaustive`` walks all ``2^H`` words. ``candidate`` tests, for every
    b-block ``j >= m``, the word copying ``b`` on block ``j`` and flipping
    ``a`` elsewhere; any counterexample can be pushed onto one of those.
    """
    if a.horizon != b.horizon:
        raise InputError(f"horizons differ: {a.horizon} vs {b.horizon}")
    if a.horizon > ORACLE_LIMIT:
        raise InputError(f"horizon {a.horizon} exceeds the oracle limit of {ORACLE_LIMIT} bits")
    if not (0 <= n < a.blocks and 0 <= m < b.blocks):
        raise InputError("stage index out of range")
    if mode == "auto":
        mode = "exhaustive" if a.horizon <= EXHAUSTIVE_LIMIT else "candidate"
    if mode == "exhaustive":
        return _exhaustive_table(a, b)[n] < m
    if mode == "candidate":
        return not any(stage_membership(_candidate_word(a, b, j), a, n)
                       for j in range(m, b.blocks))
    raise InputError(f"unknown oracle mode {mode!r}")


# covers ---------------------------------------------------------------------

@dataclass(frozen=True)
class TrieChain:
    """Increasing closed sets, each a finite set of points ``b`` + ``000...``."""

    tries: tuple  # of frozenset of bit strings

    def __post_init__(self):
        if not self.tries:
            raise InputError("trie chain is empty")
        for i, t in enumerate(self.tries):
            if any(set(w) - {"0", "1"} for w in t):
                raise InputError(f"trie {i + 1} has a non-binary branch")
        for i in range(len(self.tries) - 1):
            if not self._points(i) <= self._points(i + 1):
                raise InputError(f"trie {i + 1} is not contained in trie {i + 2}")

    def _points(self, i: int) -> frozenset:
        return frozenset(w.rstrip("0") for w in self.tries[i])

    def level(self, j: int) -> frozenset:
        """``X_j`` for ``j >= 1``; constant beyond the last trie."""
        return self.tries[min(j, len(self.tries)) - 1]

    def nodes(self, j: int) -> frozenset:
        return frozenset(w[:i] for w in self.level(j) for i in range(len(w) + 1))

    def to_json(self) -> dict:
        return {"tries": [sorted(t, key=lambda w: (len(w), w)) for t in self.tries]}

    @classmethod
    def from_json(cls, doc) -> "TrieChain":
        return cls(tuple(frozenset(t) for t in doc["tries"]))


def point(branch: str, length: int) -> str:
    return (branch + "0" * length)[:length]


def length_lex(max_len: int):
    for n in range(1, max_len + 1):
        for bits in product("01", repeat=n):
            yield "".join(bits)


def _avoids(word: str, points, max_offset: int) -> bool:
    span = max_offset + len(word)
    return all(point(p, span)[o:o + len(word)] != word
               for p in points for o in range(max_offset + 1))


@dataclass(frozen=True)
class Cover:
    system: BlockSystem
    words: tuple  # s_1, s_2, ...


def cover_build(chain: TrieChain, budget: int) -> Cover:
    """Greedy cover: block ``j+1`` is the first word no point of ``X_j`` shows
    at any offset up to ``f(j)``."""
    cuts, words = [0], []
    for j in count(1):
        f_j = cuts[-1]
        room = budget - f_j
        pts = chain.level(max(j - 1, 1))
        max_offset = 0 if j == 1 else f_j
        s = next((w for w in length_lex(room) if _avoids(w, pts, max_offset)), None)
        if s is None:
            if j == 1:
                raise ConstructionError(f"X_{j} is dense within the budget of {budget} bits", j=j)
            break
        words.append(s)
        cuts.append(f_j + len(s))
    return Cover(BlockSystem(tuple(cuts), "".join(words)), tuple(words))


def coverage_violations(chain: TrieChain, cover: Cover) -> list[tuple]:
    """Triples (m, branch, n) where a point of ``X_m`` shows ``s_{n+1}`` on block n."""
    sys = cover.system
    out = []
    for m in range(1, len(chain.tries) + 1):
        for br in sorted(chain.level(m)):
            z = point(br, sys.horizon)
            for n in range(m, sys.blocks):
                lo, hi = sys.block(n)
                if z[lo:hi] == cover.words[n]:
                    out.append((m, br, n))
    return out


def nowhere_dense_extend(s: str, sys: BlockSystem, n: int) -> str:
    """Extension ``t`` making every completion of ``s + t`` miss ``B^n``."""
    m = next((k for k in range(n + 1, sys.blocks) if sys.cuts[k] > len(s)), None)
    if m is None:
        raise InputError(f"no block after stage {n} starts beyond position {len(s)}")
    return sys.word[len(s):sys.cuts[m + 1]]
