"""Seeded generators for the test and acceptance corpora.

Every generator takes a ``random.Random`` so a seed pins the whole corpus.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .cantor import BlockSystem, TrieChain
from .decomp import Decomposition, decompose_locally_small
from .ideal import FamilySpec, IdealInstance, rank_family
from .paths import Coloring


def _bits(rng: random.Random, n: int) -> str:
    return "".join(rng.choice("01") for _ in range(n))


def _cuts(rng: random.Random, horizon: int, blocks: int) -> tuple:
    inner = sorted(rng.sample(range(1, horizon), blocks - 1))
    return (0, *inner, horizon)


def random_block_pair(rng: random.Random, max_horizon: int = 24,
                      min_blocks: int = 3, max_blocks: int = 8) -> tuple:
    """A pair (a, b) of block systems on a common horizon.

    Half the pairs refine ``b``'s cuts into ``a`` and copy words on most
    blocks, so proper inclusions are common; the rest are independent.
    """
    kind = rng.random()
    if kind < 0.5:
        kb = rng.randint(min_blocks, max(min_blocks, max_blocks // 2))
        horizon = rng.randint(max(2 * kb, min_blocks), max_horizon)
        g = _cuts(rng, horizon, kb)
        f = set(g)
        for lo, hi in zip(g, g[1:]):
            for c in range(lo + 1, hi):
                if len(f) - 1 < max_blocks and rng.random() < 0.3:
                    f.add(c)
        f = tuple(sorted(f))
        y = _bits(rng, horizon)
        x = list(y)
        for lo, hi in zip(f, f[1:]):
            if rng.random() < 0.35:
                i = rng.randrange(lo, hi)
                x[i] = "1" if x[i] == "0" else "0"
        return BlockSystem(f, "".join(x)), BlockSystem(g, y)
    horizon = rng.randint(max_blocks, max_horizon)
    ka = rng.randint(min_blocks, max_blocks)
    kb = rng.randint(min_blocks, max_blocks)
    x = _bits(rng, horizon)
    y = x if rng.random() < 0.5 else _bits(rng, horizon)
    return BlockSystem(_cuts(rng, horizon, ka), x), BlockSystem(_cuts(rng, horizon, kb), y)


def random_trie_chain(rng: random.Random, max_tries: int = 4, max_branches: int = 4,
                      max_len: int = 6) -> TrieChain:
    tries, current = [], set()
    for _ in range(rng.randint(1, max_tries)):
        for _ in range(rng.randint(0, max_branches)):
            current.add(_bits(rng, rng.randint(1, max_len)))
        tries.append(frozenset(current))
    return TrieChain(tuple(tries))


# layered families for the monotone game ----------------------------------------

@dataclass
class LayeredFixture:
    inst: IdealInstance
    fam: FamilySpec
    dec: Decomposition
    col: Coloring
    k: int
    palette: int
    height: int


def layered_fixture(seed: int, height: int = 6, width: int = 2, extras: int = 2,
                    stage_count: int | None = None, k: int = 2, padding: int = 2,
                    headroom: int = 0) -> LayeredFixture:
    """A main chain of ``height`` blocks plus a few side members.

    Side member at level ``r`` is the chain below it, one atom of block
    ``r`` and one atom of block ``r + 1``. The window coloring is an offset
    plus the rank of the window's top, so every maximal chain shows
    ``height - k + 1`` colors and the top window reaches the last stage.
    ``padding`` atoms lie outside every member; ``headroom`` extra generators
    per union leave room for the strong games' escape points.
    """
    rng = random.Random(seed)
    stage_count = height + 2 if stage_count is None else stage_count
    n_atoms = height * width + padding
    perm = list(range(n_atoms))
    rng.shuffle(perm)
    blocks = [perm[r * width:(r + 1) * width] for r in range(height)]
    members = [frozenset(perm[:(r + 1) * width]) for r in range(height)]
    for r in rng.sample(range(1, height - 1), min(extras, height - 2)):
        a = rng.choice(blocks[r])
        b = rng.choice(blocks[r + 1])
        members.append(members[r - 1] | (frozenset(blocks[r]) - {a}) | {b})
    gens = [list(b) for b in blocks] + [[a] for a in perm]
    inst = IdealInstance.build(perm, gens, height + headroom)
    members.sort(key=inst.ground.key)
    fam = FamilySpec(tuple(members), None, inst.ground)
    rank = rank_family(fam)
    offset = stage_count - height
    table = {}
    for w in _chains(fam, k):
        table[tuple(fam.members[i] for i in w)] = offset + rank[w[-1]]
    col = Coloring.from_table(k, table)
    dec = decompose_locally_small(fam, stage_count)
    return LayeredFixture(inst, fam, dec, col, k, len(set(table.values())), height)


def _chains(fam: FamilySpec, k: int):
    """Increasing k-tuples of member indices."""
    def grow(path):
        if len(path) == k:
            yield tuple(path)
            return
        for j in range(len(fam)):
            if (path[-1], j) in fam.strict_subset_edges:
                yield from grow(path + [j])
    for i in range(len(fam)):
        yield from grow([i])


def three_fixture(seed: int, height: int = 4, width: int = 1, extras: int = 2,
                  padding: int = 4, headroom: int = 4, offset: int = 2):
    """A layered family with the inputs of the 3-tactic.

    The C-chain runs up the main chain and then adds padding atoms one at a
    time, so it escapes every member. Pieces and the down-set family share
    ``height + offset + 2`` stages, enough for the rank pair coloring.
    """
    from .tactics.vsg3 import build_three_inputs
    stage_count = height + offset + 2
    fx = layered_fixture(seed, height=height, width=width, extras=extras,
                         stage_count=stage_count, padding=padding, headroom=headroom)
    perm = fx.inst.ground.elements
    chain = [frozenset(perm[:(r + 1) * width]) for r in range(height)]
    tail = perm[height * width:]
    chain += [chain[height - 1] | frozenset(tail[:i])
              for i in range(1, min(len(tail), headroom) + 1)]
    return fx, build_three_inputs(fx.fam, fx.dec, chain, stage_count, offset)


# witness colorings on finite chains ---------------------------------------------

def path_free_coloring(points: int, k: int, colors: int, length: int,
                       min_colors: int) -> Coloring | None:
    """A coloring of increasing ``k``-tuples of ``range(points)`` under which
    every increasing path of ``length`` points shows at least ``min_colors``
    window colors, found by backtracking; None if there is none."""
    from itertools import combinations
    tuples = list(combinations(range(points), k))
    index = {t: i for i, t in enumerate(tuples)}
    constraints = [[index[p[j:j + k]] for j in range(length - k + 1)]
                   for p in combinations(range(points), length)]
    touching = [[] for _ in tuples]
    for c in constraints:
        for v in c:
            touching[v].append(c)
    order = sorted(range(len(tuples)), key=lambda v: (-len(touching[v]), v))
    col = [-1] * len(tuples)

    def consistent(v):
        for c in touching[v]:
            vals = [col[u] for u in c]
            if -1 not in vals and len(set(vals)) < min_colors:
                return False
        return True

    def search(i):
        if i == len(order):
            return True
        v = order[i]
        for x in range(colors):
            col[v] = x
            if consistent(v) and search(i + 1):
                return True
        col[v] = -1
        return False

    if not search(0):
        return None
    return Coloring.from_table(k, {t: col[index[t]] for t in tuples})
