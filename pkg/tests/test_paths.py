import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from idealgames.cantor import ProperSubsetFrom, domination_index, subset_decide
from idealgames.errors import ResourceError, StructuralError
from idealgames.fixtures import random_block_pair
from idealgames.paths import (Coloring, FinitePoset, domination_poset,
                              find_bounded_path, window_colors)


def test_constant_coloring_finds_chain():
    res = find_bounded_path(FinitePoset.chain(10), Coloring(2, lambda w: 0), 10, 1)
    assert res.path == tuple(range(10))


def test_rainbow_has_no_short_palette_path():
    res = find_bounded_path(FinitePoset.chain(8), Coloring(2, lambda w: w), 4, 2)
    assert res.path is None


def test_budget_is_explicit():
    with pytest.raises(ResourceError):
        find_bounded_path(FinitePoset.chain(12), Coloring(2, lambda w: w), 6, 2, budget=50)


def test_poset_validation():
    with pytest.raises(StructuralError):
        FinitePoset((0, 1, 2), frozenset({(0, 1), (1, 2)}))
    with pytest.raises(StructuralError):
        FinitePoset((0,), frozenset({(0, 0)}))


def test_domination_examples():
    f = list(range(16))
    g = [2 * n for n in range(16)]
    p = domination_poset([f, g], 16, 4)
    assert (0, 1) in p.less
    assert domination_poset([f, f], 16, 1).less == frozenset()


def brute_path_exists(p, col, length, c):
    for combo in itertools.permutations(p.nodes, length):
        if all((a, b) in p.less for a, b in zip(combo, combo[1:])):
            if len(set(window_colors(col, combo))) <= c:
                return True
    return False


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 3), st.integers(1, 3))
def test_search_matches_brute_force(seed, k, c):
    rng = random.Random(seed)
    n = 7
    less = frozenset((i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.7)
    closure = set(less)
    for mid in range(n):
        for a in range(n):
            for b in range(n):
                if (a, mid) in closure and (mid, b) in closure:
                    closure.add((a, b))
    p = FinitePoset(tuple(range(n)), frozenset(closure))
    table = {w: rng.randrange(3) for w in itertools.permutations(range(n), k)}
    col = Coloring.from_table(k, table)
    res = find_bounded_path(p, col, 4, c)
    assert (res.path is not None) == brute_path_exists(p, col, 4, c)
    if res.path is not None:
        assert all((a, b) in p.less for a, b in zip(res.path, res.path[1:]))
        assert len(set(window_colors(col, res.path))) <= c
        # deleting an unused node keeps the path
        spare = [v for v in p.nodes if v not in res.path]
        if spare:
            drop = spare[0]
            q = FinitePoset(tuple(v for v in p.nodes if v != drop),
                            frozenset(e for e in p.less if drop not in e))
            assert find_bounded_path(q, col, 4, c).path is not None
    else:
        # removing nodes cannot create a path
        q = FinitePoset(p.nodes[1:], frozenset(e for e in p.less if 0 not in e))
        assert find_bounded_path(q, col, 4, c).path is None


@pytest.mark.parametrize("seed", range(30))
def test_block_inclusion_embeds_in_domination(seed):
    a, b = random_block_pair(random.Random(seed))
    v = subset_decide(a, b)
    if not isinstance(v, ProperSubsetFrom):
        return
    idx = domination_index(a, b, v)
    if idx is None or idx >= min(len(a.cuts), len(b.cuts)):
        return
    f, g = a.cuts[idx:], b.cuts[idx:]
    h = min(len(f), len(g))
    assert (0, 1) in domination_poset([f[:h], g[:h]], h, 1).less
