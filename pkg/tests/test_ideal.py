import itertools

import pytest
from hypothesis import given, settings, strategies as st

from idealgames.errors import InputError, StructuralError
from idealgames.ideal import (FamilySpec, IdealInstance, locally_small_check,
                              rank_family, validate_instance)


def test_singletons_generate_valid():
    inst = IdealInstance.build([0, 1, 2], [[0], [1], [2]], 2)
    assert validate_instance(inst) == []


def test_generator_equal_to_ground_reported():
    inst = IdealInstance.build([0, 1], [[0, 1]], 1)
    assert any("generator 0 equals ground" in p for p in validate_instance(inst))


def test_uncovered_atom_reported():
    inst = IdealInstance.build([0, 1, 2], [[0], [1]], 1)
    assert any("atom 2 uncovered" in p for p in validate_instance(inst))


def test_labeled_pair_atoms_round_trip_from_lists():
    inst = IdealInstance.build([[0, 0], [0, 1]], [[[0, 0]], [[0, 1]]], 2)
    assert inst.ground.elements == ((0, 0), (0, 1))
    assert inst.in_sigma({(0, 0), (0, 1)})


def test_j_versus_sigma_membership():
    inst = IdealInstance.build(range(6), [[0, 1], [2, 3], [4, 5]], 3, j_width=1)
    assert inst.in_J({0, 1})
    assert not inst.in_J({1, 2})
    assert inst.in_sigma({1, 2, 5})
    assert inst.cover_number({0, 2, 4}) == 3


def test_sigma_set_bound_enforced():
    inst = IdealInstance.build(range(4), [[0], [1], [2], [3]], 2)
    with pytest.raises(InputError):
        inst.sigma_set([0, 1, 2])


def test_rank_chain_antichain_diamond():
    chain = FamilySpec.of([{0}, {0, 1}, {0, 1, 2}])
    assert rank_family(chain) == [0, 1, 2]
    assert rank_family(FamilySpec.of([{0}, {1}])) == [0, 0]
    diamond = FamilySpec.of([{0}, {0, 1}, {0, 2}, {0, 1, 2}])
    assert rank_family(diamond) == [0, 1, 1, 2]


def test_rank_cycle_in_fake_edges():
    fam = FamilySpec.of([{0}, {1}])
    with pytest.raises(StructuralError):
        rank_family(fam, edges=[(0, 1), (1, 0)])


def test_duplicate_members_rejected():
    with pytest.raises(StructuralError):
        FamilySpec.of([{0}, {0}])


def test_locally_small_examples():
    chain = FamilySpec.of([{0}, {0, 1}, {0, 1, 2}])
    assert locally_small_check(chain, 3) == (True, [])
    star = FamilySpec.of([{i} for i in range(5)] + [set(range(5))])
    assert locally_small_check(star, 4) == (False, [5])


families = st.lists(st.frozensets(st.integers(0, 5), max_size=6),
                    max_size=10, unique=True)


@settings(max_examples=200, deadline=None)
@given(families)
def test_rank_strictly_increases_along_edges(sets):
    fam = FamilySpec.of(sets)
    rank = rank_family(fam)
    for i, j in fam.strict_subset_edges:
        assert rank[i] < rank[j]
    # minimality: each positive rank is witnessed by a predecessor one below
    for j, r in enumerate(rank):
        if r:
            assert any(rank[i] == r - 1 for i in fam.below[j])


@settings(max_examples=200, deadline=None)
@given(families, st.integers(1, 10))
def test_locally_small_matches_down_set_count(sets, bound):
    fam = FamilySpec.of(sets)
    ok, bad = locally_small_check(fam, bound)
    expected = [j for j, b in enumerate(fam.members)
                if sum(1 for a in fam.members if a <= b) > bound]
    assert bad == expected and ok == (not expected)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 4), max_size=2), st.lists(st.integers(0, 4), max_size=2))
def test_stage_list_union_realizes_union(u, v):
    inst = IdealInstance.build(range(6), [[0], [1, 2], [2, 3], [4], [5, 0]], 4)
    a, b = inst.sigma_set(u), inst.sigma_set(v)
    assert a.union(b, inst).realized == a.realized | b.realized


@settings(max_examples=100, deadline=None)
@given(st.frozensets(st.integers(0, 5)))
def test_cover_number_matches_brute_force(x):
    gens = [[0, 1], [1, 2], [3], [4, 5], [2, 3, 4]]
    inst = IdealInstance.build(range(6), gens, 5)
    best = None
    for w in range(len(gens) + 1):
        for combo in itertools.combinations(gens, w):
            if x <= set().union(*combo):
                best = w
                break
        if best is not None:
            break
    assert inst.cover_number(x) == best
