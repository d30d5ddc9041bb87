import pytest

from idealgames.decomp import SizeLadder
from idealgames.errors import InputError, StructuralError
from idealgames.fixtures import path_free_coloring
from idealgames.game import AllWins, Game, Tactic, replay, verify_tactic
from idealgames.paths import Coloring
from idealgames.tactics.defeat import (OVERFLOW, extract_coloring, greedy_cover_tactic,
                                       random_window_tactic, targeted_defeat)
from idealgames.tactics.slight import SlightInstance, build_slight_instance

F = frozenset


@pytest.fixture(scope="module")
def slight():
    col = path_free_coloring(8, 3, 4, 6, 3)
    inst, tac = build_slight_instance(2, 4, dict(points=8, coloring=col, path_length=6))
    return inst, tac, Game("mg", inst, inst.menu)


def l_part(inst):
    ell = F(inst.l_atoms)
    return lambda w: ell & w[-1]


def test_x_alpha_definition(slight):
    inst, _, _ = slight
    for alpha in range(4):
        assert all(alpha not in z for _, z in inst.x_alpha(alpha))
        assert len(inst.x_alpha(alpha)) + sum(1 for _, z in inst.d_atoms if alpha in z) \
            == len(inst.d_atoms)


def test_cover_needs_more_than_finite_bound(slight):
    inst, _, _ = slight
    d = F(inst.d_atoms)
    assert inst.alphas_needed(d) == inst.finite_bound + 1
    assert not inst.in_J(d) and inst.in_sigma(d)
    assert inst.in_J(inst.x_alpha(0))


def test_menu_members_are_initial_segments(slight):
    inst, _, _ = slight
    assert [inst.phi(m) for m in inst.menu] == list(range(inst.points))
    assert all(inst.in_sigma(m) for m in inst.menu)
    assert not inst.in_sigma(F(inst.l_atoms))


def test_short_windows_get_nothing(slight):
    inst, tac, _ = slight
    assert tac.fn(inst.menu[:1]) == F()
    assert tac.fn(inst.menu[:2]) == F()


def test_increasing_window_uses_witness_color(slight):
    inst, tac, _ = slight
    w = (inst.menu[0], inst.menu[2], inst.menu[5])
    alpha = inst.coloring((0, 2, 5))
    assert tac.fn(w) == inst.x_alpha(alpha) | (F(inst.l_atoms) & w[-1])


def test_repeated_phi_takes_least_new_atom(slight):
    inst, tac, _ = slight
    base = inst.segment(3)
    u1 = base | {inst.t[3]}
    u2 = u1 | {inst.t[1], inst.t[2]}
    u3 = u2 | {inst.t[0]}
    # t_0 is new in the last step and is the least new index
    assert tac.fn((u1, u2, u3)) == inst.x_alpha(0) | base


def test_coloring_with_bounded_path_is_rejected():
    col = Coloring(3, lambda w: 0)
    with pytest.raises(StructuralError, match="color path"):
        build_slight_instance(2, 4, dict(points=8, coloring=col, path_length=6))


def test_no_full_color_witness_on_eight_points():
    # every 6-path showing all four colors is impossible on 8 points
    assert path_free_coloring(8, 3, 4, 6, 4) is None


def test_constructed_tactic_wins(slight):
    _, tac, game = slight
    assert isinstance(verify_tactic(game, tac, 6), AllWins)


def test_constructed_tactic_escapes_adversary(slight):
    inst, tac, game = slight
    assert targeted_defeat(game, tac, inst.menu, 6) is None


def test_empty_tactic_defeated_immediately(slight):
    inst, _, game = slight
    t = targeted_defeat(game, Tactic(2, lambda w: F()), inst.menu, 6)
    assert t is not None and t.verdict == "lose"
    assert t.witness in t.ones[0]


def test_greedy_baseline_defeated_and_replays(slight):
    inst, _, game = slight
    resp = [inst.x_alpha(a) for a in range(inst.lam)]
    g = greedy_cover_tactic(2, resp, l_part(inst))
    t = targeted_defeat(game, g, inst.menu, 6)
    assert t is not None
    again = replay(game, t, g)
    assert again.verdict == "lose" and again.ones == t.ones and again.twos == t.twos
    cover = F().union(*t.twos)
    assert t.witness not in cover


def test_random_candidates_are_deterministic(slight):
    inst, _, _ = slight
    resp = [inst.x_alpha(a) for a in range(inst.lam)]
    a = random_window_tactic(7, 2, resp, l_part(inst))
    b = random_window_tactic(7, 2, resp, l_part(inst))
    w = inst.menu[1:3]
    assert a.fn(w) == b.fn(w)


def test_defeat_none_means_the_candidate_really_wins(slight):
    inst, _, game = slight
    resp = [inst.x_alpha(a) for a in range(inst.lam)]
    for seed in range(20):
        tac = random_window_tactic(seed, 2, resp, l_part(inst))
        if targeted_defeat(game, tac, inst.menu, 6) is None:
            assert isinstance(verify_tactic(game, tac, 6), AllWins)


def test_extract_coloring_constant_response():
    chain = [F({0}), F({0, 1}), F({0, 1, 2})]
    tac = Tactic(2, lambda w: F({9}))
    col = extract_coloring(tac, chain, SizeLadder((1, 2, 4)))
    assert {col(w) for w in [(0, 1), (0, 2), (1, 2)]} == {0}


def test_extract_coloring_ladder_indices():
    chain = [F({0}), F({0, 1}), F({0, 1, 2}), F(range(8))]
    sizes = {1: 1, 2: 2, 3: 4, 8: 8}
    tac = Tactic(1, lambda w: F(range(sizes[len(w[-1])])))
    col = extract_coloring(tac, chain, SizeLadder((1, 2, 4)))
    assert [col((i,)) for i in range(4)] == [0, 1, 2, OVERFLOW]


def test_extract_coloring_invariant_under_relabeling_wrapper():
    chain = [F({0}), F({0, 1}), F({0, 1, 2})]
    base = Tactic(1, lambda w: F(w[-1]))
    shifted = Tactic(1, lambda w: F(x + 100 for x in w[-1]))
    ladder = SizeLadder((1, 2, 3))
    a, b = extract_coloring(base, chain, ladder), extract_coloring(shifted, chain, ladder)
    assert all(a((i,)) == b((i,)) for i in range(3))


def test_instance_rejects_bad_bounds():
    col = Coloring(3, lambda w: 0)
    with pytest.raises(InputError):
        SlightInstance(2, 4, 8, col, finite_bound=4)
