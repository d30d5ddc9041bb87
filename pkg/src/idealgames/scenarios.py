"""Named, seeded game setups shared by the command line and the acceptance suite.

Each setup is a game (instance plus ONE's menu), the constructed tactic, and
the depth and lag it is checked at. Everything is a pure function of the
kind and the seed.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError
from .fixtures import layered_fixture, path_free_coloring, three_fixture
from .game import Game, Tactic, copy_tactic, empty_tactic
from .tactics.mg import build_mg_tactic
from .tactics.reductions import (answerable_members, build_cofinal_chain, build_phi_maps,
                                 build_smg_two_tactic, build_vsg_two_tactic,
                                 translate_smg_vsg)
from .tactics.defeat import greedy_cover_tactic, random_window_tactic
from .tactics.slight import build_slight_instance
from .tactics.vsg3 import build_vsg_three_tactic

KINDS = ("mg", "smg2", "vsg2", "vsg3", "slight", "roundtrip")

# fixture shapes: the strong games climb several members per inning, so they
# run on taller twins of the monotone-game fixtures (same seeds)
TALL = dict(height=30, width=2, padding=10, headroom=8)
ROUND = dict(height=72, width=1, padding=10, headroom=8)
THREE = dict(height=14, padding=6, headroom=6)
SLIGHT = dict(points=8, k=3, colors=4, length=6, min_colors=3)


@dataclass
class Scenario:
    kind: str
    game: Game
    tactic: Tactic
    depth: int
    lag: int
    fixture: object = None
    forward: "Scenario | None" = None  # the VSG leg of a round trip


def slight_setup():
    s = SLIGHT
    col = path_free_coloring(s["points"], s["k"], s["colors"], s["length"], s["min_colors"])
    inst, tac = build_slight_instance(2, 4, dict(points=s["points"], coloring=col,
                                                 path_length=s["length"]))
    return inst, tac


def _l_part(inst):
    ell = frozenset(inst.l_atoms)
    return lambda w: ell & w[-1]


def slight_candidate(inst, name: str, seed: int = 0) -> Tactic:
    """2-tactics to pit against the slight instance: ``random`` picks a seeded
    ``X_alpha`` per window, ``greedy`` the one covering most of ONE's move;
    both copy the order part of ONE's move."""
    pieces = [inst.x_alpha(a) for a in range(inst.lam)]
    if name == "random":
        return random_window_tactic(seed, 2, pieces, _l_part(inst))
    if name == "greedy":
        return greedy_cover_tactic(2, pieces, _l_part(inst))
    raise InputError(f"unknown candidate {name!r}; expected random or greedy")


def build(kind: str, seed: int = 0) -> Scenario:
    if kind == "mg":
        fx = layered_fixture(seed)
        tac = build_mg_tactic(fx.fam, fx.dec, fx.col, fx.k)
        return Scenario(kind, Game("mg", fx.inst, fx.fam.members), tac, 6, 3, fx)
    if kind in ("smg2", "vsg2"):
        fx = layered_fixture(seed, **TALL)
        base = build_mg_tactic(fx.fam, fx.dec, fx.col, fx.k)
        if kind == "smg2":
            tac, game_kind = build_smg_two_tactic(base, build_phi_maps(fx.fam)), "smg"
        else:
            tac, game_kind = build_vsg_two_tactic(base, fx.fam), "vsg"
        menu = answerable_members(tac, fx.fam.members)
        return Scenario(kind, Game(game_kind, fx.inst, menu), tac, 6, 3, fx)
    if kind == "roundtrip":
        fx = layered_fixture(seed, **ROUND)
        base = build_mg_tactic(fx.fam, fx.dec, fx.col, fx.k)
        smg = build_smg_two_tactic(base, build_phi_maps(fx.fam))
        menu = answerable_members(smg, fx.fam.members)[::3]
        vsg = translate_smg_vsg(smg, "smg->vsg")
        chain = build_cofinal_chain(vsg, fx.fam, 100, menu=menu)
        back = translate_smg_vsg(vsg, "vsg->smg", chain)
        menu2 = answerable_members(back, menu)
        forward = Scenario("vsg", Game("vsg", fx.inst, menu), vsg, 6, 3, fx)
        return Scenario(kind, Game("smg", fx.inst, menu2), back, 6, 3, fx, forward)
    if kind == "vsg3":
        fx, inputs = three_fixture(seed, **THREE)
        tac = build_vsg_three_tactic(inputs)
        menu = answerable_members(tac, fx.fam.members)
        return Scenario(kind, Game("vsg", fx.inst, menu), tac, 6, 4, (fx, inputs))
    if kind == "slight":
        inst, tac = slight_setup()
        return Scenario(kind, Game("mg", inst, inst.menu), tac, 6, tac.k + 1, inst)
    raise InputError(f"unknown tactic kind {kind!r}; expected one of {', '.join(KINDS)}")


def stock_tactic(name: str, game_kind: str, k: int = 1) -> Tactic:
    if name == "empty":
        return empty_tactic(k, game_kind)
    if name == "copy":
        if game_kind == "vsg":
            return Tactic(k, lambda w: (w[-1], w[-1]), name="copy")
        return copy_tactic(k)
    raise InputError(f"unknown stock tactic {name!r}; expected empty or copy")
