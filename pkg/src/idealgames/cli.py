"""Command-line front end.

Exit codes: 0 on success, 2 on invalid input or a failed validation (a JSON
error object goes to stderr), 3 when a search exceeds its node budget.
Results go to stdout as canonical JSON, or to ``--out``.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import random
import sys

from . import io
from .bm import (ConeScheme, ConeSpace, bm_play, bm_verify, child_by_inning,
                 embedding_problems, fip_decompose, fip_one_tactic, fip_problems,
                 markov_to_plain, random_cone_strategy)
from .cantor import (brute_inclusion, cover_build, coverage_violations, separating_witness,
                     subset_decide)
from .decomp import Decomposition, decompose_locally_small, structure_problems, verify_coherence
from .errors import IdealGamesError, InputError
from .game import AllWins, Game, run_play, verify_tactic
from .ideal import rank_family, thaw_atom, validate_instance
from .paths import find_bounded_path
from .scenarios import KINDS, build, slight_candidate, slight_setup, stock_tactic
from .tactics.defeat import extract_coloring, targeted_defeat


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(f"{self.prog}: {message}")


def _sorted(s):
    return sorted((thaw_atom(a) for a in s), key=repr)


def _plain(x):
    """JSON-ready form of results built from dataclasses, sets and tuples."""
    if dataclasses.is_dataclass(x) and not isinstance(x, type):
        return {"type": type(x).__name__,
                **{f.name: _plain(getattr(x, f.name)) for f in dataclasses.fields(x)}}
    if isinstance(x, (set, frozenset)):
        return sorted((_plain(v) for v in x), key=repr)
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in sorted(x.items(), key=lambda kv: repr(kv[0]))}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


def _emit(args, doc) -> None:
    text = io.dumps(doc)
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_lines(args, lines) -> None:
    text = "".join(line + "\n" for line in lines)
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ideal ------------------------------------------------------------------------------

def _instance(path):
    return io.instance_from_doc(io.read(path))


def cmd_ideal_validate(args):
    inst, _ = _instance(args.file)
    problems = validate_instance(inst)
    _emit(args, {"problems": problems})
    return 2 if problems else 0


def cmd_ideal_rank(args):
    _, fam = _instance(args.file)
    if fam is None:
        raise InputError("instance has no family to rank")
    _emit(args, {"ranks": rank_family(fam)})
    return 0


def cmd_ideal_canon(args):
    text = io.canonical_instance(args.file)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


# decompose -----------------------------------------------------------------------

def cmd_decompose_build(args):
    inst, fam = _instance(args.file)
    if fam is None:
        raise InputError("instance has no family to decompose")
    dec = decompose_locally_small(fam, args.stages, inst)
    _emit(args, dec.to_json(fam))
    return 0


def cmd_decompose_verify(args):
    inst, fam = _instance(args.file)
    if fam is None:
        raise InputError("instance has no family")
    dec = Decomposition.from_json(io.load(args.decomposition, "decomposition"))
    problems = structure_problems(fam, dec, inst)
    coh = verify_coherence(fam, dec)
    failures = {f"{i},{j}": _plain(v) for (i, j), v in coh.items() if not isinstance(v, int)}
    thresholds = {f"{i},{j}": v for (i, j), v in coh.items() if isinstance(v, int)}
    _emit(args, {"problems": problems, "coherence_failures": failures,
                 "thresholds": thresholds})
    return 2 if problems or failures else 0


# cantor ----------------------------------------------------------------------------

def cmd_cantor_subset(args):
    a, b = io.block_system(args.a), io.block_system(args.b)
    _emit(args, _plain(subset_decide(a, b, args.slack)))
    return 0


def cmd_cantor_witness(args):
    a, b = io.block_system(args.a), io.block_system(args.b)
    _emit(args, _plain(separating_witness(a, b, args.slack)))
    return 0


def cmd_cantor_cover(args):
    chain = io.trie_chain(args.chain)
    cover = cover_build(chain, args.budget)
    _emit(args, {"system": cover.system.to_json(), "words": list(cover.words),
                 "violations": [list(v) for v in coverage_violations(chain, cover)]})
    return 0


def cmd_cantor_oracle(args):
    a, b = io.block_system(args.a), io.block_system(args.b)
    _emit(args, {"included": brute_inclusion(a, b, args.n, args.m)})
    return 0


# games ------------------------------------------------------------------------------

def _game_setup(args):
    """(game, tactic, depth, lag) from a named fixture or an instance file."""
    if args.fixture:
        sc = build(args.fixture, args.seed)
        game, tactic = sc.game, sc.tactic
        if args.tactic != "built":
            tactic = stock_tactic(args.tactic, game.kind, tactic.k)
        depth = sc.depth if args.depth is None else args.depth
        lag = sc.lag if args.lag is None else args.lag
        return game, tactic, depth, lag
    if not args.instance:
        raise InputError("give --fixture or --instance")
    inst, fam = _instance(args.instance)
    if fam is None:
        raise InputError("instance has no family to serve as ONE's menu")
    if args.tactic == "built":
        raise InputError("instance files take a stock tactic: empty or copy")
    game = Game(args.kind, inst, fam.members)
    tactic = stock_tactic(args.tactic, args.kind, args.k)
    return game, tactic, 6 if args.depth is None else args.depth, args.lag


def cmd_game_play(args):
    game, tactic, depth, lag = _game_setup(args)
    rng = random.Random(args.seed)

    def one(ones, twos):
        opts = game.one_options(ones[-1] if ones else None, twos[-1] if twos else None)
        return rng.choice(opts) if opts else None

    t = run_play(game, one, tactic, depth, lag)
    _emit_lines(args, t.lines(getattr(game.inst, "ground", None)))
    return 0


def cmd_game_verify(args):
    game, tactic, depth, lag = _game_setup(args)
    res = verify_tactic(game, tactic, depth, lag)
    if isinstance(res, AllWins):
        _emit(args, {"result": "AllWins", "plays": res.plays, "stuck": res.stuck,
                     "nodes": res.nodes})
    else:
        _emit_lines(args, res.transcript.lines(getattr(game.inst, "ground", None)))
    return 0


# tactics ----------------------------------------------------------------------------

def cmd_tactic_build(args):
    sc = build(args.kind, args.seed)
    game, tac = sc.game, sc.tactic
    rows = []
    for i, a in enumerate(game.menu):
        for w in ([(a,)] + [(b, a) for b in game.menu[:i] if b < a]):
            if len(rows) >= args.limit:
                break
            try:
                reply = tac.fn(w[-tac.k:])
            except IdealGamesError as exc:
                reply = {"error": type(exc).__name__}
            if isinstance(reply, tuple):
                reply = {"t": _sorted(reply[0]), "s": _sorted(reply[1])}
            elif isinstance(reply, frozenset):
                reply = _sorted(reply)
            rows.append({"window": [_sorted(x) for x in w], "reply": reply})
    _emit(args, {"kind": args.kind, "seed": args.seed, "k": tac.k, "game": game.kind,
                 "menu_size": len(game.menu), "depth": sc.depth, "lag": sc.lag,
                 "responses": rows})
    return 0


def cmd_tactic_defeat(args):
    inst, built = slight_setup()
    game = Game("mg", inst, inst.menu)
    tac = built if args.candidate == "built" else slight_candidate(inst, args.candidate,
                                                                    args.seed)
    t = targeted_defeat(game, tac, inst.menu, args.depth)
    if t is None:
        _emit(args, {"defeated": False, "candidate": args.candidate, "seed": args.seed})
    else:
        _emit_lines(args, t.lines(inst.ground))
    return 0


def cmd_tactic_extract(args):
    sc = build(args.kind, args.seed)
    chain = [m for m in sc.game.menu]
    chain = [m for i, m in enumerate(chain) if all(c < m for c in chain[:i])] \
        if args.kind != "slight" else chain
    col = extract_coloring(sc.tactic, chain)
    from .fixtures import _chains  # increasing index windows
    from .ideal import FamilySpec
    fam = FamilySpec.of(chain)
    table = [{"window": list(w), "color": _sorted(col(w))} for w in _chains(fam, sc.tactic.k)]
    _emit(args, {"k": sc.tactic.k, "table": table})
    return 0


# paths ------------------------------------------------------------------------------

def cmd_path_find(args):
    p = io.poset(args.poset)
    col = io.coloring_from_doc(io.read(args.coloring))
    if col.k != args.k:
        raise InputError(f"coloring arity {col.k} differs from -k {args.k}")
    res = find_bounded_path(p, col, args.L, args.c, args.budget)
    _emit(args, {"path": None if res.path is None else list(res.path),
                 "palette": _plain(res.palette), "nodes_visited": res.nodes_visited})
    return 0


# Banach-Mazur -----------------------------------------------------------------------

def cmd_bm_decompose(args):
    space = io.space(args.space)
    dec = fip_decompose(space)
    _emit(args, {"n": dec.n, "seeds": [_sorted(s) for s in dec.seeds],
                 "families": [[_sorted(o) for o in f] for f in dec.families],
                 "problems": fip_problems(space, dec)})
    return 0


def cmd_bm_reduce(args):
    if args.markov != "child" or args.scheme != "cones":
        raise InputError("available: --markov child --scheme cones")
    cones = ConeSpace(args.tree_depth)
    scheme = ConeScheme(cones)
    markov = child_by_inning(args.k)
    plain = markov_to_plain(markov, scheme)
    bad = []
    for seed in range(args.seed, args.seed + args.strategies):
        t = bm_play(cones, random_cone_strategy(seed, cones, args.max_len), plain, args.innings)
        probs = embedding_problems(t.ones, t.twos, markov, scheme)
        if t.fault or probs:
            bad.append({"seed": seed, "fault": t.fault, "reason": t.reason, "problems": probs})
    res = bm_verify(cones, plain, args.innings, cones.cones_up_to(args.max_len))
    _emit(args, {"strategies": args.strategies, "violations": bad,
                 "verify": _plain(res) if isinstance(res, AllWins)
                 else {"type": "Defeat", "reason": res.transcript.reason}})
    return 2 if bad or not isinstance(res, AllWins) else 0


def cmd_bm_verify(args):
    space = io.space(args.space)
    res = bm_verify(space, fip_one_tactic(space, fip_decompose(space)), args.depth)
    if isinstance(res, AllWins):
        _emit(args, _plain(res))
    else:
        t = res.transcript
        _emit(args, {"type": "Defeat", "reason": t.reason,
                     "ones": [_sorted(o) for o in t.ones], "twos": [_sorted(o) for o in t.twos]})
    return 0


# parser -----------------------------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="idealgames", description="Covering games on finite ideals.")
    verbs = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def leaf(group, name, fn, help_):
        q = group.add_parser(name, help=help_)
        q.set_defaults(fn=fn)
        q.add_argument("--out", help="write the result here instead of stdout")
        return q

    ideal = verbs.add_parser("ideal", help="instance files").add_subparsers(
        dest="op", required=True, parser_class=_Parser)
    leaf(ideal, "validate", cmd_ideal_validate, "list invariant violations").add_argument("file")
    leaf(ideal, "rank", cmd_ideal_rank, "ranks of family members").add_argument("file")
    leaf(ideal, "canon", cmd_ideal_canon, "canonical form of an instance").add_argument("file")

    dec = verbs.add_parser("decompose", help="coherent decompositions").add_subparsers(
        dest="op", required=True, parser_class=_Parser)
    q = leaf(dec, "build", cmd_decompose_build, "decompose an instance's family")
    q.add_argument("file")
    q.add_argument("--stages", type=int, default=8)
    q = leaf(dec, "verify", cmd_decompose_verify, "check a decomposition")
    q.add_argument("file")
    q.add_argument("decomposition")

    cantor = verbs.add_parser("cantor", help="block systems on Cantor space").add_subparsers(
        dest="op", required=True, parser_class=_Parser)
    for name, fn in (("subset", cmd_cantor_subset), ("witness", cmd_cantor_witness)):
        q = leaf(cantor, name, fn, f"{name} of two block systems")
        q.add_argument("a")
        q.add_argument("b")
        q.add_argument("--slack", type=int, default=3)
    q = leaf(cantor, "cover", cmd_cantor_cover, "nowhere dense cover of a trie chain")
    q.add_argument("chain")
    q.add_argument("--budget", type=int, default=24)
    q = leaf(cantor, "oracle", cmd_cantor_oracle, "brute-force stage inclusion")
    q.add_argument("a")
    q.add_argument("b")
    q.add_argument("--n", type=int, required=True, help="stage of the first system")
    q.add_argument("--m", type=int, required=True, help="stage of the second system")

    game = verbs.add_parser("game", help="play or verify a game").add_subparsers(
        dest="op", required=True, parser_class=_Parser)
    for name, fn in (("play", cmd_game_play), ("verify", cmd_game_verify)):
        q = leaf(game, name, fn, f"{name} a game")
        q.add_argument("--fixture", choices=KINDS)
        q.add_argument("--instance")
        q.add_argument("--kind", choices=("mg", "mg_full", "smg", "vsg"), default="mg")
        q.add_argument("--tactic", choices=("built", "empty", "copy"), default="built")
        q.add_argument("-k", type=int, default=1, help="window size of a stock tactic")
        q.add_argument("--depth", type=int)
        q.add_argument("--lag", type=int)
        q.add_argument("--seed", type=int, default=0)

    tactic = verbs.add_parser("tactic", help="constructed tactics").add_subparsers(
        dest="op", required=True, parser_class=_Parser)
    q = leaf(tactic, "build", cmd_tactic_build, "response table of a constructed tactic")
    q.add_argument("--kind", choices=KINDS, required=True)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--limit", type=int, default=200)
    q = leaf(tactic, "defeat", cmd_tactic_defeat, "attack a 2-tactic on the slight instance")
    q.add_argument("--candidate", choices=("random", "greedy", "built"), default="greedy")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--depth", type=int, default=6)
    q = leaf(tactic, "extract", cmd_tactic_extract, "trace coloring of a tactic along a chain")
    q.add_argument("--kind", choices=KINDS, required=True)
    q.add_argument("--seed", type=int, default=0)

    path = verbs.add_parser("path", help="bounded-color paths").add_subparsers(
        dest="op", required=True, parser_class=_Parser)
    q = leaf(path, "find", cmd_path_find, "search for a path with few window colors")
    q.add_argument("--poset", required=True)
    q.add_argument("--coloring", required=True)
    q.add_argument("-k", type=int, required=True)
    q.add_argument("-L", type=int, required=True)
    q.add_argument("-c", type=int, required=True)
    q.add_argument("--budget", type=int)

    bm = verbs.add_parser("bm", help="Banach-Mazur games").add_subparsers(
        dest="op", required=True, parser_class=_Parser)
    leaf(bm, "decompose", cmd_bm_decompose, "split a finite space's opens").add_argument("space")
    q = leaf(bm, "reduce", cmd_bm_reduce, "plain tactic from a Markov one on cone space")
    q.add_argument("--markov", default="child")
    q.add_argument("--scheme", default="cones")
    q.add_argument("--tree-depth", type=int, default=10)
    q.add_argument("--max-len", type=int, default=6, help="longest root ONE may play")
    q.add_argument("--innings", type=int, default=2)
    q.add_argument("-k", type=int, default=2)
    q.add_argument("--strategies", type=int, default=200)
    q.add_argument("--seed", type=int, default=0)
    q = leaf(bm, "verify", cmd_bm_verify, "check the 1-tactic of a finite space")
    q.add_argument("space")
    q.add_argument("--depth", type=int, default=5)
    return p


def parse_and_dispatch(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
        return args.fn(args)
    except IdealGamesError as exc:
        sys.stderr.write(json.dumps(exc.to_json(), sort_keys=True, default=repr) + "\n")
        return exc.exit_code


def main() -> None:
    sys.exit(parse_and_dispatch())


if __name__ == "__main__":
    main()
