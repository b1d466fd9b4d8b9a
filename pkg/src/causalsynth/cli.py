"""Command-line entry point.

Exit status: 0 positive result, 1 negative result, 2 input error,
3 exploration bound exceeded.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import bounds, classify, shortcuts, synthesis
from .errors import CausalSynthError
from .game import Game, format_game, load_game, replay
from .ordering import ProcessOrdering, game_ordering
from .strategy import BOUND_EXCEEDED, LOSING, explore, format_strategy, load_strategy
from .traces import (
    CAUSAL,
    LITERAL,
    concat,
    format_trace,
    is_prime,
    is_prime_for,
    letter_count,
    linearizations,
    normalize,
    prefix_residual,
    view,
)

OK, NEGATIVE, INPUT_ERROR, BOUND = 0, 1, 2, 3

HEADER = "format 1"


class UsageError(CausalSynthError):
    pass


def _pool(g: Game, text: str) -> frozenset[str]:
    pids = [t for t in text.replace(",", " ").split() if t != "-"]
    for p in pids:
        g.alphabet.check_process(p)
    return frozenset(pids)


def _ordering(g: Game, text: str | None) -> ProcessOrdering:
    if text is None:
        return game_ordering(g)
    pairs = []
    for item in text.replace(",", " ").split():
        lo, sep, hi = item.partition("<=")
        if not sep:
            raise UsageError(f"bad ordering pair {item!r}; expected p<=q")
        pairs.append((lo, hi))
    return ProcessOrdering(g.processes, pairs)


def _emit(out, lines: Sequence[str]) -> None:
    out.write("\n".join(lines) + "\n")


def _emit_strategy(args, out, comments: list[str], text: str) -> None:
    body = "".join(f"# {c}\n" for c in comments) + text
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(body)
    out.write(body)


# ---------------------------------------------------------------- commands


def cmd_classify(args, out) -> int:
    g = load_game(args.game)
    caps = classify.BroadcastCaps.default(g)
    caps = classify.BroadcastCaps(
        args.ucap if args.ucap is not None else caps.u,
        args.vcap if args.vcap is not None else caps.v,
        args.wcap if args.wcap is not None else caps.w,
    )
    report = classify.classification_report(g, _ordering(g, args.order), caps, args.k, args.kcap)
    _emit(out, report)
    return OK


def cmd_broadcast(args, out) -> int:
    g = load_game(args.game)
    u = normalize(args.play, g.alphabet)
    if replay(g, u.word) is None:
        raise UsageError(f"{format_trace(u)} is not a play")
    pool = _pool(g, args.pool)
    w = shortcuts.broadcast_witness(g, u, pool, args.vcap, args.formulation)
    if w is None:
        _emit(out, [HEADER, "broadcast yes"])
        return OK
    _emit(out, [HEADER, f"broadcast no witness {format_trace(w)}"])
    return NEGATIVE


def cmd_check(args, out) -> int:
    g = load_game(args.game)
    s = load_strategy(args.strategy, g)
    ex = explore(s, args.cap)
    lines = [HEADER, f"verdict {ex.verdict}"]
    if ex.verdict.kind == BOUND_EXCEEDED:
        lines.append("duration unbounded")
        _emit(out, lines)
        return BOUND
    lines.append(f"duration {sum(len(u) for u in ex.maximal)}")
    lines.append(f"plays {len(ex.plays)} maximal {len(ex.maximal)}")
    _emit(out, lines)
    return NEGATIVE if ex.verdict.kind == LOSING else OK


def cmd_reduce(args, out) -> int:
    g = load_game(args.game)
    s = load_strategy(args.strategy, g)
    verdict = explore(s, args.cap).verdict
    if verdict.kind != "winning":
        _emit(out, [HEADER, f"not winning: {verdict}"])
        return BOUND if verdict.kind == BOUND_EXCEEDED else NEGATIVE
    reduced, steps = shortcuts.reduce(s, args.cap, args.vcap)
    dur = sum(len(u) for u in explore(reduced, args.cap).maximal)
    comments = [HEADER, *map(str, steps), f"steps {len(steps)} duration {dur}"]
    _emit_strategy(args, out, comments, format_strategy(reduced))
    return OK


def cmd_synthesize(args, out) -> int:
    g = load_game(args.game)
    config = synthesis.SynthesisConfig(args.cap, args.semantics, time_budget=args.time_budget)
    try:
        s = synthesis.synthesize(g, config)
    except synthesis.SearchLimit as exc:
        _emit(out, [HEADER, f"search stopped: {exc}"])
        return BOUND
    if s is None:
        _emit(out, [HEADER, f"none within bound {args.cap}"])
        return NEGATIVE
    ex = explore(s, args.cap)
    dur = sum(len(u) for u in ex.maximal)
    comments = [HEADER, f"found within bound {args.cap} duration {dur}"]
    _emit_strategy(args, out, comments, format_strategy(s))
    return OK


def cmd_bounds(args, out) -> int:
    g = load_game(args.game)
    if args.pool is not None:
        report = bounds.bound_K(g, _pool(g, args.pool), args.N)
    else:
        tree = classify.classify_series_parallel(g)
        if tree is None:
            _emit(out, [HEADER, "series-parallel no"])
            return NEGATIVE
        report = bounds.bound_series_parallel(g, tree)
    _emit(out, [HEADER, *report.lines()])
    return OK


def cmd_game(args, out) -> int:
    out.write(format_game(load_game(args.game)))
    return OK


def cmd_trace(args, out) -> int:
    g = load_game(args.game)
    a = g.alphabet
    u = normalize(args.word, a)
    op = args.op
    if op == "normalize":
        result = format_trace(u)
    elif op == "concat":
        result = format_trace(concat(u, normalize(args.other, a)))
    elif op == "residual":
        r = prefix_residual(u, normalize(args.other, a))
        if r is None:
            _emit(out, [HEADER, "residual none"])
            return NEGATIVE
        result = format_trace(r)
    elif op == "view":
        if args.process is not None:
            letters = a.process_letters(args.process)
        elif args.letters is not None:
            letters = normalize(args.letters, a).letters
        else:
            raise UsageError("view needs --process or --letters")
        result = format_trace(view(u, letters, args.semantics))
    elif op == "prime":
        yes = is_prime(u) if args.letters is None else is_prime_for(u, normalize(args.letters, a).letters)
        _emit(out, [HEADER, f"prime {'yes' if yes else 'no'}"])
        return OK if yes else NEGATIVE
    elif op == "count":
        if args.process is None:
            raise UsageError("count needs --process")
        result = str(letter_count(u, args.process))
    elif op == "linearizations":
        words = sorted(" ".join(w) or "-" for w in linearizations(u, args.lin_cap))
        _emit(out, [HEADER, *(f"linearization {w}" for w in words)])
        return OK
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(op)
    _emit(out, [HEADER, f"{op} {result}"])
    return OK


# ---------------------------------------------------------------- parser


def _nonneg(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return n


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="causalsynth", description="Distributed synthesis toolkit for Zielonka games.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="report the structural classes of a game")
    p.add_argument("game")
    p.add_argument("--order", help="process ordering override, e.g. '1<=2,3<=2'")
    p.add_argument("--ucap", type=_nonneg)
    p.add_argument("--vcap", type=_nonneg)
    p.add_argument("--wcap", type=_nonneg)
    p.add_argument("--k", type=_positive, default=1)
    p.add_argument("--kcap", type=_nonneg, default=4)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("broadcast", help="test whether a prime play is a pool broadcast")
    p.add_argument("game")
    p.add_argument("--play", required=True)
    p.add_argument("--pool", required=True, help="process ids, comma separated")
    p.add_argument("--vcap", type=_nonneg)
    p.add_argument("--formulation", choices=[shortcuts.PROP1, shortcuts.DEF3], default=shortcuts.PROP1)
    p.set_defaults(func=cmd_broadcast)

    p = sub.add_parser("check", help="explore a strategy and report its verdict")
    p.add_argument("game")
    p.add_argument("strategy")
    p.add_argument("--cap", type=_nonneg, required=True)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("reduce", help="remove useless threads from a winning strategy")
    p.add_argument("game")
    p.add_argument("strategy")
    p.add_argument("--cap", type=_nonneg, required=True)
    p.add_argument("--vcap", type=_nonneg)
    p.add_argument("--out")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("synthesize", help="search for a winning strategy within a play-length bound")
    p.add_argument("game")
    p.add_argument("--cap", type=_nonneg, required=True)
    p.add_argument("--semantics", choices=[CAUSAL, LITERAL], default=CAUSAL)
    p.add_argument("--time-budget", type=float)
    p.add_argument("--out")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("bounds", help="print duration bounds with their derivation")
    p.add_argument("game")
    p.add_argument("--pool")
    p.add_argument("--N", type=_positive, default=1)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("game", help="print a game in canonical form")
    p.add_argument("game")
    p.set_defaults(func=cmd_game)

    p = sub.add_parser("trace", help="trace operations over a game's alphabet")
    p.add_argument("game")
    p.add_argument("--op", required=True, choices=["normalize", "concat", "residual", "view", "prime", "count", "linearizations"])
    p.add_argument("--word", default="-")
    p.add_argument("--other", default="-", help="second operand of concat and residual")
    p.add_argument("--letters")
    p.add_argument("--process")
    p.add_argument("--semantics", choices=[LITERAL, CAUSAL], default=LITERAL)
    p.add_argument("--lin-cap", type=_nonneg, default=10)
    p.set_defaults(func=cmd_trace)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (CausalSynthError, OSError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
