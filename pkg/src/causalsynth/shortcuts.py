"""Broadcasts, useless threads and the shortcut rewrite of strategies."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Callable, Iterable

from .errors import CausalSynthError, InvalidCertificate, NotPrime, NotWinning
from .game import Game, Play, enumerate_plays, initial_play, play_of, process_view
from .ordering import game_ordering
from .strategy import BOUND_EXCEEDED, WINNING, Strategy, explore, is_sigma_play
from .traces import (
    LITERAL,
    Trace,
    concat,
    format_trace,
    is_prefix,
    is_prime,
    maximal_letters,
    prefix_residual,
    prefixes,
    view,
)

log = logging.getLogger(__name__)

DEF3 = "def3"
PROP1 = "prop1"


def default_vcap(g: Game) -> int:
    return 3 * g.global_state_count


def _as_play(g: Game, u: Play | Trace) -> Play:
    return u if isinstance(u, Play) else play_of(g, u)


def broadcast_witness(
    g: Game,
    u: Play | Trace,
    pool: Iterable[str],
    v_cap: int | None = None,
    formulation: str = PROP1,
) -> Trace | None:
    """Least extension ``v`` refuting that ``u`` is a ``pool``-broadcast, if any.

    ``prop1`` looks for a prime ``v`` with ``u v`` a non-prime play whose
    domain meets both ``pool`` and its complement.  ``def3`` looks for a play
    ``u v`` with a maximal action crossing the pool boundary whose view does
    not contain ``u``.
    """
    u = _as_play(g, u)
    if not is_prime(u.trace):
        raise NotPrime(f"{u.trace} is not prime")
    if formulation not in (DEF3, PROP1):
        raise ValueError(f"unknown formulation {formulation!r}")
    cap = default_vcap(g) if v_cap is None else v_cap
    return _witness(g, u.trace, frozenset(pool), cap, formulation)


@lru_cache(maxsize=1 << 16)
def _witness(g: Game, u: Trace, pool: frozenset[str], cap: int, formulation: str) -> Trace | None:
    dom_of = g.alphabet.domain_of
    start = play_of(g, u)
    for w in enumerate_plays(g, cap, start=start):
        if len(w) == len(u):
            continue
        if formulation == PROP1:
            v = prefix_residual(u, w.trace)
            if not is_prime(v) or is_prime(w.trace):
                continue
            dv = v.domain
            if dv & pool and not dv <= pool:
                return v
        else:
            for a in maximal_letters(w.trace):
                da = dom_of[a]
                if da & pool and da - pool and not is_prefix(u, view(w.trace, {a}, LITERAL)):
                    return prefix_residual(u, w.trace)
    return None


def is_broadcast(
    g: Game,
    u: Play | Trace,
    pool: Iterable[str],
    v_cap: int | None = None,
    formulation: str = PROP1,
) -> bool:
    """Whether the prime play ``u`` is a ``pool``-broadcast, checked on
    extensions of length at most ``v_cap`` (default ``3 * M``)."""
    return broadcast_witness(g, u, pool, v_cap, formulation) is None


# ---------------------------------------------------------------- threads


@dataclass(frozen=True)
class ThreadCertificate:
    x: Trace
    y: Trace
    pool: frozenset[str]
    anchor: str
    v_cap: int
    cap: int

    def describe(self, processes: Iterable[str]) -> str:
        pool = ",".join(p for p in processes if p in self.pool)
        return f"x={format_trace(self.x)} y={format_trace(self.y)} Q={{{pool}}} b={self.anchor}"


def candidate_pools(g: Game, dom_y: frozenset[str], exhaustive: bool = False) -> list[frozenset[str]]:
    """Pools tried for a thread whose second component has domain ``dom_y``."""
    procs = g.processes
    if exhaustive:
        rest = [p for p in procs if p not in dom_y]
        pools = {dom_y | frozenset(extra) for k in range(len(rest) + 1) for extra in combinations(rest, k)}
    else:
        pools = {dom_y, frozenset(procs)}
        try:
            pools.add(game_ordering(g).closure(dom_y))
        except CausalSynthError:
            pass
    pos = {p: i for i, p in enumerate(procs)}
    return sorted(pools, key=lambda q: (len(q), sorted(pos[p] for p in q)))


def _decisions(s: Strategy, u: Trace) -> tuple[frozenset[str], ...]:
    return tuple(s.decide(p, u) for p in s.game.processes)


def decisions_coincide(s: Strategy, x: Trace, y: Trace, pool: frozenset[str], anchor: str, cap: int) -> Trace | None:
    """First ``v`` (``dom(v)`` within ``pool``, ``v`` independent of ``anchor``,
    ``|x v| <= cap``) where the decisions after ``x v`` and ``x y v`` differ."""
    g = s.game
    dom_of = g.alphabet.domain_of
    db = dom_of[anchor]
    allowed = [a for a in g.actions if dom_of[a] <= pool and not dom_of[a] & db]
    xy = concat(x, y)
    root = play_of(g, x)
    seen = {root.trace}
    layer = [root]
    while layer:
        nxt = []
        for u in sorted(layer, key=lambda w: w.trace.sort_key()):
            v = prefix_residual(x, u.trace)
            if _decisions(s, u.trace) != _decisions(s, concat(xy, v)):
                return v
            if len(u) >= cap:
                continue
            for a in allowed:
                st = g.step(u.state, a)
                if st is not None:
                    w = Play(g, Trace(g.alphabet, u.trace.word + (a,)), st)
                    if w.trace not in seen:
                        seen.add(w.trace)
                        nxt.append(w)
        layer = nxt
    return None


def check_certificate(s: Strategy, c: ThreadCertificate) -> str | None:
    """Re-check conditions (primality, broadcast, states, decisions); return
    the name of the first failing one, or None."""
    g = s.game
    xy = concat(c.x, c.y)
    if not c.y.word:
        return "empty thread"
    if not c.y.domain <= c.pool:
        return "thread leaves pool"
    if not is_sigma_play(s, xy):
        return "not a sigma-play"
    if c.x.last() != c.anchor or xy.last() != c.anchor:
        return "primality"
    if not (is_broadcast(g, c.x, c.pool, c.v_cap) and is_broadcast(g, xy, c.pool, c.v_cap)):
        return "broadcast"
    if play_of(g, c.x).state != play_of(g, xy).state:
        return "states"
    if decisions_coincide(s, c.x, c.y, c.pool, c.anchor, c.cap) is not None:
        return "decisions"
    return None


def find_useless_threads(
    s: Strategy,
    cap: int,
    v_cap: int | None = None,
    exhaustive_pools: bool = False,
) -> list[ThreadCertificate]:
    """Every pair ``(x, y)`` inside the sigma-plays that forms a useless thread,
    one certificate per pair (smallest admissible pool), longest ``y`` first."""
    ex = explore(s, cap)
    if ex.verdict.kind == BOUND_EXCEEDED:
        raise ValueError("strategy exceeds the exploration cap")
    g = s.game
    vc = default_vcap(g) if v_cap is None else v_cap
    states = {u.trace: u.state for u in ex.plays}
    found: list[ThreadCertificate] = []
    for w in ex.plays:
        b = w.trace.last()
        if b is None:
            continue
        for x in prefixes(w.trace):
            if x == w.trace or x.last() != b:
                continue
            sx = states[x] if x in states else play_of(g, x).state
            if sx != states[w.trace]:
                continue
            y = prefix_residual(x, w.trace)
            dom_y = y.domain
            for pool in candidate_pools(g, dom_y, exhaustive_pools):
                if not is_broadcast(g, x, pool, vc) or not is_broadcast(g, w.trace, pool, vc):
                    continue
                if decisions_coincide(s, x, y, pool, b, cap) is not None:
                    continue
                found.append(ThreadCertificate(x, y, pool, b, vc, cap))
                break
    found.sort(key=lambda c: (-len(c.y), c.x.sort_key(), c.y.sort_key()))
    return found


# ---------------------------------------------------------------- shortcuts


def phi(x: Trace, y: Trace, u: Trace) -> Trace:
    """``x y v`` when ``u = x v``, otherwise ``u``."""
    v = prefix_residual(x, u)
    return u if v is None else concat(concat(x, y), v)


def shortcut_decider(s: Strategy, c: ThreadCertificate) -> Callable[[str, Trace], frozenset[str]]:
    """``tau_p(u) = sigma_p(phi(u))`` as a function on traces."""
    return lambda p, u: s.decide(p, phi(c.x, c.y, u))


def measurability_violation(
    decide: Callable[[str, Trace], frozenset[str]],
    g: Game,
    semantics: str,
    bound: int,
) -> tuple[str, Trace, Trace] | None:
    """A process and two plays of length <= ``bound`` with equal views but
    different decisions, or None when ``decide`` depends on views only."""
    seen: dict[tuple[str, Trace], tuple[Trace, frozenset[str]]] = {}
    for u in enumerate_plays(g, bound):
        for p in g.processes:
            k = process_view(u.trace, p, semantics)
            d = decide(p, u.trace)
            prev = seen.setdefault((p, k), (u.trace, d))
            if prev[1] != d:
                return p, prev[0], u.trace
    return None


def take_shortcut(s: Strategy, c: ThreadCertificate) -> Strategy:
    """Finite table for ``sigma o phi_{x,y}``, recorded on every shortcut play."""
    why = check_certificate(s, c)
    if why is not None:
        raise InvalidCertificate(f"certificate fails re-validation: {why}")
    g = s.game
    decide = shortcut_decider(s, c)
    env = g.environment
    table: dict[tuple[str, Trace], frozenset[str]] = {}
    root = initial_play(g)
    seen = {root.trace}
    layer = [root]
    while layer:
        nxt = []
        for u in layer:
            for p in g.processes:
                k = process_view(u.trace, p, s.semantics)
                d = decide(p, u.trace) - env
                if table.setdefault((p, k), d) != d:
                    raise InvalidCertificate(
                        f"shortcut is not a distributed strategy: process {p} at view {k}"
                    )
            if len(u) > c.cap:
                raise InvalidCertificate("shortcut plays exceed the certificate cap")
            for a in g.actions:
                st = g.step(u.state, a)
                if st is None or not all(a in decide(p, u.trace) for p in g.domain(a)):
                    continue
                w = Play(g, Trace(g.alphabet, u.trace.word + (a,)), st)
                if w.trace not in seen:
                    seen.add(w.trace)
                    nxt.append(w)
        layer = nxt
    # drop entries equal to the fallback so the table stays canonical
    table = {k: d for k, d in table.items() if d != s.defaults[k[0]]}
    return Strategy(g, table, s.defaults, s.semantics)


def correspondence_failures(s: Strategy, tau: Strategy, c: ThreadCertificate, cap: int) -> list[Trace]:
    """Residuals ``v`` violating: ``x v`` is a tau-play iff ``x y v`` is a sigma-play."""
    xy = concat(c.x, c.y)
    bad = set()
    for w in explore(s, cap).plays:
        v = prefix_residual(xy, w.trace)
        if v is not None and not is_sigma_play(tau, concat(c.x, v)):
            bad.add(v)
    for w in explore(tau, cap).plays:
        v = prefix_residual(c.x, w.trace)
        if v is not None and not is_sigma_play(s, concat(xy, v)):
            bad.add(v)
    return sorted(bad, key=Trace.sort_key)


# ---------------------------------------------------------------- reduction


@dataclass(frozen=True)
class ReductionStep:
    index: int
    certificate: ThreadCertificate
    before: int
    after: int
    processes: tuple[str, ...]

    def __str__(self) -> str:
        return f"step {self.index} {self.certificate.describe(self.processes)} dur {self.before}->{self.after}"


def _winning_duration(s: Strategy, cap: int) -> int | None:
    ex = explore(s, cap)
    if ex.verdict.kind != WINNING:
        return None
    return sum(len(u) for u in ex.maximal)


def reduce(
    s: Strategy,
    cap: int,
    v_cap: int | None = None,
    exhaustive_pools: bool = False,
) -> tuple[Strategy, list[ReductionStep]]:
    """Take shortcuts until no useless thread is left.

    Each step uses the first certificate whose shortcut re-verifies as a
    winning strategy of strictly smaller duration.
    """
    dur = _winning_duration(s, cap)
    if dur is None:
        raise NotWinning(f"strategy is not winning within cap {cap}")
    steps: list[ReductionStep] = []
    while True:
        for c in find_useless_threads(s, cap, v_cap, exhaustive_pools):
            try:
                tau = take_shortcut(s, c)
            except InvalidCertificate as exc:
                log.warning("skipping certificate %s: %s", c.describe(s.game.processes), exc)
                continue
            new = _winning_duration(tau, cap)
            if new is None or new >= dur:
                log.warning("skipping certificate %s: no winning shorter shortcut", c.describe(s.game.processes))
                continue
            steps.append(ReductionStep(len(steps) + 1, c, dur, new, s.game.processes))
            s, dur = tau, new
            break
        else:
            return s, steps
