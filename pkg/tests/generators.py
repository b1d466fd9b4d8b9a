"""Seeded generators for games and strategies used by the larger suites,
plus a brute-force synthesis oracle."""

from __future__ import annotations

import random
from itertools import chain, combinations, product

from causalsynth.game import Game, enumerate_plays, process_view
from causalsynth.strategy import WINNING, Strategy, explore
from causalsynth.traces import CAUSAL, Trace

# ---------------------------------------------------------------- loop games


def loop_game(loops: dict[str, list[str]], shared_finish: bool) -> Game:
    """Every process idles in ``s`` on its loop letters and finishes in ``f``,
    either alone (``t<p>``) or jointly with everyone (``c``)."""
    procs = sorted(loops)
    states = {p: ["s", "f"] for p in procs}
    initial = {p: "s" for p in procs}
    final = {p: ["f"] for p in procs}
    domains: dict[str, list[str]] = {}
    trans: dict[str, dict] = {}
    for p in procs:
        for a in loops[p]:
            domains[a] = [p]
            trans[a] = {("s",): ("s",)}
    if shared_finish:
        domains["c"] = procs
        trans["c"] = {tuple("s" for _ in procs): tuple("f" for _ in procs)}
    else:
        for p in procs:
            domains[f"t{p}"] = [p]
            trans[f"t{p}"] = {("s",): ("f",)}
    return Game(procs, states, initial, final, domains, list(domains), trans)


def loop_strategy(g: Game, runs: dict[str, tuple[str, ...]], shared_finish: bool) -> Strategy:
    """Each process plays its run of loop letters, then finishes."""
    decisions = {}
    for p, run in runs.items():
        for i, a in enumerate(run):
            decisions[(p, Trace(g.alphabet, run[:i]))] = {a}
        decisions[(p, Trace(g.alphabet, run))] = {"c" if shared_finish else f"t{p}"}
    return Strategy(g, decisions, semantics=CAUSAL)


def random_loop_case(rng: random.Random) -> tuple[Game, Strategy]:
    """A winning loop strategy where one process repeats a block at least
    three times, so the same decision recurs after equal states."""
    two = rng.random() < 0.5
    procs = ["1", "2"] if two else ["1"]
    names = iter("abde")
    loops = {p: [next(names) for _ in range(rng.randint(1, 2))] for p in procs}
    shared = two and rng.random() < 0.5
    g = loop_game(loops, shared)
    busy = rng.choice(procs)
    runs = {}
    for p in procs:
        letters = loops[p]
        if p == busy:
            block = tuple(rng.choice(letters) for _ in range(rng.randint(1, 2)))
            head = tuple(rng.choice(letters) for _ in range(rng.randint(0, 1)))
            reps = 3 if len(block) == 2 else rng.randint(3, 4)
            runs[p] = head + block * reps
        else:
            runs[p] = tuple(rng.choice(letters) for _ in range(rng.randint(0, 2)))
    return g, loop_strategy(g, runs, shared)


# ---------------------------------------------------------------- small random games


def random_small_game(rng: random.Random) -> Game:
    n_procs = rng.randint(1, 2)
    procs = [str(i + 1) for i in range(n_procs)]
    states = {p: [f"s{i}" for i in range(rng.randint(2, 3))] for p in procs}
    initial = {p: "s0" for p in procs}
    final = {p: rng.sample(states[p], rng.randint(1, len(states[p]) - 1)) for p in procs}
    domains, trans, ctrl = {}, {}, []
    for a in "abcd"[: rng.randint(2, 4)]:
        dom = rng.sample(procs, rng.randint(1, n_procs))
        dom.sort()
        domains[a] = dom
        if rng.random() < 0.75:
            ctrl.append(a)
        table = {}
        for pre in product(*(states[p] for p in dom)):
            if rng.random() < 0.5:
                table[pre] = tuple(rng.choice(states[p]) for p in dom)
        trans[a] = table
    return Game(procs, states, initial, final, domains, ctrl, trans)


def _subsets(items: list[str]) -> list[frozenset[str]]:
    return [frozenset(c) for c in chain.from_iterable(combinations(items, k) for k in range(len(items) + 1))]


def strategy_keys(g: Game, cap: int, semantics: str = CAUSAL) -> list[tuple[str, Trace]]:
    """Every view at which a process could face a controllable choice within ``cap``."""
    keys = set()
    for u in enumerate_plays(g, cap):
        for a in g.enabled(u.state):
            if a in g.controllable:
                for p in g.domain(a):
                    keys.add((p, process_view(u, p, semantics)))
    pos = {p: i for i, p in enumerate(g.processes)}
    return sorted(keys, key=lambda k: (pos[k[0]], k[1].sort_key()))


def candidate_count(g: Game, cap: int, semantics: str = CAUSAL) -> int:
    n = 1
    for p, _ in strategy_keys(g, cap, semantics):
        n *= 2 ** len([a for a in g.process_actions(p) if a in g.controllable])
    return n


def brute_force_winner(g: Game, cap: int, semantics: str = CAUSAL) -> Strategy | None:
    """First winning strategy in plain product order over all view-indexed choices."""
    keys = strategy_keys(g, cap, semantics)
    options = [_subsets(sorted(a for a in g.process_actions(p) if a in g.controllable)) for p, _ in keys]
    for choice in product(*options):
        s = Strategy(g, dict(zip(keys, choice)), semantics=semantics)
        if explore(s, cap).verdict.kind == WINNING:
            return s
    return None


def synthesis_corpus(seed: int, size: int, max_candidates: int, min_candidates: int = 1) -> list[tuple[Game, int]]:
    """Deterministic list of ``(game, cap)`` pairs small enough to brute force."""
    rng = random.Random(seed)
    out = []
    while len(out) < size:
        g = random_small_game(rng)
        cap = rng.randint(1, 4)
        if min_candidates <= candidate_count(g, cap) <= max_candidates:
            out.append((g, cap))
    return out
