"""Bounded search for winning distributed strategies."""

from __future__ import annotations

import logging
import time
from collections import deque
from dataclasses import dataclass
from itertools import combinations

from .game import Game, Play, initial_play, process_view
from .strategy import Strategy, Verdict, explore
from .traces import CAUSAL, Trace, check_semantics

log = logging.getLogger(__name__)

_WIN, _FAIL, _NEED = "win", "fail", "need"


@dataclass(frozen=True)
class SynthesisConfig:
    """``cap`` bounds the length of every sigma-play of the result."""

    cap: int
    semantics: str = CAUSAL
    node_limit: int | None = None
    time_budget: float | None = None

    def __post_init__(self):
        if self.cap < 0:
            raise ValueError("cap must be nonnegative")
        check_semantics(self.semantics)


class SearchLimit(RuntimeError):
    """Raised when the search outgrows ``node_limit`` or ``time_budget``."""


def decision_options(g: Game, p: str) -> list[frozenset[str]]:
    """Subsets of the controllable actions of ``p``, smallest first."""
    acts = [a for a in g.process_actions(p) if a in g.controllable]
    out = []
    for size in range(len(acts) + 1):
        out.extend(frozenset(c) for c in combinations(acts, size))
    return out


def distance_to_final(g: Game) -> dict:
    """Fewest steps from each reachable global state to a final one."""
    edges: dict = {}
    todo = [g.initial_state]
    edges[g.initial_state] = []
    while todo:
        q = todo.pop()
        for a in g.actions:
            r = g.step(q, a)
            if r is None:
                continue
            edges[q].append(r)
            if r not in edges:
                edges[r] = []
                todo.append(r)
    back: dict = {q: [] for q in edges}
    for q, rs in edges.items():
        for r in rs:
            back[r].append(q)
    dist = {q: 0 for q in edges if g.is_final(q)}
    queue = deque(dist)
    while queue:
        r = queue.popleft()
        for q in back[r]:
            if q not in dist:
                dist[q] = dist[r] + 1
                queue.append(q)
    return dist


class _Search:
    def __init__(self, g: Game, cap: int, semantics: str, node_limit: int | None, deadline: float | None):
        self.g = g
        self.cap = cap
        self.semantics = semantics
        self.node_limit = node_limit
        self.deadline = deadline
        self.nodes = 0
        self.options = {p: decision_options(g, p) for p in g.processes}
        self.dist = distance_to_final(g)

    def doomed(self, u: Play) -> bool:
        """No final state is reachable within the remaining budget."""
        d = self.dist.get(u.state)
        return d is None or len(u) + d > self.cap

    def evaluate(self, table: dict[tuple[str, Trace], frozenset[str]]):
        """Walk sigma-plays breadth-first under a partial table.

        Returns ``(_WIN, None)``, ``(_FAIL, None)`` or ``(_NEED, key)`` for the
        first view that must be decided before the walk can go on.
        """
        g = self.g
        root = initial_play(g)
        if self.doomed(root):
            return _FAIL, None
        seen = {root.trace}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            enabled = [(a, g.step(u.state, a)) for a in g.actions]
            enabled = [(a, s) for a, s in enabled if s is not None]
            allowed: dict[str, frozenset[str]] = {}
            for p in g.processes:
                if not any(a in g.controllable and p in g.domain(a) for a, _ in enabled):
                    continue
                key = (p, process_view(u, p, self.semantics))
                if key not in table:
                    return _NEED, key
                allowed[p] = table[key]
            succ = [
                (a, s) for a, s in enabled
                if a in g.environment or all(a in allowed[p] for p in g.domain(a))
            ]
            if not succ:
                if not g.is_final(u.state):
                    return _FAIL, None
                continue
            if len(u) >= self.cap:
                return _FAIL, None
            for a, s in succ:
                t = Trace(g.alphabet, u.trace.word + (a,))
                if t not in seen:
                    w = Play(g, t, s)
                    if self.doomed(w):
                        return _FAIL, None
                    seen.add(t)
                    queue.append(w)
        return _WIN, None

    def solve(self, table):
        self.nodes += 1
        if self.node_limit is not None and self.nodes > self.node_limit:
            raise SearchLimit(f"search exceeded {self.node_limit} nodes")
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise SearchLimit("search exceeded its time budget")
        status, key = self.evaluate(table)
        if status == _WIN:
            return dict(table)
        if status == _FAIL:
            return None
        for opt in self.options[key[0]]:
            table[key] = opt
            found = self.solve(table)
            if found is not None:
                return found
            del table[key]
        return None


def synthesize(g: Game, config: SynthesisConfig | int) -> Strategy | None:
    """A winning strategy whose sigma-plays all have length at most the cap.

    Caps are tried in increasing order so the first hit has the shortest
    longest play; within a cap, views are decided in breadth-first order and
    options are tried smallest first.  None means no such strategy exists.
    """
    if isinstance(config, int):
        config = SynthesisConfig(config)
    total = 0
    deadline = None if config.time_budget is None else time.monotonic() + config.time_budget
    for cap in range(config.cap + 1):
        limit = None if config.node_limit is None else config.node_limit - total
        search = _Search(g, cap, config.semantics, limit, deadline)
        table = search.solve({})
        total += search.nodes
        if table is not None:
            log.debug("strategy found at cap %d after %d nodes", cap, total)
            decisions = {k: v for k, v in table.items() if v}
            return Strategy(g, decisions, semantics=config.semantics)
    return None


def certify(g: Game, s: Strategy, cap: int) -> Verdict:
    """Independent re-check of ``s`` by plain exploration up to ``cap``."""
    if s.game != g:
        raise ValueError("strategy belongs to a different game")
    return explore(s, cap).verdict


__all__ = ["SearchLimit", "SynthesisConfig", "certify", "decision_options", "synthesize"]
