"""Structural classes of games: process orderings, broadcast games,
series-parallel alphabets, connectedly communicating, DAG and triangulated
architectures."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations, product
from typing import Iterable

import networkx as nx

from .errors import IncompleteOrder, InvalidOrdering, NotPrime
from .game import Game, Play, enumerate_plays
from .ordering import ProcessOrdering, format_ordering, game_ordering
from .shortcuts import is_broadcast
from .traces import (
    DependencyAlphabet,
    Trace,
    concat,
    connected_letter_sets,
    format_trace,
    is_prime,
    letter_count,
    prefix_residual,
    prefixes,
)

# ---------------------------------------------------------------- orderings


def _require_cover(g: Game, ordering: ProcessOrdering) -> None:
    if not ordering.covers(g.processes):
        raise IncompleteOrder("ordering must cover exactly the processes of the game")


def ordering_violation(g: Game, ordering: ProcessOrdering) -> frozenset[str] | None:
    """A connected letter set whose joint domain has no maximum, if any."""
    _require_cover(g, ordering)
    dom = g.alphabet.domain_of
    for letters in connected_letter_sets(g.alphabet):
        procs = frozenset().union(*(dom[a] for a in letters))
        if ordering.maximum(procs) is None:
            return letters
    return None


def check_process_ordering(g: Game, ordering: ProcessOrdering) -> bool:
    """Whether every prime trace has a domain with a maximum.

    The alphabets of prime traces are exactly the dependency-connected
    letter sets, so the check ranges over those.
    """
    return ordering_violation(g, ordering) is None


def process_closure(pool: Iterable[str], ordering: ProcessOrdering) -> frozenset[str]:
    return ordering.closure(pool)


def is_well_ordered_broadcast(
    g: Game,
    u: Play | Trace,
    pool: Iterable[str],
    ordering: ProcessOrdering,
    v_cap: int | None = None,
) -> bool:
    trace = u.trace if isinstance(u, Play) else u
    if not is_prime(trace):
        raise NotPrime(f"{trace} is not prime")
    pool = frozenset(pool)
    if ordering.closure(pool) != pool:
        return False
    top = ordering.maximum(trace.domain)
    if top is None or top not in g.domain(trace.last()):
        return False
    return is_broadcast(g, trace, pool, v_cap)


# ---------------------------------------------------------------- broadcast games


@dataclass(frozen=True)
class BroadcastCaps:
    u: int
    v: int
    w: int

    @classmethod
    def default(cls, g: Game) -> "BroadcastCaps":
        m = g.global_state_count
        return cls(m, m * len(g.processes), 3 * m)

    def __str__(self) -> str:
        return f"u={self.u},v={self.v},w={self.w}"


def _has_broadcast_prefix(g: Game, u: Trace, v: Trace, ordering: ProcessOrdering, w_cap: int) -> bool:
    pool = ordering.closure(v.domain)
    for vp in prefixes(v):
        uv = concat(u, vp)
        if is_prime(uv) and is_well_ordered_broadcast(g, uv, pool, ordering, w_cap):
            return True
    return False


def broadcast_failures(g: Game, ordering: ProcessOrdering, caps: BroadcastCaps) -> list[tuple[int, Trace, Trace]]:
    """Pairs ``(u, v)`` with ``u v`` a prime play, ``v`` nonempty, that admit
    no well-ordered ``dom(v)``-closure broadcast prefix, tagged with
    ``min_q |v|_q``."""
    out = []
    for w in enumerate_plays(g, caps.u + caps.v):
        if not is_prime(w.trace):
            continue
        for u in prefixes(w.trace):
            if len(u) > caps.u or len(w) - len(u) > caps.v or u == w.trace:
                continue
            v = prefix_residual(u, w.trace)
            if not _has_broadcast_prefix(g, u, v, ordering, caps.w):
                n = min(letter_count(v, q) for q in v.domain)
                out.append((n, u, v))
    return out


def decide_broadcast_game(
    g: Game,
    ordering: ProcessOrdering | None = None,
    caps: BroadcastCaps | None = None,
) -> int | None:
    """Least ``N <= M`` making ``g`` an ``(N, ordering)``-broadcast game within
    the caps, or None."""
    ordering = game_ordering(g) if ordering is None else ordering
    if not check_process_ordering(g, ordering):
        raise InvalidOrdering(f"{format_ordering(ordering)} is not a process ordering of the game")
    caps = BroadcastCaps.default(g) if caps is None else caps
    fails = broadcast_failures(g, ordering, caps)
    n = 1 + max((f[0] for f in fails), default=0)
    return n if n <= g.global_state_count else None


# ---------------------------------------------------------------- series-parallel


@dataclass(frozen=True)
class SPNode:
    kind: str  # "leaf", "parallel" or "synchronized"
    letters: frozenset[str]
    letter: str | None = None
    left: "SPNode | None" = None
    right: "SPNode | None" = None

    def render(self, alphabet: DependencyAlphabet) -> str:
        if self.kind == "leaf":
            return self.letter
        tag = "par" if self.kind == "parallel" else "sync"
        return f"{tag}({self.left.render(alphabet)},{self.right.render(alphabet)})"


def _components(letters: list[str], adjacent) -> list[list[str]]:
    comps = []
    left = list(letters)
    while left:
        comp = [left.pop(0)]
        i = 0
        while i < len(comp):
            a = comp[i]
            for b in list(left):
                if adjacent(a, b):
                    comp.append(b)
                    left.remove(b)
            i += 1
        comps.append(comp)
    return comps


def _decompose(letters: list[str], alphabet: DependencyAlphabet) -> SPNode | None:
    if len(letters) == 1:
        return SPNode("leaf", frozenset(letters), letter=letters[0])
    dep = alphabet.dependent
    for kind, adjacent in (
        ("parallel", lambda a, b: dep(a, b)),
        ("synchronized", lambda a, b: not dep(a, b)),
    ):
        comps = _components(letters, adjacent)
        if len(comps) > 1:
            subs = []
            for comp in comps:
                sub = _decompose(alphabet.sort_letters(comp), alphabet)
                if sub is None:
                    return None
                subs.append(sub)
            node = subs[0]
            for sub in subs[1:]:
                node = SPNode(kind, node.letters | sub.letters, left=node, right=sub)
            return node
    return None


def classify_series_parallel(g: Game | DependencyAlphabet) -> SPNode | None:
    """Binary cograph decomposition of the dependence graph, or None."""
    alphabet = g.alphabet if isinstance(g, Game) else g
    return _decompose(list(alphabet.letters), alphabet)


def tree_dependence(node: SPNode) -> frozenset[tuple[str, str]]:
    """Dependency relation rebuilt from a decomposition tree."""
    if node.kind == "leaf":
        return frozenset({(node.letter, node.letter)})
    d = tree_dependence(node.left) | tree_dependence(node.right)
    if node.kind == "synchronized":
        cross = {(a, b) for a in node.left.letters for b in node.right.letters}
        d |= cross | {(b, a) for a, b in cross}
    return d


def find_p4(alphabet: DependencyAlphabet) -> tuple[str, str, str, str] | None:
    """An induced path on four letters of the dependence graph, if any."""
    dep = alphabet.dependent
    for quad in permutations(alphabet.letters, 4):
        a, b, c, d = quad
        if a > d:
            continue
        if dep(a, b) and dep(b, c) and dep(c, d) and not (dep(a, c) or dep(a, d) or dep(b, d)):
            return quad
    return None


# ---------------------------------------------------------------- k-communicating


@dataclass(frozen=True)
class KCommWitness:
    u: Trace
    v: Trace
    w: Trace
    p: str
    q: str

    def __str__(self) -> str:
        return (
            f"u={format_trace(self.u)} v={format_trace(self.v)} "
            f"w={format_trace(self.w)} p={self.p} q={self.q}"
        )


def check_k_communicating(g: Game, k: int, cap: int) -> KCommWitness | None:
    """Least violation of the k-communication implication among plays of
    length at most ``cap``; None means it holds within the cap."""
    if k < 1 or cap < 0:
        raise ValueError("need k >= 1 and cap >= 0")
    procs = g.processes
    pos = {p: i for i, p in enumerate(procs)}
    for z in enumerate_plays(g, cap):
        hits = []
        for u in prefixes(z.trace):
            rest = prefix_residual(u, z.trace)
            for v in prefixes(rest):
                w = prefix_residual(v, rest)
                if not is_prime(w):
                    continue
                for p, q in product(procs, procs):
                    if p == q:
                        continue
                    if letter_count(v, p) >= k and letter_count(v, q) == 0:
                        if letter_count(w, p) and letter_count(w, q):
                            hits.append((u.sort_key(), v.sort_key(), w.sort_key(), pos[p], pos[q], KCommWitness(u, v, w, p, q)))
        if hits:
            return min(hits, key=lambda h: h[:5])[5]
    return None


# ---------------------------------------------------------------- architectures


def dag_violation(g: Game, ordering: ProcessOrdering) -> tuple[str, str, str, str] | None:
    """``(a, p0, p1, p2)`` breaking the DAG condition, if any."""
    for a in g.actions:
        dom = g.dom_tuple[a]
        for p0, p1 in product(dom, dom):
            for p2 in g.processes:
                if ordering.leq(p0, p2) and not (ordering.leq(p1, p2) or p2 in dom):
                    return a, p0, p1, p2
    return None


def check_dag_condition(g: Game, ordering: ProcessOrdering) -> bool:
    return dag_violation(g, ordering) is None


def communication_graph(g: Game) -> set[frozenset[str]]:
    """Edges between processes sharing an action."""
    edges = set()
    for a in g.actions:
        for p, q in combinations(g.dom_tuple[a], 2):
            edges.add(frozenset((p, q)))
    return edges


def check_triangulated(g: Game, edges: Iterable[Iterable[str]] | None = None) -> bool:
    """Every simple cycle has length 3 and every action domain is connected."""
    graph = nx.Graph()
    graph.add_nodes_from(g.processes)
    for e in communication_graph(g) if edges is None else edges:
        p, q = tuple(e)
        graph.add_edge(p, q)
    for cycle in nx.simple_cycles(graph):
        if len(cycle) > 3:
            return False
    for a in g.actions:
        if not nx.is_connected(graph.subgraph(g.dom_tuple[a])):
            return False
    return True


# ---------------------------------------------------------------- report


def classification_report(
    g: Game,
    ordering: ProcessOrdering | None = None,
    caps: BroadcastCaps | None = None,
    k: int = 1,
    k_cap: int = 4,
) -> list[str]:
    ordering = game_ordering(g) if ordering is None else ordering
    caps = BroadcastCaps.default(g) if caps is None else caps
    lines = ["format 1", f"ordering {format_ordering(ordering)}"]
    tree = classify_series_parallel(g)
    lines.append(f"series-parallel yes {tree.render(g.alphabet)}" if tree else "series-parallel no")
    if check_process_ordering(g, ordering):
        n = decide_broadcast_game(g, ordering, caps)
        verdict = f"N={n}" if n is not None else "no"
        lines.append(f"broadcast-game {verdict} (caps {caps})")
        lines.append(f"dag {'yes' if check_dag_condition(g, ordering) else 'no'}")
    else:
        lines.append(f"broadcast-game no (invalid ordering) (caps {caps})")
        lines.append("dag no")
    lines.append(f"triangulated {'yes' if check_triangulated(g) else 'no'}")
    wit = check_k_communicating(g, k, k_cap)
    if wit is None:
        lines.append(f"k-communicating k={k} holds-within-cap {k_cap}")
    else:
        lines.append(f"k-communicating k={k} counterexample {wit}")
    return lines


def prime_play_domains(g: Game, max_len: int) -> set[frozenset[str]]:
    """Domains of prime traces up to ``max_len`` (oracle helper)."""
    out = set()
    for w in enumerate_plays(g, max_len):
        if is_prime(w.trace):
            out.add(w.trace.domain)
    return out


__all__ = [
    "BroadcastCaps",
    "KCommWitness",
    "SPNode",
    "broadcast_failures",
    "check_dag_condition",
    "check_k_communicating",
    "check_process_ordering",
    "check_triangulated",
    "classification_report",
    "classify_series_parallel",
    "communication_graph",
    "dag_violation",
    "decide_broadcast_game",
    "find_p4",
    "is_well_ordered_broadcast",
    "ordering_violation",
    "process_closure",
    "tree_dependence",
]
