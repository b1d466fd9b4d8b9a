"""Partial orders on processes."""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import IncompleteOrder, InvalidOrdering


class ProcessOrdering:
    """Reflexive-transitive closure of the given ``(p, q)`` pairs, read ``p <= q``."""

    def __init__(self, processes: Sequence[str], pairs: Iterable[tuple[str, str]] = ()):
        self.processes: tuple[str, ...] = tuple(processes)
        known = set(self.processes)
        rel = {(p, p) for p in self.processes}
        for p, q in pairs:
            if p not in known or q not in known:
                raise IncompleteOrder(f"pair {p} <= {q} mentions a process outside the ordering")
            rel.add((p, q))
        changed = True
        while changed:
            changed = False
            for (p, q) in list(rel):
                for (r, s) in list(rel):
                    if q == r and (p, s) not in rel:
                        rel.add((p, s))
                        changed = True
        for (p, q) in rel:
            if p != q and (q, p) in rel:
                raise InvalidOrdering(f"{p} and {q} are mutually ordered")
        self.relation: frozenset[tuple[str, str]] = frozenset(rel)

    @classmethod
    def chain(cls, processes: Sequence[str]) -> "ProcessOrdering":
        """Total order following the sequence."""
        ps = tuple(processes)
        return cls(ps, zip(ps, ps[1:]))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ProcessOrdering):
            return NotImplemented
        return set(self.processes) == set(other.processes) and self.relation == other.relation

    def __hash__(self) -> int:
        return hash(self.relation)

    def __repr__(self) -> str:
        return f"ProcessOrdering({format_ordering(self)})"

    def leq(self, p: str, q: str) -> bool:
        return (p, q) in self.relation

    def maximum(self, ps: Iterable[str]) -> str | None:
        """The greatest element of ``ps``, or None if there is none."""
        ps = list(ps)
        for m in ps:
            if all(self.leq(p, m) for p in ps):
                return m
        return None

    def closure(self, pool: Iterable[str]) -> frozenset[str]:
        pool = set(pool)
        return frozenset(p for p in self.processes if any(self.leq(p, q) for q in pool))

    def covers(self, processes: Iterable[str]) -> bool:
        return set(processes) == set(self.processes)


def format_ordering(ordering: ProcessOrdering) -> str:
    pairs = sorted((p, q) for p, q in ordering.relation if p != q)
    return ", ".join(f"{p}<={q}" for p, q in pairs) or "discrete"


def game_ordering(game) -> ProcessOrdering:
    """Declared ``order`` lines of a game, or the declaration-order chain."""
    if game.ordering:
        return ProcessOrdering(game.processes, game.ordering)
    return ProcessOrdering.chain(game.processes)
