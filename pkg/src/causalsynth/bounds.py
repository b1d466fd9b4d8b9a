"""Explicit upper bounds on winning-strategy duration.

Values are exact integers.  Anything whose binary size would pass
``MAX_BITS`` is reported as ``None`` rather than evaluated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

from .classify import SPNode, classify_series_parallel
from .game import Game

MAX_BITS = 1 << 20

Value = int | None


def _power(base: Value, exp: Value) -> Value:
    if base is None or exp is None:
        return None
    if base in (0, 1) or exp == 0:
        return base**exp
    if exp > MAX_BITS or exp * math.log2(base) > MAX_BITS:
        return None
    return base**exp


def _mul(*xs: Value) -> Value:
    out = 1
    for x in xs:
        if x is None:
            return None
        out *= x
        if out.bit_length() > MAX_BITS:
            return None
    return out


def _add(*xs: Value) -> Value:
    if any(x is None for x in xs):
        return None
    return sum(xs)


def ramsey_bound(m: Value, n: Value) -> Value:
    """Upper bound ``m ** (m * n)`` on the Ramsey number ``R(m, n)``."""
    return _power(m, _mul(m, n))


def _show(v: Value, label: str) -> str:
    return label if v is None else str(v)


# ---------------------------------------------------------------- formulas


def _leaf(t: dict, kids: list[Value]) -> Value:
    return t["M"]


def _parallel(t: dict, kids: list[Value]) -> Value:
    if any(k is None for k in kids):
        return None
    return max(kids)


def _sync_side(k: Value, a: int, m: int, p: int) -> Value:
    return _mul(k, _power(2, _power(a, k)), a, _power(m, p))


def _sync(t: dict, kids: list[Value]) -> Value:
    m, p = t["M"], t["P"]
    return _add(_sync_side(kids[0], t["A0"], m, p), _sync_side(kids[1], t["A1"], m, p))


def _k_empty(t: dict, kids: list[Value]) -> Value:
    return 0


def _ramsey_n(t: dict, k_sub: Value) -> Value:
    a, m = t["A"], t["M"]
    return _mul(t["N"], _power(2, a), a, _power(m, t["P"]), _power(2, _power(a, k_sub)))


def _k_pool(t: dict, kids: list[Value]) -> Value:
    return _mul(t["M"], ramsey_bound(2 ** t["Q"], _ramsey_n(t, kids[0])))


FORMULAS: dict[str, tuple[str, Callable[[dict, list[Value]], Value]]] = {
    "leaf": ("M", _leaf),
    "parallel": ("max(K0, K1)", _parallel),
    "sync": ("K0*2^(|A0|^K0)*|A0|*M^|P| + K1*2^(|A1|^K1)*|A1|*M^|P|", _sync),
    "pool-empty": ("0", _k_empty),
    "pool": ("M*R(2^|Q|, N*2^|A|*|A|*M^|P|*2^(|A|^K_sub)) with R(m,n) <= m^(m*n)", _k_pool),
}


@dataclass(frozen=True)
class BoundReport:
    """One node of a bound computation with its inputs and sub-bounds."""

    label: str
    kind: str
    terms: tuple[tuple[str, int], ...]
    children: tuple["BoundReport", ...]
    value: Value
    expression: str

    @property
    def formula(self) -> str:
        return FORMULAS[self.kind][0]

    def recompute(self) -> Value:
        """Re-evaluate from the recorded terms and recomputed children."""
        fn = FORMULAS[self.kind][1]
        return fn(dict(self.terms), [c.recompute() for c in self.children])

    def value_text(self) -> str:
        return str(self.value) if self.value is not None else f"exceeds 2^{MAX_BITS} (not evaluated)"

    def lines(self, depth: int = 0) -> list[str]:
        pad = "  " * depth
        out = [f"{pad}bound {self.label} = {self.value_text()}"]
        out.append(f"{pad}  formula {self.formula}")
        if self.terms:
            out.append(f"{pad}  terms " + " ".join(f"{k}={v}" for k, v in self.terms))
        for c in self.children:
            out.extend(c.lines(depth + 1))
        return out


def _report(label: str, kind: str, terms: dict, children: Iterable[BoundReport], expression: str) -> BoundReport:
    children = tuple(children)
    value = FORMULAS[kind][1](terms, [c.value for c in children])
    return BoundReport(label, kind, tuple(terms.items()), children, value, expression)


# ---------------------------------------------------------------- series-parallel


def _sp_report(node: SPNode, g: Game, m: int, p: int) -> BoundReport:
    if node.kind == "leaf":
        return _report(f"leaf {node.letter}", "leaf", {"M": m}, (), str(m))
    left = _sp_report(node.left, g, m, p)
    right = _sp_report(node.right, g, m, p)
    letters = " ".join(g.alphabet.sort_letters(node.letters))
    if node.kind == "parallel":
        expr = f"max({_show(left.value, 'K0')}, {_show(right.value, 'K1')})"
        return _report(f"parallel {{{letters}}}", "parallel", {}, (left, right), expr)
    a0, a1 = len(node.left.letters), len(node.right.letters)
    k0, k1 = _show(left.value, "K0"), _show(right.value, "K1")
    expr = f"{k0}*2**({a0}**{k0})*{a0}*{m}**{p} + {k1}*2**({a1}**{k1})*{a1}*{m}**{p}"
    terms = {"M": m, "P": p, "A0": a0, "A1": a1}
    return _report(f"sync {{{letters}}}", "sync", terms, (left, right), expr)


def bound_series_parallel(g: Game, tree: SPNode | None = None) -> BoundReport:
    """Duration bound following a series-parallel decomposition of the alphabet."""
    tree = classify_series_parallel(g) if tree is None else tree
    if tree is None:
        raise ValueError("the alphabet is not series-parallel")
    return _sp_report(tree, g, g.global_state_count, len(g.processes))


# ---------------------------------------------------------------- broadcast games


def bound_K(g: Game, pool: Iterable[str], n: int) -> BoundReport:
    """``K_Q`` for an ``(n, ordering)``-broadcast game, built from the pool
    with its last process removed."""
    if n < 1:
        raise ValueError("N must be positive")
    pool = set(pool)
    for q in pool:
        g.alphabet.check_process(q)
    ordered = [q for q in g.processes if q in pool]
    label = "K_{" + ",".join(ordered) + "}"
    if not ordered:
        return _report(label, "pool-empty", {}, (), "0")
    sub = bound_K(g, ordered[:-1], n)
    m, a, p, size = g.global_state_count, len(g.actions), len(g.processes), len(ordered)
    terms = {"M": m, "Q": size, "A": a, "P": p, "N": n}
    ks = _show(sub.value, "K_sub")
    rn = f"({n}*2**{a}*{a}*{m}**{p}*2**({a}**{ks}))"
    expr = f"{m}*(2**{size})**((2**{size})*{rn})"
    return _report(label, "pool", terms, (sub,), expr)


__all__ = ["MAX_BITS", "BoundReport", "bound_K", "bound_series_parallel", "ramsey_bound"]
