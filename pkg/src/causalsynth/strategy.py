"""Distributed strategies with causal memory, sigma-plays and winning verdicts."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import GameSyntaxError, SemanticError, UnknownProcess
from .game import Game, Play, initial_play, process_view, replay
from .traces import CAUSAL, Trace, check_semantics, format_trace, maximal_letters, parse_word

WINNING = "winning"
LOSING = "losing"
BOUND_EXCEEDED = "bound-exceeded"

UNBOUNDED = None
"""Duration marker for strategies whose plays reach the exploration cap."""

Key = tuple[str, Trace]


class Strategy:
    """Finite view-indexed decision table with a per-process fallback.

    Only controllable actions are stored.  Environment actions are added on
    lookup, so they are allowed at every view.
    """

    def __init__(
        self,
        game: Game,
        decisions: Mapping[Key, Iterable[str]] | None = None,
        defaults: Mapping[str, Iterable[str]] | None = None,
        semantics: str = CAUSAL,
    ):
        self.game = game
        self.semantics = check_semantics(semantics)
        self.decisions: dict[Key, frozenset[str]] = {}
        for (p, k), allowed in (decisions or {}).items():
            if p not in game.processes:
                raise UnknownProcess(f"unknown process {p!r}")
            if not isinstance(k, Trace):
                k = game.alphabet.trace(k)
            self.decisions[(p, k)] = _controllable(allowed, game)
        self.defaults: dict[str, frozenset[str]] = {p: frozenset() for p in game.processes}
        for p, allowed in (defaults or {}).items():
            if p not in game.processes:
                raise UnknownProcess(f"unknown process {p!r}")
            self.defaults[p] = _controllable(allowed, game)
        self._cache: dict[Key, frozenset[str]] = {}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Strategy):
            return NotImplemented
        return (
            self.game == other.game
            and self.semantics == other.semantics
            and self.decisions == other.decisions
            and self.defaults == other.defaults
        )

    __hash__ = object.__hash__

    def __repr__(self) -> str:
        return f"Strategy({len(self.decisions)} decisions, semantics={self.semantics})"

    def key(self, p: str, u: Play | Trace) -> Trace:
        return process_view(u, p, self.semantics)

    def decide(self, p: str, u: Play | Trace) -> frozenset[str]:
        """``sigma_p(u)``, including every environment action."""
        trace = u.trace if isinstance(u, Play) else u
        hit = self._cache.get((p, trace))
        if hit is not None:
            return hit
        if p not in self.game.processes:
            raise UnknownProcess(f"unknown process {p!r}")
        k = self.key(p, trace)
        out = self.game.environment | self.decisions.get((p, k), self.defaults[p])
        self._cache[(p, trace)] = out
        return out

    def allows(self, u: Play | Trace, a: str) -> bool:
        """Whether every process of ``dom(a)`` allows ``a`` after ``u``."""
        return all(a in self.decide(p, u) for p in self.game.domain(a))

    def validate(self) -> None:
        """Recorded views must be plays and fixed points of the view map."""
        for (p, k) in self.decisions:
            if replay(self.game, k.word) is None:
                raise SemanticError(f"recorded view {k} of process {p} is not a play")
            if self.key(p, k) != k:
                raise SemanticError(f"recorded key {k} is not a {self.semantics} view of process {p}")


def _controllable(allowed: Iterable[str], game: Game) -> frozenset[str]:
    out = frozenset(game.alphabet.check_letters(allowed))
    return out & game.controllable


def decision(s: Strategy, p: str, u: Play | Trace) -> frozenset[str]:
    return s.decide(p, u)


def sigma_extensions(s: Strategy, u: Play) -> list[Play]:
    """One-letter sigma-extensions of ``u``, in letter order."""
    g = s.game
    out = []
    for a in g.actions:
        nxt = g.step(u.state, a)
        if nxt is not None and s.allows(u, a):
            out.append(Play(g, Trace(g.alphabet, u.trace.word + (a,)), nxt))
    return out


def is_sigma_linearization(s: Strategy, word: Iterable[str]) -> bool:
    """The sigma-play condition along one specific word."""
    g = s.game
    state = g.initial_state
    prefix: tuple[str, ...] = ()
    for a in word:
        nxt = g.step(state, a)
        if nxt is None or not s.allows(Trace(g.alphabet, prefix), a):
            return False
        state = nxt
        prefix += (a,)
    return True


def is_sigma_play(s: Strategy, u: Play | Trace) -> bool:
    """True iff some linearization of ``u`` satisfies the sigma-play condition."""
    trace = u.trace if isinstance(u, Play) else u
    if replay(s.game, trace.word) is None:
        return False
    memo: dict[Trace, bool] = {}

    def rec(w: Trace) -> bool:
        if not w.word:
            return True
        hit = memo.get(w)
        if hit is not None:
            return hit
        ok = False
        for a in maximal_letters(w):
            rest = list(w.word)
            # drop the last occurrence of a, which is the maximal a-event
            idx = len(rest) - 1 - rest[::-1].index(a)
            del rest[idx]
            head = Trace(w.alphabet, rest)
            if s.allows(head, a) and rec(head):
                ok = True
                break
        memo[w] = ok
        return ok

    return rec(trace)


@dataclass(frozen=True)
class Verdict:
    kind: str
    witness: Trace | None = None

    def __str__(self) -> str:
        if self.witness is None:
            return self.kind
        return f"{self.kind} {format_trace(self.witness)}"


@dataclass
class Exploration:
    plays: list[Play]
    maximal: list[Play]
    verdict: Verdict
    cap: int
    extensions: dict[Trace, list[Play]] = field(default_factory=dict, repr=False)

    @property
    def traces(self) -> list[Trace]:
        return [u.trace for u in self.plays]


def explore(s: Strategy, cap: int) -> Exploration:
    """Every sigma-play of length at most ``cap`` and the resulting verdict.

    The verdict is ``bound-exceeded`` when some sigma-play of length ``cap``
    still has a sigma-extension, ``losing`` when a maximal sigma-play ends
    outside the final states, ``winning`` otherwise.  Witnesses are the
    lexicographically least candidates.
    """
    if cap < 0:
        raise ValueError("cap must be nonnegative")
    root = initial_play(s.game)
    seen: dict[Trace, Play] = {root.trace: root}
    ext: dict[Trace, list[Play]] = {}
    layer = [root]
    over: list[Play] = []
    maximal: list[Play] = []
    while layer:
        nxt = []
        for u in layer:
            succ = sigma_extensions(s, u)
            ext[u.trace] = succ
            if not succ:
                maximal.append(u)
            elif len(u) >= cap:
                over.append(u)
            else:
                for w in succ:
                    if w.trace not in seen:
                        seen[w.trace] = w
                        nxt.append(w)
        layer = nxt
    plays = sorted(seen.values(), key=lambda w: w.trace.sort_key())
    maximal.sort(key=lambda w: w.trace.sort_key())
    lex = lambda w: w.trace.lex_key()  # noqa: E731
    if over:
        verdict = Verdict(BOUND_EXCEEDED, min(over, key=lex).trace)
    else:
        losing = [u for u in maximal if not u.is_final]
        if losing:
            verdict = Verdict(LOSING, min(losing, key=lex).trace)
        else:
            verdict = Verdict(WINNING)
    return Exploration(plays, maximal, verdict, cap, ext)


def duration(s: Strategy, cap: int) -> int | None:
    """Sum of the lengths of maximal sigma-plays; None when unbounded at ``cap``."""
    ex = explore(s, cap)
    if ex.verdict.kind == BOUND_EXCEEDED:
        return UNBOUNDED
    return sum(len(u) for u in ex.maximal)


# ---------------------------------------------------------------- .zstrat I/O


def parse_strategy(text: str, game: Game) -> Strategy:
    semantics: str | None = None
    decisions: dict[Key, frozenset[str]] = {}
    defaults: dict[str, frozenset[str]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kw = tok[0]
        if kw == "semantics":
            if len(tok) != 2 or tok[1] not in ("literal", "causal"):
                raise GameSyntaxError(lineno, "expected 'semantics literal|causal'")
            if semantics is not None and semantics != tok[1]:
                raise SemanticError(f"line {lineno}: strategy mixes view semantics")
            semantics = tok[1]
        elif kw in ("default", "decide"):
            if "allow" not in tok or len(tok) < 4:
                raise GameSyntaxError(lineno, f"expected '{kw} <pid> ... allow <actions|->'")
            i = tok.index("allow")
            p = tok[1]
            if p not in game.processes:
                raise SemanticError(f"line {lineno}: unknown process {p}")
            try:
                allowed = frozenset(game.alphabet.check_letters(parse_word(tok[i + 1:])))
            except KeyError as exc:
                raise SemanticError(f"line {lineno}: unknown action {exc}") from None
            if kw == "default":
                if i != 2:
                    raise GameSyntaxError(lineno, "expected 'default <pid> allow <actions|->'")
                if p in defaults:
                    raise SemanticError(f"line {lineno}: default for {p} given twice")
                defaults[p] = allowed
            else:
                if i < 3:
                    raise GameSyntaxError(lineno, "expected 'decide <pid> <view|-> allow <actions|->'")
                try:
                    k = Trace(game.alphabet, parse_word(tok[2:i]))
                except KeyError as exc:
                    raise SemanticError(f"line {lineno}: unknown action {exc}") from None
                if (p, k) in decisions:
                    raise SemanticError(f"line {lineno}: decision for {p} at {k} given twice")
                decisions[(p, k)] = allowed
        else:
            raise GameSyntaxError(lineno, f"unknown keyword {kw!r}")
    if semantics is None:
        raise SemanticError("missing 'semantics' header")
    s = Strategy(game, decisions, defaults, semantics)
    s.validate()
    return s


def format_strategy(s: Strategy) -> str:
    g = s.game
    lines = [f"semantics {s.semantics}"]
    allow = lambda acts: " ".join(g.alphabet.sort_letters(acts)) or "-"  # noqa: E731
    for p in g.processes:
        lines.append(f"default {p} allow {allow(s.defaults[p])}")
    pos = {p: i for i, p in enumerate(g.processes)}
    for (p, k) in sorted(s.decisions, key=lambda pk: (pos[pk[0]], pk[1].sort_key())):
        lines.append(f"decide {p} {format_trace(k)} allow {allow(s.decisions[(p, k)])}")
    return "\n".join(lines) + "\n"


def load_strategy(path, game: Game) -> Strategy:
    with open(path, encoding="utf-8") as fh:
        return parse_strategy(fh.read(), game)
