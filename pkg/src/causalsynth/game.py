"""Zielonka automata with a controllable/environment split, and their plays."""

from __future__ import annotations

from math import prod
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import GameSyntaxError, NotEnabled, SemanticError, UnknownLetter, UnknownProcess
from .traces import LITERAL, DependencyAlphabet, Trace, check_semantics, view

State = tuple[str, ...]


class Game:
    """A distributed game.

    ``transitions[a]`` maps the tuple of local states of ``dom(a)`` (ordered
    as in :attr:`processes`) to the tuple of successor states.
    """

    def __init__(
        self,
        processes: Sequence[str],
        states: Mapping[str, Sequence[str]],
        initial: Mapping[str, str],
        final: Mapping[str, Iterable[str]],
        domains: Mapping[str, Iterable[str]],
        controllable: Iterable[str],
        transitions: Mapping[str, Mapping[State, State]],
        letter_order: Sequence[str] | None = None,
        ordering: Iterable[tuple[str, str]] = (),
    ):
        self.processes: tuple[str, ...] = tuple(processes)
        if len(set(self.processes)) != len(self.processes):
            raise SemanticError("duplicate process")
        self.states = {p: tuple(states[p]) for p in self.processes}
        self.initial = {p: initial[p] for p in self.processes}
        self.final = {p: frozenset(final[p]) for p in self.processes}
        for p in self.processes:
            if self.initial[p] not in self.states[p]:
                raise SemanticError(f"initial state of process {p} is not one of its states")
            if not self.final[p] <= set(self.states[p]):
                raise SemanticError(f"final states of process {p} are not states of it")
        self.alphabet = DependencyAlphabet(domains, letter_order, self.processes)
        self.controllable = frozenset(controllable)
        if not self.controllable <= set(self.alphabet.letters):
            raise SemanticError("controllable set mentions unknown actions")
        self.environment = frozenset(self.alphabet.letters) - self.controllable
        self._pos = {p: i for i, p in enumerate(self.processes)}
        self.dom_tuple = {
            a: tuple(p for p in self.processes if p in self.alphabet.domain_of[a])
            for a in self.alphabet.letters
        }
        self.transitions: dict[str, dict[State, State]] = {}
        for a in self.alphabet.letters:
            table = {}
            for pre, post in transitions.get(a, {}).items():
                pre, post = tuple(pre), tuple(post)
                dt = self.dom_tuple[a]
                if len(pre) != len(dt) or len(post) != len(dt):
                    raise SemanticError(f"transition of {a} does not range over its domain")
                for p, s, t in zip(dt, pre, post):
                    if s not in self.states[p] or t not in self.states[p]:
                        raise SemanticError(f"transition of {a} uses unknown state of process {p}")
                table[pre] = post
            self.transitions[a] = table
        for a in transitions:
            if a not in self.transitions:
                raise UnknownLetter(f"unknown letter {a!r}")
        self.ordering: tuple[tuple[str, str], ...] = tuple(ordering)
        for p, q in self.ordering:
            if p not in self._pos or q not in self._pos:
                raise UnknownProcess(f"ordering mentions unknown process in {p} <= {q}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Game):
            return NotImplemented
        return (
            self.processes == other.processes
            and self.states == other.states
            and self.initial == other.initial
            and self.final == other.final
            and self.alphabet == other.alphabet
            and self.controllable == other.controllable
            and self.transitions == other.transitions
            and self.ordering == other.ordering
        )

    __hash__ = object.__hash__

    def __repr__(self) -> str:
        return f"Game(processes={list(self.processes)}, actions={list(self.alphabet.letters)})"

    @property
    def actions(self) -> tuple[str, ...]:
        return self.alphabet.letters

    def domain(self, a: str) -> frozenset[str]:
        return self.alphabet.domain_of[a]

    def process_actions(self, p: str) -> frozenset[str]:
        return self.alphabet.process_letters(p)

    @property
    def initial_state(self) -> State:
        return tuple(self.initial[p] for p in self.processes)

    @property
    def global_state_count(self) -> int:
        """``M``: number of global states, the product of local state counts."""
        return prod(len(self.states[p]) for p in self.processes)

    def local(self, state: State, p: str) -> str:
        return state[self._pos[p]]

    def step(self, state: State, a: str) -> State | None:
        """Successor global state, or None when ``a`` is not enabled."""
        try:
            table = self.transitions[a]
        except KeyError:
            raise UnknownLetter(f"unknown letter {a!r}") from None
        dt = self.dom_tuple[a]
        pos = self._pos
        post = table.get(tuple(state[pos[p]] for p in dt))
        if post is None:
            return None
        new = list(state)
        for p, t in zip(dt, post):
            new[pos[p]] = t
        return tuple(new)

    def enabled(self, state: State) -> list[str]:
        return [a for a in self.actions if self.step(state, a) is not None]

    def is_final(self, state: State) -> bool:
        return all(s in self.final[p] for p, s in zip(self.processes, state))

    def play(self, word: Iterable[str] | str = ()) -> "Play":
        """Replay ``word`` from the initial state."""
        if isinstance(word, str):
            word = self.alphabet.trace(word).word
        u = initial_play(self)
        for a in word:
            u = extend_play(u, a)
        return u


class Play:
    """A play together with its cached global state."""

    __slots__ = ("game", "trace", "state")

    def __init__(self, game: Game, trace: Trace, state: State):
        self.game = game
        self.trace = trace
        self.state = state

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Play):
            return NotImplemented
        return self.game is other.game and self.trace == other.trace

    def __hash__(self) -> int:
        return hash(self.trace)

    def __len__(self) -> int:
        return len(self.trace)

    def __repr__(self) -> str:
        return f"Play({str(self.trace)!r}, state={self.state})"

    @property
    def word(self) -> tuple[str, ...]:
        return self.trace.word

    def local(self, p: str) -> str:
        return self.game.local(self.state, p)

    @property
    def is_final(self) -> bool:
        return self.game.is_final(self.state)


def initial_play(g: Game) -> Play:
    return Play(g, g.alphabet.empty, g.initial_state)


def extend_play(u: Play, x: str) -> Play:
    """``u x`` as a play; raises :class:`NotEnabled` if no transition fires."""
    nxt = u.game.step(u.state, x)
    if nxt is None:
        raise NotEnabled(f"{x} is not enabled after {u.trace}")
    return Play(u.game, Trace(u.game.alphabet, u.trace.word + (x,)), nxt)


def replay(g: Game, word: Iterable[str]) -> State | None:
    """Global state reached along ``word``, or None if it is not a play."""
    state = g.initial_state
    for a in word:
        state = g.step(state, a)
        if state is None:
            return None
    return state


def play_of(g: Game, u: Trace) -> Play:
    state = replay(g, u.word)
    if state is None:
        raise NotEnabled(f"{u} is not a play")
    return Play(g, u, state)


def successors(u: Play) -> Iterator[Play]:
    g = u.game
    for a in g.actions:
        nxt = g.step(u.state, a)
        if nxt is not None:
            yield Play(g, Trace(g.alphabet, u.trace.word + (a,)), nxt)


def enumerate_plays(g: Game, max_len: int, start: Play | None = None) -> list[Play]:
    """All plays of length at most ``max_len`` (extending ``start``), short-lex sorted."""
    if max_len < 0:
        raise ValueError("max_len must be nonnegative")
    root = start if start is not None else initial_play(g)
    limit = len(root) + max_len if start is not None else max_len
    seen = {root.trace: root}
    layer = [root]
    while layer:
        nxt = []
        for u in layer:
            if len(u) >= limit:
                continue
            for w in successors(u):
                if w.trace not in seen:
                    seen[w.trace] = w
                    nxt.append(w)
        layer = nxt
    return sorted(seen.values(), key=lambda w: w.trace.sort_key())


def process_view(u: Play | Trace, p: str, semantics: str = LITERAL) -> Trace:
    """``view_p(u) = view_{A_p}(u)``."""
    trace = u.trace if isinstance(u, Play) else u
    return view(trace, trace.alphabet.process_letters(p), check_semantics(semantics))


# ---------------------------------------------------------------- .zgame I/O


def parse_game(text: str) -> Game:
    """Parse the line-oriented ``.zgame`` format."""
    processes: list[str] = []
    states: dict[str, list[str]] = {}
    initial: dict[str, str] = {}
    final: dict[str, list[str]] = {}
    domains: dict[str, list[str]] = {}
    ctrl: list[str] = []
    trans: dict[str, dict[State, State]] = {}
    order: list[str] | None = None
    ordering: list[tuple[str, str]] = []
    section = 0  # 0 processes, 1 actions, 2 transitions

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kw = tok[0]
        if kw == "alphabetorder":
            if order is not None:
                raise GameSyntaxError(lineno, "alphabetorder given twice")
            order = tok[1:]
        elif kw == "process":
            if section > 0:
                raise SemanticError(f"line {lineno}: process declared after actions")
            _parse_process(tok, lineno, processes, states, initial, final)
        elif kw == "action":
            if section > 1:
                raise SemanticError(f"line {lineno}: action declared after transitions")
            section = 1
            if len(tok) < 5 or tok[2] != "dom" or tok[-1] not in ("ctrl", "env"):
                raise GameSyntaxError(lineno, "expected 'action <name> dom <pid>... ctrl|env'")
            name, dom = tok[1], tok[3:-1]
            if name in domains:
                raise SemanticError(f"line {lineno}: action {name} declared twice")
            for p in dom:
                if p not in states:
                    raise SemanticError(f"line {lineno}: unknown process {p} in domain of {name}")
            if len(set(dom)) != len(dom):
                raise SemanticError(f"line {lineno}: repeated process in domain of {name}")
            domains[name] = dom
            if tok[-1] == "ctrl":
                ctrl.append(name)
        elif kw == "trans":
            section = 2
            _parse_trans(tok, lineno, processes, states, domains, trans)
        elif kw == "order":
            if len(tok) != 4 or tok[2] != "<=":
                raise GameSyntaxError(lineno, "expected 'order <pid> <= <pid>'")
            for p in (tok[1], tok[3]):
                if p not in states:
                    raise SemanticError(f"line {lineno}: unknown process {p} in order")
            ordering.append((tok[1], tok[3]))
        else:
            raise GameSyntaxError(lineno, f"unknown keyword {kw!r}")

    if not processes:
        raise SemanticError("no process declared")
    if order is not None:
        if sorted(order) != sorted(domains) or len(set(order)) != len(order):
            raise SemanticError("alphabetorder must list every action exactly once")
    for a in domains:
        if not domains[a]:
            raise SemanticError(f"action {a} has an empty domain")
    return Game(processes, states, initial, final, domains, ctrl, trans, order, ordering)


def _parse_process(tok, lineno, processes, states, initial, final) -> None:
    try:
        i_states = tok.index("states")
        i_init = tok.index("init")
        i_final = tok.index("final")
    except ValueError:
        raise GameSyntaxError(lineno, "expected 'process <id> states <s>... init <s> final <s>...'") from None
    if i_states != 2 or not (i_states < i_init < i_final) or i_final != i_init + 2:
        raise GameSyntaxError(lineno, "expected 'process <id> states <s>... init <s> final <s>...'")
    pid = tok[1]
    if pid in states:
        raise SemanticError(f"line {lineno}: process {pid} declared twice")
    sts = tok[3:i_init]
    if not sts or len(set(sts)) != len(sts):
        raise SemanticError(f"line {lineno}: process {pid} needs distinct states")
    init = tok[i_init + 1]
    fin = tok[i_final + 1:]
    for s in [init, *fin]:
        if s not in sts:
            raise SemanticError(f"line {lineno}: unknown state {s} of process {pid}")
    processes.append(pid)
    states[pid] = sts
    initial[pid] = init
    final[pid] = fin


def _parse_assignments(items, lineno) -> dict[str, str]:
    out = {}
    for it in items:
        p, sep, s = it.partition(":")
        if not sep or not p or not s:
            raise GameSyntaxError(lineno, f"expected <pid>:<state>, got {it!r}")
        if p in out:
            raise SemanticError(f"line {lineno}: process {p} assigned twice")
        out[p] = s
    return out


def _parse_trans(tok, lineno, processes, states, domains, trans) -> None:
    if len(tok) < 4 or "->" not in tok:
        raise GameSyntaxError(lineno, "expected 'trans <action> <pid>:<state>... -> <pid>:<state>...'")
    name = tok[1]
    arrow = tok.index("->")
    if name not in domains:
        raise SemanticError(f"line {lineno}: unknown action {name}")
    pre = _parse_assignments(tok[2:arrow], lineno)
    post = _parse_assignments(tok[arrow + 1:], lineno)
    dom = set(domains[name])
    for side in (pre, post):
        for p in side:
            if p not in states:
                raise SemanticError(f"line {lineno}: unknown process {p}")
        if set(side) != dom:
            raise SemanticError(f"line {lineno}: transition of {name} must range exactly over its domain")
        for p, s in side.items():
            if s not in states[p]:
                raise SemanticError(f"line {lineno}: unknown state {s} of process {p}")
    ordered = [p for p in processes if p in dom]
    key = tuple(pre[p] for p in ordered)
    val = tuple(post[p] for p in ordered)
    table = trans.setdefault(name, {})
    if key in table:
        if table[key] == val:
            raise SemanticError(f"line {lineno}: duplicate transition for {name}")
        raise SemanticError(f"line {lineno}: nondeterministic transitions for {name}")
    table[key] = val


def format_game(g: Game) -> str:
    lines = ["alphabetorder " + " ".join(g.actions)]
    for p in g.processes:
        fin = " ".join(s for s in g.states[p] if s in g.final[p])
        lines.append(
            f"process {p} states {' '.join(g.states[p])} init {g.initial[p]} final {fin}".rstrip()
        )
    for a in g.actions:
        kind = "ctrl" if a in g.controllable else "env"
        lines.append(f"action {a} dom {' '.join(g.dom_tuple[a])} {kind}")
    for a in g.actions:
        dt = g.dom_tuple[a]
        for pre in sorted(g.transitions[a]):
            post = g.transitions[a][pre]
            lhs = " ".join(f"{p}:{s}" for p, s in zip(dt, pre))
            rhs = " ".join(f"{p}:{s}" for p, s in zip(dt, post))
            lines.append(f"trans {a} {lhs} -> {rhs}")
    for p, q in g.ordering:
        lines.append(f"order {p} <= {q}")
    return "\n".join(lines) + "\n"


def load_game(path) -> Game:
    with open(path, encoding="utf-8") as fh:
        return parse_game(fh.read())
