"""Mazurkiewicz traces over a distributed alphabet.

A trace is stored as its lexicographically least linearization with
respect to the alphabet's letter order, so equality and hashing reduce to
tuple comparison.  All operations work on that representative directly and
never enumerate the equivalence class, except :func:`linearizations`.
"""

from __future__ import annotations

from collections import deque
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import AlphabetMismatch, TooLong, UnknownLetter, UnknownProcess

LITERAL = "literal"
CAUSAL = "causal"
SEMANTICS = (LITERAL, CAUSAL)

EMPTY_TOKEN = "-"


def check_semantics(semantics: str) -> str:
    if semantics not in SEMANTICS:
        raise ValueError(f"unknown view semantics {semantics!r}")
    return semantics


class DependencyAlphabet:
    """Letters with process domains; two letters conflict iff domains meet.

    Parameters
    ----------
    domains : mapping
        ``letter -> iterable of process ids``.  Iteration order of the
        mapping is the declaration order.
    order : sequence of letters, optional
        Total order used for normal forms.  Defaults to declaration order.
    processes : sequence of process ids, optional
        Process universe and its order.  Defaults to the processes
        mentioned in ``domains`` in first-seen order.
    """

    __slots__ = ("letters", "domain_of", "processes", "_index", "_dep", "_hash")

    def __init__(
        self,
        domains: Mapping[str, Iterable[str]],
        order: Sequence[str] | None = None,
        processes: Sequence[str] | None = None,
    ):
        doms = {a: frozenset(ps) for a, ps in domains.items()}
        for a, ps in doms.items():
            if not ps:
                raise ValueError(f"letter {a!r} has an empty domain")
        letters = tuple(order) if order is not None else tuple(doms)
        if sorted(letters) != sorted(doms) or len(set(letters)) != len(letters):
            raise ValueError("letter order must list every letter exactly once")
        if processes is None:
            seen: dict[str, None] = {}
            for a in doms:
                for p in sorted(doms[a]):
                    seen.setdefault(p, None)
            processes = tuple(seen)
        processes = tuple(processes)
        for a, ps in doms.items():
            missing = ps.difference(processes)
            if missing:
                raise UnknownProcess(f"letter {a!r} uses unknown processes {sorted(missing)}")
        self.letters: tuple[str, ...] = letters
        self.domain_of: dict[str, frozenset[str]] = {a: doms[a] for a in letters}
        self.processes: tuple[str, ...] = processes
        self._index = {a: i for i, a in enumerate(letters)}
        self._dep = {
            a: frozenset(b for b in letters if doms[a] & doms[b]) for a in letters
        }
        self._hash = hash((letters, tuple(sorted((a, tuple(sorted(d))) for a, d in doms.items())), processes))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, DependencyAlphabet):
            return NotImplemented
        return (
            self.letters == other.letters
            and self.domain_of == other.domain_of
            and self.processes == other.processes
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        doms = ", ".join(f"{a}:{{{','.join(sorted(self.domain_of[a]))}}}" for a in self.letters)
        return f"DependencyAlphabet({doms})"

    def index(self, letter: str) -> int:
        try:
            return self._index[letter]
        except KeyError:
            raise UnknownLetter(f"unknown letter {letter!r}") from None

    def check_letters(self, letters: Iterable[str]) -> frozenset[str]:
        letters = frozenset(letters)
        for a in letters:
            if a not in self._index:
                raise UnknownLetter(f"unknown letter {a!r}")
        return letters

    def check_process(self, p: str) -> str:
        if p not in self.processes:
            raise UnknownProcess(f"unknown process {p!r}")
        return p

    def dependent(self, a: str, b: str) -> bool:
        return b in self._dep[a]

    def independent(self, a: str, b: str) -> bool:
        return b not in self._dep[a]

    def dependent_letters(self, letters: Iterable[str]) -> frozenset[str]:
        """All letters in conflict with at least one letter of ``letters``."""
        out: set[str] = set()
        for a in letters:
            out |= self._dep[a]
        return frozenset(out)

    def process_letters(self, p: str) -> frozenset[str]:
        """``A_p``: the letters whose domain contains ``p``."""
        self.check_process(p)
        return frozenset(a for a in self.letters if p in self.domain_of[a])

    def sort_letters(self, letters: Iterable[str]) -> tuple[str, ...]:
        return tuple(sorted(letters, key=self.index))

    def trace(self, word: Iterable[str] | str = ()) -> "Trace":
        return normalize(word, self)

    @property
    def empty(self) -> "Trace":
        return Trace._make(self, ())


class Trace:
    """Canonical representative of a trace.  Immutable."""

    __slots__ = ("alphabet", "word", "_hash")

    def __init__(self, alphabet: DependencyAlphabet, word: Iterable[str] = ()):
        nf = _normal_form(tuple(word), alphabet)
        self.alphabet = alphabet
        self.word: tuple[str, ...] = nf
        self._hash = hash(nf)

    @classmethod
    def _make(cls, alphabet: DependencyAlphabet, nf: tuple[str, ...]) -> "Trace":
        t = cls.__new__(cls)
        t.alphabet = alphabet
        t.word = nf
        t._hash = hash(nf)
        return t

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Trace):
            return NotImplemented
        return self.word == other.word and self.alphabet == other.alphabet

    def __hash__(self) -> int:
        return self._hash

    def __len__(self) -> int:
        return len(self.word)

    def __iter__(self) -> Iterator[str]:
        return iter(self.word)

    def __bool__(self) -> bool:
        return bool(self.word)

    def __lt__(self, other: "Trace") -> bool:
        return self.sort_key() < other.sort_key()

    def __repr__(self) -> str:
        return f"Trace({format_trace(self)!r})"

    def __str__(self) -> str:
        return format_trace(self)

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        """Short-lex key: length first, then letter indices."""
        idx = self.alphabet._index
        return (len(self.word), tuple(idx[a] for a in self.word))

    def lex_key(self) -> tuple[int, ...]:
        idx = self.alphabet._index
        return tuple(idx[a] for a in self.word)

    @property
    def letters(self) -> frozenset[str]:
        return frozenset(self.word)

    @property
    def domain(self) -> frozenset[str]:
        dom = self.alphabet.domain_of
        out: set[str] = set()
        for a in self.word:
            out |= dom[a]
        return frozenset(out)

    def last(self) -> str | None:
        """The unique maximal letter when the trace is prime, else None."""
        m = maximal_letters(self)
        return m[0] if len(m) == 1 else None


def _normal_form(word: tuple[str, ...], alphabet: DependencyAlphabet) -> tuple[str, ...]:
    idx = alphabet._index
    for a in word:
        if a not in idx:
            raise UnknownLetter(f"unknown letter {a!r}")
    n = len(word)
    if n < 2:
        return word
    dep = alphabet._dep
    # blockers[i]: number of earlier unplaced positions conflicting with i
    blockers = [0] * n
    for j in range(n):
        dj = dep[word[j]]
        for i in range(j):
            if word[i] in dj:
                blockers[j] += 1
    placed = [False] * n
    out = []
    for _ in range(n):
        best = -1
        for i in range(n):
            if not placed[i] and blockers[i] == 0:
                if best < 0 or idx[word[i]] < idx[word[best]]:
                    best = i
        placed[best] = True
        a = word[best]
        out.append(a)
        da = dep[a]
        for j in range(best + 1, n):
            if not placed[j] and word[j] in da:
                blockers[j] -= 1
    return tuple(out)


def parse_word(text: str | Iterable[str]) -> tuple[str, ...]:
    """Split a textual trace.  ``"-"`` and ``""`` denote the empty trace."""
    if isinstance(text, str):
        tokens = text.replace(",", " ").split()
    else:
        tokens = list(text)
    if tokens == [EMPTY_TOKEN]:
        return ()
    return tuple(tokens)


def format_trace(u: Trace) -> str:
    return " ".join(u.word) if u.word else EMPTY_TOKEN


def normalize(word: Iterable[str] | str, alphabet: DependencyAlphabet) -> Trace:
    """Trace of ``word``.  A string is read letter by letter when every
    character is a letter, otherwise as whitespace-separated tokens."""
    if isinstance(word, str):
        if all(ch in alphabet._index for ch in word):
            word = tuple(word)
        else:
            word = parse_word(word)
    return Trace(alphabet, word)


def _same(u: Trace, v: Trace) -> None:
    if u.alphabet is not v.alphabet and u.alphabet != v.alphabet:
        raise AlphabetMismatch("traces over different alphabets")


def concat(u: Trace, v: Trace) -> Trace:
    _same(u, v)
    if not v.word:
        return u
    if not u.word:
        return v
    return Trace(u.alphabet, u.word + v.word)


def append(u: Trace, a: str) -> Trace:
    return Trace(u.alphabet, u.word + (a,))


def prefix_residual(u: Trace, v: Trace) -> Trace | None:
    """The unique ``w`` with ``u w = v``, or None when ``u`` is no prefix."""
    _same(u, v)
    rest = list(v.word)
    dep = v.alphabet._dep
    for a in u.word:
        da = dep[a]
        for k, b in enumerate(rest):
            if b == a:
                break
            if b in da:
                return None
        else:
            return None
        del rest[k]
    return Trace(v.alphabet, rest)


def is_prefix(u: Trace, v: Trace) -> bool:
    return prefix_residual(u, v) is not None


def _keep_mask(word: tuple[str, ...], alphabet: DependencyAlphabet, targets: frozenset[str]) -> list[bool]:
    dep = alphabet._dep
    n = len(word)
    keep = [False] * n
    for i in range(n - 1, -1, -1):
        a = word[i]
        if a in targets:
            keep[i] = True
            continue
        da = dep[a]
        for j in range(i + 1, n):
            if keep[j] and word[j] in da:
                keep[i] = True
                break
    return keep


def view_split(u: Trace, letters: Iterable[str], semantics: str = LITERAL) -> tuple[Trace, Trace]:
    """``(view, residual)`` with ``u = view . residual``."""
    check_semantics(semantics)
    alphabet = u.alphabet
    B = alphabet.check_letters(letters)
    targets = alphabet.dependent_letters(B) if semantics == LITERAL else B
    keep = _keep_mask(u.word, alphabet, targets)
    head = tuple(a for a, k in zip(u.word, keep) if k)
    tail = tuple(a for a, k in zip(u.word, keep) if not k)
    return Trace(alphabet, head), Trace(alphabet, tail)


def view(u: Trace, letters: Iterable[str], semantics: str = LITERAL) -> Trace:
    """B-view of ``u``.

    ``literal``: the shortest prefix whose residual is independent of every
    letter of ``letters``.  ``causal``: the least prefix containing every
    event labelled in ``letters``.
    """
    return view_split(u, letters, semantics)[0]


def maximal_letters(u: Trace) -> tuple[str, ...]:
    """Labels of the maximal events, in letter order."""
    word = u.word
    dep = u.alphabet._dep
    out = []
    for i, a in enumerate(word):
        da = dep[a]
        if not any(word[j] in da for j in range(i + 1, len(word))):
            out.append(a)
    return u.alphabet.sort_letters(out)


def is_prime(u: Trace) -> bool:
    """True iff ``u`` has exactly one maximal event."""
    return len(maximal_letters(u)) == 1


def is_prime_for(u: Trace, letters: Iterable[str]) -> bool:
    """True iff every linearization of ``u`` ends with a letter of ``letters``.

    The empty trace is never B-prime.
    """
    B = u.alphabet.check_letters(letters)
    if not u.word:
        return False
    return all(a in B for a in maximal_letters(u))


def independent_of(u: Trace, letters: Iterable[str]) -> bool:
    """``u I B``: every letter of ``u`` commutes with every letter of ``B``."""
    B = u.alphabet.check_letters(letters)
    dep = u.alphabet._dep
    return all(not (dep[a] & B) for a in set(u.word))


def letter_count(u: Trace, p: str) -> int:
    """``|u|_p``: number of letters of ``u`` whose domain contains ``p``."""
    u.alphabet.check_process(p)
    dom = u.alphabet.domain_of
    return sum(1 for a in u.word if p in dom[a])


def linearizations(u: Trace, cap: int = 10) -> frozenset[tuple[str, ...]]:
    """Every word of the class of ``u``, closed under adjacent independent swaps."""
    if len(u) > cap:
        raise TooLong(f"trace of length {len(u)} exceeds cap {cap}")
    start = u.word
    seen = {start}
    queue = deque([start])
    dep = u.alphabet._dep
    while queue:
        w = queue.popleft()
        for i in range(len(w) - 1):
            if w[i + 1] not in dep[w[i]]:
                s = w[:i] + (w[i + 1], w[i]) + w[i + 2:]
                if s not in seen:
                    seen.add(s)
                    queue.append(s)
    return frozenset(seen)


def prefixes(u: Trace) -> list[Trace]:
    """All prefixes of ``u`` (downward-closed event sets), in short-lex order."""
    word = u.word
    dep = u.alphabet._dep
    n = len(word)
    preds = [
        [j for j in range(i) if word[j] in dep[word[i]]] for i in range(n)
    ]
    out: list[Trace] = []

    def rec(i: int, chosen: list[bool]) -> None:
        if i == n:
            out.append(Trace(u.alphabet, (word[k] for k in range(n) if chosen[k])))
            return
        chosen.append(False)
        rec(i + 1, chosen)
        chosen.pop()
        if all(chosen[j] for j in preds[i]):
            chosen.append(True)
            rec(i + 1, chosen)
            chosen.pop()

    rec(0, [])
    return sorted(set(out), key=Trace.sort_key)


def is_connected(letters: Iterable[str], alphabet: DependencyAlphabet) -> bool:
    """Whether ``letters`` induce a connected subgraph of the dependence graph."""
    letters = list(letters)
    if not letters:
        return False
    todo = {letters[0]}
    seen = {letters[0]}
    rest = set(letters)
    while todo:
        a = todo.pop()
        for b in rest - seen:
            if alphabet.dependent(a, b):
                seen.add(b)
                todo.add(b)
    return seen == rest


def connected_letter_sets(alphabet: DependencyAlphabet) -> Iterator[frozenset[str]]:
    """Nonempty letter sets whose dependence graph is connected."""
    for k in range(1, len(alphabet.letters) + 1):
        for combo in combinations(alphabet.letters, k):
            if is_connected(combo, alphabet):
                yield frozenset(combo)
