"""Distributed synthesis toolkit for Zielonka games with causal memory."""

from .bounds import BoundReport, bound_K, bound_series_parallel
from .classify import (
    BroadcastCaps,
    check_dag_condition,
    check_k_communicating,
    check_process_ordering,
    check_triangulated,
    classify_series_parallel,
    decide_broadcast_game,
    is_well_ordered_broadcast,
    process_closure,
)
from .errors import (
    AlphabetMismatch,
    CausalSynthError,
    GameSyntaxError,
    IncompleteOrder,
    InvalidCertificate,
    InvalidOrdering,
    NotEnabled,
    NotPrime,
    NotWinning,
    SemanticError,
    TooLong,
    UnknownLetter,
    UnknownProcess,
)
from .game import Game, Play, enumerate_plays, format_game, load_game, parse_game, process_view
from .ordering import ProcessOrdering
from .shortcuts import ThreadCertificate, find_useless_threads, is_broadcast, reduce, take_shortcut
from .strategy import Strategy, Verdict, duration, explore, format_strategy, load_strategy, parse_strategy
from .synthesis import SynthesisConfig, certify, synthesize
from .traces import (
    CAUSAL,
    LITERAL,
    DependencyAlphabet,
    Trace,
    concat,
    is_prime,
    is_prime_for,
    letter_count,
    linearizations,
    normalize,
    prefix_residual,
    view,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
