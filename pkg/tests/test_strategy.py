import random

import pytest

from causalsynth.errors import SemanticError
from causalsynth.game import enumerate_plays, process_view
from causalsynth.strategy import (
    BOUND_EXCEEDED,
    LOSING,
    UNBOUNDED,
    WINNING,
    Strategy,
    decision,
    duration,
    explore,
    format_strategy,
    is_sigma_linearization,
    is_sigma_play,
    parse_strategy,
)
from causalsynth.traces import CAUSAL, LITERAL, linearizations, prefixes
from conftest import DATA
from generators import random_small_game


def tr(g, text):
    return g.alphabet.trace(text)


def test_decision_uses_defaults(games, sigma_star):
    g = games["G1"]
    assert decision(sigma_star, "1", tr(g, "")) == {"c"}
    assert decision(sigma_star, "1", tr(g, "a")) == {"c"}


def test_environment_actions_always_allowed(games):
    g = games["G2"]
    s = Strategy(g)
    for u in enumerate_plays(g, 3):
        for p in g.processes:
            assert "e" in decision(s, p, u)


def test_environment_actions_never_stored(games):
    s = Strategy(games["G2"], {("1", ""): {"a", "e"}})
    assert s.decisions[("1", tr(games["G2"], ""))] == {"a"}


def test_is_sigma_play(games, sigma_star):
    g = games["G1"]
    assert is_sigma_play(sigma_star, tr(g, "c"))
    assert not is_sigma_play(sigma_star, tr(g, "a"))
    assert is_sigma_play(sigma_star, tr(g, ""))


def test_explore_g1(games, sigma_star):
    ex = explore(sigma_star, 10)
    assert [str(t) for t in ex.traces] == ["-", "c"]
    assert [str(u.trace) for u in ex.maximal] == ["c"]
    assert ex.verdict.kind == WINNING


def test_explore_g2_loses_through_environment(games):
    g = games["G2"]
    s = parse_strategy((DATA / "G2_any.zstrat").read_text(), g)
    v = explore(s, 10).verdict
    assert v.kind == LOSING and "e" in v.witness.letters


def test_explore_g3_loop_exceeds_bound(games):
    s = parse_strategy((DATA / "G3_loop.zstrat").read_text(), games["G3"])
    v = explore(s, 5).verdict
    assert v.kind == BOUND_EXCEEDED
    assert str(v) == "bound-exceeded a a a a a"
    assert duration(s, 5) is UNBOUNDED


def test_durations(games, sigma_star, sigma6):
    assert duration(sigma_star, 10) == 1
    assert duration(sigma6, 10) == 4
    assert [str(u.trace) for u in explore(sigma6, 10).maximal] == ["a a a t"]
    assert duration(Strategy(games["G4"]), 5) == 0


def test_strategy_file_round_trip(games, sigma6, sigma_star):
    for s in (sigma6, sigma_star):
        text = format_strategy(s)
        again = parse_strategy(text, s.game)
        assert again == s
        assert format_strategy(again) == text


def test_mixed_semantics_rejected(games):
    with pytest.raises(SemanticError):
        parse_strategy("semantics causal\nsemantics literal\n", games["G1"])


def test_missing_semantics_rejected(games):
    with pytest.raises(SemanticError):
        parse_strategy("default 1 allow c\n", games["G1"])


def test_duplicate_decision_rejected(games):
    text = "semantics causal\ndecide 1 - allow a\ndecide 1 - allow c\n"
    with pytest.raises(SemanticError):
        parse_strategy(text, games["G1"])


def test_key_must_be_a_view(games):
    # under causal views, process 1 never sees b
    with pytest.raises(SemanticError):
        parse_strategy("semantics causal\ndecide 1 b allow a\n", games["G1"])


def test_key_must_be_a_play(games):
    with pytest.raises(SemanticError):
        parse_strategy("semantics causal\ndecide 1 c a allow a\n", games["G1"])


def _literal_split_strategy(g):
    return Strategy(
        g,
        {("1", ""): {"a"}, ("1", "b"): {"a"}, ("2", ""): {"b"}, ("2", "a"): set()},
        semantics=LITERAL,
    )


def test_literal_views_make_sigma_play_depend_on_linearization(games):
    g = games["G1"]
    s = _literal_split_strategy(g)
    assert is_sigma_linearization(s, ["b", "a"])
    assert not is_sigma_linearization(s, ["a", "b"])
    assert is_sigma_play(s, tr(g, "ab"))


def _random_strategy(rng, g, semantics):
    decisions = {}
    for u in enumerate_plays(g, 3):
        for p in g.processes:
            if rng.random() < 0.6:
                key = process_view(u, p, semantics)
                acts = [a for a in g.process_actions(p) if a in g.controllable]
                decisions[(p, key)] = {a for a in acts if rng.random() < 0.6}
    return Strategy(g, decisions, semantics=semantics)


def test_causal_sigma_plays_do_not_depend_on_linearization():
    rng = random.Random(8)
    for _ in range(40):
        g = random_small_game(rng)
        s = _random_strategy(rng, g, CAUSAL)
        for u in enumerate_plays(g, 6):
            verdicts = {is_sigma_linearization(s, lin) for lin in linearizations(u.trace)}
            assert len(verdicts) == 1


def test_sigma_plays_are_prefix_closed_and_verdicts_stable():
    rng = random.Random(9)
    for _ in range(40):
        g = random_small_game(rng)
        s = _random_strategy(rng, g, CAUSAL)
        ex = explore(s, 6)
        traces = set(ex.traces)
        for t in traces:
            assert all(p in traces for p in prefixes(t))
            assert is_sigma_play(s, t)
        if ex.verdict.kind != BOUND_EXCEEDED:
            assert explore(s, 9).verdict == ex.verdict
        if ex.verdict.kind == WINNING:
            assert all(u.is_final for u in ex.maximal)
