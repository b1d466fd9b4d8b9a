import io
import random
from itertools import combinations

import pytest

from causalsynth.classify import (
    BroadcastCaps,
    broadcast_failures,
    check_dag_condition,
    check_k_communicating,
    check_process_ordering,
    check_triangulated,
    classify_series_parallel,
    decide_broadcast_game,
    find_p4,
    is_well_ordered_broadcast,
    prime_play_domains,
    process_closure,
    tree_dependence,
)
from causalsynth.cli import main
from causalsynth.errors import IncompleteOrder, InvalidOrdering, NotPrime
from causalsynth.game import load_game
from causalsynth.ordering import ProcessOrdering, game_ordering
from causalsynth.traces import DependencyAlphabet
from conftest import DATA, GOLDENS
from generators import random_small_game
from laws import random_alphabet


@pytest.fixture(scope="module")
def extra():
    return {n: load_game(DATA / f"{n}.zgame") for n in ("P4", "TRI", "SQUARE", "UNARY", "CHAIN4")}


def order(g, *pairs):
    return ProcessOrdering(g.processes, pairs)


def tr(g, text):
    return g.alphabet.trace(text)


# ---------------------------------------------------------------- orderings


def test_total_orders_are_process_orderings(games):
    for g in games.values():
        assert check_process_ordering(g, ProcessOrdering.chain(g.processes))
        assert check_process_ordering(g, ProcessOrdering.chain(g.processes[::-1]))


def test_g4_orderings(games):
    g = games["G4"]
    assert check_process_ordering(g, order(g, ("1", "2"), ("3", "2")))
    assert not check_process_ordering(g, order(g))


def test_ordering_must_cover_processes(games):
    g = games["G4"]
    with pytest.raises(IncompleteOrder):
        check_process_ordering(g, ProcessOrdering(["1", "2"], [("1", "2")]))


def test_cyclic_ordering_rejected():
    with pytest.raises(InvalidOrdering):
        ProcessOrdering(["1", "2"], [("1", "2"), ("2", "1")])


def _all_orderings(procs):
    pairs = [(p, q) for p in procs for q in procs if p != q]
    for k in range(len(pairs) + 1):
        for chosen in combinations(pairs, k):
            try:
                yield ProcessOrdering(procs, chosen)
            except InvalidOrdering:
                continue


@pytest.mark.parametrize("name", ["G1", "G2", "G3", "G4", "P4", "TRI", "SQUARE", "UNARY", "CHAIN4"])
def test_connected_sets_agree_with_prime_play_domains(games, extra, name):
    g = games.get(name) or extra[name]
    domains = prime_play_domains(g, 5)
    for ordering in _all_orderings(g.processes):
        direct = all(ordering.maximum(d) is not None for d in domains)
        assert check_process_ordering(g, ordering) == direct


def test_process_closure(games):
    g = games["G4"]
    o = game_ordering(g)
    assert process_closure({"2"}, o) == {"1", "2", "3"}
    assert process_closure(set(), o) == set()
    assert process_closure({"1"}, o) == {"1"}
    for pool in ({"1"}, {"2"}, {"1", "3"}):
        once = process_closure(pool, o)
        assert process_closure(once, o) == once
        assert pool <= once


def test_well_ordered_broadcasts(games):
    g = games["G4"]
    o = game_ordering(g)
    # {1,2} is not closed: 3 sits below 2
    assert not is_well_ordered_broadcast(g, tr(g, "m"), {"1", "2"}, o)
    assert is_well_ordered_broadcast(g, tr(g, "m"), {"1", "2", "3"}, o)
    assert is_well_ordered_broadcast(g, tr(g, "a"), {"1"}, o)
    with pytest.raises(NotPrime):
        is_well_ordered_broadcast(g, tr(g, "an"), {"1", "2", "3"}, o)


def test_broadcast_game_examples(games, extra):
    assert decide_broadcast_game(games["G4"]) == 1
    assert decide_broadcast_game(games["G3"]) == 1
    assert decide_broadcast_game(games["G1"], order(games["G1"], ("1", "2"))) == 1
    assert decide_broadcast_game(extra["SQUARE"]) is None


def test_broadcast_game_needs_valid_ordering(games):
    g = games["G4"]
    with pytest.raises(InvalidOrdering):
        decide_broadcast_game(g, order(g))


def test_broadcast_game_answer_is_reverified(games):
    """Sample plays meeting the hypothesis and find a well-ordered broadcast prefix directly."""
    from causalsynth.game import enumerate_plays
    from causalsynth.traces import concat, is_prime, letter_count, prefix_residual, prefixes

    rng = random.Random(4)
    for name in ("G1", "G4"):
        g = games[name]
        o = game_ordering(g)
        n = decide_broadcast_game(g, o)
        caps = BroadcastCaps.default(g)
        samples = []
        for w in enumerate_plays(g, caps.u + caps.v):
            if not is_prime(w.trace):
                continue
            for u in prefixes(w.trace):
                v = prefix_residual(u, w.trace)
                if v.word and len(u) <= caps.u and len(v) <= caps.v and all(letter_count(v, q) >= n for q in v.domain):
                    samples.append((u, v))
        rng.shuffle(samples)
        for u, v in samples[:50]:
            pool = o.closure(v.domain)
            assert any(
                is_prime(concat(u, vp)) and is_well_ordered_broadcast(g, concat(u, vp), pool, o, caps.w)
                for vp in prefixes(v)
            )
        assert broadcast_failures(g, o, caps) == [] or n > 1


# ---------------------------------------------------------------- series-parallel


def test_t1_decomposition(t1):
    tree = classify_series_parallel(t1)
    assert tree.render(t1) == "sync(par(a,b),c)"


def test_dependency_path_rejected(extra):
    g = extra["P4"]
    assert classify_series_parallel(g) is None
    assert find_p4(g.alphabet) == ("a", "b", "c", "d")


def test_single_letter_is_a_leaf():
    alphabet = DependencyAlphabet({"z": {"1"}})
    tree = classify_series_parallel(alphabet)
    assert tree.kind == "leaf" and tree.render(alphabet) == "z"


def test_decomposition_recomposes_and_matches_p4_search():
    rng = random.Random(12)
    for _ in range(300):
        alphabet = random_alphabet(rng)
        tree = classify_series_parallel(alphabet)
        assert (tree is None) == (find_p4(alphabet) is not None)
        if tree is not None:
            dep = {(a, b) for a in alphabet.letters for b in alphabet.letters if alphabet.dependent(a, b)}
            assert tree_dependence(tree) == dep


# ---------------------------------------------------------------- other classes


def test_k_communicating(games, extra):
    wit = check_k_communicating(games["G1"], 1, 4)
    assert str(wit) == "u=- v=a w=c p=1 q=2"
    assert check_k_communicating(extra["UNARY"], 2, 4) is None
    assert check_k_communicating(games["G1"], 5, 4) is None


def test_dag_condition(games, extra):
    g = games["G4"]
    assert check_dag_condition(g, order(g, ("1", "2"), ("3", "2")))
    assert not check_dag_condition(extra["CHAIN4"], game_ordering(extra["CHAIN4"]))


def test_dag_condition_on_tree_shaped_domains(extra):
    # rooted at 2 with children 1 and 3, every domain is a connected subtree
    g = extra["P4"]
    assert check_dag_condition(g, order(g, ("1", "2"), ("3", "2")))


def test_triangulated(extra):
    assert check_triangulated(extra["TRI"])
    assert not check_triangulated(extra["SQUARE"])
    assert check_triangulated(extra["UNARY"], edges=[])


def test_disconnected_domain_is_not_triangulated(extra):
    # u spans 1 and 4, which no edge joins
    assert not check_triangulated(extra["CHAIN4"], edges=[])


def test_random_games_classify_without_errors():
    rng = random.Random(6)
    for _ in range(20):
        g = random_small_game(rng)
        classify_series_parallel(g)
        check_k_communicating(g, 1, 3)
        check_triangulated(g)


# ---------------------------------------------------------------- golden reports


@pytest.mark.parametrize("name", ["G1", "G4", "P4", "TRI", "SQUARE", "UNARY", "CHAIN4"])
def test_classification_goldens(name):
    out = io.StringIO()
    assert main(["classify", str(DATA / f"{name}.zgame")], out=out) == 0
    assert out.getvalue() == (GOLDENS / f"classify_{name}.txt").read_text()
