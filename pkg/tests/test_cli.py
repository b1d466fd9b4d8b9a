import io
import subprocess
import sys

import pytest

from causalsynth.cli import main
from causalsynth.game import load_game, parse_game
from causalsynth.strategy import WINNING, explore, parse_strategy
from conftest import DATA, GOLDENS

G = {n: str(DATA / f"{n}.zgame") for n in ("G1", "G2", "G3", "G4")}
S = {n: str(DATA / f"{n}.zstrat") for n in ("G3_sigma6", "G3_loop", "G1_star", "G2_any")}


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


GOLDEN_RUNS = {
    "synthesize_G1": (0, ["synthesize", G["G1"], "--cap", "3"]),
    "synthesize_G2": (1, ["synthesize", G["G2"], "--cap", "6"]),
    "reduce_G3_sigma6": (0, ["reduce", G["G3"], S["G3_sigma6"], "--cap", "10"]),
    "check_G3_sigma6": (0, ["check", G["G3"], S["G3_sigma6"], "--cap", "10"]),
    "check_G2_any": (1, ["check", G["G2"], S["G2_any"], "--cap", "10"]),
    "check_G3_loop": (3, ["check", G["G3"], S["G3_loop"], "--cap", "5"]),
    "bounds_G1": (0, ["bounds", G["G1"]]),
    "bounds_G3_pool1": (0, ["bounds", G["G3"], "--pool", "1"]),
}


@pytest.mark.parametrize("name", sorted(GOLDEN_RUNS))
def test_goldens(name):
    expected_code, argv = GOLDEN_RUNS[name]
    code, text = run(*argv)
    assert code == expected_code
    assert text == (GOLDENS / f"{name}.txt").read_text()


def test_strategy_output_reparses(games):
    code, text = run("synthesize", G["G1"], "--cap", "3")
    assert code == 0
    s = parse_strategy(text, games["G1"])
    assert explore(s, 3).verdict.kind == WINNING


def test_reduce_output_reparses_and_writes_file(games, tmp_path):
    target = tmp_path / "reduced.zstrat"
    code, text = run("reduce", G["G3"], S["G3_sigma6"], "--cap", "10", "--out", str(target))
    assert code == 0
    s = parse_strategy(target.read_text(), games["G3"])
    assert s == parse_strategy(text, games["G3"])
    assert [str(u.trace) for u in explore(s, 10).maximal] == ["a a t"]


def test_reduce_rejects_non_winning():
    code, text = run("reduce", G["G2"], S["G2_any"], "--cap", "10")
    assert code == 1 and "not winning" in text
    code, _ = run("reduce", G["G3"], S["G3_loop"], "--cap", "5")
    assert code == 3


def test_game_output_reparses():
    for path in G.values():
        code, text = run("game", path)
        assert code == 0 and parse_game(text) == load_game(path)


def test_broadcast_command():
    assert run("broadcast", G["G4"], "--play", "a", "--pool", "3") == (1, "format 1\nbroadcast no witness n\n")
    assert run("broadcast", G["G4"], "--play", "m", "--pool", "1,2") == (0, "format 1\nbroadcast yes\n")


def test_trace_command():
    assert run("trace", G["G1"], "--op", "normalize", "--word", "b a c")[1] == "format 1\nnormalize a b c\n"
    code, text = run("trace", G["G1"], "--op", "prime", "--word", "a b")
    assert code == 1 and text.endswith("prime no\n")
    assert run("trace", G["G1"], "--op", "prime", "--word", "a c")[0] == 0


@pytest.mark.parametrize(
    "argv",
    [
        ["classify", str(DATA / "missing.zgame")],
        ["check", G["G1"], S["G3_sigma6"], "--cap", "5"],
        ["trace", G["G1"], "--op", "normalize", "--word", "z"],
        ["broadcast", G["G4"], "--play", "a n", "--pool", "3"],
        ["bounds", G["G3"], "--pool", "9"],
    ],
)
def test_input_errors_exit_2(argv, capsys):
    code, text = run(*argv)
    assert code == 2 and text == ""
    assert capsys.readouterr().err.startswith("error: ")


def test_malformed_game_exits_2(tmp_path):
    bad = tmp_path / "bad.zgame"
    bad.write_text("process 1 states s init s final s\nfrobnicate\n")
    assert run("classify", str(bad))[0] == 2


def test_subprocess_runs_are_byte_identical():
    argv = [sys.executable, "-m", "causalsynth", "synthesize", G["G1"], "--cap", "3"]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first == second == (GOLDENS / "synthesize_G1.txt").read_bytes()


def test_usage_error_exits_2():
    proc = subprocess.run([sys.executable, "-m", "causalsynth", "check", G["G1"]], capture_output=True)
    assert proc.returncode == 2
