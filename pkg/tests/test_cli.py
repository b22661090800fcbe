import json
import os

import pytest

from oneshot.cli import main

FIX = os.path.join(os.path.dirname(__file__), "fixtures")

GOLDEN_CASES = {
    "solve_classical.json": ["solve", "--null", "null_diag.json", "--alt", "alt_uniform.json", "--epsilon", "0.1"],
    "solve_quantum.json": ["solve", "--null", "rho.json", "--alt", "plus.json", "--epsilon", "0.1"],
    "stein.csv": ["stein", "--null", "stein_null.json", "--alt", "stein_alt.json", "--epsilon", "0.05",
                  "--nmax", "10"],
    "meteor.csv": ["meteor", "--lambdas", "3", "6", "--epsilons", "0.05", "0.01", "--kmax", "6"],
    "meteor.svg": ["meteor", "--lambdas", "3", "6", "--epsilons", "0.05", "--kmax", "6", "--format", "svg"],
    "laser.csv": ["laser", "--g", "6", "--s", "1", "--c", "1", "--n", "5", "--q", "0.2", "--delta", "0.1"],
    "laser.json": ["laser", "--g", "6", "--s", "1", "--c", "1", "--n", "5", "--q", "0.2", "--delta", "0.1",
                   "--format", "json"],
    "design_exact.json": ["design", "--channel", "mix_channel.json", "--star", "star2.json",
                          "--polytope", "on_cap.json"],
    "design_unbounded.json": ["design", "--channel", "identity3.json", "--star", "star3.json",
                              "--polytope", "simplex3.json"],
    "analyze.json": ["analyze", "--data", "data.json", "--null", "null4.json", "--models", "models4.json",
                     "--epsilon", "0.1"],
}


def _resolve(args):
    return [os.path.join(FIX, a) if a.endswith(".json") else a for a in args]


def _run(args, capsys):
    code = main(_resolve(args))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_golden(name, capsys, golden_path, regen_goldens):
    code, out, err = _run(GOLDEN_CASES[name], capsys)
    assert code == 0, err
    path = golden_path(name)
    if regen_goldens:
        with open(path, "w", newline="") as fh:
            fh.write(out)
    with open(path, newline="") as fh:
        assert out == fh.read()


def test_plot_from_csv(tmp_path, capsys):
    table = tmp_path / "m.csv"
    assert main(["meteor", "--kmax", "4", "--out", str(table)]) == 0
    code, out, _ = _run(["plot", "--table", str(table), "--x", "k", "--y", "beta", "--series", "lambda",
                         "epsilon"], capsys)
    assert code == 0
    assert out.count("<polyline") == 6


def test_out_file_matches_stdout(tmp_path, capsys):
    args = GOLDEN_CASES["laser.csv"]
    _, out, _ = _run(args, capsys)
    target = tmp_path / "laser.csv"
    assert main(_resolve(args) + ["--out", str(target)]) == 0
    assert target.read_text() == out


def test_composite_numeric(capsys):
    code, out, _ = _run(["composite", "--nulls", "nulls.json", "--alts", "alts.json", "--epsilon", "0.1"], capsys)
    assert code == 0
    obj = json.loads(out)
    assert obj["beta"] == pytest.approx(0.7917072765545141, abs=1e-6)
    assert obj["gap"] <= 1e-6


def test_inscribed(capsys):
    code, out, _ = _run(["inscribed", "--noise", "noise3.json", "--null", "null3.json", "--energy",
                         "energy3.json", "--budget", "0.8", "--epsilon", "0.1"], capsys)
    assert code == 0
    obj = json.loads(out)
    assert obj["design"]["beta"] == pytest.approx(0.66, abs=1e-9)
    assert obj["design"]["globally_optimal"] is False


def test_gradient_method(capsys):
    code, out, _ = _run(["design", "--channel", "mix_channel.json", "--star", "star2.json", "--polytope",
                         "on_cap.json", "--method", "gradient", "--restarts", "3", "--seed", "1"], capsys)
    assert code == 0
    assert json.loads(out)["best_device"] == pytest.approx([0.4, 0.6], abs=1e-6)


@pytest.mark.parametrize("args", [
    ["solve", "--null", "null_diag.json", "--alt", "alt_uniform.json", "--epsilon", "1.5"],
    ["solve", "--null", "broken.json", "--alt", "alt_uniform.json", "--epsilon", "0.1"],
    ["laser", "--g", "6", "--s", "1", "--c", "1", "--n", "5", "--q", "0.2", "--delta", "0.1", "--powers", "9"],
    ["plot", "--table", "__TABLE__", "--x", "k", "--y", "nope"],
])
def test_validation_exit(args, capsys, tmp_path):
    table = tmp_path / "t.csv"
    table.write_text("k,beta\n0,1\n")
    args = [str(table) if a == "__TABLE__" else a for a in args]
    code, _, err = _run(args, capsys)
    assert code == 2
    assert json.loads(err)["error"] == "validation"


def test_usage_error_exit(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
    assert json.loads(capsys.readouterr().err)["error"] == "validation"


def test_missing_file_exit(capsys):
    code, _, err = _run(["solve", "--null", "does_not_exist.json", "--alt", "alt_uniform.json",
                         "--epsilon", "0.1"], capsys)
    assert code == 3
    assert json.loads(err)["error"] == "io"


def test_solver_failure_exit(monkeypatch, capsys):
    from oneshot import cli
    from oneshot.errors import SolverError

    def boom(*a, **k):
        raise SolverError("no convergence", last_gap=0.5, iterations=200)

    monkeypatch.setattr(cli, "solve_composite", boom)
    code, _, err = _run(["composite", "--nulls", "nulls.json", "--alts", "alts.json", "--epsilon", "0.1"], capsys)
    assert code == 4
    assert json.loads(err)["last_gap"] == 0.5
