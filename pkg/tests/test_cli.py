import json
import math

import numpy as np
import pytest

from rspfl.cli import main
from rspfl.fileio import InstanceFormatError, parse_instance, read_instance, write_instance
from rspfl.flp import alg_solve, opt_exact


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_solve_round_trip(tmp_path, capsys):
    path = tmp_path / "inst.json"
    code, _, _ = run(capsys, "gen", "--n", "7", "--equal-cost", "0.2", "--seed", "4",
                     "--out", str(path))
    assert code == 0
    obj = json.loads(path.read_text())
    assert obj["n"] == 7 and len(obj["weights"]) == 21
    inst = read_instance(path)
    code, out, _ = run(capsys, "solve", "--instance", str(path))
    assert code == 0
    sol = json.loads(out)
    assert sol["alg"]["total"] == alg_solve(inst).total
    assert sol["opt"]["total"] == opt_exact(inst).total
    assert sol["opt"]["open"] == list(opt_exact(inst).open)
    # solving the generated instance equals solving from the same flags directly
    code, out2, _ = run(capsys, "solve", "--n", "7", "--equal-cost", "0.2", "--seed", "4")
    assert out2 == out


def test_instance_text_round_trip_exact():
    inst, w = parse_instance(json.dumps({"n": 3, "weights": [0.1, 0.7, 0.3],
                                         "costs": [2.0, 1.0, 3.0]}))
    assert list(inst.costs.f) == [1.0, 2.0, 3.0]
    assert inst.metric.d[0, 2] == pytest.approx(0.4)
    back, w2 = parse_instance(write_instance(inst, weights=w))
    assert back.metric.d.tobytes() == inst.metric.d.tobytes()
    back2, none = parse_instance(write_instance(inst))
    assert none is None and back2.metric.d.tobytes() == inst.metric.d.tobytes()


def test_distances_variant_rejects_asymmetry():
    text = json.dumps({"n": 3, "distances": [[0, 1, 2], [1, 0, 1.5], [2.5, 1.5, 0]],
                       "costs": [1, 1, 1]})
    with pytest.raises(InstanceFormatError, match=r"distances\[0\]\[2\].*symmetry"):
        parse_instance(text, "bad.json")


def test_distances_variant_rejects_triangle():
    text = json.dumps({"n": 3, "distances": [[0, 1, 3], [1, 0, 1], [3, 1, 0]],
                       "costs": [1, 1, 1]})
    with pytest.raises(InstanceFormatError, match="triangle"):
        parse_instance(text)


@pytest.mark.parametrize("obj,field", [
    ({"n": 5, "weights": [1.0] * 9, "costs": [1] * 5}, "weights"),
    ({"n": 3, "weights": [1.0, -1.0, 1.0], "costs": [1] * 3}, r"weights\[1\]"),
    ({"n": 3, "weights": [1.0] * 3, "costs": [1, 1]}, "costs"),
    ({"weights": [1.0], "costs": [1, 1]}, "'n'"),
    ({"n": 2, "costs": [1, 1]}, "weights"),
    ({"n": 1.5, "weights": [1.0], "costs": [1, 1]}, "'n'"),
])
def test_instance_field_errors(obj, field):
    with pytest.raises(InstanceFormatError, match=field):
        parse_instance(json.dumps(obj))


def test_bad_json_location():
    with pytest.raises(InstanceFormatError, match="line 2"):
        parse_instance('{"n": 3,\n "weights": [1, 2,, 3]}')


def test_cli_rejects_bad_instance_with_exit_2(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"n": 5, "weights": [1.0] * 9, "costs": [1] * 5}))
    code, out, err = run(capsys, "solve", "--instance", str(p))
    assert code == 2 and out == ""
    assert "weights" in err and "expected 10" in err
    code, _, err = run(capsys, "solve", "--instance", str(tmp_path / "missing.json"))
    assert code == 2 and "missing.json" in err


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["gen", "--n", "5"],
    ["gen", "--equal-cost", "0.1"],
    ["gen", "--n", "5", "--equal-cost", "-1"],
    ["gen", "--n", "x", "--equal-cost", "0.1"],
    ["verify", "--n", "5", "--equal-cost", "0.1", "--alpha", "0.1"],
    ["verify", "--n", "5,6", "--equal-cost", "0.1"],
    ["experiment", "--n", "5", "--equal-cost", "0.1", "--reps", "0"],
    ["bounds", "--n", "5", "--equal-cost", "0.1", "--z-grid", "0:1"],
    ["sweep", "--equal-cost", "0.1"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_costs_file(tmp_path, capsys):
    p = tmp_path / "c.txt"
    p.write_text("# costs\n0.3\n0.1\n0.2\n0.4\n")
    code, out, _ = run(capsys, "solve", "--n", "4", "--costs", str(p), "--seed", "1")
    assert code == 0
    assert json.loads(out)["alg"]["open"][0] == 0
    code, _, err = run(capsys, "solve", "--n", "5", "--costs", str(p))
    assert code == 2 and "expected 5" in err
    q = tmp_path / "c.json"
    q.write_text("[0.3, 0.1]")
    assert run(capsys, "solve", "--n", "2", "--costs", str(q))[0] == 0
    q.write_text("[0.3, -0.1]")
    assert run(capsys, "solve", "--n", "2", "--costs", str(q))[0] == 2


def test_solve_csv(capsys):
    code, out, _ = run(capsys, "solve", "--n", "5", "--equal-cost", "0.3", "--format", "csv")
    lines = out.strip().splitlines()
    assert lines[0] == "solver,open,opening_cost,connection_cost,total"
    assert [ln.split(",")[0] for ln in lines[1:]] == ["alg", "opt"]


def test_bounds_finite(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "12", "--equal-cost", "0.0833333")
    assert code == 0
    obj = json.loads(out)
    assert math.isfinite(obj["report"]["theorem2_value"])
    assert obj["report"]["kappa"] == 12
    assert len(obj["opt_tail_bound"]) == 20


def test_bounds_single_k(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "8", "--equal-cost", "0.1", "--k", "2",
                       "--format", "csv")
    rows = out.strip().splitlines()
    assert len(rows) == 2 and rows[1].startswith("2,")
    assert run(capsys, "bounds", "--n", "8", "--equal-cost", "0.1", "--k", "8")[0] == 2


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "--n", "10", "--equal-cost", "0.3", "--reps", "20000",
                       "--seed", "7")
    assert code == 0, json.loads(out)["verdicts"]


def test_experiment_kinds(capsys, tmp_path):
    code, out, _ = run(capsys, "experiment", "--n", "6", "--equal-cost", "0.2", "--reps", "200")
    assert code == 0
    assert json.loads(out)["verdicts"]["joint_event"]
    out_path = tmp_path / "r.csv"
    code, out, _ = run(capsys, "experiment", "--kind", "bounds", "--n", "5", "--equal-cost",
                       "0.2", "--reps", "200", "--format", "csv", "--out", str(out_path))
    assert code == 0
    assert out_path.read_text().startswith("rep,seed,ALG,OPT,ratio\n")
    assert "PASS" in out  # summary table on stdout when --out is used


def test_verdict_failure_exit_1(capsys, monkeypatch):
    import rspfl.cli as cli
    orig = cli.run_distribution_suite

    def failing(cfg):
        res = orig(cfg)
        res.verdicts["forced"] = False
        return res

    monkeypatch.setattr(cli, "run_distribution_suite", failing)
    code, out, _ = run(capsys, "verify", "--n", "5", "--equal-cost", "0.5", "--reps", "20")
    assert code == 1
    assert json.loads(out)["passed"] is False


COMMANDS = [
    ["gen", "--n", "9", "--equal-cost", "0.2", "--seed", "11"],
    ["solve", "--n", "9", "--equal-cost", "0.2", "--seed", "11"],
    ["verify", "--n", "7", "--equal-cost", "0.3", "--reps", "300", "--seed", "2"],
    ["bounds", "--n", "9", "--equal-cost", "0.2", "--format", "csv"],
    ["experiment", "--n", "7", "--equal-cost", "0.2", "--reps", "150", "--seed", "5"],
    ["experiment", "--kind", "bounds", "--n", "6", "--equal-cost", "0.2", "--reps", "100"],
    ["experiment", "--kind", "distribution", "--n", "6", "--equal-cost", "0.3", "--reps", "100"],
    ["sweep", "--n", "5,7", "--equal-cost", "1", "--reps", "80", "--format", "csv"],
]


@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: " ".join(a[:3]))
def test_byte_identical_reruns(capsys, argv):
    c1, o1, _ = run(capsys, *argv)
    c2, o2, _ = run(capsys, *argv, "--threads", "8")
    c3, o3, _ = run(capsys, *argv, "--threads", "1")
    assert c1 == c2 == c3
    assert o1 == o2 == o3
    assert o1


def test_float_precision_in_json(capsys):
    _, out, _ = run(capsys, "gen", "--n", "3", "--equal-cost", "0.1", "--seed", "1")
    obj = json.loads(out)
    w = np.random.default_rng(__import__("rspfl").derive_seed(1))
    expected = -np.log(1.0 - w.random(3))
    assert np.array_equal(np.array(obj["weights"]), expected)
