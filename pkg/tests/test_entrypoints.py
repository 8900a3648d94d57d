"""Tests of the command line."""
import json
import logging
import math

import pytest

import cevian.adapters.optimizers as optimizers
import cevian.domain.verification.service as verification
import cevian.entrypoints as entrypoints
from cevian.domain.errors import ConvergenceFailure


def _main(command: str) -> int:
    return entrypoints.main(command.split())


def _json(capsys) -> dict | list:
    return json.loads(capsys.readouterr().out)


def test_ratio_at_the_centroid(capsys):
    code = _main("ratio --n 2 --lambda 0.3333333,0.3333333,0.3333334 --format json")
    assert code == entrypoints.EXIT_OK
    report = _json(capsys)
    assert report["cevian_ratio"] == pytest.approx(0.25, abs=1e-12)
    assert report["theorem1_slack"] == pytest.approx(0.0, abs=1e-12)


def test_ratio_of_the_tetrahedron_centroid(capsys):
    code = _main("ratio --n 3 --lambda 0.25,0.25,0.25,0.25 --format json")
    assert code == entrypoints.EXIT_OK
    assert _json(capsys)["cevian_ratio"] == pytest.approx(1 / 27)


def test_ratio_at_the_golden_maximizer(capsys):
    _main("ratio --n 2 --lambda 0.381966,0.381966,0.236068 --format json")
    report = _json(capsys)
    assert report["corner_ratios"][2] == pytest.approx(0.0901699, abs=1e-7)
    assert report["theorem2_slack"] >= 0.0


def test_ratio_renormalizes(capsys, caplog):
    with caplog.at_level(logging.WARNING):
        code = _main("ratio --n 2 --lambda 1,1,2 --format json")
    assert code == entrypoints.EXIT_OK
    assert _json(capsys)["lambda"] == pytest.approx([0.25, 0.25, 0.5])
    assert "renormalizing" in caplog.text


def test_ratio_errors(capsys):
    assert entrypoints.main(["ratio", "--n", "2", "--lambda", "0,0.5,0.5"]) == 3
    assert entrypoints.main(["ratio", "--n", "2", "--lambda", "0.5,0.5"]) == 2
    assert entrypoints.main(["ratio", "--n", "2", "--lambda", "a,b,c"]) == 2
    assert entrypoints.main(["ratio", "--n", "1", "--lambda", "0.5,0.5"]) == 2
    assert capsys.readouterr().out == ""


def test_ratio_text_output(capsys):
    entrypoints.main(["ratio", "--n", "3", "--lambda", "0.1,0.2,0.3,0.4"])
    lines = capsys.readouterr().out.splitlines()
    assert [line.split()[0] for line in lines] == list(entrypoints.RATIO_COLUMNS)


def test_constants_csv(capsys):
    code = _main("constants --n-min 2 --n-max 10 --format csv")
    assert code == entrypoints.EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == (
        "n,theta,theta_cf,theta_hyp,f_theta,log_f_theta,paper_eq3_value,"
        "metallic,metallic_cf,metallic_hyp"
    )
    assert len(lines) == 10
    first = dict(zip(lines[0].split(","), map(float, lines[1].split(","))))
    assert first["theta"] == pytest.approx(0.38196601, abs=1e-8)
    assert first["f_theta"] == pytest.approx(0.09016994, abs=1e-8)
    for line in lines[1:]:
        row = dict(zip(lines[0].split(","), map(float, line.split(","))))
        assert abs(row["theta_cf"] - row["theta"]) <= 1e-10


def test_constants_bad_range():
    assert entrypoints.main(["constants", "--n-min", "5", "--n-max", "3"]) == 2
    assert entrypoints.main(["constants", "--n-min", "1"]) == 2
    assert entrypoints.main(["constants", "--depth", "0"]) == 2


def test_verify_passes(capsys):
    code = _main(
        "verify --suite theorem1 --n 2 --trials 300 --seed 42 --format json"
    )
    assert code == entrypoints.EXIT_OK
    report = _json(capsys)
    assert report["passed"] is True
    assert report["violations"] == []
    assert report["bound"] == 0.25
    assert report["max_ratio_observed"] <= 0.25


def test_verify_violations(capsys):
    code = _main("verify --suite eq2 --n 2 --trials 20 --tol 1e-300 --format csv")
    assert code == entrypoints.EXIT_VIOLATIONS
    header, row = capsys.readouterr().out.splitlines()
    assert header == ",".join(entrypoints.VERIFY_COLUMNS)
    assert int(row.split(",")[-1]) > 0


def test_verify_usage_errors():
    assert entrypoints.main(["verify", "--suite", "moebius", "--n", "3"]) == 2
    assert entrypoints.main(["verify", "--suite", "nope", "--n", "2"]) == 2
    assert _main("verify --suite eq2 --n 2 --trials 0") == 2
    assert (
        entrypoints.main(["verify", "--suite", "eq2", "--n", "2", "--seed", str(2**64)])
        == 2
    )


def test_verify_is_reproducible(capsys):
    command = "verify --suite affine --n 3 --trials 50 --seed 9 --format json"
    _main(command)
    first = _json(capsys)
    _main(command + " --workers 2")
    second = _json(capsys)
    del first["elapsed"], second["elapsed"]
    assert first == second


def test_optimize(capsys):
    code = _main("optimize --n 2 --restarts 4 --format json")
    assert code == entrypoints.EXIT_OK
    report = _json(capsys)
    assert report["argmax_x"] == pytest.approx(0.381966, abs=1e-6)
    assert report["deviation_x"] <= 1e-8
    assert report["deviation_lambda"] <= 1e-5
    assert report["value_deviation"] <= 1e-9
    assert report["theorem2_value"] == pytest.approx(0.09016994, abs=1e-8)


def test_optimize_tetrahedron(capsys):
    entrypoints.main(["optimize", "--n", "3", "--restarts", "8", "--format", "json"])
    weights = _json(capsys)["argmax_lambda"]
    assert weights == pytest.approx([0.267949, 0.267949, 0.267949, 0.196152], abs=1e-5)


def test_optimize_convergence_failure(monkeypatch):
    def fail(*args, **kwargs):
        raise ConvergenceFailure("no restart converged")

    monkeypatch.setattr(optimizers, "maximize_F_simplex", fail)
    assert entrypoints.main(["optimize", "--n", "3"]) == entrypoints.EXIT_CONVERGENCE


def test_optimize_usage_errors():
    assert entrypoints.main(["optimize", "--n", "1"]) == 2
    assert entrypoints.main(["optimize", "--n", "2", "--restarts", "0"]) == 2


def test_audit_bounds(capsys):
    code = entrypoints.main(["audit-bounds", "--n-max", "10", "--format", "json"])
    assert code == entrypoints.EXIT_OK
    rows = _json(capsys)
    assert [row["n"] for row in rows] == list(range(2, 11))
    assert rows[0]["direct_f_theta"] == pytest.approx(0.09016994, abs=1e-8)
    assert rows[0]["ratio"] == pytest.approx(9.0)
    assert rows[1]["ratio"] == pytest.approx(4.0)
    for row in rows:
        assert row["flagged"] is True
        expected = (row["n"] - 1) ** 2
        assert row["direct_times_power"] == pytest.approx(expected, rel=1e-10)


def test_audit_bounds_bad_range():
    assert entrypoints.main(["audit-bounds", "--n-max", "1"]) == 2


@pytest.mark.parametrize(
    "argv",
    [[], ["unknown"], ["ratio", "--n", "2", "--lambda", "1,1,1", "--format", "xml"]],
)
def test_usage_errors(argv):
    assert entrypoints.main(argv) == entrypoints.EXIT_USAGE


def test_json_floats_are_finite_or_absent(capsys):
    entrypoints.main(["constants", "--n-min", "2", "--n-max", "3", "--format", "json"])
    for row in _json(capsys):
        assert all(math.isfinite(value) for value in row.values())


def test_ratio_of_a_large_centroid(capsys):
    """Every ratio underflows at n = 200; the log fields carry the values."""
    weights = ",".join([repr(1 / 201)] * 201)
    argv = ["ratio", "--n", "200", "--lambda", weights, "--format", "json"]
    assert entrypoints.main(argv) == entrypoints.EXIT_OK
    report = _json(capsys)
    assert report["cevian_ratio"] == 0.0
    assert report["log_cevian_ratio"] == pytest.approx(-200 * math.log(200))
    assert report["log_theorem1_slack"] == pytest.approx(0.0, abs=1e-9)


def test_failed_trials_are_valid_json(capsys, monkeypatch):
    # no point of the triangle has every weight above 1/3
    monkeypatch.setattr(verification, "ORACLE_MIN_WEIGHT", 0.4)
    code = _main("verify --suite theorem1 --n 2 --trials 3 --format json")
    assert code == entrypoints.EXIT_VIOLATIONS
    report = _json(capsys)
    assert report["worst_margin"] == "inf"
    assert [violation["check"] for violation in report["violations"]] == ["error"] * 3
