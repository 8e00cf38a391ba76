import csv
import io
import json
import subprocess
import sys

import pytest

from hermbound import cli
from hermbound.bound import BoundBreakdown


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_bound_json(capsys):
    code, out, _ = run(["bound", "--mixture", "[[1,1,0]]", "--K", "4", "--T", "2"], capsys)
    assert code == 0
    b = BoundBreakdown.from_json(out)
    assert b.total > 0 and b.K == 4 and b.T == 2.0
    assert b.total == pytest.approx(b.term_tail_t + b.term_tail_omega + b.term_fN + b.term_sansone, rel=1e-8)


def test_bound_json_round_trip_is_byte_identical(capsys):
    _, out, _ = run(["bound", "--preset", "trimodal", "--K", "20", "--T", "3"], capsys)
    assert BoundBreakdown.from_json(out).to_json() + "\n" == out


def test_bound_csv_schema(capsys):
    code, out, _ = run(["bound", "--preset", "normal", "--K", "4", "--T", "2", "--format", "csv"], capsys)
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["quantity", "value", "note"]
    names = [r[0] for r in rows[1:]]
    for key in ("term_tail_t", "term_tail_omega", "term_fN", "term_sansone", "total", "N"):
        assert key in names
    assert any(n.startswith("suspect.") for n in names)


@pytest.mark.parametrize("K", ["3", "0"])
def test_bound_odd_order_is_config_error(K, capsys):
    code, _, err = run(["bound", "--K", K], capsys)
    assert code == 2
    assert "K must be even" in err


@pytest.mark.parametrize("argv", [
    ["bound", "--K", "4", "--mixture", "[[1, 0, 0]]"],
    ["bound", "--K", "4", "--mixture", "not json"],
    ["bound", "--K", "4", "--preset", "nope"],
    ["bound", "--K", "4", "--T", "-1"],
    ["bound", "--K", "4", "--panel-order", "1"],
    ["sweep", "--K"],
    ["sweep", "--K", "4", "5"],
    ["verify", "--suite", "nope"],
    ["reproduce", "--tolerance", "0"],
])
def test_config_errors(argv, capsys):
    assert run(argv, capsys)[0] == 2


def test_preset_and_mixture_are_exclusive():
    with pytest.raises(SystemExit) as exc:
        cli.main(["bound", "--K", "4", "--preset", "normal", "--mixture", "[[1,1,0]]"])
    assert exc.value.code == 2


def test_numerical_failure_exit_code(capsys):
    # one subdivision cannot resolve the coefficient integrals
    argv = ["approx", "--K", "40", "--rel-tol", "1e-15", "--abs-tol", "1e-300", "--panel-order", "2"]
    code, _, err = run(argv, capsys)
    assert code == 3
    assert "numerical failure" in err


def test_approx(capsys):
    code, out, _ = run(["approx", "--preset", "trimodal", "--K", "20", "--T", "3", "--grid-points", "501"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["rms"] <= data["sup"]


def test_reproduce_default(capsys):
    code, out, err = run(["reproduce", "--format", "csv"], capsys)
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["quantity", "reference", "computed", "rel_diff", "limit", "status"]
    assert [r[0] for r in rows[1:]] == ["term_tail_t", "term_tail_omega", "term_fN",
                                        "term_sansone", "total", "measured_sup"]
    assert "N = 31.6544" in err
    failed = [r[0] for r in rows[1:] if r[5] == "FAIL"]
    assert code == (1 if failed else 0)
    if failed:
        assert "failing rows: " + ", ".join(failed) in err


def test_reproduce_strict_tolerance_fails_cleanly(capsys):
    code, out, err = run(["reproduce", "--tolerance", "0.001"], capsys)
    assert code == 1
    data = json.loads(out)
    assert len(data["rows"]) == 6
    assert "failing rows" in err


def test_sweep(capsys):
    code, out, _ = run(["sweep", "--K", "4", "8", "16", "--format", "csv", "--grid-points", "501"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["K", "N", "measured_rms", "measured_sup", "term_tail_t", "term_tail_omega",
                             "term_fN", "term_sansone", "bound_total"]
    totals = [float(r["bound_total"]) for r in rows]
    for r in rows:
        assert float(r["measured_rms"]) <= float(r["bound_total"])
    assert totals == sorted(totals, reverse=True)


def test_verify_single_suite(capsys):
    code, out, err = run(["verify", "--suite", "cd-kernel", "--format", "csv"], capsys)
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["suite", "check", "value", "limit", "status", "note"]
    assert {r[0] for r in rows[1:]} == {"cd-kernel"}
    assert "pass  cd-kernel" in err


def test_output_writes_sidecars(tmp_path, capsys):
    target = tmp_path / "sweep.csv"
    code, out, _ = run(["sweep", "--K", "4", "8", "--format", "csv", "--output", str(target),
                        "--grid-points", "201"], capsys)
    assert code == 0 and out == ""
    assert target.read_text().startswith("K,N,")
    plot = (tmp_path / "sweep.plot.txt").read_text()
    assert "# measured_rms" in plot and "# bound_total" in plot
    assert (tmp_path / "sweep.png").read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_repeated_runs_are_byte_identical(tmp_path):
    argv = [sys.executable, "-m", "hermbound", "bound", "--preset", "trimodal", "--K", "20", "--T", "3"]
    outputs = []
    for i in range(2):
        target = tmp_path / f"run{i}.json"
        subprocess.run(argv + ["--output", str(target)], check=True, capture_output=True)
        outputs.append((target.read_bytes(), target.with_suffix(".plot.txt").read_bytes(),
                        target.with_suffix(".png").read_bytes()))
    assert outputs[0] == outputs[1]
