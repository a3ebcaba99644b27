import csv
import io
import json
import math
import subprocess
import sys

import pytest

from bimeans.cli import RunConfig, UsageError, main
from bimeans.verification import VerificationReport


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_usage(capsys, *argv):
    with pytest.raises(SystemExit) as exc:
        main(list(argv))
    return exc.value.code, capsys.readouterr().err


# -- eval ------------------------------------------------------------------------

def test_eval_equal_arguments(capsys):
    code, out, _ = run(capsys, "eval", "1", "1", "--format", "json")
    assert code == 0
    assert set(json.loads(out)["means"].values()) == {1.0}


def test_eval_text(capsys):
    code, out, _ = run(capsys, "eval", "4", "1")
    assert code == 0
    rows = dict(line.split() for line in out.splitlines())
    assert rows["G"] == "2" and rows["A"] == "2.5"
    assert float(rows["Q"]) == pytest.approx(math.sqrt(8.5), rel=1e-14)
    assert "L(I,G)" in rows and "I(A^2,G^2)" in rows


def test_eval_identric_at_unit_parameter(capsys):
    code, out, _ = run(capsys, "eval", repr(math.e), repr(1 / math.e), "--format", "csv")
    rows = {r["mean"]: float(r["value"]) for r in csv.DictReader(io.StringIO(out))}
    assert rows["I"] == pytest.approx(math.exp(1 / math.tanh(1.0) - 1), rel=1e-14)
    assert rows["G"] == pytest.approx(1.0, rel=1e-15)


@pytest.mark.parametrize("a", ["0", "-3", "nan", "inf", "abc"])
def test_eval_rejects_bad_input(capsys, a):
    code, err = run_usage(capsys, "eval", a, "1")
    assert code == 2
    assert "error" in err


# -- verify ------------------------------------------------------------------------

def test_verify_single_suite_json(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "thm1", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert len(data) == 1
    for key in ("spec_name", "grid", "min_margin", "argmin_x", "violations", "status"):
        assert key in data[0]
    assert data[0]["min_margin"] > 0
    assert VerificationReport.from_dict(data[0]).passed


def test_verify_json_round_trip(capsys):
    _, out, _ = run(capsys, "verify", "--suite", "thm4_chain,incomparable_I_IQG",
                    "--grid-points", "101", "--format", "json")
    data = json.loads(out)
    reports = [VerificationReport.from_dict(d) for d in data]
    assert reports[1].sign_changes and isinstance(reports[1].min_margin, float)
    # parse(serialize(report)) == report, floats included
    assert json.loads(json.dumps([r.to_dict() for r in reports], indent=2)) == data
    assert out == json.dumps([r.to_dict() for r in reports], indent=2) + "\n"


def test_verify_csv(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "thm1,identity_S,incomparable_I_SAG",
                       "--grid-points", "101", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["spec_name"] for r in rows] == ["thm1", "identity_S", "incomparable_I_SAG"]
    assert all(r["status"] == "pass" for r in rows)
    assert rows[1]["min_margin"] == ""
    assert out.splitlines()[0].startswith("spec_name,kind,status")


def test_verify_failure_exit_code(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "incomparable_I_SAG", "--grid-min", "2.3",
                       "--grid-max", "3", "--no-witnesses")
    assert code == 1
    assert "FAIL" in out


def test_verify_is_byte_identical(capsys):
    argv = ("verify", "--suite", "thm2,alzer_sum", "--grid-points", "201", "--format", "json")
    _, one, _ = run(capsys, *argv)
    _, two, _ = run(capsys, *argv)
    assert one == two


@pytest.mark.parametrize("argv", [
    ("verify", "--suite", "nope"),
    ("verify", "--grid-min", "5", "--grid-max", "1"),
    ("verify", "--grid-points", "1"),
    ("verify", "--grid-min", "-1"),
    ("verify", "--spacing", "cubic"),
    ("verify", "--format", "xml"),
    ("frobnicate",),
    (),
])
def test_verify_usage_errors(capsys, argv):
    code, _ = run_usage(capsys, *argv)
    assert code == 2


def test_run_config_defaults_and_checks():
    cfg = RunConfig()
    assert (cfg.grid_min, cfg.grid_max, cfg.grid_points, cfg.spacing) == (1e-4, 30.0, 2001, "log")
    assert cfg.tol_identity == 1e-12 and cfg.output_format == "text" and cfg.suite == ("all",)
    with pytest.raises(UsageError):
        RunConfig(grid_min=2.0, grid_max=1.0)
    with pytest.raises(UsageError):
        RunConfig(tol_identity=0.0)


# -- sharp -------------------------------------------------------------------------

def test_sharp_json(capsys):
    code, out, _ = run(capsys, "sharp", "--format", "json")
    assert code == 0
    rows = {r["name"]: r for r in json.loads(out)}
    assert abs(rows["x1"]["value"] - 1.606) <= 1e-3
    assert abs(rows["c"]["value"] - 1.14) <= 5e-3
    assert 2.2 < rows["crossing_I_SAG"]["value"] <= 2.284
    assert rows["iqg_minus_i_at_1.5"]["value"] > 0 > rows["iqg_minus_i_at_2"]["value"]
    for name in ("f_thm1_at_0", "f_thm1_at_inf", "f_lemma2_at_0", "f_lemma2_at_inf"):
        assert rows[name]["ok"]
    assert all("tolerance" in r for r in rows.values())


def test_sharp_text_and_csv(capsys):
    code, out, _ = run(capsys, "sharp")
    assert code == 0 and "FAIL" not in out
    code, out, _ = run(capsys, "sharp", "--format", "csv")
    assert out.splitlines()[0] == "name,x,value,expected,ok,note"


def test_sharp_reports_failed_bracket(capsys, monkeypatch):
    from bimeans import analysis
    from bimeans.errors import NoSignChangeError

    def broken():
        raise NoSignChangeError("no sign change")

    monkeypatch.setattr(analysis, "sharp_constants", broken)
    code, _, err = run(capsys, "sharp")
    assert code == 1 and "root search failed" in err


# -- tabulate -----------------------------------------------------------------------

def _table(out):
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["x", "value"]
    return [(float(x), float(v)) for x, v in rows[1:]]


def test_tabulate_f_thm1(capsys):
    code, out, _ = run(capsys, "tabulate", "f_thm1")
    assert code == 0
    rows = _table(out)
    assert len(rows) == 2001
    assert rows[0][1] == pytest.approx(0.5, abs=1e-5)
    assert rows[-1][1] == pytest.approx(math.log(2), abs=1e-5)


def test_tabulate_f_lemma2_max(capsys):
    _, out, _ = run(capsys, "tabulate", "f_lemma2")
    assert max(v for _, v in _table(out)) == pytest.approx(2.1312, abs=1e-3)


def test_tabulate_k_single_sign_change(capsys):
    _, out, _ = run(capsys, "tabulate", "k", "--grid-min", "0.01", "--grid-max", "5",
                    "--spacing", "linear", "--grid-points", "500")
    rows = _table(out)
    flips = [(x0, x1) for (x0, v0), (x1, v1) in zip(rows, rows[1:]) if (v0 > 0) != (v1 > 0)]
    assert len(flips) == 1
    assert 1.0 < flips[0][0] < flips[0][1] < 1.5


def test_tabulate_unknown_function(capsys):
    code, _ = run_usage(capsys, "tabulate", "sin")
    assert code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "bimeans", "eval", "2", "8"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[1].split() == ["G", "4"]
