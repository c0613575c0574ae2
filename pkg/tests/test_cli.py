import json
import math
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from conftest import apery_direct
from holoscope import report as R
from holoscope.cli import main
from holoscope.multisum import from_values, write_sequence

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out), err


@pytest.fixture(scope="module")
def seq_files(tmp_path_factory):
    d = tmp_path_factory.mktemp("seq")
    files = {
        "apery": from_values([apery_direct(n) for n in range(301)]),
        "pow2": from_values([2**n for n in range(301)]),
        "fact": from_values([math.factorial(n) for n in range(301)]),
        "zeros": from_values([0] * 120),
        "short": from_values([1, 2, 3]),
        "thirds": from_values([Fraction(1, 3**n) * 2**n for n in range(120)]),
    }
    for name, s in files.items():
        write_sequence(d / f"{name}.seq", s)
    return {name: d / f"{name}.seq" for name in files}


# analyze-term -------------------------------------------------------------------------

def test_analyze_apery_consistent(capsys):
    code, rep, _ = run_json(capsys, "analyze-term", DATA / "apery.term")
    assert code == 0 and rep["exit_code"] == 0
    assert rep["verdict"]["kind"] == "ConsistentRationalExponents"
    assert rep["sequence"]["prefix"][:5] == [{"exact": v} for v in ("1", "5", "73", "1445", "33001")]
    assert rep["recurrence"]["order"] == 2
    assert rep["ode_check"]["vanishes"]
    g = float(rep["fit"]["growth"]["value"]["float"])
    assert abs(g - (1 + math.sqrt(2)) ** 4) < 1e-3
    assert rep["cross_validation"]["consistent"]


def test_analyze_binom_growth_two(capsys):
    code, rep, _ = run_json(capsys, "analyze-term", DATA / "binom.term")
    assert code == 0
    assert rep["fit"]["growth"]["value"]["float"] == "2"
    assert rep["recurrence"]["order"] == 1


@pytest.mark.parametrize(
    "name, code, stage",
    [("unbalanced.term", 3, "balance"), ("infinite.term", 4, "support"), ("bad.term", 2, "parse")],
)
def test_analyze_rejections(capsys, name, code, stage):
    got, rep, err = run_json(capsys, "analyze-term", DATA / name)
    assert got == code == rep["exit_code"]
    assert rep["errors"][0]["stage"] == stage
    assert stage in err


def test_unbalanced_reports_residual(capsys):
    _, rep, _ = run_json(capsys, "analyze-term", DATA / "unbalanced.term")
    assert "residual n" in rep["errors"][0]["message"]


def test_missing_file_is_input_error(capsys, tmp_path):
    code, rep, _ = run_json(capsys, "analyze-term", tmp_path / "nope.term")
    assert code == 2


def test_no_recurrence_exit_five(capsys):
    code, rep, _ = run_json(capsys, "analyze-term", DATA / "apery.term", "--max-order", 1, "--max-degree", 1)
    assert code == 5
    assert rep["errors"][0]["stage"] == "guess"


# obstruct -----------------------------------------------------------------------------

@pytest.fixture(scope="module")
def counter_report():
    import io
    from contextlib import redirect_stdout

    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(["obstruct", str(DATA / "counter.rec"), "--initials", "0,1"])
    return code, buf.getvalue()


def test_obstruct_counter(counter_report):
    code, out = counter_report
    rep = json.loads(out)
    assert code == 10 and rep["verdict"]["kind"] == "ObstructionIrrationalExponent"
    polys = [f["exponent_poly"]["text"] for f in rep["singularities"]["factors"]]
    assert "44*alpha^2 + 88*alpha - 31" in polys
    (f,) = [f for f in rep["singularities"]["factors"] if f["exponent_poly"]["text"].startswith("44")]
    for r in f["exponent_roots"]:
        # at least 30 significant digits
        assert len(r["re"].lstrip("-").replace(".", "").lstrip("0")) >= 30
    assert rep["ode"]["coeffs"][-1]["text"] == "2*z^3 - 7*z^2 + 2*z"


def test_obstruct_geometric_consistent(capsys):
    code, rep, _ = run_json(capsys, "obstruct", DATA / "geometric.rec", "--initials", "1", "--nmax", 200)
    assert code == 0 and rep["verdict"]["kind"] == "ConsistentRationalExponents"


def test_obstruct_mixed_inconclusive(capsys):
    code, rep, _ = run_json(capsys, "obstruct", DATA / "mixed.rec", "--initials", "0,1,0", "--nmax", 300)
    assert code == 11 and rep["verdict"]["kind"] == "Inconclusive"


def test_obstruct_singular_step(capsys):
    code, rep, _ = run_json(capsys, "obstruct", DATA / "singular.rec", "--initials", "1")
    assert code == 6


@pytest.mark.parametrize("initials", ["0", "0,1,2", "0,x"])
def test_obstruct_bad_initials(capsys, initials):
    code, _, _ = run_json(capsys, "obstruct", DATA / "counter.rec", "--initials", initials)
    assert code == 2


def test_obstruct_bad_recurrence_file(capsys, tmp_path):
    p = tmp_path / "bad.rec"
    p.write_text("order 2\nP_0: 1\n")
    code, _, _ = run_json(capsys, "obstruct", p, "--initials", "0,1")
    assert code == 2


# fit / certify / lcm-table ------------------------------------------------------------

def test_fit_apery(capsys, seq_files):
    code, rep, _ = run_json(capsys, "fit", seq_files["apery"])
    assert code == 0
    assert rep["fit"]["growth"]["value"]["decimal"].startswith("33.97")


def test_fit_power_of_two(capsys, seq_files):
    code, rep, _ = run_json(capsys, "fit", seq_files["pow2"])
    assert code == 0
    assert rep["fit"]["growth"]["value"]["float"] == "2"
    theta = rep["fit"]["theta"]
    assert abs(float(theta["value"]["float"])) <= max(10 * float(theta["gauge"]["float"]), 1e-25)


def test_fit_factorial_gevrey_one(capsys, seq_files):
    code, rep, _ = run_json(capsys, "fit", seq_files["fact"])
    assert code == 0 and rep["fit"]["s_class"] == {"exact": "1"}


@pytest.mark.parametrize("name", ["zeros", "short"])
def test_fit_failures_exit_seven(capsys, seq_files, name):
    code, rep, _ = run_json(capsys, "fit", seq_files[name])
    assert code == 7 and rep["errors"][0]["stage"] == "fit"


def test_fit_bad_file(capsys, tmp_path):
    p = tmp_path / "x.seq"
    p.write_text("not a sequence\n")
    code, _, _ = run_json(capsys, "fit", p)
    assert code == 2


def test_certify_reports(capsys, seq_files):
    code, rep, _ = run_json(capsys, "certify", seq_files["apery"])
    assert code == 0
    cert = rep["certificates"]
    assert cert["holonomic"] and not cert["denominator"]["alarm"]
    assert cert["denominator"]["bound"]["float"] == "1"


def test_certify_zero_sequence_rejected(capsys, seq_files):
    code, _, _ = run_json(capsys, "certify", seq_files["zeros"])
    assert code == 2


def test_certify_table_csv(capsys, seq_files):
    code, out, _ = run(capsys, "certify", seq_files["thirds"], "--table", "denominator")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "n,value"
    n, v = lines[5].split(",")
    assert int(n) >= 1 and abs(float(v) - 3.0) < 1e-12


def test_lcm_table(capsys):
    code, rep, _ = run_json(capsys, "lcm-table", "--nmax", 20)
    assert code == 0
    assert rep["lcm_table"][3] == {"n": 4, "L_n": {"exact": "12"}, "ratio": rep["lcm_table"][3]["ratio"]}
    code, out, _ = run(capsys, "lcm-table", "--nmax", 10, "--csv")
    assert out.splitlines()[0] == "n,value" and len(out.splitlines()) == 11


def test_lcm_table_rejects_zero(capsys):
    code, _, err = run(capsys, "lcm-table", "--nmax", 0)
    assert code == 2 and "--nmax" in err


# output plumbing ----------------------------------------------------------------------

def test_text_format(capsys):
    code, out, _ = run(capsys, "analyze-term", DATA / "binom.term", "--format", "text")
    assert code == 0
    assert out.startswith("holoscope ") and "verdict: Consistent" in out and "exit code: 0" in out


def test_out_file(capsys, tmp_path):
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "lcm-table", "--nmax", 5, "--out", target)
    assert out == "" and json.loads(target.read_text())["exit_code"] == 0


@pytest.mark.parametrize("value", ["abc", "1.5", "30 digits"])
def test_invalid_precision_env(capsys, monkeypatch, value):
    monkeypatch.setenv("HOLOSCOPE_PRECISION", value)
    code, _, err = run(capsys, "lcm-table", "--nmax", 5)
    assert code == 2 and "HOLOSCOPE_PRECISION" in err


def test_low_precision_is_clamped(capsys, monkeypatch, seq_files):
    monkeypatch.setenv("HOLOSCOPE_PRECISION", "5")
    code, rep, _ = run_json(capsys, "fit", seq_files["pow2"])
    assert code == 0 and rep["config"]["precision"] == 15


def test_precision_env_recorded(capsys, monkeypatch, seq_files):
    monkeypatch.setenv("HOLOSCOPE_PRECISION", "50")
    code, rep, _ = run_json(capsys, "fit", seq_files["pow2"])
    assert code == 0 and rep["config"]["precision"] == 50


@pytest.mark.parametrize(
    "argv",
    [
        ("analyze-term", DATA / "apery.term"),
        ("obstruct", DATA / "mixed.rec", "--initials", "0,1,0", "--nmax", 300),
        ("lcm-table", "--nmax", 50),
    ],
)
def test_json_deterministic(capsys, argv):
    _, a, _ = run_json(capsys, *argv)
    _, b, _ = run_json(capsys, *argv)
    assert "timing" in a
    assert R.dumps(R.without_timing(a)) == R.dumps(R.without_timing(b))


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "holoscope.cli", "lcm-table", "--nmax", "4"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["lcm_table"][-1]["L_n"] == {"exact": "12"}
