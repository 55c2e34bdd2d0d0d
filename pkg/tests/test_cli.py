import csv
import io
import json
import math
import subprocess
import sys

import pytest

import oracles
from zpe_oscillator import cli


def run_capture(capsys, argv):
    code = cli.run(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_spectrum_csv(capsys):
    code, out, _ = run_capture(capsys, ["spectrum", "--e0", "1", "--beta", "1"])
    assert code == 0
    assert out.endswith("\r\n")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 1
    assert float(rows[0]["U"]) == pytest.approx(oracles.PLANCK_U_1_1, rel=1e-15)
    assert float(rows[0]["S"]) == pytest.approx(oracles.ENTROPY_1_1, rel=1e-13)


def test_csv_round_trips_floats(capsys):
    _, out, _ = run_capture(capsys, ["spectrum", "--omega", "2", "--beta-count", "5"])
    from zpe_oscillator import spectrum

    for row in csv.DictReader(io.StringIO(out)):
        assert float(row["U"]) == spectrum.planck_mean_energy(1.0, float(row["beta"]))


def test_json_layout(capsys):
    code, out, _ = run_capture(capsys, ["discrete", "--beta", "2", "--format", "json", "--seed", "9"])
    assert code == 0
    doc = json.loads(out)
    assert doc["meta"]["seed"] == 9
    assert doc["meta"]["config"]["command"] == "discrete"
    assert "version" in doc["meta"]
    assert len(doc["rows"]) == 1


@pytest.mark.parametrize("command", ["spectrum", "variance", "discrete", "moments", "statistical",
                                     "wigner", "historical"])
def test_every_command_runs(capsys, command):
    code, out, _ = run_capture(capsys, [command, "--beta-count", "3", "--beta-min", "0.1", "--beta-max", "10"])
    assert code == 0
    assert len(list(csv.DictReader(io.StringIO(out)))) >= 3


def test_variance_with_linear_term(capsys):
    code, out, _ = run_capture(capsys, ["variance", "--beta", "1", "--a1", "0.5", "--format", "json"])
    assert code == 0
    assert json.loads(out)["rows"]


def test_mc_is_reproducible(capsys):
    argv = ["mc", "--beta", "1", "--samples", "2000", "--modes", "10", "--seed", "5"]
    _, first, _ = run_capture(capsys, argv)
    _, second, _ = run_capture(capsys, argv)
    assert first == second
    _, other, _ = run_capture(capsys, argv[:-1] + ["6"])
    assert other != first


def test_seed_from_environment(capsys, monkeypatch):
    argv = ["mc", "--beta", "1", "--samples", "500", "--sampler", "ws"]
    monkeypatch.setenv("ZPE_SEED", "77")
    _, env_out, _ = run_capture(capsys, argv + ["--format", "json"])
    assert json.loads(env_out)["meta"]["seed"] == 77
    _, flag_out, _ = run_capture(capsys, argv + ["--format", "json", "--seed", "77"])
    assert json.loads(flag_out)["rows"] == json.loads(env_out)["rows"]


def test_verify_passes_and_is_byte_identical(tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert cli.run(["verify", "--seed", "42", "--samples", "20000", "--modes", "100", "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_verify_failure_exit_code(monkeypatch, capsys):
    from zpe_oscillator.verification import CheckResult

    monkeypatch.setitem(cli.HANDLERS, "verify",
                        lambda args: [CheckResult("m", "c", 2.0, 1.0, "<=").row()])
    code, _, err = run_capture(capsys, ["verify"])
    assert code == 1
    assert "m.c" in err


@pytest.mark.parametrize("argv", [
    ["nonsense"],
    ["spectrum", "--beta-min", "-1"],
    ["spectrum", "--beta-min", "10", "--beta-max", "1"],
    ["mc", "--samples", "0"],
    ["spectrum", "--seed", "-3"],
    ["spectrum", "--format", "xml"],
])
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        cli.run(argv)
    assert exc.value.code == 2


def test_bad_env_seed(monkeypatch, capsys):
    monkeypatch.setenv("ZPE_SEED", "abc")
    with pytest.raises(SystemExit) as exc:
        cli.run(["spectrum"])
    assert exc.value.code == 2


def test_numeric_error_exit_code(capsys):
    code, _, err = run_capture(capsys, ["discrete", "--e0", "1", "--beta", "1e-9"])
    assert code == 3
    assert "numeric error" in err and "beta" in err


def test_unwritable_output(capsys, tmp_path):
    code, _, err = run_capture(capsys, ["spectrum", "--out", str(tmp_path / "missing" / "x.csv")])
    assert code == 3


def test_json_null_for_nan(capsys):
    text = cli.render_report([{"a": math.nan, "b": 1.5}], "json")
    assert json.loads(text)["rows"] == [{"a": None, "b": 1.5}]


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "zpe_oscillator.cli", "spectrum", "--beta", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.startswith("beta,U,")
