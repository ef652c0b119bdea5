import json

import numpy as np
import pytest

from hierconsensus.cli import run
from hierconsensus.hierarchy import HierarchyConfig, build_weight_matrix

COMMON = ["--layers", "2", "--breadth", "3", "--alpha", "1", "--beta", "1"]


def invoke(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_build_csv(capsys):
    code, out, _ = invoke(capsys, "build", *COMMON, "--format", "csv")
    assert code == 0
    M = np.loadtxt(out.splitlines(), delimiter=",")
    np.testing.assert_array_equal(M, build_weight_matrix(HierarchyConfig(2, 3, 1, 1)).entries)


def test_build_json_to_file(capsys, tmp_path):
    path = tmp_path / "w.json"
    code, out, _ = invoke(capsys, "build", "--breadth", "2", "--alpha", "0.5", "--beta", "2",
                          "--format", "json", "--out", str(path))
    assert code == 0 and out == ""
    data = json.loads(path.read_text())
    assert data["n"] == 9 and len(data["rows"]) == 9


def test_rate_analytic(capsys):
    code, out, _ = invoke(capsys, "rate", *COMMON)
    assert code == 0
    assert float(out) == pytest.approx(0.0428932, abs=1e-7)


def test_rate_json_paths(capsys):
    _, out, _ = invoke(capsys, "rate", *COMMON, "--format", "json")
    assert json.loads(out)["method"] == "analytic"
    _, out, _ = invoke(capsys, "rate", *COMMON, "--format", "json", "--force-numeric")
    data = json.loads(out)
    assert data["method"] == "numeric"
    assert data["rate"] == pytest.approx((6 - 32**0.5) / 8, abs=1e-10)
    _, out, _ = invoke(capsys, "rate", *COMMON, "--format", "json", "--gamma", "1e-6", "--gamma-node", "5")
    data = json.loads(out)
    assert data["kind"] == "input"
    assert data["rate"] / 1e-6 == pytest.approx(1 / 16, rel=1e-3)


def test_rate_deeper_is_numeric(capsys):
    _, out, _ = invoke(capsys, "rate", "--layers", "3", "--format", "json")
    assert json.loads(out)["method"] == "numeric"


def test_spectrum_modes(capsys):
    _, out, _ = invoke(capsys, "spectrum", *COMMON)
    assert json.loads(out)["multiplicities"]["E"] == 6
    _, out, _ = invoke(capsys, "spectrum", *COMMON, "--numeric")
    data = json.loads(out)
    assert data["n"] == 16 and data["eigenvalues"][0]["re"] == pytest.approx(1.0)
    code, _, err = invoke(capsys, "spectrum", "--layers", "3", "--analytic")
    assert code == 1 and err.startswith("error:")


def test_simulate_defaults_and_x0_file(capsys, tmp_path):
    code, out, _ = invoke(capsys, "simulate", *COMMON, "--t-end", "1", "--record-every", "50")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("t,x1,") and len(lines) == 4
    x0 = tmp_path / "x0.txt"
    x0.write_text("\n".join(["0"] * 16) + "\n")
    _, out, _ = invoke(capsys, "simulate", *COMMON, "--x0-file", str(x0), "--gamma", "1",
                       "--gamma-node", "5", "--input-value", "2", "--t-end", "1", "--record-every", "100")
    last = np.array(out.splitlines()[-1].split(","), dtype=float)
    assert last[0] == pytest.approx(1.0)
    assert last[5] > 0.5  # input node pulled toward 2


def test_sweep_modes(capsys):
    _, out, _ = invoke(capsys, "sweep", "--mode", "autonomous", "--alpha-grid", "0.1:10:5",
                       "--beta-grid", "0.1:10:4", "--log-spacing")
    lines = out.splitlines()
    assert lines[0].startswith("beta\\alpha,") and len(lines) == 5
    _, out, _ = invoke(capsys, "sweep", "--mode", "region")
    assert len(out.splitlines()) == 41
    _, out, _ = invoke(capsys, "sweep", "--mode", "input", "--alpha-grid", "0.5:2:3", "--beta-grid", "1:1:1",
                       "--format", "json")
    assert json.loads(out)["kind"] == "input_rate"
    _, out, _ = invoke(capsys, "sweep", "--mode", "tradeoff", "--alpha-grid", "0.1:10:3", "--log-spacing")
    assert out.splitlines()[2].endswith(",0,1")


def test_verify_passes(capsys):
    code, out, _ = invoke(capsys, "verify", "--layers", "2", "--breadth", "3", "--alpha", "2", "--beta", "0.5")
    assert code == 0
    lines = out.splitlines()
    assert all(ln.startswith("PASS ") for ln in lines)
    names = {ln.split()[1] for ln in lines}
    assert {"spectrum_unmatched", "perron_residual", "appendix_eigen_residual", "cubic_residual"} <= names


def test_verify_fails_with_impossible_tolerance(capsys):
    code, out, _ = invoke(capsys, "verify", *COMMON, "--alpha", "3", "--tolerance-scale", "1e-20")
    assert code == 2
    assert "FAIL" in out


def test_verify_deeper(capsys):
    code, out, _ = invoke(capsys, "verify", "--layers", "3", "--breadth", "2")
    assert code == 0 and "rate_positive" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["rate", "--bogus"],
        ["rate", "--breadth", "1"],
        ["rate", "--alpha", "-1"],
        ["frobnicate"],
        ["sweep", "--alpha-grid", "1:2"],
        ["simulate", "--dt", "1"],
        ["rate", "--gamma-node", "5"],
        ["verify", "--tolerance-scale", "0"],
    ],
)
def test_validation_errors_exit_1(capsys, argv):
    code, out, err = invoke(capsys, *argv)
    assert code == 1
    assert err.startswith("error:") and err.count("\n") == 1


def test_numerical_error_exits_2(capsys, monkeypatch):
    from hierconsensus import cli
    from hierconsensus.errors import NumericalError

    def boom(args):
        raise NumericalError("eigenvalue iteration failed")

    monkeypatch.setitem(cli.COMMANDS, "rate", boom)
    code, _, err = invoke(capsys, "rate")
    assert code == 2 and err == "error: eigenvalue iteration failed\n"
