"""CSV / JSON encodings of the package's data types.

CSV numbers use 17 significant digits, ``.`` as decimal separator and LF line
endings. JSON numbers use Python's shortest round-trip representation.
"""

from __future__ import annotations

import io
import json
from pathlib import Path

import numpy as np

from .closedform import SpectrumL2
from .dynamics import Trajectory
from .errors import ConfigError
from .hierarchy import HierarchyConfig, WeightMatrix
from .spectral import NumericSpectrum
from .sweep import SweepResult, TradeoffReport


def fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _csv(rows) -> str:
    return "".join(",".join(row) + "\n" for row in rows)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def weight_matrix_to_json(W: WeightMatrix) -> dict:
    c = W.config
    return {
        "n": W.n,
        "L": c.L,
        "M": c.M,
        "alpha": c.alpha,
        "beta": c.beta,
        "rows": W.entries.tolist(),
    }


def weight_matrix_from_json(data: dict) -> WeightMatrix:
    try:
        config = HierarchyConfig(data["L"], data["M"], data["alpha"], data["beta"])
        return WeightMatrix(int(data["n"]), np.asarray(data["rows"], dtype=float), config)
    except KeyError as exc:
        raise ConfigError(f"weight matrix JSON missing field {exc}") from exc


def weight_matrix_to_csv(W: WeightMatrix) -> str:
    return _csv([fmt(x) for x in row] for row in W.entries)


def read_matrix_csv(text: str) -> np.ndarray:
    return np.loadtxt(io.StringIO(text), delimiter=",", ndmin=2)


def trajectory_to_csv(traj: Trajectory) -> str:
    n = traj.states.shape[1]
    header = ["t"] + [f"x{i}" for i in range(1, n + 1)]
    body = ([fmt(t)] + [fmt(x) for x in state] for t, state in zip(traj.times, traj.states))
    return _csv([header, *body])


def trajectory_to_json(traj: Trajectory) -> dict:
    return {"times": traj.times.tolist(), "states": traj.states.tolist()}


def numeric_spectrum_to_json(spec: NumericSpectrum) -> dict:
    return {
        "n": spec.n,
        "eigenvalues": [{"re": float(z.real), "im": float(z.imag)} for z in spec.eigenvalues],
    }


def numeric_spectrum_to_csv(spec: NumericSpectrum) -> str:
    return _csv([["re", "im"], *([fmt(z.real), fmt(z.imag)] for z in spec.eigenvalues)])


def spectrum_l2_to_json(spec: SpectrumL2) -> dict:
    out = {f"lambda_{k}": v for k, v, _ in spec.pairs()}
    out["multiplicities"] = dict(spec.multiplicities)
    out.update(K_B=spec.roots.K_B, K_C=spec.roots.K_C, K_D=spec.roots.K_D)
    out.update(M=spec.config.M, alpha=spec.config.alpha, beta=spec.config.beta)
    return out


def spectrum_l2_to_csv(spec: SpectrumL2) -> str:
    return _csv([["label", "value", "multiplicity"], *([k, fmt(v), str(m)] for k, v, m in spec.pairs())])


def sweep_to_csv(result: SweepResult) -> str:
    g = result.grid
    header = ["beta\\alpha"] + [fmt(a) for a in g.alpha_values]
    body = ([fmt(b)] + [fmt(v) for v in row] for b, row in zip(g.beta_values, result.values))
    return _csv([header, *body])


def sweep_to_json(result: SweepResult) -> dict:
    g = result.grid
    return {
        "kind": result.kind,
        "L": g.L,
        "M": g.M,
        "gamma": g.gamma,
        "input_node": g.input_node,
        "alpha": list(g.alpha_values),
        "beta": list(g.beta_values),
        "values": result.values.tolist(),
    }


def tradeoff_to_csv(report: TradeoffReport) -> str:
    header = ["alpha", "autonomous_rate", "input_rate", "autonomous_best", "input_best"]
    body = (
        [fmt(r.alpha), fmt(r.autonomous_rate), fmt(r.input_rate), str(int(r.autonomous_best)), str(int(r.input_best))]
        for r in report.rows
    )
    return _csv([header, *body])


def tradeoff_to_json(report: TradeoffReport) -> dict:
    return {
        "M": report.M,
        "beta": report.beta,
        "gamma": report.gamma,
        "rows": [
            {
                "alpha": r.alpha,
                "autonomous_rate": r.autonomous_rate,
                "input_rate": r.input_rate,
                "autonomous_best": r.autonomous_best,
                "input_best": r.input_best,
            }
            for r in report.rows
        ],
    }


def read_x0_file(path, n: int) -> np.ndarray:
    """One decimal per line, exactly ``n`` lines (blank lines ignored)."""
    try:
        lines = [ln.strip() for ln in Path(path).read_text().splitlines() if ln.strip()]
    except OSError as exc:
        raise ConfigError(f"cannot read x0 file {path}: {exc.strerror}") from exc
    if len(lines) != n:
        raise ConfigError(f"x0 file has {len(lines)} values, network has {n} nodes")
    try:
        return np.array([float(ln) for ln in lines])
    except ValueError as exc:
        raise ConfigError(f"x0 file: {exc}") from exc
