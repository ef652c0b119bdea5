"""Parameter grids over (alpha, beta): rate heatmaps, lambda_B/lambda_G region maps
and the coordination vs. bottom-up information tradeoff table."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import closedform
from .dynamics import InputSpec
from .errors import ConfigError
from .hierarchy import HierarchyConfig, build_weight_matrix
from .spectral import rate_autonomous, rate_with_input

KINDS = ("autonomous_rate", "input_rate", "region")
TIE_TOL = 1e-12
REGION_B, REGION_TIE, REGION_G = -1, 0, 1


@dataclass(frozen=True)
class GridSpec:
    alpha_values: tuple
    beta_values: tuple
    M: int
    L: int = 2
    gamma: float = 0.0
    input_node: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "alpha_values", tuple(float(a) for a in self.alpha_values))
        object.__setattr__(self, "beta_values", tuple(float(b) for b in self.beta_values))
        for name in ("alpha_values", "beta_values"):
            vals = np.asarray(getattr(self, name))
            if vals.size == 0:
                raise ConfigError(f"{name} must be nonempty")
            if not np.all(np.isfinite(vals)) or np.any(vals <= 0):
                raise ConfigError(f"{name} must be finite and positive")
            if np.any(np.diff(vals) <= 0):
                raise ConfigError(f"{name} must be strictly ascending")
        if not (np.isfinite(self.gamma) and self.gamma >= 0):
            raise ConfigError(f"gamma must be nonnegative, got {self.gamma}")
        # validates L and M
        HierarchyConfig(self.L, self.M, 1.0, 1.0)
        if self.input_node is None:
            object.__setattr__(self, "input_node", self.M + 2)

    def config(self, alpha: float, beta: float) -> HierarchyConfig:
        return HierarchyConfig(self.L, self.M, alpha, beta)

    def points(self) -> list[tuple[float, float]]:
        """``(alpha, beta)`` pairs in row-major ``[beta][alpha]`` order."""
        return [(a, b) for b in self.beta_values for a in self.alpha_values]


@dataclass(frozen=True, eq=False)
class SweepResult:
    grid: GridSpec
    values: np.ndarray  # [beta_index][alpha_index]
    kind: str

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"kind must be one of {KINDS}")
        shape = (len(self.grid.beta_values), len(self.grid.alpha_values))
        if self.values.shape != shape:
            raise ConfigError(f"values shape {self.values.shape} does not match grid {shape}")


def linear_grid(lo: float, hi: float, n: int) -> list[float]:
    return np.linspace(lo, hi, n).tolist()


def log_grid(lo: float, hi: float, n: int) -> list[float]:
    return np.geomspace(lo, hi, n).tolist()


def _evaluate(grid: GridSpec, fn: Callable[[float, float], float], workers: Optional[int]) -> np.ndarray:
    pts = grid.points()
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            flat = list(pool.map(lambda p: fn(*p), pts))
    else:
        flat = [fn(a, b) for a, b in pts]
    return np.asarray(flat, dtype=float).reshape(len(grid.beta_values), len(grid.alpha_values))


def sweep_autonomous_rate(grid: GridSpec, workers: Optional[int] = None) -> SweepResult:
    """Autonomous rate at every grid point: closed form for ``L = 2``, numeric otherwise."""
    if grid.gamma != 0:
        raise ConfigError("autonomous sweep requires gamma == 0")
    if grid.L == 2:
        fn = lambda a, b: closedform.rate_autonomous_l2(grid.config(a, b))
    else:
        fn = lambda a, b: rate_autonomous(build_weight_matrix(grid.config(a, b)))
    return SweepResult(grid, _evaluate(grid, fn, workers), "autonomous_rate")


def input_rate(config: HierarchyConfig, gamma: float, input_node: int) -> float:
    W = build_weight_matrix(config)
    return rate_with_input(W, InputSpec.single(W.n, input_node, gamma))


def sweep_input_rate(grid: GridSpec, workers: Optional[int] = None) -> SweepResult:
    if grid.gamma <= 0:
        raise ConfigError("input sweep requires gamma > 0")
    fn = lambda a, b: input_rate(grid.config(a, b), grid.gamma, grid.input_node)
    return SweepResult(grid, _evaluate(grid, fn, workers), "input_rate")


def classify_point(config: HierarchyConfig) -> int:
    """``-1`` if lambda_B binds, ``+1`` if lambda_G binds, ``0`` for a tie within 1e-12."""
    spec = closedform.analytic_spectrum_l2(config)
    if spec.lambda_B > spec.lambda_G + TIE_TOL:
        return REGION_B
    if spec.lambda_G > spec.lambda_B + TIE_TOL:
        return REGION_G
    return REGION_TIE


def classify_lambda_region(grid: GridSpec, workers: Optional[int] = None) -> SweepResult:
    if grid.L != 2:
        raise ConfigError("region classification is defined for L=2 only")
    fn = lambda a, b: float(classify_point(grid.config(a, b)))
    return SweepResult(grid, _evaluate(grid, fn, workers), "region")


def fig3_grid(M: int) -> GridSpec:
    """alpha = 1..35, beta = 0.01, 0.06, ..., 1.96: the grid of the published region map."""
    return GridSpec(tuple(range(1, 36)), tuple(round(0.01 + 0.05 * k, 2) for k in range(40)), M=M, L=2)


@dataclass(frozen=True)
class TradeoffRow:
    alpha: float
    autonomous_rate: float
    input_rate: float
    autonomous_best: bool = False
    input_best: bool = False


@dataclass(frozen=True)
class TradeoffReport:
    M: int
    beta: float
    gamma: float
    rows: tuple = field(default_factory=tuple)

    @property
    def autonomous_argmax(self) -> float:
        return next(r.alpha for r in self.rows if r.autonomous_best)

    @property
    def input_argmax(self) -> float:
        return next(r.alpha for r in self.rows if r.input_best)


def tradeoff_report(M: int, beta: float, gamma: float, alpha_values: Sequence[float]) -> TradeoffReport:
    """Autonomous (closed form) and bottom-up (numeric) rate side by side for ``L = 2``.

    The input sits at node ``M + 2``. The first maximizer of each column is flagged.
    """
    if gamma <= 0:
        raise ConfigError("tradeoff report needs gamma > 0")
    alphas = [float(a) for a in alpha_values]
    if not alphas:
        raise ConfigError("alpha_values must be nonempty")
    auto, inp = [], []
    for a in alphas:
        cfg = HierarchyConfig(2, M, a, beta)
        auto.append(closedform.rate_autonomous_l2(cfg))
        inp.append(input_rate(cfg, gamma, M + 2))
    ia, ii = int(np.argmax(auto)), int(np.argmax(inp))
    rows = tuple(
        TradeoffRow(a, ra, ri, k == ia, k == ii) for k, (a, ra, ri) in enumerate(zip(alphas, auto, inp))
    )
    return TradeoffReport(M, float(beta), float(gamma), rows)
