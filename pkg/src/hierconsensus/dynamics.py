"""Diffusive consensus dynamics ``dx/dt = A x + diag(gamma) u``.

``A = W - I - diag(gamma)``. Integration is classical fixed-step RK4; since the
system is linear and time-invariant the four stages collapse to a single
affine update ``x <- P x + Q b`` that is precomputed once per run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NumericalError
from .hierarchy import WeightMatrix

#: fraction of recorded time treated as transient by :func:`empirical_rate`
TRANSIENT_FRACTION = 0.2
#: distances below this are floating-point noise, not signal
NOISE_FLOOR = 1e-10
MIN_FIT_POINTS = 10


@dataclass(frozen=True, eq=False)
class InputSpec:
    """Input intensities ``gamma`` and constant input values ``u`` per node."""

    gamma: np.ndarray
    u: np.ndarray

    def __post_init__(self):
        gamma = np.array(self.gamma, dtype=float).ravel()
        u = np.array(self.u, dtype=float).ravel()
        if gamma.shape != u.shape:
            raise ConfigError(f"gamma has {gamma.size} entries but u has {u.size}")
        if not (np.all(np.isfinite(gamma)) and np.all(np.isfinite(u))):
            raise ConfigError("gamma and u must be finite")
        if np.any(gamma < 0):
            raise ConfigError("input intensities gamma must be nonnegative")
        gamma.setflags(write=False)
        u.setflags(write=False)
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "u", u)

    @classmethod
    def none(cls, n: int) -> InputSpec:
        return cls(np.zeros(n), np.zeros(n))

    @classmethod
    def single(cls, n: int, node: int, gamma: float, value: float = 1.0) -> InputSpec:
        """Single input of intensity ``gamma`` and value ``value`` at 1-based ``node``."""
        if not 1 <= node <= n:
            raise ConfigError(f"input node {node} outside [1, {n}]")
        g = np.zeros(n)
        u = np.zeros(n)
        g[node - 1] = gamma
        u[node - 1] = value
        return cls(g, u)

    @property
    def n(self) -> int:
        return self.gamma.size

    @property
    def is_single(self) -> bool:
        return int(np.count_nonzero(self.gamma > 0)) == 1


@dataclass(frozen=True)
class SimConfig:
    dt: float = 0.01
    t_end: float = 200.0
    record_every: int = 10

    def __post_init__(self):
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ConfigError(f"dt must be positive, got {self.dt}")
        if not (math.isfinite(self.t_end) and self.t_end >= self.dt):
            raise ConfigError(f"t_end must be >= dt, got t_end={self.t_end}, dt={self.dt}")
        if self.record_every < 1:
            raise ConfigError(f"record_every must be a positive integer, got {self.record_every}")


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Recorded times and the state vector at each of them (``states[k]`` at ``times[k]``)."""

    times: np.ndarray
    states: np.ndarray

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def system_matrix(W: WeightMatrix, input: InputSpec) -> np.ndarray:
    """Return ``A = W - I - diag(gamma)``."""
    if input.n != W.n:
        raise ConfigError(f"input has {input.n} entries, network has {W.n} nodes")
    return W.entries - np.eye(W.n) - np.diag(input.gamma)


def max_stable_dt(input: InputSpec) -> float:
    # |spectrum(A)| <= 2 + max(gamma); keep h * |lambda| <= 0.1, well inside RK4's region
    gmax = float(input.gamma.max()) if input.n else 0.0
    return 0.1 / (2.0 + gmax)


def _rk4_affine_step(A: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray]:
    # one RK4 step of x' = A x + b is exactly x <- P x + Q b with these truncated series
    n = A.shape[0]
    I = np.eye(n)
    hA = h * A
    hA2 = hA @ hA
    hA3 = hA2 @ hA
    hA4 = hA3 @ hA
    P = I + hA + hA2 / 2 + hA3 / 6 + hA4 / 24
    Q = h * (I + hA / 2 + hA2 / 6 + hA3 / 24)
    return P, Q


def simulate(W: WeightMatrix, input: InputSpec, x0, sim: SimConfig = SimConfig()) -> Trajectory:
    """Integrate the consensus dynamics from ``x0`` with fixed-step RK4.

    The horizon is split into ``ceil(t_end / dt)`` equal steps, so the step
    actually used never exceeds ``sim.dt``. States are stored every
    ``sim.record_every`` steps, plus the final state.
    """
    x = np.array(x0, dtype=float).ravel()
    if x.size != W.n:
        raise ConfigError(f"x0 has {x.size} entries, network has {W.n} nodes")
    if not np.all(np.isfinite(x)):
        raise ConfigError("x0 must be finite")
    A = system_matrix(W, input)
    bound = max_stable_dt(input)
    if sim.dt > bound:
        raise ConfigError(f"dt={sim.dt} too large for stable integration; need dt <= {bound:.6g}")

    steps = math.ceil(sim.t_end / sim.dt - 1e-9)
    h = sim.t_end / steps
    P, Q = _rk4_affine_step(A, h)
    drive = Q @ (input.gamma * input.u)

    times = [0.0]
    states = [x.copy()]
    for k in range(1, steps + 1):
        x = P @ x + drive
        if k % sim.record_every == 0 or k == steps:
            times.append(k * h)
            states.append(x.copy())
    return Trajectory(np.asarray(times), np.asarray(states))


def consensus_value(pi, x0) -> float:
    """Predicted consensus ``pi^T x0`` for a normalized left Perron vector ``pi``."""
    pi = np.asarray(pi, dtype=float).ravel()
    x0 = np.asarray(x0, dtype=float).ravel()
    if pi.shape != x0.shape:
        raise ConfigError(f"pi has {pi.size} entries, x0 has {x0.size}")
    if np.any(pi < 0) or abs(pi.sum() - 1.0) > 1e-10:
        raise ConfigError("pi must be nonnegative and sum to 1")
    return float(pi @ x0)


def empirical_rate(traj: Trajectory, target) -> float:
    """Estimate the exponential decay rate of ``||x(t) - target||_2``.

    Fits a least-squares line to ``-log(distance)`` against time, after
    dropping the first 20% of the recorded time span and every point already
    at the noise floor.

    Raises
    ------
    NumericalError
        If fewer than 10 usable points remain.
    """
    target = np.asarray(target, dtype=float).ravel()
    if target.size != traj.states.shape[1]:
        raise ConfigError(f"target has {target.size} entries, states have {traj.states.shape[1]}")
    t = traj.times
    dist = np.linalg.norm(traj.states - target, axis=1)
    cutoff = t[0] + TRANSIENT_FRACTION * (t[-1] - t[0])
    keep = (t >= cutoff) & (dist > NOISE_FLOOR)
    if np.count_nonzero(keep) < MIN_FIT_POINTS:
        raise NumericalError(
            f"unfittable trajectory: {np.count_nonzero(keep)} usable points, need {MIN_FIT_POINTS}"
        )
    slope, _ = np.polyfit(t[keep], -np.log(dist[keep]), 1)
    return float(slope)
