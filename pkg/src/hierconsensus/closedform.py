"""Closed-form spectral theory of the two-layer (``L = 2``) network.

Node layout for ``L = 2``: positions ``1..M`` are the top members, ``M + 1`` the
top leader, and bottom unit ``k`` (``k = 1..M``) occupies
``(M+1)k + 1 .. (M+1)(k+1)`` with its leader last.

The spectrum of ``W`` is real and splits into eight values:

* ``lambda_A = 1`` (simple, eigenvector ``1``);
* ``lambda_B, lambda_C, lambda_D``, each of multiplicity ``M - 1``, one per
  real root ``K`` of a cubic;
* ``lambda_E = (beta - 1)/(M + beta)`` with multiplicity ``M(M - 1)``;
* the simple values ``lambda_F``, ``lambda_G`` and ``lambda_H``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, NumericalError
from .hierarchy import HierarchyConfig

BRANCHES = ("B", "C", "D")


def _require_l2(config: HierarchyConfig) -> None:
    if config.L != 2:
        raise ConfigError(f"closed forms are available for L=2 only, got L={config.L}")


def _check_params(M: int, alpha: float, beta: float = 1.0) -> None:
    # reuses HierarchyConfig's validation
    HierarchyConfig(2, M, alpha, beta)


# --- cubic -------------------------------------------------------------------


def cubic_coefficients(M: int, alpha: float, beta: float) -> tuple[float, float, float, float]:
    """Coefficients ``(c3, c2, c1, c0)`` of

    ``f(K) = (alpha + M K)(beta K - 1)^2 - (M + alpha) K (beta K (M + beta) - beta K + 1)``.
    """
    a, b = alpha, beta
    c3 = M * b * b
    c2 = a * b * b - 2 * M * b - (M + a) * b * (M + b - 1)
    c1 = -a * (2 * b + 1)
    c0 = a
    return c3, c2, c1, c0


def cubic_f(K, M: int, alpha: float, beta: float):
    """``f(K)`` in its factored form, independent of :func:`cubic_coefficients`."""
    return (alpha + M * K) * (beta * K - 1) ** 2 - (M + alpha) * K * (beta * K * (M + beta) - beta * K + 1)


@dataclass(frozen=True)
class CubicRoots:
    K_B: float
    K_C: float
    K_D: float

    def as_tuple(self) -> tuple[float, float, float]:
        return self.K_B, self.K_C, self.K_D

    def __getitem__(self, branch: str) -> float:
        return {"B": self.K_B, "C": self.K_C, "D": self.K_D}[branch]


def _real_cubic_roots(c3: float, c2: float, c1: float, c0: float) -> list[float]:
    # trigonometric form; caller guarantees three distinct real roots
    b, c, d = c2 / c3, c1 / c3, c0 / c3
    p = c - b * b / 3
    q = 2 * b**3 / 27 - b * c / 3 + d
    if p >= 0:
        raise NumericalError("cubic does not have three distinct real roots")
    m = 2 * math.sqrt(-p / 3)
    arg = 3 * q / (p * m)
    theta = math.acos(max(-1.0, min(1.0, arg))) / 3
    return [m * math.cos(theta - 2 * math.pi * k / 3) - b / 3 for k in range(3)]


def cubic_k_roots(M: int, alpha: float, beta: float) -> CubicRoots:
    """The three real roots ``K_B > K_C > K_D`` of ``f(K) = 0``.

    Closed-form trigonometric solution, one Newton step per root, then a
    runtime check of the bracketing ``K_B > 1/beta``, ``0 < K_C < 1/beta``,
    ``K_D < 0`` (which holds because ``f(0) = alpha > 0`` and ``f(1/beta) < 0``).
    """
    _check_params(M, alpha, beta)
    coeffs = cubic_coefficients(M, alpha, beta)
    c3, c2, c1, _ = coeffs
    roots = []
    for K in _real_cubic_roots(*coeffs):
        slope = (3 * c3 * K + 2 * c2) * K + c1
        if slope != 0:
            K -= np.polyval(coeffs, K) / slope
        roots.append(float(K))
    K_B, K_C, K_D = sorted(roots, reverse=True)
    inv_b = 1.0 / beta
    if not (K_B > inv_b and 0 < K_C < inv_b and K_D < 0):
        raise NumericalError(f"cubic roots {K_B, K_C, K_D} violate the expected bracketing")
    return CubicRoots(K_B, K_C, K_D)


def lambda_from_k(K: float, M: int, beta: float) -> float:
    """Eigenvalue attached to a cubic root: ``1 - (beta K - M - beta - 1)/((M + beta)(beta K - 1))``."""
    return 1.0 - (beta * K - M - beta - 1) / ((M + beta) * (beta * K - 1))


# --- spectrum ----------------------------------------------------------------


@dataclass(frozen=True)
class SpectrumL2:
    lambda_A: float
    lambda_B: float
    lambda_C: float
    lambda_D: float
    lambda_E: float
    lambda_F: float
    lambda_G: float
    lambda_H: float
    roots: CubicRoots
    config: HierarchyConfig
    multiplicities: dict = field(compare=False)

    def pairs(self) -> list[tuple[str, float, int]]:
        """``(label, value, multiplicity)`` for every distinct family."""
        return [(k, getattr(self, f"lambda_{k}"), self.multiplicities[k]) for k in "ABCDEFGH"]

    def values(self) -> np.ndarray:
        """All ``(M + 1)**2`` eigenvalues with repetition, ascending."""
        return np.sort(np.concatenate([np.full(m, v) for _, v, m in self.pairs()]))


def multiplicities_l2(M: int) -> dict:
    return {"A": 1, "B": M - 1, "C": M - 1, "D": M - 1, "E": M * (M - 1), "F": 1, "G": 1, "H": 1}


def lambda_gh(M: int, alpha: float, beta: float) -> tuple[float, float]:
    disc = (M - 1) ** 2 + 4 * (M + beta) * (M + alpha * beta) / (M + alpha)
    root = math.sqrt(disc)
    return (M - 1 + root) / (2 * (M + beta)), (M - 1 - root) / (2 * (M + beta))


def analytic_spectrum_l2(config: HierarchyConfig) -> SpectrumL2:
    _require_l2(config)
    M, a, b = config.M, config.alpha, config.beta
    roots = cubic_k_roots(M, a, b)
    lam_b, lam_c, lam_d = (lambda_from_k(K, M, b) for K in roots.as_tuple())
    lam_e = (b - 1) / (M + b)
    lam_f = (M * (a - 1) + a * (b - 1)) / ((M + a) * (M + b))
    lam_g, lam_h = lambda_gh(M, a, b)
    return SpectrumL2(
        1.0, lam_b, lam_c, lam_d, lam_e, lam_f, lam_g, lam_h,
        roots=roots, config=config, multiplicities=multiplicities_l2(M),
    )


# --- Perron vector and rates -------------------------------------------------


@dataclass(frozen=True, eq=False)
class PerronVectorL2:
    pi: np.ndarray
    K_norm: float


def perron_normalization(M: int, alpha: float, beta: float) -> float:
    return alpha * (M + beta) / ((M * M + M + alpha + M * beta) * (M * beta + alpha))


def left_perron_l2(config: HierarchyConfig) -> PerronVectorL2:
    """Left eigenvector of ``W`` for eigenvalue 1, entries summing to one."""
    _require_l2(config)
    M, a, b = config.M, config.alpha, config.beta
    K = perron_normalization(M, a, b)
    top = np.r_[np.ones(M), (M + a) / (M + b)]
    bottom = np.r_[np.full(M, b / a), (M + a) * b / ((M + b) * a)]
    pi = K * np.concatenate([top] + [bottom] * M)
    pi.setflags(write=False)
    return PerronVectorL2(pi, K)


def rate_autonomous_l2(config: HierarchyConfig) -> float:
    spec = analytic_spectrum_l2(config)
    return 1.0 - max(spec.lambda_B, spec.lambda_G)


def rate_equal_weights(M: int, alpha: float) -> float:
    """Autonomous rate when ``alpha == beta``:
    ``(s - sqrt(s^2 - 4 alpha)) / (2 (M + alpha))`` with ``s = M + 2 alpha + 1``.

    Evaluated in the rationalized form ``2 alpha / ((M + alpha)(s + sqrt(s^2 - 4 alpha)))``
    to avoid cancellation at large ``alpha``.
    """
    _check_params(M, alpha)
    s = M + 2 * alpha + 1
    return 2 * alpha / ((M + alpha) * (s + math.sqrt(s * s - 4 * alpha)))


def lambda_b_equal_weights(M: int, alpha: float) -> float:
    s = M + 2 * alpha + 1
    return (M - 1 + math.sqrt(s * s - 4 * alpha)) / (2 * (M + alpha))


def optimal_alpha_equal(M: int) -> float:
    """Maximizer of :func:`rate_equal_weights` over ``alpha``."""
    if isinstance(M, bool) or not isinstance(M, (int, np.integer)) or M < 2:
        raise ConfigError(f"M must be an integer >= 2, got {M!r}")
    return (M + (M - 1) * math.sqrt(M * (2 * M + 1))) / (2 * M - 1)


def perturbation_coefficient(M: int, alpha: float, beta: float) -> float:
    """First-order sensitivity ``c`` with ``lambda_max(W - gamma e e^T) = 1 - c gamma + o(gamma)``,
    the input sitting at node ``M + 2``."""
    _check_params(M, alpha, beta)
    return beta * (M + beta) / ((beta * M + alpha) * (M * M + M * beta + M + alpha))


# --- eigenvector families ----------------------------------------------------


def eigvec_vhat(config: HierarchyConfig, branch: str, y) -> np.ndarray:
    """Eigenvector for ``lambda_B``, ``lambda_C`` or ``lambda_D`` built from ``y`` in R^(M-1).

    With ``z = (y, -sum(y))`` the top members carry ``z``, the top leader 0,
    and bottom unit ``k`` carries ``K z_k`` on its members and ``H z_k`` on its
    leader, where ``H = K (M + beta) / (K beta - 1)``.
    """
    _require_l2(config)
    if branch not in BRANCHES:
        raise ConfigError(f"branch must be one of {BRANCHES}, got {branch!r}")
    M, b = config.M, config.beta
    y = np.asarray(y, dtype=float).ravel()
    if y.size != M - 1:
        raise ConfigError(f"y must have M-1={M - 1} entries, got {y.size}")
    if not np.any(y != 0):
        raise ConfigError("y must be nonzero")
    K = cubic_k_roots(M, config.alpha, b)[branch]
    H = K * (M + b) / (K * b - 1)
    z = np.r_[y, -y.sum()]
    parts = [np.r_[z, 0.0]]
    parts += [np.r_[np.full(M, K * zk), H * zk] for zk in z]
    return np.concatenate(parts)


def eigvec_vcheck(config: HierarchyConfig, i: int, j: int) -> np.ndarray:
    """``e_{(M+1)i+1} - e_{(M+1)i+j}``: members 1 and ``j`` of bottom unit ``i``, eigenvalue ``lambda_E``."""
    _require_l2(config)
    M = config.M
    if not 1 <= i <= M:
        raise ConfigError(f"i must be in [1, {M}], got {i}")
    if not 2 <= j <= M:
        raise ConfigError(f"j must be in [2, {M}], got {j}")
    v = np.zeros((M + 1) ** 2)
    v[(M + 1) * i] = 1.0
    v[(M + 1) * i + j - 1] = -1.0
    return v


def _symmetric_vector(M: int, top_member: float, top_leader: float, bottom_leader: float) -> np.ndarray:
    # unit-symmetric pattern: every bottom member carries 1
    return np.concatenate(
        [np.r_[np.full(M, top_member), top_leader]] + [np.r_[np.ones(M), bottom_leader]] * M
    )


def eigvec_vbar_vtilde(config: HierarchyConfig, which: str) -> tuple[np.ndarray, float]:
    """Eigenvector (and its eigenvalue) for the simple eigenvalues ``F``, ``G`` or ``H``.

    All three vectors are constant on every group of bottom members. ``F``
    uses ``K = (M + beta)(lambda_F - 1) + 1`` with pattern ``(K 1, K^2 | 1, K | ...)``;
    ``G``/``H`` take ``K`` as the larger/smaller root of
    ``K^2 + (2 beta + M - 1) K + beta (M + beta - 1) - (M + beta)(M + alpha beta)/(M + alpha) = 0``
    and ``lambda = (M + beta - 1 + K)/(M + beta)``.
    """
    _require_l2(config)
    M, a, b = config.M, config.alpha, config.beta
    if which == "F":
        lam = (M * (a - 1) + a * (b - 1)) / ((M + a) * (M + b))
        K = (M + b) * (lam - 1) + 1
        return _symmetric_vector(M, K, K * K, K), lam
    if which not in ("G", "H"):
        raise ConfigError(f"which must be one of F, G, H, got {which!r}")
    p = 2 * b + M - 1
    q = b * (M + b - 1) - (M + b) * (M + a * b) / (M + a)
    root = math.sqrt(p * p - 4 * q)
    K = (-p + root) / 2 if which == "G" else (-p - root) / 2
    lam = (M + b - 1 + K) / (M + b)
    top_member = -(M * b - K * a * b) / (a * (K + b))
    return _symmetric_vector(M, top_member, -M * b / a, K), lam


def eigen_residual(W: np.ndarray, v: np.ndarray, lam: float) -> float:
    """``||W v - lam v||_inf / ||v||_inf``."""
    return float(np.max(np.abs(W @ v - lam * v)) / np.max(np.abs(v)))


def appendix_eigenbasis(config: HierarchyConfig) -> tuple[np.ndarray, np.ndarray]:
    """Columns: every constructed eigenvector (``1``, ``v_hat`` x3(M-1), ``v_check`` xM(M-1), F, G, H).

    Returns ``(V, eigenvalues)``; ``V`` is square of size ``(M + 1)**2``.
    """
    spec = analytic_spectrum_l2(config)
    M = config.M
    cols, lams = [np.ones((M + 1) ** 2)], [1.0]
    for branch in BRANCHES:
        for k in range(M - 1):
            cols.append(eigvec_vhat(config, branch, np.eye(M - 1)[k]))
            lams.append(getattr(spec, f"lambda_{branch}"))
    for i in range(1, M + 1):
        for j in range(2, M + 1):
            cols.append(eigvec_vcheck(config, i, j))
            lams.append(spec.lambda_E)
    for which in "FGH":
        v, lam = eigvec_vbar_vtilde(config, which)
        cols.append(v)
        lams.append(lam)
    return np.column_stack(cols), np.asarray(lams)
