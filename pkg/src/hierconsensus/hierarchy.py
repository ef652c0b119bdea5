"""Hierarchical network topology and its row-stochastic weight matrix.

A network of depth ``L`` and breadth ``M`` is a tree of units. Every unit is a
clique of ``M`` members plus one leader (position ``M + 1``). Member ``k`` of a
unit is linked to the leader of the ``k``-th sub-unit on the layer below; the
leader is linked to the matching member of its parent unit.

All public indices are 1-based. Node ``i`` sits at
``i = pos + (unit - 1)(M + 1) + (M + 1)(M**(layer - 1) - 1)/(M - 1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

# dense storage only; beyond this the O(n^2) matrix and O(n^3) eigensolve stop being desk-scale
MAX_DENSE_NODES = 5000
_INT64_MAX = 2**63 - 1


@dataclass(frozen=True)
class HierarchyConfig:
    """Structural parameters of the network.

    Parameters
    ----------
    L : int
        Depth, the number of layers (>= 2).
    M : int
        Breadth, members per unit and sub-units per unit (>= 2).
    alpha : float
        Weight given to information from the layer above (> 0).
    beta : float
        Weight given to information from the layer below (> 0).
    """

    L: int
    M: int
    alpha: float
    beta: float

    def __post_init__(self):
        for name in ("L", "M"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise ConfigError(f"{name} must be an integer, got {value!r}")
        if self.L < 2:
            raise ConfigError(f"L must be >= 2, got {self.L}")
        if self.M < 2:
            raise ConfigError(f"M must be >= 2, got {self.M}")
        for name in ("alpha", "beta"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float, np.floating)) and math.isfinite(value) and value > 0):
                raise ConfigError(f"{name} must be a finite positive number, got {value!r}")
        object.__setattr__(self, "L", int(self.L))
        object.__setattr__(self, "M", int(self.M))
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))


@dataclass(frozen=True)
class NodeCoord:
    """(layer, unit, position) of a node; ``pos == M + 1`` is the unit leader."""

    layer: int
    unit: int
    pos: int


def _units_above(layer: int, M: int) -> int:
    # number of units in layers 1 .. layer-1
    return (M ** (layer - 1) - 1) // (M - 1)


def node_count(config: HierarchyConfig) -> int:
    """Total number of nodes, ``(M + 1)(M**L - 1)/(M - 1)``, in exact arithmetic."""
    M, L = config.M, config.L
    n = (M + 1) * (M**L - 1) // (M - 1)
    if n > _INT64_MAX:
        raise ConfigError(f"config too large: {n} nodes overflows a 64-bit index")
    return n


def _check_coord(c: NodeCoord, config: HierarchyConfig) -> None:
    M = config.M
    if not 1 <= c.layer <= config.L:
        raise ConfigError(f"layer {c.layer} outside [1, {config.L}]")
    if not 1 <= c.unit <= M ** (c.layer - 1):
        raise ConfigError(f"unit {c.unit} outside [1, {M ** (c.layer - 1)}] on layer {c.layer}")
    if not 1 <= c.pos <= M + 1:
        raise ConfigError(f"position {c.pos} outside [1, {M + 1}]")


def coord_to_index(c: NodeCoord, config: HierarchyConfig) -> int:
    """Flat 1-based index of a node coordinate."""
    _check_coord(c, config)
    M = config.M
    return c.pos + (c.unit - 1) * (M + 1) + (M + 1) * _units_above(c.layer, M)


def index_to_coord(i: int, config: HierarchyConfig) -> NodeCoord:
    """Inverse of :func:`coord_to_index`."""
    n = node_count(config)
    if not 1 <= i <= n:
        raise ConfigError(f"index {i} outside [1, {n}]")
    M = config.M
    offset = i - 1
    for layer in range(1, config.L + 1):
        width = (M + 1) * M ** (layer - 1)
        if offset < width:
            unit, pos = divmod(offset, M + 1)
            return NodeCoord(layer, unit + 1, pos + 1)
        offset -= width
    raise AssertionError("unreachable: index already range-checked")


@dataclass(frozen=True, eq=False)
class WeightMatrix:
    """Dense row-stochastic weight matrix with the config that generated it.

    ``entries`` is read-only so instances can be shared freely.
    """

    n: int
    entries: np.ndarray
    config: HierarchyConfig

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)
        if entries.shape != (self.n, self.n):
            raise ConfigError(f"entries shape {entries.shape} does not match n={self.n}")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    def is_symmetric(self, tol: float = 1e-15) -> bool:
        return bool(np.max(np.abs(self.entries - self.entries.T)) <= tol)


def build_weight_matrix(config: HierarchyConfig) -> WeightMatrix:
    """Assemble ``W`` entry by entry from the per-node case analysis.

    Members spread ``1/(M+beta)`` over their unit and ``beta/(M+beta)`` on the
    down-edge to their sub-unit leader (a self-loop on the bottom layer).
    Leaders spread ``1/(M+alpha)`` over their unit and ``alpha/(M+alpha)`` on
    the up-edge to their parent member (a self-loop for the top leader).
    """
    n = node_count(config)
    if n > MAX_DENSE_NODES:
        raise ConfigError(f"config too large: {n} nodes exceeds dense limit {MAX_DENSE_NODES}")
    L, M, a, b = config.L, config.M, config.alpha, config.beta
    W = np.zeros((n, n))
    in_member, down = 1.0 / (M + b), b / (M + b)
    in_leader, up = 1.0 / (M + a), a / (M + a)

    for layer in range(1, L + 1):
        for unit in range(1, M ** (layer - 1) + 1):
            # 0-based start of this unit's block
            base = (unit - 1) * (M + 1) + (M + 1) * _units_above(layer, M)
            block = slice(base, base + M + 1)
            W[base : base + M, block] = in_member
            W[base + M, block] = in_leader
            W[np.arange(base, base + M + 1), np.arange(base, base + M + 1)] = 0.0

            for pos in range(1, M + 1):
                row = base + pos - 1
                if layer < L:
                    child = NodeCoord(layer + 1, M * (unit - 1) + pos, M + 1)
                    W[row, coord_to_index(child, config) - 1] = down
                else:
                    W[row, row] = down

            leader = base + M
            if layer > 1:
                parent = NodeCoord(layer - 1, (unit - 1) // M + 1, (unit - 1) % M + 1)
                W[leader, coord_to_index(parent, config) - 1] = up
            else:
                W[leader, leader] = up

    return WeightMatrix(n, W, config)


def build_weight_matrix_blockform(config: HierarchyConfig) -> WeightMatrix:
    """Assemble the ``L = 2`` matrix from its ``(M+1) x (M+1)`` blocks.

    Independent of :func:`build_weight_matrix`; used as a cross-check.
    """
    if config.L != 2:
        raise ConfigError(f"block form is defined for L=2 only, got L={config.L}")
    M, a, b = config.M, config.alpha, config.beta
    m = M + 1
    ones = np.ones((m, m))
    eye = np.eye(m)
    e = eye  # e[:, k] is the (k+1)-th unit vector

    P = np.diag([1.0 / (M + b)] * M + [1.0 / (M + a)]) @ (ones - eye)
    Q = b / (M + b) * (eye - np.outer(e[:, M], e[:, M]))

    def E(x: float, i: int) -> np.ndarray:
        return x / (M + x) * np.outer(e[:, i - 1], e[:, M])

    zero = np.zeros((m, m))
    rows = [[P + E(a, M + 1)] + [E(b, k) for k in range(1, M + 1)]]
    for k in range(1, M + 1):
        rows.append([E(a, k).T] + [P + Q if j == k else zero for j in range(1, M + 1)])
    return WeightMatrix(m * m, np.block(rows), config)
