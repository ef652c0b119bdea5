"""Invariant checks for a single configuration, run by the ``verify`` subcommand."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import closedform
from .dynamics import InputSpec
from .hierarchy import HierarchyConfig, build_weight_matrix, build_weight_matrix_blockform
from .spectral import numeric_spectrum, rate_autonomous, rate_with_input


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    tolerance: float
    passed: bool

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name} value={self.value:.7g} tol={self.tolerance:.3g}"


def _le(name: str, value: float, tol: float) -> Check:
    return Check(name, float(value), tol, bool(value <= tol))


def match_spectra(expected, observed, tol: float) -> int:
    """Greedily pair each expected eigenvalue with its nearest unused observed one.

    Returns the number of expected values left without a partner within ``tol``
    (a length mismatch counts the surplus as unmatched).
    """
    expected = np.sort(np.asarray(expected, dtype=complex).real)
    observed = np.asarray(observed, dtype=complex)
    used = np.zeros(observed.size, dtype=bool)
    unmatched = 0
    for e in expected:
        dist = np.where(used, np.inf, np.abs(observed - e))
        k = int(np.argmin(dist)) if dist.size else -1
        if k < 0 or dist[k] > tol:
            unmatched += 1
        else:
            used[k] = True
    return unmatched + int(np.count_nonzero(~used))


def run_checks(config: HierarchyConfig, tolerance_scale: float = 1.0) -> list[Check]:
    s = tolerance_scale
    W = build_weight_matrix(config)
    E = W.entries
    checks = [
        _le("row_stochastic", np.max(np.abs(E.sum(axis=1) - 1)), 1e-12 * s),
        Check("entries_in_unit_interval", float(E.min()), 0.0, bool(E.min() >= 0 and E.max() <= 1)),
    ]
    asym = float(np.max(np.abs(E - E.T)))
    sym_ok = (asym <= 1e-15) == (config.alpha == config.beta)
    checks.append(Check("symmetric_iff_alpha_eq_beta", asym, 1e-15, sym_ok))

    spec = numeric_spectrum(E)
    checks.append(_le("dominant_eigenvalue_is_one", abs(spec.eigenvalues[0] - 1), 1e-10 * s))
    r_num = rate_autonomous(W)
    checks.append(Check("rate_positive", r_num, 0.0, r_num > 0))

    if config.L != 2:
        return checks

    M, a, b = config.M, config.alpha, config.beta
    checks.append(_le("blockform_match", np.max(np.abs(E - build_weight_matrix_blockform(config).entries)), 0.0))

    roots = closedform.cubic_k_roots(M, a, b)
    c3 = closedform.cubic_coefficients(M, a, b)[0]
    res = max(abs(closedform.cubic_f(K, M, a, b)) / c3 for K in roots.as_tuple())
    checks.append(_le("cubic_residual", res, 1e-9 * s))

    sl2 = closedform.analytic_spectrum_l2(config)
    total = sum(m for _, _, m in sl2.pairs())
    checks.append(Check("multiplicity_total", total, (M + 1) ** 2, total == (M + 1) ** 2))
    checks.append(_le("spectrum_unmatched", match_spectra(sl2.values(), spec.eigenvalues, 1e-7 * s), 0))
    order_ok = (
        sl2.lambda_B > sl2.lambda_D > sl2.lambda_C
        and sl2.lambda_B > sl2.lambda_E
        and sl2.lambda_B > sl2.lambda_F
        and sl2.lambda_G > sl2.lambda_H
    )
    checks.append(Check("eigenvalue_ordering", float(order_ok), 1.0, order_ok))

    pv = closedform.left_perron_l2(config).pi
    checks.append(_le("perron_residual", np.max(np.abs(pv @ E - pv)), 1e-10 * s))
    checks.append(_le("perron_sum", abs(pv.sum() - 1), 1e-12 * s))
    checks.append(Check("perron_positive", float(pv.min()), 0.0, bool(pv.min() > 0)))

    r_cf = closedform.rate_autonomous_l2(config)
    checks.append(_le("rate_analytic_vs_numeric", abs(r_cf - r_num), 1e-8 * s))
    if a == b:
        checks.append(_le("rate_equal_weights", abs(closedform.rate_equal_weights(M, a) - r_cf), 1e-12 * s))

    V, lams = closedform.appendix_eigenbasis(config)
    worst = max(closedform.eigen_residual(E, V[:, k], lams[k]) for k in range(V.shape[1]))
    checks.append(_le("appendix_eigen_residual", worst, 1e-8 * s))
    rank = int(np.linalg.matrix_rank(V))
    checks.append(Check("appendix_rank", rank, (M + 1) ** 2, rank == (M + 1) ** 2))

    gamma = 1e-6
    c = closedform.perturbation_coefficient(M, a, b)
    r_in = rate_with_input(W, InputSpec.single(W.n, M + 2, gamma))
    checks.append(_le("perturbation_coefficient_rel", abs(r_in / gamma - c) / c, 1e-3 * s))
    return checks
