"""Numeric spectra and the two convergence-rate definitions, valid for any depth."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import InputSpec
from .errors import ConfigError, NumericalError
from .hierarchy import WeightMatrix

#: eigenvalues closer than this to 1 count as the dominant one
DOMINANT_GAP = 1e-8


@dataclass(frozen=True, eq=False)
class NumericSpectrum:
    """All eigenvalues, sorted by descending real part then descending imaginary part."""

    eigenvalues: np.ndarray
    n: int

    @property
    def real(self) -> np.ndarray:
        return self.eigenvalues.real


def numeric_spectrum(mtx) -> NumericSpectrum:
    """Eigenvalues of a dense real (possibly nonsymmetric) matrix.

    Backed by LAPACK's Hessenberg + shifted-QR routine through numpy.
    """
    a = np.asarray(mtx, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ConfigError(f"expected a nonempty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ConfigError("matrix has non-finite entries")
    try:
        ev = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigenvalue iteration failed to converge: {exc}") from exc
    ev = np.asarray(ev, dtype=complex)
    order = np.lexsort((-ev.imag, -ev.real))
    return NumericSpectrum(ev[order], a.shape[0])


def rate_autonomous(W: WeightMatrix) -> float:
    """``1 - max Re(lambda)`` over the non-dominant eigenvalues of ``W``."""
    ev = numeric_spectrum(W.entries).eigenvalues
    near_one = np.abs(ev - 1.0) <= DOMINANT_GAP
    if np.count_nonzero(near_one) != 1:
        raise NumericalError(
            f"dominant eigenvalue is not simple ({np.count_nonzero(near_one)} eigenvalues within "
            f"{DOMINANT_GAP} of 1): network disconnected or degenerate"
        )
    return float(1.0 - ev[~near_one].real.max())


def rate_with_input(W: WeightMatrix, input: InputSpec) -> float:
    """``1 - max Re(lambda)`` over the spectrum of ``W - diag(gamma)``."""
    if input.n != W.n:
        raise ConfigError(f"input has {input.n} entries, network has {W.n} nodes")
    if not np.any(input.gamma > 0):
        raise ConfigError("no input present (gamma == 0); use rate_autonomous")
    ev = numeric_spectrum(W.entries - np.diag(input.gamma)).eigenvalues
    return float(1.0 - ev.real.max())
