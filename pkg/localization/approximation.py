# localization/approximation.py
"""
Truncated eigen-expansions of a signal in the eigenbasis of S (or of R(theta))
and the two error bounds that hold for them:

  threshold s   keep sigma_k >= s          ||x - x_s||^2 <= (sigma_1 - s_bar)/(sigma_1 - s) ||x||^2
  interval a    keep |sigma_k - mean| <= a ||x - x_a||^2 <= var / a^2 ||x||^2

Both follow from reading mu_k(x) = (psi_k^T x)^2 / ||x||^2 as a probability
distribution on the spectrum. Indices in reports are 1-based (psi_1 is the
eigenvector of the largest eigenvalue).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from localization.operators import RotatedOperator, SOperatorSpectrum
from spectral.transform import as_signal
from utils.errors import ValidationError

Spectrum = Union[SOperatorSpectrum, RotatedOperator]


@dataclass(frozen=True, eq=False)
class ExpansionReport:
    kept_indices: Tuple[int, ...]
    reconstruction: np.ndarray
    actual_error_sq: float
    bound: float
    mean: float
    variance: float

    def as_dict(self) -> dict:
        return {
            "kept": list(self.kept_indices),
            "actual_error_sq": self.actual_error_sq,
            "bound": self.bound,
            "mean": self.mean,
            "variance": self.variance,
        }


@dataclass(frozen=True, eq=False)
class SpectralDistribution:
    mu: np.ndarray
    normalized: bool        # input was rescaled to unit norm
    mean: float
    variance: float


def _expand(spectrum: Spectrum, x) -> Tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    values = np.asarray(spectrum.values, dtype=float)
    vectors = np.asarray(spectrum.vectors, dtype=float)
    v = as_signal(x, values.size)
    nrm2 = float(v @ v)
    if nrm2 <= 0.0:
        raise ValidationError("zero signal has no spectral expansion")
    return values, vectors, v, nrm2


def _report(vectors, v, coeffs, keep, nrm2, bound, mean, var) -> ExpansionReport:
    recon = vectors[:, keep] @ coeffs[keep]
    r = v - recon
    return ExpansionReport(
        kept_indices=tuple(int(k) + 1 for k in np.flatnonzero(keep)),
        reconstruction=recon,
        actual_error_sq=float(r @ r),
        bound=float(bound),
        mean=float(mean),
        variance=float(var),
    )


def _moments(values, coeffs, nrm2) -> Tuple[float, float]:
    w = coeffs ** 2 / nrm2
    mean = float(w @ values)
    var = float(w @ (values - mean) ** 2)
    return mean, max(var, 0.0)


def truncate_by_threshold(spectrum: Spectrum, x, s: float) -> ExpansionReport:
    values, vectors, v, nrm2 = _expand(spectrum, x)
    top = float(values[0])
    if not s < top:
        raise ValidationError(f"threshold s={s} must be below the top eigenvalue {top}")
    coeffs = vectors.T @ v
    mean, var = _moments(values, coeffs, nrm2)
    keep = values >= s
    bound = (top - mean) / (top - s) * nrm2
    return _report(vectors, v, coeffs, keep, nrm2, bound, mean, var)


def truncate_by_interval(spectrum: Spectrum, x, a: float) -> ExpansionReport:
    """Keep eigenvalues within a of the mean; pass a RotatedOperator for the R(theta) variant."""
    if not (a > 0):
        raise ValidationError(f"interval radius a must be > 0, got {a}")
    values, vectors, v, nrm2 = _expand(spectrum, x)
    coeffs = vectors.T @ v
    mean, var = _moments(values, coeffs, nrm2)
    keep = np.abs(values - mean) <= a
    bound = var / (a * a) * nrm2
    return _report(vectors, v, coeffs, keep, nrm2, bound, mean, var)


def spectral_distribution(spectrum: Spectrum, x) -> SpectralDistribution:
    values, vectors, v, nrm2 = _expand(spectrum, x)
    normalized = abs(nrm2 - 1.0) > 1e-12
    coeffs = vectors.T @ v
    mu = coeffs ** 2 / nrm2
    mean, var = _moments(values, coeffs, nrm2)
    return SpectralDistribution(mu=mu, normalized=normalized, mean=mean, variance=var)
