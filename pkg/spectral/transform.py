# spectral/transform.py
# Graph Fourier transform and graph convolution on a fixed eigenbasis.
from __future__ import annotations

import numpy as np

from spectral.eig import EigenDecomposition
from utils.errors import DimensionError, ValidationError


def as_signal(x, n: int, what: str = "signal") -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.ndim != 1 or v.size != n:
        raise DimensionError(what, n, int(v.size))
    if not np.all(np.isfinite(v)):
        raise ValidationError(f"{what} has nonfinite entries")
    return v


def gft(decomp: EigenDecomposition, x) -> np.ndarray:
    return decomp.vectors.T @ as_signal(x, decomp.n)


def igft(decomp: EigenDecomposition, xhat) -> np.ndarray:
    return decomp.vectors @ as_signal(xhat, decomp.n, "spectral signal")


def convolve(decomp: EigenDecomposition, x, y) -> np.ndarray:
    """x * y = U (x_hat . y_hat)."""
    return decomp.vectors @ (gft(decomp, x) * gft(decomp, y))
