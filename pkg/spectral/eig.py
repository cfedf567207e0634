# spectral/eig.py
"""
Dense symmetric eigensolver with reproducible output.

scipy.linalg.eigh is tried with the "evr" driver first and retried with
"evd" then "ev" when LAPACK fails to converge. Output is canonical:

  * eigenvalues sorted (ascending for Laplacians, descending on request)
  * inside a cluster of repeated eigenvalues the basis is the Gram-Schmidt
    orthonormalization of the projected unit vectors P e_1, P e_2, ...
  * every eigenvector has its first nonzero entry (|v| > 1e-12) positive
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import scipy.linalg
from scipy.linalg import LinAlgError
from tenacity import Retrying, before_sleep_log, retry_if_exception_type, stop_after_attempt

from utils import telemetry
from utils.errors import NumericalError, ValidationError
from utils.logger import log

_DRIVERS = ("evr", "evd", "ev")

SYM_INPUT_TOL = 1e-10
CLUSTER_TOL = 1e-9
SIGN_TOL = 1e-12
ORTHO_TOL = 1e-9
RECON_TOL = 1e-9


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


def _symmetrized(M: np.ndarray) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise NumericalError("matrix has nonfinite entries")
    asym = float(np.max(np.abs(M - M.T))) if M.size else 0.0
    if asym > SYM_INPUT_TOL:
        raise ValidationError(f"matrix is not symmetric (max asymmetry {asym:.3g})")
    return 0.5 * (M + M.T)


def _raw_eigh(M: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    try:
        for attempt in Retrying(
            stop=stop_after_attempt(len(_DRIVERS)),
            retry=retry_if_exception_type(LinAlgError),
            before_sleep=before_sleep_log(log, logging.WARNING),
            reraise=True,
        ):
            with attempt:
                n = attempt.retry_state.attempt_number
                if n > 1:
                    telemetry.inc(telemetry.EIGEN_RETRIES)
                telemetry.inc(telemetry.EIGENSOLVES)
                w, V = scipy.linalg.eigh(M, driver=_DRIVERS[n - 1])
    except LinAlgError as e:
        raise NumericalError(f"eigensolver did not converge after {len(_DRIVERS)} drivers: {e}")
    except ValueError as e:
        raise NumericalError(f"eigensolver rejected input: {e}")
    return w, V


def _clusters(w: np.ndarray):
    scale = CLUSTER_TOL * max(1.0, float(np.max(np.abs(w))) if w.size else 1.0)
    start = 0
    for i in range(1, w.size + 1):
        if i == w.size or abs(w[i] - w[i - 1]) > scale:
            yield start, i
            start = i


def _canonical_block(Q: np.ndarray) -> np.ndarray:
    n, m = Q.shape
    P = Q @ Q.T
    basis = []
    for i in range(n):
        v = P[:, i].copy()
        for _ in range(2):
            for b in basis:
                v -= (b @ v) * b
        nrm = float(np.linalg.norm(v))
        if nrm > 1e-8:
            basis.append(v / nrm)
            if len(basis) == m:
                break
    if len(basis) < m:
        return Q
    return np.column_stack(basis)


def canonicalize(w: np.ndarray, V: np.ndarray) -> np.ndarray:
    """Canonical basis for repeated eigenvalues plus the sign convention."""
    V = np.array(V, dtype=float, copy=True)
    for a, b in _clusters(w):
        if b - a > 1:
            V[:, a:b] = _canonical_block(V[:, a:b])
    for k in range(V.shape[1]):
        nz = np.flatnonzero(np.abs(V[:, k]) > SIGN_TOL)
        if nz.size and V[nz[0], k] < 0:
            V[:, k] = -V[:, k]
    return V


def symmetric_eig(M: np.ndarray, descending: bool = False, tol: float = 1e-8) -> Tuple[np.ndarray, np.ndarray]:
    """Canonical eigenpairs of a symmetric matrix; columns of the second result are eigenvectors."""
    M = _symmetrized(M)
    w, V = _raw_eigh(M)
    if descending:
        w, V = w[::-1], V[:, ::-1]
    V = canonicalize(w, V)
    _check(M, w, V, tol, tol)
    return w.copy(), V


def _check(M: np.ndarray, w: np.ndarray, V: np.ndarray, ortho_tol: float, recon_tol: float) -> None:
    n = M.shape[0]
    ortho = float(np.max(np.abs(V.T @ V - np.eye(n)))) if n else 0.0
    if ortho > ortho_tol:
        raise NumericalError(f"eigenvectors not orthonormal (residual {ortho:.3g})")
    recon = float(np.max(np.abs(M - (V * w) @ V.T))) if n else 0.0
    if recon > recon_tol * max(1.0, float(np.max(np.abs(M))) if n else 1.0):
        raise NumericalError(f"eigendecomposition residual {recon:.3g} too large")


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    values: np.ndarray      # ascending
    vectors: np.ndarray     # column k pairs with values[k]

    @property
    def n(self) -> int:
        return int(self.values.size)

    @property
    def U(self) -> np.ndarray:
        return self.vectors

    def transposed(self) -> "EigenDecomposition":
        """Same values with U replaced by U^T (still orthonormal); the basis swap behind the dual bundle."""
        return EigenDecomposition(self.values, _frozen(self.vectors.T))

    @staticmethod
    def from_basis(L: np.ndarray, values, vectors) -> "EigenDecomposition":
        """Adopt a caller-chosen orthonormal eigenbasis after checking it against L."""
        L = _symmetrized(L)
        w = np.asarray(values, dtype=float)
        V = np.asarray(vectors, dtype=float)
        if V.shape != L.shape or w.shape != (L.shape[0],):
            raise ValidationError(f"basis shape {V.shape} / values {w.shape} do not match L {L.shape}")
        if np.any(np.diff(w) < -CLUSTER_TOL):
            raise ValidationError("eigenvalues must be ascending")
        try:
            _check(L, w, V, ORTHO_TOL, RECON_TOL)
        except NumericalError as e:
            raise ValidationError(f"supplied basis rejected: {e}")
        _check_laplacian_range(w)
        return EigenDecomposition(_frozen(w), _frozen(V))


def _check_laplacian_range(w: np.ndarray) -> None:
    if w.size and (w[0] < -1e-9 or w[-1] > 2 + 1e-9):
        raise NumericalError(f"Laplacian spectrum [{w[0]:.3g}, {w[-1]:.3g}] outside [0, 2]")


def eig_sym(L: np.ndarray, laplacian: bool = True) -> EigenDecomposition:
    L = _symmetrized(L)
    w, V = _raw_eigh(L)
    V = canonicalize(w, V)
    _check(L, w, V, ORTHO_TOL, RECON_TOL)
    if laplacian:
        _check_laplacian_range(w)
    log.debug(f"eig_sym: n={w.size} lambda in [{w[0]:.4g}, {w[-1]:.4g}]")
    return EigenDecomposition(_frozen(w), _frozen(V))
