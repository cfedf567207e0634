# localization/operators.py
"""
Localization operators for a filter pair on a fixed eigenbasis U:

  M_f  = diag(f)                         space localization
  C_g  = U diag(h) U^T                   frequency localization (h = g_hat)
  S    = C_{g^1/2} M_f C_{g^1/2}         space-frequency operator
  R(t) = cos(t) M_f + sin(t) C_g         rotated operator

The dual bundle swaps roles (signals live on the spectrum): M = diag(f_hat)
and C is convolution by g_hat, i.e. h = U^T g_hat. h may then have negative
entries; those are reported in `violations`, and S uses sqrt(max(h, 0)).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Tuple

import numpy as np

from localization.filters import FilterPair, validate
from spectral.eig import EigenDecomposition, symmetric_eig
from spectral.transform import as_signal
from utils.errors import DimensionError, FilterError, ValidationError
from utils.logger import log

TWO_PI = 2.0 * math.pi


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


def _spectral_matrix(U: np.ndarray, h: np.ndarray) -> np.ndarray:
    M = (U * h) @ U.T
    return 0.5 * (M + M.T)


@dataclass(frozen=True)
class LocalizationPoint:
    m: float
    c: float

    def as_tuple(self) -> Tuple[float, float]:
        return (self.m, self.c)


@dataclass(frozen=True, eq=False)
class SOperatorSpectrum:
    sigma: np.ndarray   # descending
    Psi: np.ndarray

    @property
    def values(self) -> np.ndarray:
        return self.sigma

    @property
    def vectors(self) -> np.ndarray:
        return self.Psi

    @property
    def sigma1(self) -> float:
        return float(self.sigma[0])


@dataclass(frozen=True, eq=False)
class RotatedOperator:
    theta: float
    R: np.ndarray
    rho: np.ndarray     # descending
    Phi: np.ndarray

    @property
    def values(self) -> np.ndarray:
        return self.rho

    @property
    def vectors(self) -> np.ndarray:
        return self.Phi

    @property
    def rho1(self) -> float:
        return float(self.rho[0])


@dataclass(frozen=True, eq=False)
class OperatorBundle:
    Mf: np.ndarray
    Cg: np.ndarray
    S: np.ndarray
    decomp: EigenDecomposition
    pair: FilterPair
    f: np.ndarray               # diagonal of Mf
    h: np.ndarray               # C_g = U diag(h) U^T
    Cg_half: np.ndarray
    dual: bool = False
    violations: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def n(self) -> int:
        return int(self.f.size)

    @property
    def U(self) -> np.ndarray:
        return self.decomp.vectors

    @cached_property
    def spectrum(self) -> SOperatorSpectrum:
        return s_spectrum(self)


# ---------- construction ----------

def _assemble(decomp: EigenDecomposition, pair: FilterPair, f: np.ndarray, h: np.ndarray,
              dual: bool, violations: Tuple[str, ...]) -> OperatorBundle:
    U = decomp.vectors
    Mf = np.diag(f)
    Cg = _spectral_matrix(U, h)
    # negative h only reaches here from dual_bundle, already listed in violations;
    # C_g itself keeps them, the square root has to clamp
    Cg_half = _spectral_matrix(U, np.sqrt(np.clip(h, 0.0, None)))
    S = Cg_half @ Mf @ Cg_half
    S = 0.5 * (S + S.T)
    return OperatorBundle(
        Mf=_frozen(Mf), Cg=_frozen(Cg), S=_frozen(S), decomp=decomp, pair=pair,
        f=_frozen(f), h=_frozen(h), Cg_half=_frozen(Cg_half), dual=dual, violations=violations,
    )


def build_bundle(decomp: EigenDecomposition, pair: FilterPair, strict: bool = True) -> OperatorBundle:
    """strict=False skips the sup-norm requirement (reflected filters)."""
    if pair.n != decomp.n:
        raise DimensionError("filter pair", decomp.n, pair.n)
    report = validate(pair)
    if strict and not report.ok:
        raise FilterError("; ".join(report.issues))
    f = np.asarray(pair.spatial.f, dtype=float)
    h = np.asarray(pair.spectral.ghat, dtype=float)
    if np.any(f < -1e-12) or np.any(h < -1e-12):
        raise FilterError("filters must be nonnegative")
    return _assemble(decomp, pair, np.clip(f, 0.0, None), np.clip(h, 0.0, None), False, report.issues)


def dual_bundle(decomp: EigenDecomposition, pair: FilterPair, strict: bool = True) -> OperatorBundle:
    """Spectral-domain bundle: M = diag(f_hat), C x_hat = g_hat * x_hat (graph convolution).

    C = U diag(U^T g_hat) U^T with U = decomp.vectors. Pass decomp.transposed() to
    swap the transform; transposing twice gives back the original bundle.
    """
    if pair.n != decomp.n:
        raise DimensionError("filter pair", decomp.n, pair.n)
    report = validate(pair)
    if strict and not report.ok:
        raise FilterError("; ".join(report.issues))
    f = np.asarray(pair.spatial.f, dtype=float)
    h = decomp.vectors.T @ np.asarray(pair.spectral.ghat, dtype=float)
    violations = list(report.issues)
    neg = np.flatnonzero(h < -1e-12)
    if neg.size:
        violations.append(
            f"convolution filter has {neg.size} negative Fourier coefficient(s) (min {h.min():.6g}); "
            "dual C is not positive semidefinite"
        )
        log.warning(f"dual_bundle: {violations[-1]}")
    return _assemble(decomp, pair, f, h, True, tuple(violations))


# ---------- expectation values ----------

def _nonzero(x, n: int) -> Tuple[np.ndarray, float]:
    v = as_signal(x, n)
    nrm2 = float(v @ v)
    if nrm2 <= 0.0:
        raise ValidationError("zero signal has no localization values")
    return v, nrm2


def mean_values(bundle: OperatorBundle, x) -> LocalizationPoint:
    v, nrm2 = _nonzero(x, bundle.n)
    m = float(v @ (bundle.f * v)) / nrm2
    c = float(v @ (bundle.Cg @ v)) / nrm2
    return LocalizationPoint(m, c)


def s_mean(bundle: OperatorBundle, x) -> float:
    v, nrm2 = _nonzero(x, bundle.n)
    return float(v @ (bundle.S @ v)) / nrm2


def r_mean(rot: RotatedOperator, x) -> float:
    v, nrm2 = _nonzero(x, rot.R.shape[0])
    return float(v @ (rot.R @ v)) / nrm2


def sigma1_characterizations(bundle: OperatorBundle) -> Tuple[float, float, float, float]:
    """||S||, ||M_{f^1/2} C_{g^1/2}||^2, ||C_{g^1/2} M_{f^1/2}||^2, ||M_{f^1/2} C_g M_{f^1/2}||."""
    Mh = np.diag(np.sqrt(np.clip(bundle.f, 0.0, None)))
    a = np.linalg.norm(bundle.S, 2)
    b = np.linalg.norm(Mh @ bundle.Cg_half, 2) ** 2
    c = np.linalg.norm(bundle.Cg_half @ Mh, 2) ** 2
    d = np.linalg.norm(Mh @ bundle.Cg @ Mh, 2)
    return float(a), float(b), float(c), float(d)


def normalize_angle(theta: float) -> float:
    t = float(theta) % TWO_PI
    return 0.0 if t >= TWO_PI else t


def rotated(bundle: OperatorBundle, theta: float) -> RotatedOperator:
    theta = normalize_angle(theta)
    R = math.cos(theta) * bundle.Mf + math.sin(theta) * bundle.Cg
    R = 0.5 * (R + R.T)
    rho, Phi = symmetric_eig(R, descending=True)
    return RotatedOperator(theta=theta, R=_frozen(R), rho=_frozen(rho), Phi=_frozen(Phi))


def s_spectrum(bundle: OperatorBundle) -> SOperatorSpectrum:
    sigma, Psi = symmetric_eig(bundle.S, descending=True)
    return SOperatorSpectrum(sigma=_frozen(sigma), Psi=_frozen(Psi))


def variances(bundle: OperatorBundle, rot: RotatedOperator, x) -> Tuple[float, float]:
    """(var_S, var_R) = ||(S - s_bar) x||^2 / ||x||^2 and likewise for R."""
    v, nrm2 = _nonzero(x, bundle.n)
    out = []
    for A in (bundle.S, rot.R):
        mean = float(v @ (A @ v)) / nrm2
        r = A @ v - mean * v
        out.append(float(r @ r) / nrm2)
    return out[0], out[1]


def uncertainty_gap(bundle: OperatorBundle) -> float:
    """1 - sigma1; positive means space and frequency cannot both be fully concentrated."""
    return 1.0 - bundle.spectrum.sigma1
