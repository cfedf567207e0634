# localization/filters.py
"""
Spatial filters f (on nodes) and spectral filters g_hat (on the Laplacian
spectrum, ascending eigenvalue order). Both live in [0, 1] with sup-norm 1.

Frequency index sets B are 1-based: B = {1, ..., N} is the bandlimit onto the
N lowest frequencies.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, List, Tuple, Union

import numpy as np

from graphs.core import GeodesicProfile
from utils.errors import FilterError
from utils.logger import log

RANGE_TOL = 1e-12
SUP_TOL = 1e-12
ONE_TOL = 1e-12

PAIR_LABELS = (
    "projection-projection",
    "distance-projection",
    "modified-distance-projection",
    "distance-laplace",
    "laplace-laplace",
    "custom",
)


def _frozen(a) -> np.ndarray:
    v = np.array(a, dtype=float, copy=True).reshape(-1)
    v.setflags(write=False)
    return v


def _issues(values: np.ndarray, name: str) -> List[str]:
    out = []
    if values.size == 0:
        return [f"{name} is empty"]
    if not np.all(np.isfinite(values)):
        return [f"{name} has nonfinite entries"]
    lo, hi = float(values.min()), float(values.max())
    if lo < -RANGE_TOL or hi > 1 + RANGE_TOL:
        out.append(f"{name} outside [0,1]: min={lo:.6g} max={hi:.6g}")
    if abs(hi - 1.0) > SUP_TOL:
        out.append(f"{name} sup-norm is {hi:.6g}, expected 1")
    return out


@dataclass(frozen=True, eq=False)
class SpatialFilter:
    f: np.ndarray
    strict: bool = True

    def __post_init__(self):
        object.__setattr__(self, "f", _frozen(self.f))
        if self.strict:
            bad = _issues(self.f, "spatial filter")
            if bad:
                raise FilterError("; ".join(bad))

    @property
    def values(self) -> np.ndarray:
        return self.f

    @property
    def n(self) -> int:
        return int(self.f.size)


@dataclass(frozen=True, eq=False)
class SpectralFilter:
    ghat: np.ndarray
    strict: bool = True

    def __post_init__(self):
        object.__setattr__(self, "ghat", _frozen(self.ghat))
        if self.strict:
            bad = _issues(self.ghat, "spectral filter")
            if bad:
                raise FilterError("; ".join(bad))

    @property
    def values(self) -> np.ndarray:
        return self.ghat

    @property
    def n(self) -> int:
        return int(self.ghat.size)


AnyFilter = Union[SpatialFilter, SpectralFilter]


@dataclass(frozen=True, eq=False)
class FilterPair:
    spatial: SpatialFilter
    spectral: SpectralFilter
    label: str = "custom"

    def __post_init__(self):
        if self.label not in PAIR_LABELS:
            raise FilterError(f"unknown pair label {self.label!r}")
        if self.spatial.n != self.spectral.n:
            raise FilterError(f"filter lengths differ: f has {self.spatial.n}, g_hat has {self.spectral.n}")

    @property
    def n(self) -> int:
        return self.spatial.n

    def reflected(self, spatial: bool, spectral: bool) -> "FilterPair":
        """(f*, g), (f, g*) or (f*, g*); not sup-norm checked."""
        f = reflect(self.spatial) if spatial else SpatialFilter(self.spatial.f, strict=False)
        g = reflect(self.spectral) if spectral else SpectralFilter(self.spectral.ghat, strict=False)
        return FilterPair(f, g, self.label)


# ---------- constructors ----------

def _index_set(values: Iterable[int], lo: int, hi: int, what: str) -> np.ndarray:
    idx = np.unique(np.asarray(list(values), dtype=int))
    if idx.size == 0:
        raise FilterError(f"{what} is empty (sup-norm would be 0)")
    if idx.min() < lo or idx.max() > hi:
        raise FilterError(f"{what} has indices outside [{lo}, {hi}]")
    return idx


def projection_spatial(n: int, A: Iterable[int]) -> SpatialFilter:
    """f = chi_A on 0-based node indices."""
    idx = _index_set(A, 0, n - 1, "node set A")
    f = np.zeros(n)
    f[idx] = 1.0
    return SpatialFilter(f)


def projection_spectral(n: int, B: Iterable[int]) -> SpectralFilter:
    """g_hat = chi_B on 1-based frequency indices."""
    idx = _index_set(B, 1, n, "frequency set B")
    g = np.zeros(n)
    g[idx - 1] = 1.0
    return SpectralFilter(g)


def distance_spatial(prof: GeodesicProfile, alpha: float = 1.0) -> SpatialFilter:
    """f(v) = 1 - (d_w(v) / d_max) ** alpha."""
    if not (alpha > 0) or not np.isfinite(alpha):
        raise FilterError(f"alpha must be > 0, got {alpha}")
    ratio = np.asarray(prof.dist, dtype=float) / float(prof.dmax)
    return SpatialFilter(1.0 - ratio ** alpha)


def _clamped(lam) -> np.ndarray:
    lam = np.asarray(lam, dtype=float)
    if lam.size and (lam.min() < -1e-9 or lam.max() > 2 + 1e-9):
        log.warning(f"eigenvalues outside [0,2] by more than 1e-9 (min={lam.min():.3g}, max={lam.max():.3g}); clamping")
    return np.clip(lam, 0.0, 2.0)


def laplace_spectral(lam) -> SpectralFilter:
    """g_hat_k = 1 - lambda_k / 2."""
    return SpectralFilter(1.0 - _clamped(lam) / 2.0)


def smoothed_bandlimit(lam, B: Iterable[int], beta: float = 2.0) -> SpectralFilter:
    """chi_B * (1 - (lambda/2)**beta); renormalized to sup-norm 1 when needed."""
    if not (beta > 0) or not np.isfinite(beta):
        raise FilterError(f"beta must be > 0, got {beta}")
    lam = _clamped(lam)
    idx = _index_set(B, 1, lam.size, "frequency set B")
    g = np.zeros(lam.size)
    g[idx - 1] = 1.0 - (lam[idx - 1] / 2.0) ** beta
    top = float(g.max())
    if top <= 0:
        raise FilterError("smoothed bandlimit vanishes on B; cannot normalize")
    if abs(top - 1.0) > SUP_TOL:
        log.debug(f"smoothed_bandlimit: renormalizing by max {top:.6g}")
        g = g / top
    return SpectralFilter(g)


def reflect(flt: AnyFilter) -> AnyFilter:
    if isinstance(flt, SpatialFilter):
        return SpatialFilter(1.0 - flt.f, strict=False)
    if isinstance(flt, SpectralFilter):
        return SpectralFilter(1.0 - flt.ghat, strict=False)
    raise TypeError(f"cannot reflect {type(flt).__name__}")


# ---------- validation ----------

@dataclass(frozen=True)
class ValidationReport:
    issues: Tuple[str, ...] = field(default_factory=tuple)
    mf_one_multiplicity: int = 0
    cg_one_multiplicity: int = 0

    @property
    def ok(self) -> bool:
        return not self.issues

    @property
    def mf_one_simple(self) -> bool:
        return self.mf_one_multiplicity == 1

    @property
    def cg_one_simple(self) -> bool:
        return self.cg_one_multiplicity == 1

    @property
    def both_tops_simple(self) -> bool:
        """Both top eigenvalues simple: sigma1 < 1 is guaranteed."""
        return self.mf_one_simple and self.cg_one_simple

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "issues": list(self.issues),
            "mf_one_multiplicity": self.mf_one_multiplicity,
            "cg_one_multiplicity": self.cg_one_multiplicity,
        }


def validate(pair: FilterPair) -> ValidationReport:
    """Report-only check of the filter pair; never raises."""
    issues = _issues(pair.spatial.f, "spatial filter") + _issues(pair.spectral.ghat, "spectral filter")
    # eigenvalues of M_f are f, eigenvalues of C_g are g_hat
    mf_one = int(np.count_nonzero(np.abs(pair.spatial.f - 1.0) <= ONE_TOL))
    cg_one = int(np.count_nonzero(np.abs(pair.spectral.ghat - 1.0) <= ONE_TOL))
    return ValidationReport(tuple(issues), mf_one, cg_one)
