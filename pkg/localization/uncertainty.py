# localization/uncertainty.py
"""
The set of admissible localization pairs

    W = {(m_f(x), c_g(x)) : x != 0}

and its approximations:

  * corner bounds: the gamma curve of each reflected pair (f,g), (f,g*),
    (f*,g), (f*,g*) cuts one corner off the unit square
  * supporting lines: cos(t) m + sin(t) c <= rho_1(t) for every angle t
  * polygon sandwich: the support points span an inner polygon, the
    support lines cut out an outer polygon, P_in <= W <= P_out
  * adaptive refinement: bisect the angle interval with the largest local
    inner/outer discrepancy until the area gap drops below a tolerance
"""
from __future__ import annotations

import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from cachetools import LRUCache, cachedmethod
from cachetools.keys import hashkey

from localization import geometry
from localization.filters import FilterPair
from localization.operators import (
    TWO_PI,
    LocalizationPoint,
    OperatorBundle,
    build_bundle,
    dual_bundle,
    normalize_angle,
    rotated,
    s_spectrum,
)
from spectral.eig import EigenDecomposition, symmetric_eig
from utils import telemetry
from utils.errors import NoUncertaintyError, NumericalError, TwoNodeRangeError, ValidationError
from utils.logger import log

VACUOUS_TOL = 1e-10
MEMBER_TOL = 1e-9
TOP_CLUSTER_TOL = 1e-9
CONTAIN_TOL = 1e-9
MIN_GAP = 1e-9

# corner name -> (corner of the unit square, reflect spatial, reflect spectral)
CORNERS: Dict[str, Tuple[Tuple[int, int], bool, bool]] = {
    "fg": ((1, 1), False, False),
    "fg*": ((1, 0), False, True),
    "f*g": ((0, 1), True, False),
    "f*g*": ((0, 0), True, True),
}


# ---------- gamma curve ----------

@dataclass(frozen=True)
class GammaBound:
    sigma1: float
    corner: Tuple[int, int]

    @property
    def vacuous(self) -> bool:
        return self.sigma1 >= 1.0 - VACUOUS_TOL

    def local(self, m: float, c: float) -> Tuple[float, float]:
        """Global (m, c) -> coordinates measured from the opposite corner."""
        a = m if self.corner[0] == 1 else 1.0 - m
        b = c if self.corner[1] == 1 else 1.0 - c
        return a, b

    def global_(self, a: float, b: float) -> Tuple[float, float]:
        return self.local(a, b)   # the map is an involution


def gamma(bound: GammaBound, t: float) -> float:
    """((t s1)^1/2 + ((1-t)(1-s1))^1/2)^2 on [s1, 1]."""
    s1 = float(bound.sigma1)
    if bound.vacuous:
        raise NoUncertaintyError(s1)
    t = float(t)
    if t < s1 - 1e-12 or t > 1.0 + 1e-12:
        raise ValidationError(f"gamma: t={t} outside [{s1}, 1]")
    t = min(max(t, s1), 1.0)
    return (math.sqrt(t * s1) + math.sqrt((1.0 - t) * (1.0 - s1))) ** 2


def gamma_curve(bound: GammaBound, num: int = 129) -> np.ndarray:
    """Corner arc in global (m, c) coordinates; empty for vacuous bounds."""
    if bound.vacuous:
        return np.zeros((0, 2))
    ts = np.linspace(bound.sigma1, 1.0, num)
    return np.array([bound.global_(t, gamma(bound, t)) for t in ts])


@dataclass(frozen=True)
class CornerBounds:
    bounds: Dict[str, GammaBound]

    def __getitem__(self, key: str) -> GammaBound:
        return self.bounds[key]

    def items(self):
        return [(k, self.bounds[k]) for k in CORNERS]

    def sigma1s(self) -> Dict[str, float]:
        return {k: float(b.sigma1) for k, b in self.items()}

    @property
    def all_vacuous(self) -> bool:
        return all(b.vacuous for _, b in self.items())


def corner_bounds(decomp: EigenDecomposition, pair: FilterPair, dual: bool = False) -> CornerBounds:
    """sigma1 of the four reflected pairs; dual=True reflects a spectral-domain pair."""
    make = dual_bundle if dual else build_bundle
    out: Dict[str, GammaBound] = {}
    for key, (corner, rs, rg) in CORNERS.items():
        bundle = make(decomp, pair.reflected(rs, rg), strict=False)
        sigma1 = max(0.0, float(s_spectrum(bundle).sigma[0]))
        out[key] = GammaBound(sigma1=sigma1, corner=corner)
        log.debug(f"corner_bounds: sigma1[{key}] = {sigma1:.12g}")
    return CornerBounds(out)


@dataclass(frozen=True)
class WGammaVerdict:
    passed: Dict[str, bool]
    active: Dict[str, bool]

    @property
    def ok(self) -> bool:
        return all(self.passed.values())

    @property
    def failed(self) -> List[str]:
        return [k for k in CORNERS if not self.passed[k]]


def _corner_check(bound: GammaBound, m: float, c: float, tol: float) -> Tuple[bool, bool]:
    if bound.vacuous:
        return True, False
    a, b = bound.local(m, c)
    if a * b < bound.sigma1:
        return True, False
    a = min(max(a, bound.sigma1), 1.0)
    return b <= gamma(bound, a) + tol, True


def in_W_gamma(bounds: CornerBounds, p, tol: float = MEMBER_TOL) -> WGammaVerdict:
    m, c = (p.m, p.c) if isinstance(p, LocalizationPoint) else (float(p[0]), float(p[1]))
    passed, active = {}, {}
    for key, bound in bounds.items():
        passed[key], active[key] = _corner_check(bound, m, c, tol)
    return WGammaVerdict(passed, active)


def in_W_gamma_many(bounds: CornerBounds, pts, tol: float = MEMBER_TOL) -> np.ndarray:
    """Vectorized membership for an (N, 2) array of points."""
    pts = np.asarray(pts, dtype=float).reshape(-1, 2)
    ok = np.ones(len(pts), dtype=bool)
    for _, bound in bounds.items():
        if bound.vacuous:
            continue
        s1 = bound.sigma1
        a = pts[:, 0] if bound.corner[0] == 1 else 1.0 - pts[:, 0]
        b = pts[:, 1] if bound.corner[1] == 1 else 1.0 - pts[:, 1]
        act = a * b >= s1
        t = np.clip(a, s1, 1.0)
        g = (np.sqrt(t * s1) + np.sqrt((1.0 - t) * (1.0 - s1))) ** 2
        ok &= ~act | (b <= g + tol)
    return ok


# ---------- supporting lines ----------

@dataclass(frozen=True)
class SupportLine:
    theta: float
    rho1: float
    point: LocalizationPoint

    @property
    def normal(self) -> Tuple[float, float]:
        return (math.cos(self.theta), math.sin(self.theta))


def _restrict_top(Q: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Top eigenspace of Q^T B Q, mapped back through Q."""
    T = Q.T @ B @ Q
    w, V = symmetric_eig(T, descending=True)
    k = int(np.count_nonzero(w >= w[0] - TOP_CLUSTER_TOL * max(1.0, abs(w[0]))))
    return Q @ V[:, :k]


def support_line(bundle: OperatorBundle, theta: float) -> SupportLine:
    """Top eigenpair of R(theta). A repeated top eigenvalue is resolved toward the
    clockwise end of the flat boundary piece (tangent sin*M_f - cos*C_g), then M_f, then C_g."""
    rot = rotated(bundle, theta)
    rho1 = float(rot.rho[0])
    k = int(np.count_nonzero(rot.rho >= rho1 - TOP_CLUSTER_TOL * max(1.0, abs(rho1))))
    Q = rot.Phi[:, :k]
    if k > 1:
        tangent = math.sin(rot.theta) * bundle.Mf - math.cos(rot.theta) * bundle.Cg
        for B in (tangent, bundle.Mf, bundle.Cg):
            Q = _restrict_top(Q, B)
            if Q.shape[1] == 1:
                break
    phi = Q[:, 0] / np.linalg.norm(Q[:, 0])
    m = float(phi @ (bundle.f * phi))
    c = float(phi @ (bundle.Cg @ phi))
    return SupportLine(theta=rot.theta, rho1=rho1, point=LocalizationPoint(m, c))


def _angle_key(theta: float) -> float:
    return round(normalize_angle(theta), 12)


class SupportOracle:
    """Per-bundle LRU cache of support lines keyed by angle."""

    def __init__(self, bundle: OperatorBundle, maxsize: int = 1024):
        self.bundle = bundle
        self._cache: LRUCache = LRUCache(maxsize=maxsize)
        self._lock = threading.RLock()

    @cachedmethod(
        lambda self: self._cache,
        key=lambda self, theta: hashkey(_angle_key(theta)),
        lock=lambda self: self._lock,
    )
    def _line(self, theta: float) -> SupportLine:
        telemetry.inc(telemetry.SUPPORT_MISSES)
        return support_line(self.bundle, theta)

    def line(self, theta: float) -> SupportLine:
        with self._lock:
            if hashkey(_angle_key(theta)) in self._cache:
                telemetry.inc(telemetry.SUPPORT_HITS)
        return self._line(theta)

    def lines(self, angles: Sequence[float], workers: int = 1) -> List[SupportLine]:
        if workers <= 1 or len(angles) < 2:
            return [self.line(t) for t in angles]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(self.line, angles))


# ---------- sandwich ----------

@dataclass(frozen=True, eq=False)
class RangeApproximation:
    angles: Tuple[float, ...]
    lines: Tuple[SupportLine, ...]
    inner: np.ndarray
    outer: np.ndarray
    hausdorff_gap: float
    area_inner: float
    area_outer: float
    converged: bool = True
    tol: Optional[float] = None
    history: Tuple[Tuple[int, float], ...] = field(default_factory=tuple)

    @property
    def area_gap(self) -> float:
        return max(0.0, self.area_outer - self.area_inner)

    @property
    def boundary_points(self) -> np.ndarray:
        return np.array([[ln.point.m, ln.point.c] for ln in self.lines], dtype=float)

    @property
    def rho1(self) -> np.ndarray:
        return np.array([ln.rho1 for ln in self.lines], dtype=float)

    @property
    def K(self) -> int:
        return len(self.angles)


def uniform_angles(K: int, offset: float = 0.0) -> List[float]:
    if K < 3:
        raise ValidationError(f"need K >= 3 angles, got {K}")
    return sorted(normalize_angle(offset + TWO_PI * k / K) for k in range(K))


def _check_angles(angles: Sequence[float]) -> np.ndarray:
    th = np.asarray(angles, dtype=float)
    if th.ndim != 1 or th.size < 3:
        raise ValidationError(f"need K >= 3 angles, got {th.size}")
    if th[0] < 0 or th[-1] >= TWO_PI:
        raise ValidationError("angles must lie in [0, 2*pi)")
    if np.any(np.diff(th) <= 0):
        raise ValidationError("angles must be strictly increasing")
    gaps = _gaps(th)
    if np.any(gaps >= math.pi):
        k = int(np.argmax(gaps))
        raise ValidationError(
            f"angle gap {gaps[k]:.6g} >= pi before theta={th[k]:.6g}: neighbouring support lines do not meet"
        )
    return th


def _gaps(th: np.ndarray) -> np.ndarray:
    """delta_k = theta_k - theta_{k-1}, cyclic (theta_0 = theta_K - 2 pi)."""
    prev = np.roll(th, 1)
    prev[0] -= TWO_PI
    return th - prev


def _outer_vertices(th: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Intersection of support lines k-1 and k, rotated back from the theta_k frame."""
    delta = _gaps(th)
    rho_prev = np.roll(rho, 1)
    b = (rho * np.cos(delta) - rho_prev) / np.sin(delta)
    c, s = np.cos(th), np.sin(th)
    return np.column_stack([c * rho - s * b, s * rho + c * b])


def _assemble(bundle: OperatorBundle, th: np.ndarray, lines: Sequence[SupportLine],
              converged: bool = True, tol: Optional[float] = None,
              history: Tuple[Tuple[int, float], ...] = ()) -> RangeApproximation:
    rho = np.array([ln.rho1 for ln in lines], dtype=float)
    pts = np.array([[ln.point.m, ln.point.c] for ln in lines], dtype=float)
    q = _outer_vertices(th, rho)
    outer = geometry.dedupe_cyclic(q)
    inner = geometry.convex_hull(pts)
    if len(outer) >= 3:
        start = int(np.lexsort((outer[:, 1], outer[:, 0]))[0])
        outer = np.roll(outer, -start, axis=0)
    slack = geometry.distance_to_polygon(outer, inner) if len(outer) < 3 else -geometry.signed_slack(outer, inner)
    worst = float(np.max(slack)) if len(slack) else 0.0
    if worst > CONTAIN_TOL:
        raise NumericalError(f"inner polygon leaves outer polygon by {worst:.3g}")
    if not bundle.dual:
        out_box = float(np.max(np.maximum(-pts, pts - 1.0)))
        if out_box > CONTAIN_TOL:
            raise NumericalError(f"support point outside the unit square by {out_box:.3g}")
    hd = float(np.max(geometry.distance_to_polygon(inner, outer))) if len(outer) else 0.0
    return RangeApproximation(
        angles=tuple(float(t) for t in th),
        lines=tuple(lines),
        inner=inner,
        outer=outer,
        hausdorff_gap=hd,
        area_inner=geometry.polygon_area(inner),
        area_outer=geometry.polygon_area(outer),
        converged=converged,
        tol=tol,
        history=history,
    )


def _require_region(bundle: OperatorBundle) -> None:
    if bundle.n < 3:
        raise TwoNodeRangeError(bundle.n)


def algorithm1(bundle: OperatorBundle, angles: Sequence[float], workers: int = 1,
               oracle: Optional[SupportOracle] = None) -> RangeApproximation:
    """Inner and outer polygons from the support lines at the given angles."""
    _require_region(bundle)
    th = _check_angles(angles)
    oracle = oracle or SupportOracle(bundle, maxsize=max(16, th.size))
    lines = oracle.lines([float(t) for t in th], workers=workers)
    approx = _assemble(bundle, th, lines)
    log.debug(f"algorithm1: K={th.size} area_in={approx.area_inner:.6g} area_out={approx.area_outer:.6g}")
    return approx


def _local_discrepancy(th: np.ndarray, lines: Sequence[SupportLine]) -> np.ndarray:
    rho = np.array([ln.rho1 for ln in lines], dtype=float)
    pts = np.array([[ln.point.m, ln.point.c] for ln in lines], dtype=float)
    q = _outer_vertices(th, rho)
    prev = np.roll(pts, 1, axis=0)
    return np.array([geometry.triangle_area(prev[k], q[k], pts[k]) for k in range(th.size)])


def adaptive_sandwich(bundle: OperatorBundle, tol: float = 1e-4, K_max: int = 512, workers: int = 1,
                      oracle: Optional[SupportOracle] = None) -> RangeApproximation:
    """Refine from four axis angles by bisecting the worst interval; stops at tol or K_max."""
    if not (tol > 0):
        raise ValidationError(f"tol must be > 0, got {tol}")
    if K_max < 4:
        raise ValidationError(f"K_max must be >= 4, got {K_max}")
    _require_region(bundle)
    oracle = oracle or SupportOracle(bundle, maxsize=max(16, K_max))
    th = np.array([0.0, 0.5 * math.pi, math.pi, 1.5 * math.pi])
    lines = oracle.lines(list(th), workers=workers)
    history: List[Tuple[int, float]] = []
    while True:
        approx = _assemble(bundle, th, lines)
        history.append((th.size, approx.area_gap))
        if approx.area_gap <= tol:
            log.info(f"adaptive_sandwich: converged K={th.size} gap={approx.area_gap:.3g}")
            return replace(approx, converged=True, tol=tol, history=tuple(history))
        if th.size >= K_max:
            log.warning(f"adaptive_sandwich: K_max={K_max} reached with gap={approx.area_gap:.3g} > tol={tol:g}")
            return replace(approx, converged=False, tol=tol, history=tuple(history))
        disc = _local_discrepancy(th, lines)
        disc[_gaps(th) < MIN_GAP] = 0.0
        k = int(np.argmax(disc)) if float(np.max(disc)) > 0 else int(np.argmax(_gaps(th)))
        new = normalize_angle(th[k] - 0.5 * _gaps(th)[k])
        pos = int(np.searchsorted(th, new))
        th = np.insert(th, pos, new)
        lines = list(lines)
        lines.insert(pos, oracle.line(new))
        log.debug(f"adaptive_sandwich: K={th.size} bisect at {new:.6g} (local gap {disc[k]:.3g})")


# ---------- eigenvector localization and sampling ----------

@dataclass(frozen=True)
class ScatterPoint:
    index: int              # 1-based eigenvector index
    point: LocalizationPoint
    eigenvalue: float


def eigenvector_scatter(bundle: OperatorBundle, which: str = "S", theta: Optional[float] = None) -> List[ScatterPoint]:
    """Localization pair of every eigenvector of S (or of R(theta))."""
    if which == "S":
        spec = bundle.spectrum
        values, vectors = spec.sigma, spec.Psi
    elif which == "R":
        if theta is None:
            raise ValidationError("R scatter needs theta")
        rot = rotated(bundle, theta)
        values, vectors = rot.rho, rot.Phi
    else:
        raise ValidationError(f"which must be 'S' or 'R', got {which!r}")
    m = np.einsum("ik,i,ik->k", vectors, bundle.f, vectors)
    c = np.einsum("ik,ik->k", vectors, bundle.Cg @ vectors)
    return [
        ScatterPoint(index=k + 1, point=LocalizationPoint(float(m[k]), float(c[k])), eigenvalue=float(values[k]))
        for k in range(values.size)
    ]


def sample_admissible(bundle: OperatorBundle, count: int, seed: int = 0, chunk: int = 20000) -> np.ndarray:
    """(count, 2) localization pairs of random real unit signals."""
    rng = np.random.default_rng(seed)
    U = bundle.U
    out = np.empty((count, 2), dtype=float)
    done = 0
    while done < count:
        k = min(chunk, count - done)
        X = rng.standard_normal((k, bundle.n))
        X /= np.linalg.norm(X, axis=1, keepdims=True)
        out[done:done + k, 0] = (X * X) @ bundle.f
        Y = X @ U
        out[done:done + k, 1] = (Y * Y) @ bundle.h
        done += k
    return out


def contains_points(approx: RangeApproximation, pts, tol: float = CONTAIN_TOL) -> np.ndarray:
    return geometry.contains(approx.outer, pts, tol)


def is_refinement(coarse: RangeApproximation, fine: RangeApproximation, tol: float = CONTAIN_TOL) -> bool:
    """P_in(coarse) inside P_in(fine) and P_out(fine) inside P_out(coarse)."""
    inner_ok = bool(np.all(geometry.contains(fine.inner, coarse.inner, tol)))
    outer_ok = bool(np.all(geometry.contains(coarse.outer, fine.outer, tol)))
    return inner_ok and outer_ok
