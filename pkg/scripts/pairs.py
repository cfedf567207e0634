# scripts/pairs.py
# ---------------------------------------------------------------------------
# Filter-pair specs for the command line and config files.
#
#   auto                                fixture's own pair, else distance-projection
#   projection-projection[:center=auto,r=R,N=100]   or  [:A=0;2,B=1;3]
#   distance-projection[:center=auto,alpha=1,N=100]
#   modified-distance-projection[:center=auto,alpha=0.5,beta=2,N=100]
#   distance-laplace[:center=auto,alpha=2]
#   laplace-laplace                     spectral-domain (dual) pair, f_hat = g_hat = 1 - lambda/2
#   custom:f=1;0;1;0,g=1;0;1;0          or custom:A=0;2,B=1;3
#
# Lists use ';'. B is 1-based, A and center are 0-based node indices.
# center=auto picks the node nearest the centroid (minimum eccentricity
# without coordinates). r is euclidean when the graph has coordinates,
# otherwise a hop count. N is clipped to the node count.
# ---------------------------------------------------------------------------
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from graphs.core import Graph, central_node, euclidean_ball, geodesic, hop_ball
from localization.filters import (
    PAIR_LABELS,
    FilterPair,
    SpatialFilter,
    SpectralFilter,
    distance_spatial,
    laplace_spectral,
    projection_spatial,
    projection_spectral,
    smoothed_bandlimit,
)
from spectral.eig import EigenDecomposition
from utils.errors import SpecError

EXPERIMENT_KINDS = (
    "projection-projection",
    "distance-projection",
    "modified-distance-projection",
    "distance-laplace",
)

_ALLOWED = {
    "projection-projection": {"center", "r", "N", "A", "B"},
    "distance-projection": {"center", "alpha", "N"},
    "modified-distance-projection": {"center", "alpha", "beta", "N"},
    "distance-laplace": {"center", "alpha"},
    "laplace-laplace": set(),
    "custom": {"f", "g", "A", "B"},
}


@dataclass(frozen=True)
class PairSpec:
    kind: str
    params: Dict[str, str] = field(default_factory=dict)

    def describe(self) -> str:
        if not self.params:
            return self.kind
        return self.kind + ":" + ",".join(f"{k}={v}" for k, v in self.params.items())


@dataclass(frozen=True, eq=False)
class PairChoice:
    pair: FilterPair
    dual: bool
    spec: PairSpec
    resolved: Dict[str, object]     # center, N, ... as actually used


def parse_pair_spec(raw: str) -> PairSpec:
    text = str(raw).strip()
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    if kind == "auto":
        if rest.strip():
            raise SpecError("pair 'auto' takes no parameters")
        return PairSpec("auto")
    if kind not in PAIR_LABELS:
        raise SpecError(f"unknown pair kind {kind!r} (choose from auto, {', '.join(PAIR_LABELS)})")
    params: Dict[str, str] = {}
    for item in (p for p in rest.split(",") if p.strip()):
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or not key or not value.strip():
            raise SpecError(f"pair parameter must be key=value, got {item!r}")
        if key not in _ALLOWED[kind]:
            allowed = ", ".join(sorted(_ALLOWED[kind])) or "none"
            raise SpecError(f"{kind}: unknown parameter {key!r} (allowed: {allowed})")
        if key in params:
            raise SpecError(f"{kind}: parameter {key!r} given twice")
        params[key] = value.strip()
    return PairSpec(kind, params)


# ---------- value parsing ----------

def _num(spec: PairSpec, key: str, default: float) -> float:
    raw = spec.params.get(key)
    if raw is None:
        return default
    try:
        return float(raw)
    except ValueError:
        raise SpecError(f"{spec.kind}: {key} must be a number, got {raw!r}")


def _int_list(spec: PairSpec, key: str) -> Optional[List[int]]:
    raw = spec.params.get(key)
    if raw is None:
        return None
    try:
        return [int(v) for v in raw.split(";") if v.strip()]
    except ValueError:
        raise SpecError(f"{spec.kind}: {key} must be a ';'-separated index list, got {raw!r}")


def _float_list(spec: PairSpec, key: str) -> Optional[np.ndarray]:
    raw = spec.params.get(key)
    if raw is None:
        return None
    try:
        return np.array([float(v) for v in raw.split(";") if v.strip()])
    except ValueError:
        raise SpecError(f"{spec.kind}: {key} must be a ';'-separated number list, got {raw!r}")


def _center(spec: PairSpec, g: Graph) -> int:
    raw = spec.params.get("center", "auto")
    if raw == "auto":
        return central_node(g)
    try:
        w = int(raw)
    except ValueError:
        raise SpecError(f"{spec.kind}: center must be a node index or auto, got {raw!r}")
    if not 0 <= w < g.n:
        raise SpecError(f"{spec.kind}: center {w} out of range for n={g.n}")
    return w


def _bandwidth(spec: PairSpec, n: int) -> int:
    N = int(_num(spec, "N", 100))
    if N < 1:
        raise SpecError(f"{spec.kind}: N must be >= 1, got {N}")
    return min(N, n)


# ---------- builders ----------

def build_pair(spec: PairSpec, g: Graph, decomp: EigenDecomposition,
               fixture_pair: Optional[FilterPair] = None) -> PairChoice:
    n = g.n
    lam = decomp.values
    if spec.kind == "auto":
        if fixture_pair is not None:
            return PairChoice(fixture_pair, False, spec, {"source": "fixture"})
        return build_pair(PairSpec("distance-projection"), g, decomp)

    if spec.kind == "projection-projection":
        A = _int_list(spec, "A")
        B = _int_list(spec, "B")
        resolved: Dict[str, object] = {}
        if A is None:
            w = _center(spec, g)
            if g.points is not None:
                r = _num(spec, "r", 0.15)
                A = euclidean_ball(g.points, w, r).tolist()
            else:
                r = int(_num(spec, "r", 2))
                A = hop_ball(geodesic(g, w), r).tolist()
            resolved.update(center=w, r=r)
        if B is None:
            N = _bandwidth(spec, n)
            B = list(range(1, N + 1))
            resolved["N"] = N
        resolved["A_size"] = len(A)
        pair = FilterPair(projection_spatial(n, A), projection_spectral(n, B), spec.kind)
        return PairChoice(pair, False, spec, resolved)

    if spec.kind == "distance-projection":
        w = _center(spec, g)
        alpha = _num(spec, "alpha", 1.0)
        N = _bandwidth(spec, n)
        pair = FilterPair(distance_spatial(geodesic(g, w), alpha), projection_spectral(n, range(1, N + 1)), spec.kind)
        return PairChoice(pair, False, spec, {"center": w, "alpha": alpha, "N": N})

    if spec.kind == "modified-distance-projection":
        w = _center(spec, g)
        alpha = _num(spec, "alpha", 0.5)
        beta = _num(spec, "beta", 2.0)
        N = _bandwidth(spec, n)
        pair = FilterPair(
            distance_spatial(geodesic(g, w), alpha),
            smoothed_bandlimit(lam, range(1, N + 1), beta),
            spec.kind,
        )
        return PairChoice(pair, False, spec, {"center": w, "alpha": alpha, "beta": beta, "N": N})

    if spec.kind == "distance-laplace":
        w = _center(spec, g)
        alpha = _num(spec, "alpha", 2.0)
        pair = FilterPair(distance_spatial(geodesic(g, w), alpha), laplace_spectral(lam), spec.kind)
        return PairChoice(pair, False, spec, {"center": w, "alpha": alpha})

    if spec.kind == "laplace-laplace":
        g_hat = laplace_spectral(lam)
        pair = FilterPair(SpatialFilter(g_hat.ghat), SpectralFilter(g_hat.ghat), spec.kind)
        return PairChoice(pair, True, spec, {"dual": True})

    # custom
    f = _float_list(spec, "f")
    gv = _float_list(spec, "g")
    A = _int_list(spec, "A")
    B = _int_list(spec, "B")
    if (f is None) == (A is None):
        raise SpecError("custom pair needs exactly one of f=... or A=...")
    if (gv is None) == (B is None):
        raise SpecError("custom pair needs exactly one of g=... or B=...")
    spatial = SpatialFilter(f) if f is not None else projection_spatial(n, A)
    spectral = SpectralFilter(gv) if gv is not None else projection_spectral(n, B)
    return PairChoice(FilterPair(spatial, spectral, "custom"), False, spec, {})


def experiment_specs(user: PairSpec, has_fixture: bool = False) -> List[PairSpec]:
    """The four experiment pairs; the user's own params win for a matching kind."""
    out = [user if user.kind == k else PairSpec(k) for k in EXPERIMENT_KINDS]
    if user.kind not in EXPERIMENT_KINDS and (user.kind != "auto" or has_fixture):
        out.append(user)
    return out
