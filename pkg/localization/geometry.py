# localization/geometry.py
# Planar convex-polygon helpers for the sandwich approximation.
# Polygons are (k, 2) float arrays, counterclockwise, starting at the
# lexicographically smallest vertex; k may be 1 (point) or 2 (segment).
from __future__ import annotations

import numpy as np
from scipy.spatial import ConvexHull, QhullError

DEDUP_TOL = 1e-10


def dedupe(points, tol: float = DEDUP_TOL) -> np.ndarray:
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) > 512:
        # grid snap; fine for hulls of large samples
        _, idx = np.unique(np.round(pts / tol), axis=0, return_index=True)
        return pts[np.sort(idx)]
    keep = []
    for p in pts:
        if not any(np.max(np.abs(p - q)) <= tol for q in keep):
            keep.append(p)
    return np.array(keep, dtype=float).reshape(-1, 2)


def dedupe_cyclic(poly, tol: float = DEDUP_TOL) -> np.ndarray:
    """Drop consecutive repeats (with wrap-around), keeping order."""
    pts = np.asarray(poly, dtype=float).reshape(-1, 2)
    out = []
    for p in pts:
        if not out or np.max(np.abs(p - out[-1])) > tol:
            out.append(p)
    while len(out) > 1 and np.max(np.abs(out[0] - out[-1])) <= tol:
        out.pop()
    return np.array(out, dtype=float).reshape(-1, 2)


def _lex_start(poly: np.ndarray) -> np.ndarray:
    if len(poly) <= 1:
        return poly
    i = int(np.lexsort((poly[:, 1], poly[:, 0]))[0])
    return np.roll(poly, -i, axis=0)


def convex_hull(points) -> np.ndarray:
    pts = dedupe(points)
    if len(pts) <= 1:
        return pts
    centered = pts - pts.mean(axis=0)
    sv = np.linalg.svd(centered, compute_uv=False)
    scale = max(1.0, float(np.max(np.abs(pts))))
    if len(pts) == 2 or sv[1] <= 1e-12 * scale:
        return _segment(pts)
    try:
        hull = ConvexHull(pts)
    except QhullError:
        return _segment(pts)
    # 2-D hull vertices come back counterclockwise
    return _lex_start(pts[hull.vertices])


def _segment(pts: np.ndarray) -> np.ndarray:
    centered = pts - pts.mean(axis=0)
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    proj = centered @ vt[0]
    ends = np.array([pts[int(np.argmin(proj))], pts[int(np.argmax(proj))]])
    ends = dedupe(ends)
    return ends[np.lexsort((ends[:, 1], ends[:, 0]))]


def polygon_area(poly) -> float:
    p = np.asarray(poly, dtype=float).reshape(-1, 2)
    if len(p) < 3:
        return 0.0
    x, y = p[:, 0], p[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


def triangle_area(a, b, c) -> float:
    return 0.5 * abs(float((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])))


def _segment_distance(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distance from each row of p to segment ab."""
    d = b - a
    L2 = float(d @ d)
    if L2 == 0.0:
        return np.linalg.norm(p - a, axis=1)
    t = np.clip(((p - a) @ d) / L2, 0.0, 1.0)
    return np.linalg.norm(p - (a + t[:, None] * d), axis=1)


def _edges(poly: np.ndarray):
    k = len(poly)
    for i in range(k):
        yield poly[i], poly[(i + 1) % k]


def signed_slack(poly, pts) -> np.ndarray:
    """Min over edges of the (length-normalized) left-side distance; >= 0 inside a CCW polygon."""
    poly = np.asarray(poly, dtype=float).reshape(-1, 2)
    pts = np.asarray(pts, dtype=float).reshape(-1, 2)
    slack = np.full(len(pts), np.inf)
    for a, b in _edges(poly):
        e = b - a
        L = float(np.hypot(*e))
        if L == 0.0:
            continue
        cross = e[0] * (pts[:, 1] - a[1]) - e[1] * (pts[:, 0] - a[0])
        slack = np.minimum(slack, cross / L)
    return slack


def distance_to_polygon(poly, pts) -> np.ndarray:
    """Euclidean distance to the closed polygon (0 inside)."""
    poly = np.asarray(poly, dtype=float).reshape(-1, 2)
    pts = np.asarray(pts, dtype=float).reshape(-1, 2)
    if len(poly) == 0:
        raise ValueError("empty polygon")
    if len(poly) == 1:
        return np.linalg.norm(pts - poly[0], axis=1)
    if len(poly) == 2:
        return _segment_distance(pts, poly[0], poly[1])
    dist = np.min([_segment_distance(pts, a, b) for a, b in _edges(poly)], axis=0)
    inside = signed_slack(poly, pts) >= 0
    return np.where(inside, 0.0, dist)


def contains(poly, pts, tol: float = 1e-9) -> np.ndarray:
    poly = np.asarray(poly, dtype=float).reshape(-1, 2)
    if len(poly) < 3:
        return distance_to_polygon(poly, pts) <= tol
    return signed_slack(poly, pts) >= -tol
