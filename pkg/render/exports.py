# render/exports.py
# JSON and CSV writers (and readers for the files we write).
#
#   polygons.json   {"meta":{...}, "angles", "rho1", "boundary_points", "inner", "outer",
#                    "area_gap", "hausdorff_gap", "converged", "sigma1_corners": {...}}
#   boundary.csv    "# meta" comment line, header "m,c", one boundary point per row
#   spectrum.csv    "# meta" comment line, header "pair,operator,index,value" (index 1-based)
from __future__ import annotations

import csv
import io
import json
from typing import Any, Dict, Iterable, List, Mapping, Optional, Tuple

import numpy as np

from localization.uncertainty import CornerBounds, RangeApproximation
from utils.errors import InputError


def _meta_line(meta: Mapping[str, Any]) -> str:
    return "# " + " ".join(f"{k}={meta[k]}" for k in meta)


def _pts(a) -> List[List[float]]:
    return [[float(v) for v in row] for row in np.asarray(a, dtype=float).reshape(-1, 2)]


def polygons_payload(approx: RangeApproximation, corners: Optional[CornerBounds] = None,
                     meta: Optional[Mapping[str, Any]] = None) -> Dict[str, Any]:
    out: Dict[str, Any] = {}
    if meta:
        out["meta"] = dict(meta)
    out.update({
        "angles": [float(t) for t in approx.angles],
        "rho1": [float(r) for r in approx.rho1],
        "boundary_points": _pts(approx.boundary_points),
        "inner": _pts(approx.inner),
        "outer": _pts(approx.outer),
        "area_gap": float(approx.area_gap),
        "area_inner": float(approx.area_inner),
        "area_outer": float(approx.area_outer),
        "hausdorff_gap": float(approx.hausdorff_gap),
        "converged": bool(approx.converged),
    })
    if corners is not None:
        out["sigma1_corners"] = corners.sigma1s()
    return out


def write_json(path: str, payload: Mapping[str, Any]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(payload, indent=2) + "\n")


def read_json(path: str) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read: {e.strerror or e}", path=path)
    except json.JSONDecodeError as e:
        raise InputError(f"malformed JSON: {e}", path=path)


def write_polygons_json(path: str, approx: RangeApproximation, corners: Optional[CornerBounds] = None,
                        meta: Optional[Mapping[str, Any]] = None) -> None:
    write_json(path, polygons_payload(approx, corners, meta))


def read_polygons_json(path: str) -> Dict[str, Any]:
    data = read_json(path)
    for key in ("angles", "rho1", "boundary_points", "inner", "outer", "area_gap"):
        if key not in data:
            raise InputError(f"polygons file missing {key!r}", path=path)
    for key in ("boundary_points", "inner", "outer"):
        data[key] = np.asarray(data[key], dtype=float).reshape(-1, 2)
    return data


def _data_rows(path: str) -> List[List[str]]:
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"cannot read: {e.strerror or e}", path=path)
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    return list(csv.reader(io.StringIO("\n".join(lines))))


def write_boundary_csv(path: str, points, meta: Optional[Mapping[str, Any]] = None) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        if meta:
            fh.write(_meta_line(meta) + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["m", "c"])
        for m, c in np.asarray(points, dtype=float).reshape(-1, 2):
            w.writerow([repr(float(m)), repr(float(c))])


def read_boundary_csv(path: str) -> np.ndarray:
    rows = _data_rows(path)
    if not rows or rows[0] != ["m", "c"]:
        raise InputError("boundary CSV must start with header m,c", path=path)
    try:
        return np.array([[float(a), float(b)] for a, b in rows[1:]], dtype=float).reshape(-1, 2)
    except ValueError as e:
        raise InputError(f"malformed boundary row: {e}", path=path)


SpectrumRow = Tuple[str, str, int, float]


def write_spectrum_csv(path: str, rows: Iterable[SpectrumRow], meta: Optional[Mapping[str, Any]] = None) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        if meta:
            fh.write(_meta_line(meta) + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["pair", "operator", "index", "value"])
        for pair, op, idx, val in rows:
            w.writerow([pair, op, int(idx), repr(float(val))])


def read_spectrum_csv(path: str) -> List[SpectrumRow]:
    rows = _data_rows(path)
    if not rows or rows[0] != ["pair", "operator", "index", "value"]:
        raise InputError("spectrum CSV must start with header pair,operator,index,value", path=path)
    try:
        return [(r[0], r[1], int(r[2]), float(r[3])) for r in rows[1:]]
    except (ValueError, IndexError) as e:
        raise InputError(f"malformed spectrum row: {e}", path=path)


def write_coefficients_csv(path: str, coeffs, meta: Optional[Mapping[str, Any]] = None) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        if meta:
            fh.write(_meta_line(meta) + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", "coefficient", "magnitude"])
        for k, v in enumerate(np.asarray(coeffs, dtype=float), start=1):
            w.writerow([k, repr(float(v)), repr(abs(float(v)))])


def read_coefficients_csv(path: str) -> np.ndarray:
    rows = _data_rows(path)
    if not rows or rows[0] != ["index", "coefficient", "magnitude"]:
        raise InputError("coefficient CSV must start with header index,coefficient,magnitude", path=path)
    try:
        return np.array([float(r[1]) for r in rows[1:]], dtype=float)
    except (ValueError, IndexError) as e:
        raise InputError(f"malformed coefficient row: {e}", path=path)
