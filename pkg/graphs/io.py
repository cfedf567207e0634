# graphs/io.py
# Point-cloud CSV and edge-list text formats.
#
#   point cloud : one point per line, comma-separated coordinates, lines starting with '#' ignored
#   edge list   : first data line "n <count>", then "i j w" per line (0-based; w defaults to 1)
from __future__ import annotations

import io
from typing import List, Optional, Tuple

import numpy as np

from graphs.core import Graph, PointCloud, graph_from_edges
from utils.errors import InputError, ValidationError


def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise InputError(f"cannot read: {e.strerror or e}", path=path)


def read_point_cloud(path: str) -> PointCloud:
    text = _read_text(path)
    try:
        pts = np.loadtxt(io.StringIO(text), delimiter=",", comments="#", ndmin=2)
    except ValueError as e:
        raise InputError(f"malformed point cloud: {e}", path=path)
    if pts.size == 0:
        raise InputError("point cloud is empty", path=path)
    try:
        return PointCloud(pts)
    except ValidationError as e:
        raise InputError(str(e), path=path)


def write_point_cloud(path: str, cloud: PointCloud, header: Optional[str] = None) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if header:
            for line in header.splitlines():
                fh.write(f"# {line}\n")
        for row in cloud.points:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def read_edge_list(path: str) -> Graph:
    text = _read_text(path)
    n: Optional[int] = None
    edges: List[Tuple[int, int, float]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0].lower() != "n":
                raise InputError(f"line {lineno}: expected header 'n <count>'", path=path)
            try:
                n = int(parts[1])
            except ValueError:
                raise InputError(f"line {lineno}: bad node count {parts[1]!r}", path=path)
            continue
        if len(parts) not in (2, 3):
            raise InputError(f"line {lineno}: expected 'i j w'", path=path)
        try:
            i, j = int(parts[0]), int(parts[1])
            w = float(parts[2]) if len(parts) == 3 else 1.0
        except ValueError:
            raise InputError(f"line {lineno}: non-numeric field in {line!r}", path=path)
        edges.append((i, j, w))
    if n is None:
        raise InputError("missing 'n <count>' header", path=path)
    try:
        return graph_from_edges(n, edges)
    except ValidationError as e:
        raise InputError(str(e), path=path)


def write_edge_list(path: str, g: Graph, header: Optional[str] = None) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if header:
            for line in header.splitlines():
                fh.write(f"# {line}\n")
        fh.write(f"n {g.n}\n")
        for i, j, w in g.edges():
            fh.write(f"{i} {j} {w!r}\n")
