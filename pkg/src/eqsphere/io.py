"""File formats: partition JSON, point CSV/JSON, index CSV, boundary polylines."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .geometry import to_cartesian
from .partition import RegionTree
from .points import CodeSet

POINTS_SCHEMA_VERSION = 1


class DataError(ValueError):
    """Malformed or inconsistent input data."""


def fmt(x: float) -> str:
    return f"{x:.17g}"


def tree_to_json(tree: RegionTree) -> str:
    return json.dumps(tree.to_dict(), indent=1) + "\n"


def tree_from_json(text: str) -> RegionTree:
    try:
        return RegionTree.from_dict(json.loads(text))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise DataError(f"not a partition file: {exc}") from exc


def points_to_csv(code: CodeSet) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index"] + [f"x{k}" for k in range(code.d + 1)])
    for i, p in enumerate(code.points):
        w.writerow([i] + [fmt(v) for v in p])
    return buf.getvalue()


def points_to_json(code: CodeSet) -> str:
    doc = {
        "schema_version": POINTS_SCHEMA_VERSION,
        "d": code.d,
        "N": code.N,
        "generator": code.generator,
        "params": code.params,
        "points": code.points.tolist(),
    }
    return json.dumps(doc, indent=1) + "\n"


def read_points_csv(text: str, d: int | None = None) -> np.ndarray:
    """Parse a point CSV.

    Accepts the format written by :func:`points_to_csv` as well as bare
    coordinate rows.  A leading index column is recognised by the header or,
    when ``d`` is known, by the column count.
    """
    rows = []
    has_index = None
    width = None
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or all(not c.strip() for c in row):
            continue
        if lineno == 1 and not _is_number(row[0]):
            has_index = row[0].strip().lower() == "index"
            continue
        try:
            vals = [float(c) for c in row]
        except ValueError:
            raise DataError(f"line {lineno}: non-numeric field in {row!r}") from None
        if width is None:
            width = len(vals)
        elif len(vals) != width:
            raise DataError(f"line {lineno}: expected {width} fields, got {len(vals)}")
        if not all(math.isfinite(v) for v in vals):
            raise DataError(f"line {lineno}: non-finite coordinate")
        rows.append((lineno, vals))
    if not rows:
        return np.zeros((0, (d + 1) if d else 0))
    if has_index is None:
        has_index = d is not None and width == d + 2
    pts = np.array([v[1:] if has_index else v for _, v in rows])
    if d is not None and pts.shape[1] != d + 1:
        raise DataError(f"line {rows[0][0]}: expected {d + 1} coordinates, got {pts.shape[1]}")
    norms = np.linalg.norm(pts, axis=1)
    bad = np.flatnonzero(np.abs(norms - 1) > 1e-9)
    if len(bad):
        raise DataError(f"line {rows[bad[0]][0]}: point is not a unit vector")
    return pts


def read_points_json(text: str) -> CodeSet:
    try:
        doc = json.loads(text)
        return CodeSet(int(doc["d"]), np.array(doc["points"], dtype=float),
                       doc["generator"], doc.get("params", {}))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise DataError(f"not a point file: {exc}") from exc


def read_points_file(path: str | Path, d: int | None = None):
    """Return ``(points, codeset_or_None)`` for a CSV or JSON point file."""
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        code = read_points_json(text)
        if d is not None and code.d != d:
            raise DataError(f"point file has d={code.d}, expected {d}")
        return code.points, code
    return read_points_csv(text, d), None


def indices_to_csv(indices) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["point", "region"])
    for i, r in enumerate(indices):
        w.writerow([i, int(r)])
    return buf.getvalue()


def _edge(a: float, b: float, resolution: float) -> np.ndarray:
    steps = max(1, math.ceil(abs(b - a) / resolution))
    return np.linspace(a, b, steps + 1)


def region_polyline(region, resolution: float = 0.05) -> np.ndarray:
    """Closed boundary polyline of an S^2 region as ``(theta, phi')`` rows.

    ``phi'`` is measured before the region's azimuth rotation.  A whole
    sphere has no boundary and gives an empty array.
    """
    if region.d != 2:
        raise ValueError("boundaries are only drawn for S^2 partitions")
    t, p = region.intervals
    if region.kind == "whole_sphere":
        return np.zeros((0, 2))
    if region.kind in ("cap_north", "cap_south"):
        theta = t.hi if region.kind == "cap_north" else t.lo
        phi = _edge(0.0, 2 * math.pi, resolution)
        return np.column_stack([np.full_like(phi, theta), phi])
    top = _edge(p.lo, p.hi, resolution)
    side = _edge(t.lo, t.hi, resolution)
    parts = [
        np.column_stack([np.full_like(top, t.lo), top]),
        np.column_stack([side[1:], np.full(len(side) - 1, p.hi)]),
        np.column_stack([np.full(len(top) - 1, t.hi), top[::-1][1:]]),
        np.column_stack([side[::-1][1:], np.full(len(side) - 1, p.lo)]),
    ]
    return np.vstack(parts)


def boundaries_to_csv(tree: RegionTree, resolution: float = 0.05) -> str:
    """One row per polyline vertex: region, vertex, x0, x1, x2, theta, phi."""
    if tree.d != 2:
        raise NotImplementedError("region boundaries are only available for d = 2")
    if not resolution > 0:
        raise ValueError("resolution must be positive")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["region", "vertex", "x0", "x1", "x2", "theta", "phi"])
    for i, r in enumerate(tree.regions):
        poly = region_polyline(r, resolution)
        if not len(poly):
            continue
        phi = np.mod(poly[:, 1] + r.azimuth_offset, 2 * math.pi)
        xyz = to_cartesian(np.column_stack([poly[:, 0], phi]))
        for k in range(len(poly)):
            w.writerow([i, k] + [fmt(v) for v in xyz[k]] + [fmt(poly[k, 0]), fmt(phi[k])])
    return buf.getvalue()


def _is_number(s: str) -> bool:
    try:
        float(s)
    except ValueError:
        return False
    return True
