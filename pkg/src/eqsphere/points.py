"""EQP(d, N) codes: one centre point per region of EQ(d, N)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .geometry import sin_power_integral, to_cartesian
from .partition import RegionTree

# "external" marks points read from a file without provenance
GENERATORS = ("eqp", "random_uniform", "spiral", "fibonacci", "halton_mapped", "external")
CENTERS = ("midpoint", "area_median")


@dataclass(frozen=True, eq=False)
class CodeSet:
    """An ordered set of ``N`` unit vectors of R^(d+1)."""

    d: int
    points: np.ndarray
    generator: str
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != self.d + 1:
            raise ValueError(f"points must have shape (N, {self.d + 1}), got {pts.shape}")
        if self.generator not in GENERATORS:
            raise ValueError(f"unknown generator {self.generator!r}")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def N(self) -> int:
        return len(self.points)

    def __len__(self) -> int:
        return self.N

    def __getitem__(self, i):
        return self.points[i]


def _area_median(n: int, lo: float, hi: float) -> float:
    # colatitude splitting [lo, hi] into halves of equal sin^n measure
    target = 0.5 * (sin_power_integral(n, lo) + sin_power_integral(n, hi))
    a, b = lo, hi
    for _ in range(100):
        mid = 0.5 * (a + b)
        if sin_power_integral(n, mid) < target:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


def center_angles(tree: RegionTree, center: str = "midpoint") -> np.ndarray:
    """Polar angles of the centre point of every region, shape ``(N, d)``.

    Caps (and whole spheres of dimension >= 2) map to their pole; collar
    regions take the centre of the collar's colatitude band followed by the
    centre of the sub-region; arcs take their midpoint plus the collar
    rotation.
    """
    if center not in CENTERS:
        raise ValueError(f"unknown centre rule {center!r}")
    d, N = tree.d, tree.N
    out = np.zeros((N, d))
    if d == 1:
        b = tree.boundaries if N > 1 else (0.0, 2 * math.pi)
        out[:, 0] = 0.5 * (np.asarray(b[:-1]) + np.asarray(b[1:]))
        return out
    if N == 1:
        return out
    out[-1, 0] = math.pi
    for start, c in zip(tree.collar_starts(), tree.collars):
        lo, hi = c.colatitude_interval
        if center == "area_median":
            theta = _area_median(d - 1, lo, hi)
        else:
            theta = 0.5 * (lo + hi)
        sub = center_angles(c.sub, center)
        if c.azimuth_offset:
            sub[:, -1] = np.mod(sub[:, -1] + c.azimuth_offset, 2 * math.pi)
        out[start:start + c.m, 0] = theta
        out[start:start + c.m, 1:] = sub
    return out


def eq_points(tree: RegionTree, center: str = "midpoint") -> CodeSet:
    """The EQP code of a partition, in region order."""
    pts = to_cartesian(center_angles(tree, center))
    return CodeSet(
        tree.d,
        pts,
        "eqp",
        {"N": tree.N, "offset_scheme": tree.spec.offset_scheme, "center": center},
    )


def collar_offsets(tree: RegionTree) -> list[float]:
    """Azimuth rotation of each collar of an S^2 partition.

    All zeros unless the tree was built with ``offset_scheme="stagger"``.
    """
    if tree.d != 2:
        raise ValueError("collar offsets are defined for d = 2 partitions")
    return [c.azimuth_offset for c in tree.collars]
