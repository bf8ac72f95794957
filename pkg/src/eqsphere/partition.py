"""Recursive zonal equal-area partition EQ(d, N) of the unit sphere S^d.

For ``d >= 2`` the sphere is cut into a north cap, a sequence of collars
and a south cap.  Each cap is one region; collar ``i`` holds ``m_i``
regions and is split by recursing on EQ(d-1, m_i).  On S^1 the circle is
cut into ``N`` equal arcs.

Intervals are half-open ``[lo, hi)`` except the last interval of every
level, which is closed at pi (colatitudes) or 2*pi (azimuth).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .geometry import (
    DomainError,
    cap_area,
    cap_colatitude,
    sin_power_integral,
    sphere_area,
)

TWO_PI = 2 * math.pi
OFFSET_SCHEMES = ("none", "stagger")
SCHEMA_VERSION = 1
TIE_TOL = 1e-9


class PartitionError(RuntimeError):
    """The collar construction produced an infeasible region count."""


@dataclass(frozen=True)
class PartitionSpec:
    d: int
    N: int
    offset_scheme: str = "none"
    tolerance: float = 1e-12

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise DomainError(f"d must be a positive integer, got {self.d!r}")
        if int(self.N) != self.N or self.N < 1:
            raise DomainError(f"N must be a positive integer, got {self.N!r}")
        if self.offset_scheme not in OFFSET_SCHEMES:
            raise DomainError(f"unknown offset scheme {self.offset_scheme!r}")
        if not self.tolerance > 0:
            raise DomainError("tolerance must be positive")


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    closed: bool = False

    def contains(self, v):
        v = np.asarray(v)
        inside = (v >= self.lo) & (v < self.hi)
        if self.closed:
            inside |= v == self.hi
        return inside

    @property
    def width(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class Region:
    """One region as a product of ``d`` angle intervals.

    ``intervals[k]`` for ``k < d - 1`` constrains the colatitude at level
    ``k``; the last interval constrains the azimuth after it has been
    rotated back by ``azimuth_offset``.
    """

    intervals: tuple[Interval, ...]
    kind: str
    azimuth_offset: float = 0.0

    @property
    def d(self) -> int:
        return len(self.intervals)


@dataclass(frozen=True, eq=False)
class CollarNode:
    colatitude_interval: tuple[float, float]
    m: int
    sub: "RegionTree"
    azimuth_offset: float = 0.0


@dataclass(frozen=True, eq=False)
class RegionTree:
    """A constructed EQ(d, N) partition.

    ``boundaries`` holds the zone colatitudes ``theta_0 < ... < theta_n``
    for ``d >= 2`` (empty for N = 1) and the arc end points
    ``0, 2pi/N, ..., 2pi`` for ``d = 1``.
    """

    spec: PartitionSpec
    cap_colatitude: float
    collars: tuple[CollarNode, ...]
    boundaries: tuple[float, ...]
    regions: tuple[Region, ...] = field(repr=False)

    @property
    def d(self) -> int:
        return self.spec.d

    @property
    def N(self) -> int:
        return self.spec.N

    @property
    def counts(self) -> list[int]:
        return [c.m for c in self.collars]

    def collar_starts(self) -> list[int]:
        """Flat index of the first region of each collar."""
        starts, k = [], 1
        for c in self.collars:
            starts.append(k)
            k += c.m
        return starts

    def to_dict(self, with_regions: bool = True) -> dict[str, Any]:
        out = {
            "schema_version": SCHEMA_VERSION,
            "d": self.d,
            "N": self.N,
            "offset_scheme": self.spec.offset_scheme,
            "tolerance": self.spec.tolerance,
            "cap_colatitude": self.cap_colatitude,
            "boundaries": list(self.boundaries),
            "collars": [
                {
                    "interval": list(c.colatitude_interval),
                    "count": c.m,
                    "offset": c.azimuth_offset,
                    "sub": c.sub.to_dict(with_regions=False),
                }
                for c in self.collars
            ],
        }
        if with_regions:
            out["regions"] = [
                {
                    "index": i,
                    "kind": r.kind,
                    "azimuth_offset": r.azimuth_offset,
                    "intervals": [[iv.lo, iv.hi, iv.closed] for iv in r.intervals],
                }
                for i, r in enumerate(self.regions)
            ]
        return out

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RegionTree":
        """Rebuild a tree from :meth:`to_dict` output without recomputation."""
        version = data.get("schema_version")
        if version != SCHEMA_VERSION:
            raise ValueError(f"unsupported partition schema version {version!r}")
        spec = PartitionSpec(
            int(data["d"]), int(data["N"]), data["offset_scheme"], float(data["tolerance"])
        )
        collars = tuple(
            CollarNode(
                (float(c["interval"][0]), float(c["interval"][1])),
                int(c["count"]),
                cls.from_dict({"schema_version": version, **c["sub"]}),
                float(c["offset"]),
            )
            for c in data["collars"]
        )
        boundaries = tuple(float(b) for b in data["boundaries"])
        theta_c = float(data["cap_colatitude"])
        return _assemble(spec, theta_c, collars, boundaries)


def ideal_collar_angle(d: int, N: int) -> float:
    """Side of a d-cube whose volume is the area of one region."""
    return (sphere_area(d) / N) ** (1.0 / d)


def _colatitude_of_regions(d: int, N: int, k: int) -> float:
    """Colatitude of the cap holding exactly ``k`` of ``N`` regions.

    Caps larger than a hemisphere are found through their complement so
    that zone boundaries are exactly symmetric about the equator.
    """
    if k <= 0:
        return 0.0
    if k >= N:
        return math.pi
    area = sphere_area(d) / N
    if 2 * k <= N:
        return cap_colatitude(d, k * area)
    return math.pi - cap_colatitude(d, (N - k) * area)


def num_collars(d: int, N: int, theta_c: float) -> int:
    if N <= 2:
        return 0
    ideal = (math.pi - 2 * theta_c) / ideal_collar_angle(d, N)
    return max(1, round(ideal))


def ideal_region_counts(d: int, N: int, theta_c: float, n_collars: int) -> np.ndarray:
    """Real-valued region counts of collars of equal colatitude height."""
    fit = (math.pi - 2 * theta_c) / n_collars
    edges = theta_c + fit * np.arange(n_collars + 1)
    edges[-1] = math.pi - theta_c
    areas = cap_area(d, np.clip(edges, 0.0, math.pi))
    return np.diff(areas) / (sphere_area(d) / N)


def collar_counts(d: int, N: int, theta_c: float, n_collars: int) -> list[int]:
    """Integer region counts per collar by carried-discrepancy rounding.

    The running rounding error is carried into the next collar, so every
    prefix sum stays within 1 of the ideal prefix sum and the counts add
    up to ``N - 2``.  Halves (which the north-south symmetry produces
    exactly in the middle pair when ``N - 2`` is odd) round up, with a small
    tolerance so floating point noise cannot flip the tie.
    """
    if N < 3 or n_collars < 1:
        raise DomainError("collar_counts needs N >= 3 and at least one collar")
    ideal = ideal_region_counts(d, N, theta_c, n_collars)
    counts, carry = [], 0.0
    for y in ideal:
        m = math.floor(y + carry + 0.5 + TIE_TOL)
        carry += y - m
        counts.append(int(m))
    if sum(counts) != N - 2:
        raise PartitionError(f"collar counts {counts} do not sum to {N - 2}")
    if min(counts) < 1:
        raise PartitionError(f"empty collar in EQ({d},{N}): counts {counts}")
    return counts


def zone_colatitudes(d: int, N: int, counts) -> list[float]:
    """Boundaries ``theta_0 .. theta_n`` enclosing exactly the counted regions."""
    cumulative = 1 + np.concatenate([[0], np.cumsum(counts, dtype=int)])
    return [_colatitude_of_regions(d, N, int(k)) for k in cumulative]


def stagger_offsets(counts) -> list[float]:
    """Azimuth rotations for the collars of an S^2 partition.

    Successive rotations put the points of one collar midway between the
    points of the next, which maximises the smallest azimuthal gap between
    the two rings.
    """
    offsets = [0.0] * len(counts)
    for i in range(1, len(counts)):
        a, b = counts[i - 1], counts[i]
        step = math.pi / a - math.pi / b + math.pi * math.gcd(a, b) / (a * b)
        offsets[i] = math.fmod(offsets[i - 1] + step, TWO_PI / b)
        if offsets[i] < 0:
            offsets[i] += TWO_PI / b
    return offsets


def _full_intervals(levels: int) -> tuple[Interval, ...]:
    colat = tuple(Interval(0.0, math.pi, True) for _ in range(levels - 1))
    return colat + (Interval(0.0, TWO_PI, True),)


def _assemble(spec, theta_c, collars, boundaries) -> RegionTree:
    d, N = spec.d, spec.N
    if N == 1:
        regions = (Region(_full_intervals(d), "whole_sphere"),)
    elif d == 1:
        regions = tuple(
            Region((Interval(boundaries[j], boundaries[j + 1], j == N - 1),), "circle_segment")
            for j in range(N)
        )
    else:
        rest = _full_intervals(d - 1)
        regions = [Region((Interval(0.0, boundaries[0]),) + rest, "cap_north")]
        for c in collars:
            band = Interval(*c.colatitude_interval)
            for r in c.sub.regions:
                regions.append(
                    Region((band,) + r.intervals, "zonal", r.azimuth_offset + c.azimuth_offset)
                )
        regions.append(Region((Interval(boundaries[-1], math.pi, True),) + rest, "cap_south"))
        regions = tuple(regions)
    return RegionTree(spec, theta_c, tuple(collars), tuple(boundaries), regions)


def eq_partition(spec: PartitionSpec | None = None, *, d: int | None = None,
                 N: int | None = None, offset_scheme: str = "none") -> RegionTree:
    """Build EQ(d, N).

    Call either with a :class:`PartitionSpec` or with keyword ``d`` and
    ``N``.
    """
    if spec is None:
        spec = PartitionSpec(d, N, offset_scheme)
    d, N = spec.d, spec.N
    if N == 1:
        return _assemble(spec, math.pi, (), ())
    if d == 1:
        edges = [TWO_PI * j / N for j in range(N)] + [TWO_PI]
        return _assemble(spec, math.pi / N, (), tuple(edges))

    theta_c = _colatitude_of_regions(d, N, 1)
    n = num_collars(d, N, theta_c)
    if n == 0:
        return _assemble(spec, theta_c, (), (theta_c,))
    counts = collar_counts(d, N, theta_c, n)
    bounds = zone_colatitudes(d, N, counts)
    if d == 2 and spec.offset_scheme == "stagger":
        offsets = stagger_offsets(counts)
    else:
        offsets = [0.0] * n
    collars = []
    for i, m in enumerate(counts):
        sub = eq_partition(PartitionSpec(d - 1, m, spec.offset_scheme, spec.tolerance))
        collars.append(CollarNode((bounds[i], bounds[i + 1]), m, sub, offsets[i]))
    return _assemble(spec, theta_c, tuple(collars), tuple(bounds))


def interval_measure(d: int, level: int, iv: Interval) -> float:
    """Measure contributed by one level of a region of S^d.

    Level ``k < d - 1`` is a colatitude on S^(d-k) and carries the weight
    ``sin^(d-k-1)``; the azimuth level is plain arc length.
    """
    if level == d - 1:
        return iv.hi - iv.lo
    n = d - level - 1
    return sin_power_integral(n, iv.hi) - sin_power_integral(n, iv.lo)


def region_area(region: Region) -> float:
    d = region.d
    return float(np.prod([interval_measure(d, k, iv) for k, iv in enumerate(region.intervals)]))


def check_tree(tree: RegionTree, tol: float = 1e-10) -> None:
    """Assert the structural invariants of a tree, recursively.

    Raises ``AssertionError`` naming the first violated invariant.
    """
    d, N = tree.d, tree.N
    omega = sphere_area(d)
    assert len(tree.regions) == N, "region count"
    for i, r in enumerate(tree.regions):
        assert r.d == d, f"region {i} has {r.d} levels"
        for k, iv in enumerate(r.intervals):
            top = TWO_PI if k == d - 1 else math.pi
            assert 0 <= iv.lo <= iv.hi <= top, f"region {i} level {k} interval {iv}"
        area = region_area(r)
        assert abs(area - omega / N) <= tol * omega, f"region {i} area {area} != {omega / N}"
    if d >= 2 and N >= 2:
        assert 1 + sum(tree.counts) + 1 == N, "counts + caps != N"
        b = tree.boundaries
        assert b[0] == tree.cap_colatitude
        assert all(x < y for x, y in zip(b, b[1:])), "boundaries not increasing"
        for i, c in enumerate(tree.collars):
            assert c.colatitude_interval == (b[i], b[i + 1]), "collars do not tile"
            band = cap_area(d, b[i + 1]) - cap_area(d, b[i])
            assert abs(band - c.m * omega / N) <= tol * omega, f"collar {i} area"
            assert c.sub.N == c.m and c.sub.d == d - 1
            check_tree(c.sub, tol)
