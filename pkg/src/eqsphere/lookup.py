"""Point location in EQ(d, N): which region contains a given point."""

from __future__ import annotations

import math

import numpy as np

from .geometry import DomainError, from_cartesian
from .partition import RegionTree

TWO_PI = 2 * math.pi


def reduce_azimuth(phi, offset: float):
    """Rotate azimuths back by ``offset`` into [0, 2*pi).

    Shared by the fast lookup and the brute-force scan so both see the same
    floating point values.
    """
    if offset == 0:
        return phi
    r = np.mod(np.asarray(phi) - offset, TWO_PI)
    return np.where(r >= TWO_PI, 0.0, r)


def _locate(tree: RegionTree, ang: np.ndarray) -> np.ndarray:
    n = len(ang)
    N, d = tree.N, tree.d
    if N == 1 or n == 0:
        return np.zeros(n, dtype=np.int64)
    b = np.asarray(tree.boundaries)
    if d == 1:
        j = np.searchsorted(b, ang[:, 0], side="right") - 1
        return np.minimum(j, N - 1).astype(np.int64)

    theta = ang[:, 0]
    out = np.empty(n, dtype=np.int64)
    north = theta < b[0]
    south = theta >= b[-1]
    out[north] = 0
    out[south] = N - 1
    mid = np.flatnonzero(~(north | south))
    if len(mid):
        which = np.searchsorted(b, theta[mid], side="right") - 1
        order = np.argsort(which, kind="stable")
        mid, which = mid[order], which[order]
        cuts = np.searchsorted(which, np.arange(len(tree.collars) + 1))
        for i, (start, c) in enumerate(zip(tree.collar_starts(), tree.collars)):
            sel = mid[cuts[i]:cuts[i + 1]]
            if not len(sel):
                continue
            sub = ang[sel, 1:].copy()
            sub[:, -1] = reduce_azimuth(sub[:, -1], c.azimuth_offset)
            out[sel] = start + _locate(c.sub, sub)
    return out


def _as_points(tree: RegionTree, xs) -> np.ndarray:
    xs = np.asarray(xs, dtype=float)
    if xs.size == 0:
        return np.zeros((0, tree.d + 1))
    xs = np.atleast_2d(xs)
    if xs.shape[1] != tree.d + 1:
        raise DomainError(f"points of S^{tree.d} need {tree.d + 1} coordinates")
    return xs


def lookup_many(tree: RegionTree, xs) -> np.ndarray:
    """Region index of each row of ``xs``.

    Binary search on the zone colatitudes, then recursion into the collar's
    sub-partition after undoing the collar rotation.
    """
    xs = _as_points(tree, xs)
    if not len(xs):
        return np.zeros(0, dtype=np.int64)
    return _locate(tree, from_cartesian(xs))


def lookup(tree: RegionTree, x) -> int:
    """Index of the region containing the single unit vector ``x``."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DomainError("lookup takes a single point; use lookup_many")
    return int(lookup_many(tree, x[None, :])[0])


def region_membership(tree: RegionTree, xs) -> np.ndarray:
    """Boolean matrix ``(n_points, N)`` of interval-product membership.

    Brute-force scan over all regions; O(N) per point.
    """
    xs = _as_points(tree, xs)
    ang = from_cartesian(xs) if len(xs) else np.zeros((0, tree.d))
    member = np.zeros((len(xs), tree.N), dtype=bool)
    for i, r in enumerate(tree.regions):
        inside = np.ones(len(xs), dtype=bool)
        for k, iv in enumerate(r.intervals[:-1]):
            inside &= iv.contains(ang[:, k])
        phi = reduce_azimuth(ang[:, -1], r.azimuth_offset)
        inside &= r.intervals[-1].contains(phi)
        member[:, i] = inside
    return member


def lookup_bruteforce(tree: RegionTree, xs) -> tuple[np.ndarray, np.ndarray]:
    """Scan every region; return (first matching index, number of matches)."""
    member = region_membership(tree, xs)
    hits = member.sum(axis=1)
    first = np.where(hits > 0, member.argmax(axis=1), -1)
    return first, hits


def histogram(tree: RegionTree, xs) -> np.ndarray:
    """Number of points of ``xs`` falling in each region."""
    idx = lookup_many(tree, xs)
    return np.bincount(idx, minlength=tree.N)
