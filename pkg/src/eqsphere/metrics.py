"""Quality measures of partitions and spherical codes.

Pairwise sums are evaluated in row blocks and combined with ``math.fsum``,
so results do not depend on the block size.  Randomised estimators take an
explicit seed and draw their samples as prefixes of a fixed stream: more
samples or trials can only raise the estimate.
"""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import asdict, dataclass, field
from itertools import product
from typing import NamedTuple

import numpy as np
from scipy.spatial import cKDTree

from .geometry import cap_area, chord_to_angle, sphere_area, to_cartesian
from .partition import Region, RegionTree
from .points import CodeSet

BLOCK = 512
REPORT_SCHEMA_VERSION = 1


class CoincidentPointsWarning(RuntimeWarning):
    pass


def _coords(code) -> np.ndarray:
    pts = code.points if isinstance(code, CodeSet) else code
    return np.asarray(pts, dtype=float)


def _sqdist(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # fixed left-to-right accumulation; brute force and accelerated paths share it
    out = (a[..., 0] - b[..., 0]) ** 2
    for k in range(1, a.shape[-1]):
        out = out + (a[..., k] - b[..., k]) ** 2
    return out


def _blocks(n: int, size: int = BLOCK):
    for i0 in range(0, n, size):
        yield i0, min(n, i0 + size)


# --- diameters --------------------------------------------------------------

def _band_diameter(t1: float, t2: float, width: float) -> float:
    """Exact chord diameter of ``[t1, t2] x [0, width]`` on S^2.

    With ``c = cos(min(width, pi))`` the largest distance minimises
    ``A cos(ta - tb) + B cos(ta + tb)`` (``A = (1+c)/2``, ``B = (1-c)/2``).
    For a fixed sum ``v = ta + tb`` the difference is pushed to its bound,
    leaving two sinusoids in ``v``; their minima are at the piece ends or at
    a stationary point.
    """
    c = math.cos(min(width, math.pi))
    A, B = (1 + c) / 2, (1 - c) / 2
    cands = [2 * t1, t1 + t2, 2 * t2]
    for lo, hi, anchor in ((2 * t1, t1 + t2, 2 * t1), (t1 + t2, 2 * t2, 2 * t2)):
        z = A * complex(math.cos(anchor), -math.sin(anchor)) + B
        if z == 0:
            continue
        v0 = math.pi - math.atan2(z.imag, z.real)
        v = v0 + 2 * math.pi * math.ceil((lo - v0) / (2 * math.pi))
        if lo <= v <= hi:
            cands.append(v)

    def g(v):
        u = min(v - 2 * t1, 2 * t2 - v)
        return A * math.cos(u) + B * math.cos(v)

    return math.sqrt(max(0.0, 2 - 2 * min(g(v) for v in cands)))


def region_diameter(region: Region, samples: int = 5) -> float:
    """Largest chord between two points of a region.

    Exact for caps, whole spheres, arcs and S^2 regions.  For zonal regions
    with d >= 3 this is a lower bound: the maximum over a grid of
    ``samples`` points per interval.
    """
    d = region.d
    ivs = region.intervals
    if region.kind == "whole_sphere":
        return 2.0
    if region.kind in ("cap_north", "cap_south"):
        theta = ivs[0].hi if region.kind == "cap_north" else math.pi - ivs[0].lo
        return 2 * math.sin(theta) if theta <= math.pi / 2 else 2.0
    if d == 1:
        return 2 * math.sin(min(ivs[0].width, math.pi) / 2)
    if d == 2:
        return _band_diameter(ivs[0].lo, ivs[0].hi, ivs[1].width)
    grids = [np.linspace(iv.lo, iv.hi, samples) for iv in ivs]
    pts = to_cartesian(np.array(list(product(*grids))))
    best = 0.0
    for i0, i1 in _blocks(len(pts)):
        best = max(best, float(_sqdist(pts[i0:i1, None, :], pts[None, :, :]).max()))
    return min(2.0, math.sqrt(best))


class DiameterEstimate(NamedTuple):
    value: float
    ratio: float
    exact: bool
    samples: int


def max_diameter(tree: RegionTree, samples: int = 5) -> DiameterEstimate:
    """Largest region diameter, and that value scaled by ``N^(1/d)``."""
    value = max(region_diameter(r, samples) for r in tree.regions)
    exact = tree.d <= 2 or all(r.kind != "zonal" for r in tree.regions)
    return DiameterEstimate(value, value * tree.N ** (1 / tree.d), exact, samples)


# --- separation ------------------------------------------------------------

def min_distance(code, method: str = "brute") -> float:
    """Smallest Euclidean distance between two code points.

    ``method="brute"`` scans all pairs.  ``method="tree"`` finds candidate
    pairs with a k-d tree and re-evaluates them with the brute-force
    arithmetic, so both return bit-identical values.
    """
    x = _coords(code)
    n = len(x)
    if n < 2:
        raise ValueError("min_distance needs at least two points")
    if method == "brute":
        best = math.inf
        for i0, i1 in _blocks(n):
            sq = _sqdist(x[i0:i1, None, :], x[None, :, :])
            sq[np.arange(i1 - i0), np.arange(i0, i1)] = np.inf
            best = min(best, float(sq.min()))
        return math.sqrt(best)
    if method == "tree":
        kd = cKDTree(x)
        dist, _ = kd.query(x, k=2)
        radius = float(dist[:, 1].min()) * (1 + 1e-9) + 1e-15
        pairs = kd.query_pairs(radius, output_type="ndarray")
        sq = _sqdist(x[pairs[:, 0]], x[pairs[:, 1]])
        return math.sqrt(float(sq.min()))
    raise ValueError(f"unknown method {method!r}")


def packing_density(code, dmin: float | None = None) -> float:
    """Fraction of the sphere covered by caps of half the minimal angular separation."""
    x = _coords(code)
    d = x.shape[1] - 1
    if dmin is None:
        dmin = min_distance(x)
    radius = chord_to_angle(dmin) / 2
    return min(1.0, len(x) * cap_area(d, radius) / sphere_area(d))


def uniform_sphere(d: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` i.i.d. uniform points of S^d (normalised Gaussian vectors)."""
    g = rng.standard_normal((n, d + 1))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def covering_radius(code, samples: int = 100_000, seed: int = 0,
                    chunk: int = 200_000) -> float:
    """Largest angular distance from a random sample point to the code.

    A lower bound on the true covering radius.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    x = _coords(code)
    d = x.shape[1] - 1
    kd = cKDTree(x)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i0, i1 in _blocks(samples, chunk):
        dist, _ = kd.query(uniform_sphere(d, i1 - i0, rng), k=1)
        worst = max(worst, float(dist.max()))
    return chord_to_angle(worst)


# --- energies ---------------------------------------------------------------

def _pair_sum(code, kernel, name: str) -> float:
    x = _coords(code)
    n = len(x)
    if n < 2:
        raise ValueError(f"{name} needs at least two points")
    rows = []
    for i0, i1 in _blocks(n):
        sq = _sqdist(x[i0:i1, None, :], x[None, :, :])
        sq[np.arange(i1 - i0), np.arange(i0, i1)] = np.nan
        zero = np.argwhere(sq == 0)
        if len(zero):
            i, j = int(zero[0, 0]) + i0, int(zero[0, 1])
            warnings.warn(f"{name}: points {i} and {j} coincide", CoincidentPointsWarning)
            return math.inf
        rows.extend(np.nansum(kernel(sq), axis=1).tolist())
    return math.fsum(rows) / n**2


def riesz_energy(code, s: float) -> float:
    """Riesz s-energy normalised by ``1/N^2``, summed over ordered pairs."""
    if not s > 0:
        raise ValueError("s must be positive")
    return _pair_sum(code, lambda sq: sq ** (-s / 2), "riesz_energy")


def log_energy(code) -> float:
    """Logarithmic energy ``(1/N^2) sum log(1/|x - y|)`` over ordered pairs."""
    return _pair_sum(code, lambda sq: -0.5 * np.log(sq), "log_energy")


# --- discrepancy ------------------------------------------------------------

def cap_fraction(d: int, theta) -> np.ndarray:
    return np.asarray(cap_area(d, np.clip(theta, 0.0, math.pi))) / sphere_area(d)


def cap_discrepancy(code, trials: int = 10_000, seed: int = 0) -> float:
    """Lower bound on the spherical cap discrepancy.

    Caps with uniform random centres and radii are tested, and for every
    code point used as a centre all radii are swept, by evaluating the
    count/area difference on both sides of each jump of the counting
    function.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    x = _coords(code)
    n, d = len(x), x.shape[1] - 1
    centres = uniform_sphere(d, trials, np.random.default_rng([seed, 1]))
    radii = np.random.default_rng([seed, 2]).uniform(0.0, math.pi, trials)
    worst = 0.0
    for i0, i1 in _blocks(trials, 1024):
        dots = centres[i0:i1] @ x.T
        inside = (dots >= np.cos(radii[i0:i1])[:, None]).sum(axis=1)
        diff = np.abs(inside / n - cap_fraction(d, radii[i0:i1]))
        worst = max(worst, float(diff.max()))

    ks = np.arange(1, n + 1)
    for i0, i1 in _blocks(n, 256):
        dots = np.clip(x[i0:i1] @ x.T, -1.0, 1.0)
        ang = np.arccos(-np.sort(-dots, axis=1))
        area = cap_fraction(d, ang)
        worst = max(worst, float((ks / n - area).max()), float((area - (ks - 1) / n).max()))
    return min(1.0, worst)


# --- report -----------------------------------------------------------------

@dataclass
class MetricsReport:
    d: int
    N: int
    generator: str
    max_region_diameter: float | None
    diameter_ratio: float | None
    diameter_exact: bool | None
    min_distance: float
    min_distance_ratio: float
    packing_density: float
    covering_radius_estimate: float
    riesz_energy: dict[str, float] = field(default_factory=dict)
    log_energy: float = math.nan
    cap_discrepancy_estimate: float = math.nan
    mc_samples: int = 0
    cap_trials: int = 0
    seed: int = 0

    def to_dict(self) -> dict:
        return {"schema_version": REPORT_SCHEMA_VERSION, **asdict(self)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n"

    def csv_fields(self) -> list[tuple[str, object]]:
        rows = []
        for key, value in self.to_dict().items():
            if key == "riesz_energy":
                rows.extend((f"riesz_energy_s={s}", v) for s, v in value.items())
            else:
                rows.append((key, value))
        return rows

    def to_csv(self) -> str:
        fields = self.csv_fields()
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([k for k, _ in fields])
        w.writerow([format_value(v) for _, v in fields])
        return buf.getvalue()


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def s_key(s: float) -> str:
    return repr(float(s))


def compute_metrics(code: CodeSet, tree: RegionTree | None = None,
                    s_values=(1.0,), samples: int = 100_000,
                    trials: int = 10_000, seed: int = 0,
                    diameter_samples: int = 5) -> MetricsReport:
    """All measures for a code (and its partition, when one is given)."""
    d, n = code.d, code.N
    scale = n ** (1 / d)
    if tree is not None:
        diam = max_diameter(tree, diameter_samples)
        dval, dratio, dexact = diam.value, diam.ratio, diam.exact
    else:
        dval = dratio = dexact = None
    dmin = min_distance(code, method="tree")
    return MetricsReport(
        d=d,
        N=n,
        generator=code.generator,
        max_region_diameter=dval,
        diameter_ratio=dratio,
        diameter_exact=dexact,
        min_distance=dmin,
        min_distance_ratio=dmin * scale,
        packing_density=packing_density(code, dmin),
        covering_radius_estimate=covering_radius(code, samples, seed),
        riesz_energy={s_key(s): riesz_energy(code, s) for s in s_values},
        log_energy=log_energy(code),
        cap_discrepancy_estimate=cap_discrepancy(code, trials, seed),
        mc_samples=samples,
        cap_trials=trials,
        seed=seed,
    )
