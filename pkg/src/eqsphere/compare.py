"""Alternative point constructions and long-form comparison tables."""

from __future__ import annotations

import csv
import io
import json
import math
import re
from dataclasses import dataclass

import numpy as np

from . import metrics as M
from .partition import PartitionSpec, eq_partition
from .points import CodeSet, eq_points

SPIRAL_C = 3.6
GOLDEN_CONJ = (math.sqrt(5) - 1) / 2
TABLE_COLUMNS = ("generator", "N", "metric", "value", "seed")
TABLE_SCHEMA_VERSION = 1


class ConfigError(ValueError):
    """Invalid generator, dimension or metric selection."""


def _from_z_phi(z: np.ndarray, phi: np.ndarray) -> np.ndarray:
    r = np.sqrt(np.clip(1 - z * z, 0.0, None))
    return np.stack([z, r * np.cos(phi), r * np.sin(phi)], axis=1)


def random_uniform(d: int, N: int, seed: int = 0) -> CodeSet:
    if N < 1:
        raise ConfigError("N must be >= 1")
    pts = M.uniform_sphere(d, N, np.random.default_rng(seed))
    return CodeSet(d, pts, "random_uniform", {"N": N, "seed": seed})


def spiral_points(N: int, C: float = SPIRAL_C) -> CodeSet:
    """Generalised spiral on S^2: equal-area heights, azimuth steps ``C / sqrt(N (1 - z^2))``."""
    if N < 2:
        raise ConfigError("spiral needs N >= 2")
    k = np.arange(1, N + 1)
    z = 1 - (2 * k - 1) / N
    phi = np.zeros(N)
    for i in range(1, N):
        phi[i] = math.fmod(phi[i - 1] + C / math.sqrt(N * (1 - z[i] ** 2)), 2 * math.pi)
    return CodeSet(2, _from_z_phi(z, phi), "spiral", {"N": N, "C": C})


def fibonacci_points(N: int) -> CodeSet:
    """Spherical Fibonacci lattice with heights ``1 - (2k+1)/N``."""
    if N < 1:
        raise ConfigError("fibonacci needs N >= 1")
    k = np.arange(N)
    z = 1 - (2 * k + 1) / N
    phi = 2 * math.pi * np.mod(k * GOLDEN_CONJ, 1.0)
    return CodeSet(2, _from_z_phi(z, phi), "fibonacci", {"N": N})


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % q for q in range(2, math.isqrt(p) + 1))


def radical_inverse(i: np.ndarray, base: int) -> np.ndarray:
    """Van der Corput radical inverse of non-negative integers."""
    i = np.asarray(i, dtype=np.int64).copy()
    out = np.zeros(i.shape)
    scale = 1.0 / base
    while np.any(i > 0):
        out += (i % base) * scale
        i //= base
        scale /= base
    return out


def halton_mapped(N: int, bases=(2, 3)) -> CodeSet:
    """Halton points (indices 1..N) mapped to S^2 by ``z = 1 - 2u, phi = 2 pi v``."""
    b1, b2 = (int(b) for b in bases)
    if b1 == b2 or not (_is_prime(b1) and _is_prime(b2)):
        raise ConfigError(f"Halton bases must be two distinct primes, got {bases}")
    if N < 1:
        raise ConfigError("halton needs N >= 1")
    idx = np.arange(1, N + 1)
    u, v = radical_inverse(idx, b1), radical_inverse(idx, b2)
    return CodeSet(2, _from_z_phi(1 - 2 * u, 2 * math.pi * v), "halton_mapped",
                   {"N": N, "bases": [b1, b2]})


def generate(generator: str, d: int, N: int, seed: int = 0,
             offset_scheme: str = "none", **params) -> CodeSet:
    """Build a code by generator name."""
    if generator == "eqp":
        return eq_points(eq_partition(PartitionSpec(d, N, offset_scheme)))
    if generator == "random_uniform":
        return random_uniform(d, N, seed)
    if generator in ("spiral", "fibonacci", "halton_mapped"):
        if d != 2:
            raise ConfigError(f"{generator} points are only defined on S^2")
        if generator == "spiral":
            return spiral_points(N, params.get("C", SPIRAL_C))
        if generator == "fibonacci":
            return fibonacci_points(N)
        return halton_mapped(N, params.get("bases", (2, 3)))
    raise ConfigError(f"unknown generator {generator!r}")


_RIESZ = re.compile(r"^riesz_energy_s=(.+)$")
METRICS = (
    "min_distance", "min_distance_ratio", "packing_density", "covering_radius",
    "log_energy", "cap_discrepancy", "max_diameter", "diameter_ratio",
)


def _metric_value(name: str, code: CodeSet, tree, samples: int, trials: int, seed: int) -> float:
    if name == "min_distance":
        return M.min_distance(code, method="tree")
    if name == "min_distance_ratio":
        return M.min_distance(code, method="tree") * code.N ** (1 / code.d)
    if name == "packing_density":
        return M.packing_density(code)
    if name == "covering_radius":
        return M.covering_radius(code, samples, seed)
    if name == "log_energy":
        return M.log_energy(code)
    if name == "cap_discrepancy":
        return M.cap_discrepancy(code, trials, seed)
    if name in ("max_diameter", "diameter_ratio"):
        est = M.max_diameter(tree)
        return est.value if name == "max_diameter" else est.ratio
    match = _RIESZ.match(name)
    if match:
        return M.riesz_energy(code, float(match.group(1)))
    raise ConfigError(f"unknown metric {name!r}")


def _check_metric(name: str, generator: str) -> None:
    if name in ("max_diameter", "diameter_ratio") and generator != "eqp":
        raise ConfigError(f"{name} needs a partition; only the eqp generator has one")
    if name not in METRICS and not _RIESZ.match(name):
        raise ConfigError(f"unknown metric {name!r}")


@dataclass
class ComparisonTable:
    d: int
    seed: int
    rows: list[dict]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(TABLE_COLUMNS)
        for r in self.rows:
            w.writerow([M.format_value(r[c]) for c in TABLE_COLUMNS])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {"schema_version": TABLE_SCHEMA_VERSION, "d": self.d,
               "seed": self.seed, "columns": list(TABLE_COLUMNS), "rows": self.rows}
        return json.dumps(doc, indent=2) + "\n"

    def value(self, generator: str, N: int, metric: str) -> float:
        for r in self.rows:
            if (r["generator"], r["N"], r["metric"]) == (generator, N, metric):
                return r["value"]
        raise KeyError((generator, N, metric))


def compare(generators, N_sweep, metrics, seed: int = 0, d: int = 2,
            samples: int = 100_000, trials: int = 10_000,
            offset_scheme: str = "none") -> ComparisonTable:
    """Evaluate every metric for every generator and N.

    Rows come out in generator, N, metric order.  All configuration errors
    are raised before any point set is built.
    """
    generators, N_sweep, metrics = list(generators), list(N_sweep), list(metrics)
    for g in generators:
        if g in ("spiral", "fibonacci", "halton_mapped") and d != 2:
            raise ConfigError(f"{g} points are only defined on S^2")
        if g not in ("eqp", "random_uniform", "spiral", "fibonacci", "halton_mapped"):
            raise ConfigError(f"unknown generator {g!r}")
        for m in metrics:
            _check_metric(m, g)
    rows = []
    for g in generators:
        for n in N_sweep:
            tree = eq_partition(PartitionSpec(d, n, offset_scheme)) if g == "eqp" else None
            code = eq_points(tree) if tree is not None else generate(g, d, n, seed)
            for m in metrics:
                value = _metric_value(m, code, tree, samples, trials, seed)
                rows.append({"generator": g, "N": n, "metric": m,
                             "value": float(value), "seed": seed})
    return ComparisonTable(d, seed, rows)
