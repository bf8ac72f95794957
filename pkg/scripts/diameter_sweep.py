"""Maximum region diameter and minimum code distance of EQ(d, N) over an N sweep.

Writes a CSV with one row per (d, N): diameter ratio max_diam * N^(1/d)
(exact for d <= 2, a grid lower bound otherwise) and separation ratio
min_dist * N^(1/d) of the EQP code.

    python3 scripts/diameter_sweep.py --dims 2 3 --sizes 10 100 1000 10000
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from dataclasses import dataclass, field

from eqsphere.metrics import max_diameter, min_distance
from eqsphere.partition import PartitionSpec, eq_partition
from eqsphere.points import eq_points


@dataclass
class SweepConfig:
    dims: list[int] = field(default_factory=lambda: [2, 3, 4])
    sizes: list[int] = field(default_factory=lambda: [10, 33, 100, 400, 1000, 4000, 10000])
    offset_scheme: str = "none"
    diameter_samples: int = 5


def run(cfg: SweepConfig, out=sys.stdout) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["d", "N", "n_collars", "max_diameter", "diameter_ratio", "exact",
                "min_distance", "separation_ratio", "seconds"])
    for d in cfg.dims:
        for n in cfg.sizes:
            t0 = time.perf_counter()
            tree = eq_partition(PartitionSpec(d, n, cfg.offset_scheme))
            diam = max_diameter(tree, cfg.diameter_samples)
            dmin = min_distance(eq_points(tree), method="tree") if n > 1 else float("nan")
            w.writerow([d, n, len(tree.collars), f"{diam.value:.6f}", f"{diam.ratio:.6f}", diam.exact,
                        f"{dmin:.6f}", f"{dmin * n ** (1 / d):.6f}", f"{time.perf_counter() - t0:.2f}"])
            out.flush()


def main(argv=None) -> None:
    cfg = SweepConfig()
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--dims", type=int, nargs="+", default=cfg.dims)
    p.add_argument("--sizes", type=int, nargs="+", default=cfg.sizes)
    p.add_argument("--offsets", dest="offset_scheme", choices=["none", "stagger"], default=cfg.offset_scheme)
    p.add_argument("--diameter-samples", type=int, default=cfg.diameter_samples)
    run(SweepConfig(**vars(p.parse_args(argv))))


if __name__ == "__main__":
    main()
