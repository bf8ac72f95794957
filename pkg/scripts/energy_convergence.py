"""Riesz s-energy and log energy of EQP(2, N) against their continuum limits.

The continuum values come from a one-dimensional quadrature over the
colatitude density sin(t)/2; for s = 1 the limit is 1 and for the log
kernel it is 1/2 - log 2.

    python3 scripts/energy_convergence.py --sizes 100 400 1600 6400
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import dataclass, field

from scipy.integrate import quad

from eqsphere.metrics import log_energy, riesz_energy
from eqsphere.partition import eq_partition
from eqsphere.points import eq_points


@dataclass
class EnergyConfig:
    sizes: list[int] = field(default_factory=lambda: [100, 400, 1600, 6400])
    s_values: list[float] = field(default_factory=lambda: [1.0])
    offset_scheme: str = "none"


def continuum(kernel) -> float:
    val, _ = quad(lambda t: kernel(2 * math.sin(t / 2)) * math.sin(t) / 2, 0.0, math.pi, limit=400)
    return val


def run(cfg: EnergyConfig, out=sys.stdout) -> None:
    limits = {s: continuum(lambda c, s=s: c ** (-s)) for s in cfg.s_values if s < 2}
    log_limit = continuum(lambda c: -math.log(c))
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["N", "kernel", "energy", "continuum", "gap"])
    for n in cfg.sizes:
        code = eq_points(eq_partition(d=2, N=n, offset_scheme=cfg.offset_scheme))
        for s in cfg.s_values:
            e = riesz_energy(code, s)
            lim = limits.get(s, math.inf)
            w.writerow([n, f"riesz_s={s}", f"{e:.8f}", f"{lim:.8f}", f"{lim - e:.8f}"])
        e = log_energy(code)
        w.writerow([n, "log", f"{e:.8f}", f"{log_limit:.8f}", f"{e - log_limit:.8f}"])
        out.flush()


def main(argv=None) -> None:
    cfg = EnergyConfig()
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=cfg.sizes)
    p.add_argument("--s-values", type=float, nargs="+", default=cfg.s_values)
    p.add_argument("--offsets", dest="offset_scheme", choices=["none", "stagger"], default=cfg.offset_scheme)
    run(EnergyConfig(**vars(p.parse_args(argv))))


if __name__ == "__main__":
    main()
