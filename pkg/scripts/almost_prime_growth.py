"""Empirical P_r counts against the sieve main term as X doubles.

    python3 scripts/almost_prime_growth.py --X 250 500 1000 2000 --r 5
    python3 scripts/almost_prime_growth.py --forms 1,0,1 1,0,-2 1,0,3 --X 2000 4000 --r 8
"""

import argparse
import csv
import sys
from dataclasses import dataclass, field

from qfsieve.experiment import ExperimentConfig, run_experiment
from qfsieve.forms import WORKED_FORMS


@dataclass
class GrowthConfig:
    forms: list = field(default_factory=lambda: [list(f) for f in WORKED_FORMS])
    X_values: tuple = (250, 500, 1000, 2000)
    r: int | None = None
    gamma: float = 0.25


def main(cfg: GrowthConfig, out):
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["X", "total_points", "p_r_count", "predicted", "ratio"])
    system = None
    for X in cfg.X_values:
        ec = ExperimentConfig(forms=cfg.forms, X=X, r=cfg.r, gamma=cfg.gamma)
        system = system or ec.system()
        rep = run_experiment(ec, system)
        w.writerow([X, rep.total_points, rep.p_r_count, f"{rep.predicted:.4f}", f"{rep.ratio:.4f}"])


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--forms", nargs="+", help="a,b,c triples")
    ap.add_argument("--X", type=int, nargs="+", default=[250, 500, 1000, 2000])
    ap.add_argument("--r", type=int)
    ap.add_argument("--gamma", type=float, default=0.25)
    a = ap.parse_args()
    cfg = GrowthConfig(X_values=tuple(a.X), r=a.r, gamma=a.gamma)
    if a.forms:
        cfg.forms = [[int(c) for c in f.split(",")] for f in a.forms]
    main(cfg, sys.stdout)
