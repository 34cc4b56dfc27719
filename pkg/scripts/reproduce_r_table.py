"""Recompute r_M for kappa = g = 2..10 and compare with the tabulated row.

    python3 scripts/reproduce_r_table.py [--step 1e-3] [--out table.csv]
"""

import argparse
import csv
import sys
import time
from dataclasses import dataclass

from qfsieve.sievebound import TABLE_R_M, SieveParams, minimize_r, solve_Ff


@dataclass
class TableConfig:
    kappas: tuple = tuple(range(2, 11))
    step: float = 1e-3
    upper: float = 60.0
    grid_step: float = 0.25


def main(cfg: TableConfig, out):
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["kappa", "alpha_kappa", "beta_kappa", "u_star", "v_star", "bound", "r_M", "expected", "seconds"])
    mismatches = 0
    for k in cfg.kappas:
        t0 = time.perf_counter()
        p = SieveParams.for_forms(k)
        table = solve_Ff(p, cfg.upper + 1.0, cfg.step)
        res = minimize_r(p, table, upper=cfg.upper, grid_step=cfg.grid_step, step=cfg.step)
        mismatches += res.r_M != TABLE_R_M[k]
        w.writerow([k, p.alpha_kappa, p.beta_kappa, f"{res.u_star:.6f}", f"{res.v_star:.6f}",
                    f"{res.bound:.6f}", res.r_M, TABLE_R_M[k], f"{time.perf_counter() - t0:.2f}"])
    return mismatches


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--step", type=float, default=1e-3)
    ap.add_argument("--grid-step", type=float, default=0.25)
    ap.add_argument("--out")
    a = ap.parse_args()
    cfg = TableConfig(step=a.step, grid_step=a.grid_step)
    with (open(a.out, "w") if a.out else sys.stdout) as fh:
        bad = main(cfg, fh)
    sys.exit(1 if bad else 0)
