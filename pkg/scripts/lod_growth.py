"""Growth exponent of the level-of-distribution error sum T-hat in Q.

Runs both region paths: M tied to sqrt(Q) (default) and M held fixed.

    python3 scripts/lod_growth.py --q 5 10 15 20 25 30 --m0 216 432 864
"""

import argparse
from dataclasses import dataclass

from qfsieve.forms import worked_system
from qfsieve.lattice import lod_growth


@dataclass
class LodConfig:
    q_values: tuple = (5, 10, 15, 20, 25, 30)
    m0_values: tuple = (216.0, 432.0, 864.0, 1728.0)
    fixed_M: tuple = (5000.0, 20000.0)


def main(cfg: LodConfig):
    system = worked_system()
    print("path,parameter,slope," + ",".join(f"T(q={q})" for q in cfg.q_values))
    for m0 in cfg.m0_values:
        slope, pts = lod_growth(system, cfg.q_values, m0=m0)
        print(f"balanced,m0={m0:g},{slope:.4f}," + ",".join(f"{t:.2f}" for _, t in pts))
    for M in cfg.fixed_M:
        slope, pts = lod_growth(system, cfg.q_values, M=M)
        print(f"fixed,M={M:g},{slope:.4f}," + ",".join(f"{t:.2f}" for _, t in pts))


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--q", type=int, nargs="+", default=list(LodConfig.q_values))
    ap.add_argument("--m0", type=float, nargs="+", default=list(LodConfig.m0_values))
    ap.add_argument("--M", type=float, nargs="+", default=list(LodConfig.fixed_M))
    a = ap.parse_args()
    main(LodConfig(tuple(a.q), tuple(a.m0), tuple(a.M)))
