"""Desk-scale experiment: count almost-prime values of q_1(x)...q_g(x)."""

from __future__ import annotations

import csv
import io
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import OverflowError128
from .forms import FormSystem, build_system
from .localdensity import sifted_Y
from .numutil import omega_big
from .regions import Region, psi_bands
from .sievebound import density_product


def _int(v) -> int:
    # decimal strings are accepted wherever 64 bits could overflow
    return int(v) if not isinstance(v, str) else int(v.strip())


@dataclass
class ExperimentConfig:
    forms: list[tuple[int, int, int]]
    region: Region = field(default_factory=lambda: Region.box((-1, -1), (1, 1)))
    X: int = 500
    gamma: float = 0.25
    r: int | None = None  # None: r_M for g forms; math.inf counts everything
    strict_mode: bool = True
    z: tuple[int, int] | None = None

    def __post_init__(self):
        self.forms = [tuple(_int(c) for c in f) for f in self.forms]
        if isinstance(self.region, dict):
            self.region = Region.from_dict(self.region)
        self.X = _int(self.X)
        if self.X < 1:
            raise ValueError("X must be a positive integer")
        if not 0 < self.gamma < 1:
            raise ValueError("gamma must lie in (0, 1)")
        if self.r is not None and self.r != math.inf:
            self.r = _int(self.r)
            if self.r < 1:
                raise ValueError("r must be at least 1")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {"forms", "region", "X", "gamma", "r", "strict_mode", "z"}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown config keys: {sorted(extra)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def system(self) -> FormSystem:
        return build_system(self.forms, self.strict_mode, self.z)

    def threshold(self) -> float:
        if self.r is not None:
            return self.r
        from .sievebound import TABLE_R_M, SieveParams, minimize_r

        g = len(self.forms)
        if g not in TABLE_R_M:
            raise ValueError(f"no default r for g={g}; set r explicitly")
        return minimize_r(SieveParams.for_forms(g)).r_M


@dataclass
class ExperimentReport:
    X: int
    r: float
    total_points: int
    skipped: int
    histogram: dict[int, int]
    p_r_count: int
    predicted: float
    ratio: float

    def summary(self) -> dict:
        return {"p_r_count": self.p_r_count, "predicted": self.predicted, "ratio": self.ratio}

    def to_json(self) -> str:
        data = {
            "X": self.X,
            "r": None if self.r == math.inf else self.r,
            "total_points": self.total_points,
            "skipped": self.skipped,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            **self.summary(),
        }
        return json.dumps(data, indent=2, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["X", "total_points", "skipped", "omega_value", "count"])
        for k, v in sorted(self.histogram.items()):
            w.writerow([self.X, self.total_points, self.skipped, k, v])
        return buf.getvalue()


def run_experiment(config: ExperimentConfig, system: FormSystem | None = None) -> ExperimentReport:
    """Tally Omega(|q_1(x)...q_g(x)|) over x in X*R0 ∩ Psi, origin excluded."""
    system = system or config.system()
    r = config.threshold()
    region = config.region.scaled(config.X)
    hist: Counter[int] = Counter()
    skipped = 0
    for x1, x2 in psi_bands(system, region):
        for a, b in zip(x1.tolist(), x2.tolist()):
            if a == 0 and b == 0:
                continue
            try:
                hist[sum(omega_big(abs(v)) for v in system.values((a, b)))] += 1
            except OverflowError128:
                skipped += 1
    total = sum(hist.values())
    p_r = sum(c for k, c in hist.items() if k <= r)
    Y = sifted_Y(system, config.region, config.X)
    predicted = float(Y) * density_product(system, config.X, config.gamma)
    ratio = p_r / predicted if predicted > 0 else math.nan
    return ExperimentReport(config.X, r, total, skipped, dict(sorted(hist.items())), p_r,
                            predicted, ratio)
