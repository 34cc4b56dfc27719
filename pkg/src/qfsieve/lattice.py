"""Unit-scaling classes of primitive residue pairs and their lattices.

For a modulus a, primitive pairs y mod a (gcd(y_1, y_2, a) = 1) split into
classes {u*y : u a unit mod a}.  Each class spans the lattice
G = Z*y + a*Z^2 of determinant a, whose shortest vector controls how the
class is distributed in a region.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CapExceeded
from .localdensity import modulus_vector, rho
from .numutil import euler_phi, ext_gcd
from .regions import Region, form_mod, in_lambda, psi_bands

CLASS_CAP = 10_000
HERMITE = 2 / math.sqrt(3)


@dataclass(frozen=True, order=True)
class PrimitiveClass:
    representative: tuple[int, int]
    modulus: int


@dataclass(frozen=True)
class ReducedLattice:
    basis: tuple[tuple[int, int], tuple[int, int]]
    determinant: int
    minimal_vector: tuple[int, int]

    @property
    def min_length(self) -> float:
        return math.hypot(*self.minimal_vector)


@lru_cache(maxsize=1024)
def _class_reps(a: int) -> np.ndarray:
    """Lexicographically least member of every class mod a, as an (n, 2) array."""
    if a > CLASS_CAP:
        raise CapExceeded(f"modulus {a} exceeds class cap {CLASS_CAP}")
    r = np.arange(a, dtype=np.int64)
    y1 = np.repeat(r, a)
    y2 = np.tile(r, a)
    assigned = np.gcd(np.gcd(y1, y2), a) != 1  # non-primitive never starts a class
    units = np.array([u for u in range(a) if math.gcd(u, a) == 1], dtype=np.int64)
    reps = []
    ptr, n = 0, a * a
    window = 4096
    while ptr < n:
        free = np.flatnonzero(~assigned[ptr : ptr + window])
        if free.size == 0:
            ptr += window
            continue
        idx = ptr + int(free[0])
        # scanning in index order, the first free pair is its class minimum
        p, q = divmod(idx, a)
        reps.append((p, q))
        assigned[(units * p % a) * a + units * q % a] = True
        ptr = idx + 1
    return np.array(reps, dtype=np.int64).reshape(-1, 2)


def classes(a: int) -> list[PrimitiveClass]:
    """Partition of the primitive pairs mod a into unit-scaling classes."""
    if a < 1:
        raise ValueError("modulus must be positive")
    return [PrimitiveClass((int(p), int(q)), a) for p, q in _class_reps(a)]


def class_members(cls: PrimitiveClass) -> set[tuple[int, int]]:
    a = cls.modulus
    y1, y2 = cls.representative
    return {(u * y1 % a, u * y2 % a) for u in range(a) if math.gcd(u, a) == 1}


def _lambda_reps(system, d):
    d = modulus_vector(system, d)
    a = math.prod(d)
    reps = _class_reps(a)
    mask = in_lambda(system, d, reps[:, 0], reps[:, 1])
    return reps[mask]


def classes_in_lambda_star(system, d) -> list[PrimitiveClass]:
    """Classes mod a = prod(d) contained in Lambda*_d.

    Membership of the representative decides the whole class, since unit
    scaling multiplies each q_i(y) by a unit.
    """
    a = math.prod(modulus_vector(system, d))
    return [PrimitiveClass((int(p), int(q)), a) for p, q in _lambda_reps(system, d)]


def rho_star_via_classes(system, d) -> int:
    d = modulus_vector(system, d)
    return len(_lambda_reps(system, d)) * euler_phi(math.prod(d))


# ---------------------------------------------------------------------------
# lattice reduction
# ---------------------------------------------------------------------------

def _norm(v):
    return v[0] * v[0] + v[1] * v[1]


def _dot(u, v):
    return u[0] * v[0] + u[1] * v[1]


def hnf_basis(y, a: int):
    """Triangular basis ((g, t), (0, h)) of Z*y + a*Z^2."""
    y1, y2 = y[0] % a, y[1] % a
    g, s, _ = ext_gcd(y1, a)
    h = math.gcd(a // g * y2, a)
    return (g, s * y2 % h), (0, h)


def gauss_reduce(b1, b2):
    """Lagrange-Gauss reduction: returns (b1, b2) with |b1| <= |b2| and
    |2 b1.b2| <= |b1|^2."""
    if _norm(b1) > _norm(b2):
        b1, b2 = b2, b1
    while True:
        n1 = _norm(b1)
        m = (2 * _dot(b1, b2) + n1) // (2 * n1)  # nearest integer to b1.b2 / n1
        if m == 0:
            break
        b2 = (b2[0] - m * b1[0], b2[1] - m * b1[1])
        if _norm(b2) >= n1:
            break
        b1, b2 = b2, b1
    return b1, b2


def _tie_key(v):
    # on equal magnitudes the nonnegative sign wins
    return (abs(v[0]), abs(v[1]), -v[0], -v[1])


def reduced_lattice(cls: PrimitiveClass) -> ReducedLattice:
    a = cls.modulus
    b1, b2 = gauss_reduce(*hnf_basis(cls.representative, a))
    cands = []
    for u in (b1, b2, (b1[0] + b2[0], b1[1] + b2[1]), (b1[0] - b2[0], b1[1] - b2[1])):
        cands += [u, (-u[0], -u[1])]
    best = min(_norm(v) for v in cands)
    v = min((v for v in cands if _norm(v) == best), key=_tie_key)
    det = abs(b1[0] * b2[1] - b1[1] * b2[0])
    return ReducedLattice((b1, b2), det, v)


def minimal_vector(cls: PrimitiveClass) -> tuple[int, int]:
    """Shortest nonzero vector of Z*y + a*Z^2.

    Ties go to the smallest (|v1|, |v2|), then to nonnegative coordinates,
    so a = 7, y = (1, 0) gives (1, 0) rather than (-1, 0).
    """
    return reduced_lattice(cls).minimal_vector


# ---------------------------------------------------------------------------
# counting in regions
# ---------------------------------------------------------------------------

def count_lattice_region(system, d, region: Region) -> int:
    """#(Lambda_d ∩ region ∩ Psi)."""
    d = modulus_vector(system, d)
    return sum(int(in_lambda(system, d, x1, x2).sum()) for x1, x2 in psi_bands(system, region))


def default_region_family(M: float, center=None) -> list[Region]:
    """Eight regions of boundary length at most M: disks of perimeter
    M, M/2, M/4, squares of perimeter M, M/2, M/4 and 3:1 rectangles of
    perimeter M, M/2."""
    if center is None:
        center = (round(M / 7), round(M / 11))
    cx, cy = center
    fam = [Region.disk((cx, cy), M / (2 * math.pi) * f) for f in (1, 0.5, 0.25)]
    for f in (1, 0.5, 0.25):
        s = M * f / 8
        fam.append(Region.box((cx - s, cy - s), (cx + s, cy + s)))
    for f in (1, 0.5):
        w, h = 3 * M * f / 16, M * f / 16
        fam.append(Region.box((cx - w, cy - h), (cx + w, cy + h)))
    return fam


@dataclass
class LodRow:
    d: tuple[int, ...]
    a: int
    max_error: float
    main_term: float
    min_vec_len: float


def _admissible_moduli(system, Q):
    return [n for n in range(1, int(Q) + 1) if math.gcd(n, system.modulus) == 1]


def lod_diagnostic(system, Q, region_family=None, M: float | None = None) -> list[LodRow]:
    """Per-d maximum over the region family of
    |#(Lambda_d ∩ R ∩ Psi) - vol(R) rho(d) / (a D)^2|.

    ``Q`` gives the bounds Q_1..Q_g; the supremum over all regions of
    boundary at most M is replaced by the maximum over ``region_family``.
    """
    Q = tuple(Q)
    if len(Q) != system.g:
        raise ValueError("Q must have one bound per form")
    if region_family is None:
        region_family = default_region_family(M if M is not None else 20_000.0)
    ranges = [_admissible_moduli(system, q) for q in Q]
    # per region: divisibility masks for every (form, modulus) pair
    per_region = []
    for R in region_family:
        pts = list(psi_bands(system, R))
        x1 = np.concatenate([p[0] for p in pts]) if pts else np.zeros(0, np.int64)
        x2 = np.concatenate([p[1] for p in pts]) if pts else np.zeros(0, np.int64)
        masks = [{n: form_mod(q, x1, x2, n) == 0 for n in rng}
                 for q, rng in zip(system.forms, ranges)]
        vol = float(R.volume)
        per_region.append((masks, vol, len(x1)))
    D2 = system.D**2
    rows = []
    for d in itertools.product(*ranges):
        a = math.prod(d)
        r = rho(system, d)
        best_err, best_main = -1.0, 0.0
        for masks, vol, n in per_region:
            m = np.ones(n, dtype=bool)
            for i, di in enumerate(d):
                m &= masks[i][di]
            main = vol * r / (a * a * D2)
            err = abs(int(m.sum()) - main)
            if err > best_err:
                best_err, best_main = err, main
        lam = _lambda_reps(system, d) if a <= CLASS_CAP else np.zeros((0, 2), np.int64)
        vlen = min((reduced_lattice(PrimitiveClass((int(p), int(q)), a)).min_length
                    for p, q in lam), default=float("nan"))
        rows.append(LodRow(d, a, best_err, best_main, vlen))
    return rows


def lod_total(rows, Q) -> float:
    """T-hat(M, Q): sum of max errors over d with d_i <= Q_i."""
    return sum(r.max_error for r in rows if all(di <= qi for di, qi in zip(r.d, Q)))


def lod_growth(system, q_values, region_family=None, M: float | None = None,
               m0: float | None = None):
    """Fit log T-hat against log Q along Q = (q, ..., q), Q = q^g.

    With ``M`` (or an explicit family) the regions are held fixed, and the
    M*sqrt(Q) term of the bound dominates once M exceeds sqrt(Q).  Without
    either, M = m0 * sqrt(Q) (default m0 = 2|D|), the path on which both
    terms of the bound are of order Q.

    Returns (slope, [(Q, T-hat), ...]).
    """
    g = system.g
    if region_family is not None or M is not None:
        rows = lod_diagnostic(system, (max(q_values),) * g, region_family, M)
        pts = [(q**g, lod_total(rows, (q,) * g)) for q in q_values]
    else:
        m0 = 2.0 * system.modulus if m0 is None else m0
        pts = []
        for q in q_values:
            rows = lod_diagnostic(system, (q,) * g, M=m0 * math.sqrt(q**g))
            pts.append((q**g, lod_total(rows, (q,) * g)))
    lx = np.log([p[0] for p in pts])
    ly = np.log([p[1] for p in pts])
    slope = float(np.polyfit(lx, ly, 1)[0])
    return slope, pts


def lod_csv(rows, g: int) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"d{i + 1}" for i in range(g)] + ["a", "max_error", "main_term", "min_vec_len"])
    for r in rows:
        w.writerow(list(r.d) + [r.a, f"{r.max_error:.6f}", f"{r.main_term:.6f}", f"{r.min_vec_len:.6f}"])
    return buf.getvalue()
