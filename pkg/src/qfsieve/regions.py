"""Convex planar regions and enumeration of the residue class Psi inside them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CapExceeded

POINT_CAP = 50_000_000
_BAND = 1 << 20  # candidate points per band


def _num(v):
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, float):
        return Fraction(v).limit_denominator(10**12) if v != int(v) else Fraction(int(v))
    return Fraction(v)


@dataclass(frozen=True)
class Region:
    """A closed convex region: ``kind`` is 'disk', 'box' or 'polygon'.

    disk: params = (cx, cy, r); box: params = (x0, y0, x1, y1);
    polygon: params = flat vertex list (x0, y0, x1, y1, ...).
    Geometry is the base shape scaled by ``scale`` about the origin.
    """

    kind: str
    params: tuple
    scale: Fraction = Fraction(1)

    def __post_init__(self):
        if self.kind not in ("disk", "box", "polygon"):
            raise ValueError(f"unknown region kind {self.kind!r}")
        object.__setattr__(self, "params", tuple(_num(p) for p in self.params))
        object.__setattr__(self, "scale", _num(self.scale))
        if self.scale <= 0:
            raise ValueError("scale must be positive")
        if self.kind == "disk" and (len(self.params) != 3 or self.params[2] <= 0):
            raise ValueError("disk needs (cx, cy, r) with r > 0")
        if self.kind == "box":
            if len(self.params) != 4:
                raise ValueError("box needs (x0, y0, x1, y1)")
            x0, y0, x1, y1 = self.params
            if x1 < x0 or y1 < y0:
                raise ValueError("box corners must be ordered low, high")
        if self.kind == "polygon":
            if len(self.params) < 6 or len(self.params) % 2:
                raise ValueError("polygon needs at least three vertices")
            if not _is_convex(self._vertices(unscaled=True)):
                raise ValueError("polygon must be convex")

    # constructors -------------------------------------------------------
    @classmethod
    def disk(cls, center, radius, scale=1):
        return cls("disk", (center[0], center[1], radius), scale)

    @classmethod
    def box(cls, lo, hi, scale=1):
        return cls("box", (lo[0], lo[1], hi[0], hi[1]), scale)

    @classmethod
    def polygon(cls, vertices, scale=1):
        return cls("polygon", tuple(c for v in vertices for c in v), scale)

    @classmethod
    def from_dict(cls, data: dict, scale=1):
        kind = data["kind"]
        if kind == "disk":
            return cls.disk(data.get("center", (0, 0)), data["radius"], scale)
        if kind == "box":
            return cls.box(data["lo"], data["hi"], scale)
        if kind == "polygon":
            return cls.polygon(data["vertices"], scale)
        raise ValueError(f"unknown region kind {kind!r}")

    def to_dict(self) -> dict:
        p = [str(x) for x in self.params]
        if self.kind == "disk":
            return {"kind": "disk", "center": p[:2], "radius": p[2]}
        if self.kind == "box":
            return {"kind": "box", "lo": p[:2], "hi": p[2:]}
        return {"kind": "polygon", "vertices": [p[i : i + 2] for i in range(0, len(p), 2)]}

    def scaled(self, X) -> "Region":
        return Region(self.kind, self.params, self.scale * _num(X))

    def translated(self, dx, dy) -> "Region":
        """Translate the scaled region by (dx, dy)."""
        s = self.scale
        dx, dy = _num(dx) / s, _num(dy) / s
        p = list(self.params)
        if self.kind == "disk":
            p[0] += dx
            p[1] += dy
        else:
            for i in range(0, len(p), 2):
                p[i] += dx
                p[i + 1] += dy
        return Region(self.kind, tuple(p), s)

    # geometry -----------------------------------------------------------
    def _vertices(self, unscaled=False):
        s = Fraction(1) if unscaled else self.scale
        p = self.params
        verts = [(p[i] * s, p[i + 1] * s) for i in range(0, len(p), 2)]
        if _signed_area(verts) < 0:
            verts.reverse()
        return verts

    @property
    def volume(self):
        """Area; an exact Fraction except for disks."""
        s = self.scale
        if self.kind == "disk":
            return math.pi * float(self.params[2] * s) ** 2
        if self.kind == "box":
            x0, y0, x1, y1 = self.params
            return (x1 - x0) * (y1 - y0) * s * s
        return _signed_area(self._vertices())

    @property
    def perimeter(self) -> float:
        s = self.scale
        if self.kind == "disk":
            return 2 * math.pi * float(self.params[2] * s)
        if self.kind == "box":
            x0, y0, x1, y1 = self.params
            return float(2 * ((x1 - x0) + (y1 - y0)) * s)
        v = self._vertices()
        return sum(math.dist(v[i], v[(i + 1) % len(v)]) for i in range(len(v)))

    def bbox(self):
        """Integer bounding box (x0, y0, x1, y1), inclusive."""
        s = self.scale
        if self.kind == "disk":
            cx, cy, r = (t * s for t in self.params)
            return math.ceil(cx - r), math.ceil(cy - r), math.floor(cx + r), math.floor(cy + r)
        v = self._vertices()
        xs = [a for a, _ in v]
        ys = [b for _, b in v]
        return math.ceil(min(xs)), math.ceil(min(ys)), math.floor(max(xs)), math.floor(max(ys))

    def contains(self, x1, x2):
        """Vectorised closed membership test for integer arrays."""
        x1 = np.asarray(x1)
        x2 = np.asarray(x2)
        s = self.scale
        if self.kind == "disk":
            cx, cy, r = (t * s for t in self.params)
            # exact when the parameters are integers
            if all(t.denominator == 1 for t in (cx, cy, r)) and abs(r) < 2**25:
                dx = x1.astype(np.int64) - int(cx)
                dy = x2.astype(np.int64) - int(cy)
                return dx * dx + dy * dy <= int(r) ** 2
            dx = x1 - float(cx)
            dy = x2 - float(cy)
            return dx * dx + dy * dy <= float(r) ** 2 * (1 + 1e-15)
        if self.kind == "box":
            x0, y0, xa, ya = self.bbox()
            return (x1 >= x0) & (x1 <= xa) & (x2 >= y0) & (x2 <= ya)
        v = self._vertices()
        inside = np.ones(np.broadcast(x1, x2).shape, dtype=bool)
        for (ax, ay), (bx, by) in zip(v, v[1:] + v[:1]):
            ex, ey = float(bx - ax), float(by - ay)
            cross = ex * (x2 - float(ay)) - ey * (x1 - float(ax))
            inside &= cross >= -1e-9 * (abs(ex) + abs(ey))
        return inside


def _signed_area(verts):
    n = len(verts)
    return sum(verts[i][0] * verts[(i + 1) % n][1] - verts[(i + 1) % n][0] * verts[i][1]
               for i in range(n)) / 2


def _is_convex(verts):
    n = len(verts)
    signs = set()
    for i in range(n):
        (ax, ay), (bx, by), (cx, cy) = verts[i], verts[(i + 1) % n], verts[(i + 2) % n]
        cr = (bx - ax) * (cy - by) - (by - ay) * (cx - bx)
        if cr:
            signs.add(cr > 0)
    return len(signs) <= 1 and _signed_area(verts) != 0


def psi_bands(system, region: Region, cap: int = POINT_CAP):
    """Yield (x1, x2) int64 arrays of the points of Psi inside ``region``.

    Points are produced band by band (ranges of x1); any merge of per-band
    tallies by addition is order independent.
    """
    m = system.modulus
    z1, z2 = system.z
    x0, y0, xa, ya = region.bbox()
    k_lo, k_hi = -((z1 - x0) // m), (xa - z1) // m
    l_lo, l_hi = -((z2 - y0) // m), (ya - z2) // m
    nk, nl = k_hi - k_lo + 1, l_hi - l_lo + 1
    if nk <= 0 or nl <= 0:
        return
    if nk * nl > cap:
        raise CapExceeded(f"{nk * nl} candidate points exceed cap {cap}")
    if max(abs(x0), abs(xa), abs(y0), abs(ya)) + m >= 2**62:
        raise CapExceeded("coordinates exceed 64-bit enumeration range")
    col = z2 + m * np.arange(l_lo, l_hi + 1, dtype=np.int64)
    rows_per_band = max(1, _BAND // nl)
    for start in range(k_lo, k_hi + 1, rows_per_band):
        stop = min(start + rows_per_band, k_hi + 1)
        row = z1 + m * np.arange(start, stop, dtype=np.int64)
        x1 = np.repeat(row, nl)
        x2 = np.tile(col, stop - start)
        keep = region.contains(x1, x2)
        if keep.any():
            yield x1[keep], x2[keep]


def form_mod(q, x1, x2, d: int):
    """q(x) mod d for int64 arrays, without overflow for d < 2e6."""
    if d == 1:
        return np.zeros(np.shape(x1), dtype=np.int64)
    if d < 2_000_000:
        u = np.mod(x1, d)
        v = np.mod(x2, d)
        return (q.a % d * (u * u % d) + (2 * q.b) % d * (u * v % d) + q.c % d * (v * v % d)) % d
    vals = [q(int(a), int(b)) % d for a, b in zip(x1, x2)]
    return np.array(vals, dtype=object)


def in_lambda(system, d, x1, x2):
    """Mask of points with d_i | q_i(x) for every i."""
    mask = np.ones(np.shape(x1), dtype=bool)
    for q, di in zip(system.forms, d):
        if di != 1:
            mask &= form_mod(q, x1, x2, int(di)) == 0
    return mask
