"""Local densities rho, rho*, psi, the sieve density omega, and |A_d|, R_d.

rho(d) and rho*(d) are counted by brute-force enumeration.  Both count
sets are periodic modulo lcm(d_1, ..., d_g), so enumeration runs over
that period and scales by (a / lcm)^2, where a = d_1 ... d_g.  When the
period exceeds the cap, the count is assembled from prime-power blocks.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import CapExceeded, NotCoprimeToD, NotSquarefree
from .numutil import divisors, factorize, is_squarefree, mobius, nu, radical
from .regions import Region, form_mod, in_lambda, psi_bands

ENUM_CAP = 10_000


def modulus_vector(system, d) -> tuple[int, ...]:
    d = tuple(int(x) for x in d)
    if len(d) != system.g:
        raise ValueError(f"modulus vector {d} has length {len(d)}, expected {system.g}")
    if any(x < 1 for x in d):
        raise ValueError(f"modulus vector entries must be positive: {d}")
    return d


@dataclass(frozen=True)
class DensityValue:
    rho: int
    rho_star: int
    modulus: int


@lru_cache(maxsize=4096)
def _zero_table(q, m: int) -> np.ndarray:
    """Boolean m x m table of residues x mod m with m | q(x)."""
    u = np.arange(m, dtype=np.int64)
    sq = u * u % m
    vals = (q.a % m * sq[:, None] + (2 * q.b) % m * (np.outer(u, u) % m) + q.c % m * sq[None, :]) % m
    return vals == 0


@lru_cache(maxsize=1 << 16)
def _count(system, d, primitive: bool, cap: int) -> int:
    a = math.prod(d)
    L = math.lcm(*d)
    if L > cap:
        primes = factorize(a).primes
        if len(primes) == 1:
            raise CapExceeded(f"enumeration modulus {L} exceeds cap {cap}")
        # compose from prime-power blocks by CRT multiplicativity
        return math.prod(_count(system, tuple(p ** _vp(x, p) for x in d), primitive, cap)
                         for p in primes)
    r = radical(a)
    tables = [(_zero_table(q, di), di) for q, di in zip(system.forms, d) if di > 1]
    cols = np.arange(L, dtype=np.int64)
    total = 0
    rows_per = max(1, 2_000_000 // L)
    for start in range(0, L, rows_per):
        rows = np.arange(start, min(start + rows_per, L), dtype=np.int64)
        mask = np.ones((len(rows), L), dtype=bool)
        for T, di in tables:
            mask &= T[np.ix_(rows % di, cols % di)]
        if primitive and r > 1:
            mask &= np.gcd(np.gcd(rows, r)[:, None], cols[None, :]) == 1
        total += int(np.count_nonzero(mask))
    return total * (a // L) ** 2


def rho(system, d, cap: int = ENUM_CAP) -> int:
    """#{x in [0, a)^2 : d_i | q_i(x) for all i}."""
    return _count(system, modulus_vector(system, d), False, cap)


def rho_star(system, d, cap: int = ENUM_CAP) -> int:
    """As rho, restricted to x with gcd(x_1, x_2, a) = 1."""
    return _count(system, modulus_vector(system, d), True, cap)


def density(system, d, cap: int = ENUM_CAP) -> DensityValue:
    d = modulus_vector(system, d)
    return DensityValue(rho(system, d, cap), rho_star(system, d, cap), math.prod(d))


def _vp(n, p):
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def psi(d) -> int:
    """Multiplicative p^ceil(max_i v_p(d_i) / 2) over primes dividing prod(d)."""
    out = 1
    for p in factorize(math.prod(d)).primes:
        e = max(_vp(x, p) for x in d)
        out *= p ** ((e + 1) // 2)
    return out


def rho_via_transition(system, d, cap: int = ENUM_CAP) -> int:
    """rho(d) rebuilt from rho* of the reduced vectors c = d / (d, b^2)."""
    d = modulus_vector(system, d)
    total = 0
    for b in divisors(psi(d)):
        gs = [math.gcd(x, b * b) for x in d]
        c = tuple(x // g for x, g in zip(d, gs))
        num = math.prod(gs)
        assert num % b == 0
        total += rho_star(system, c, cap) * (num // b) ** 2
    return total


# ---------------------------------------------------------------------------
# omega
# ---------------------------------------------------------------------------

def omega_closed(system, p: int) -> Fraction:
    """Closed form for omega(p); zero for primes dividing D."""
    if not system.sifts(p):
        return Fraction(0)
    s = sum(system.chars(p))
    g = system.g
    return Fraction(g + s) - Fraction(g - 1 + s, p)


@dataclass(frozen=True)
class OmegaPair:
    definition: Fraction
    lemma: Fraction


def omega_from_definition(system, p: int, cap: int = ENUM_CAP) -> OmegaPair:
    """omega(p) from its defining signed sum over c in {1, p}^g, and from
    the single-form reformulation (sum of rho(p e_i) + 1 - g) / p."""
    if not system.sifts(p):
        return OmegaPair(Fraction(0), Fraction(0))
    g = system.g
    defsum = Fraction(0)
    for alpha in itertools.product((0, 1), repeat=g):
        k = sum(alpha)
        if k == 0:
            continue
        c = tuple(p**e for e in alpha)
        # mu(p) * mu(c_1)...mu(c_g) = -(-1)^k
        defsum += -((-1) ** k) * Fraction(rho(system, c, cap), p ** (2 * k))
    units = [tuple(p if j == i else 1 for j in range(g)) for i in range(g)]
    lemma = Fraction(sum(rho(system, c, cap) for c in units) + 1 - g, p)
    return OmegaPair(p * defsum, lemma)


def _check_sieve_modulus(system, d):
    if d < 1 or not is_squarefree(d):
        raise NotSquarefree(f"{d} is not squarefree")
    if math.gcd(d, system.modulus) != 1:
        raise NotCoprimeToD(f"{d} shares a factor with D = {system.D}")


def omega_squarefree(system, d: int) -> Fraction:
    """omega(d) = d * prod_{p | d} omega(p) / p for squarefree d coprime to D."""
    _check_sieve_modulus(system, d)
    out = Fraction(d)
    for p in factorize(d).primes:
        out *= omega_closed(system, p) / p
    return out


def _lcm_tuples(d: int, g: int):
    """All (c_1..c_g) with c_i | d and d | c_1...c_g, for squarefree d."""
    primes = factorize(d).primes
    per_prime = [a for a in itertools.product((0, 1), repeat=g) if any(a)]
    for choice in itertools.product(per_prime, repeat=len(primes)):
        yield tuple(math.prod(p for p, a in zip(primes, choice) if a[i]) for i in range(g))


def omega_squarefree_via_sum(system, d: int, cap: int = ENUM_CAP) -> Fraction:
    """d times the signed sum over c with c_i | d, d | prod c, of
    mu(d) mu(c) rho(c) / (prod c)^2; equals omega_squarefree."""
    _check_sieve_modulus(system, d)
    mu_d = mobius(d)
    total = Fraction(0)
    for c in _lcm_tuples(d, system.g):
        sign = mu_d * math.prod(mobius(x) for x in c)
        total += sign * Fraction(rho(system, c, cap), math.prod(c) ** 2)
    return d * total


# ---------------------------------------------------------------------------
# the sifted sequence A
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AdCount:
    direct: int
    inclusion_exclusion: int


def count_Ad(system, d: int, region: Region, X=1) -> AdCount:
    """|A_d| for the points of Psi in X * region, counted directly and by
    inclusion-exclusion over the lattices Lambda_c."""
    if d < 1 or not is_squarefree(d):
        raise NotSquarefree(f"{d} is not squarefree")
    R = region.scaled(X)
    tuples = list(_lcm_tuples(d, system.g)) if d > 1 else [(1,) * system.g]
    signs = [mobius(d) * math.prod(mobius(x) for x in c) for c in tuples]
    direct = 0
    ie = 0
    for x1, x2 in psi_bands(system, R):
        prod_mod = np.ones(len(x1), dtype=np.int64) % d
        for q in system.forms:
            prod_mod = prod_mod * form_mod(q, x1, x2, d) % d
        direct += int((prod_mod == 0).sum())
        for c, s in zip(tuples, signs):
            ie += s * int(in_lambda(system, c, x1, x2).sum())
    return AdCount(direct, ie)


def sifted_Y(system, region: Region, X):
    """Y = X^2 vol(R0) / D^2, exact when the area is rational."""
    vol = region.volume
    if isinstance(vol, Fraction):
        return Fraction(X) ** 2 * vol / system.D**2
    return float(X) ** 2 * vol / system.D**2


def remainder_Rd(system, d: int, region: Region, X=1):
    """R_d = |A_d| - omega(d) Y / d (exact for polygonal regions)."""
    if d < 1 or not is_squarefree(d):
        raise NotSquarefree(f"{d} is not squarefree")
    w = omega_squarefree(system, d)
    Y = sifted_Y(system, region, X)
    Ad = count_Ad(system, d, region, X).direct
    if isinstance(Y, Fraction):
        return Ad - w / d * Y
    return Ad - float(w / d) * Y


def condition_R_sum(system, region: Region, X, level=None):
    """Sum over squarefree d < level, coprime to D, of 4^nu(d) |R_d|.

    ``level`` defaults to Y^(1/2).
    """
    Y = sifted_Y(system, region, X)
    if level is None:
        level = math.sqrt(float(Y))
    total = Fraction(0) if isinstance(Y, Fraction) else 0.0
    for d in range(1, math.ceil(level)):
        if math.gcd(d, system.modulus) != 1 or not is_squarefree(d):
            continue
        total += 4 ** nu(d) * abs(remainder_Rd(system, d, region, X))
    return total
