"""Exact integer arithmetic: gcd, CRT, Jacobi symbol, primality, factoring."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

from .errors import NonCoprimeModuli, OverflowError128

MAX_BITS = 128
TRIAL_LIMIT = 10_000


def _small_primes(n: int) -> list[int]:
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, n + 1, p)))
    return [i for i in range(n + 1) if sieve[i]]


_TRIAL_PRIMES = _small_primes(TRIAL_LIMIT)
# deterministic below 3.3e24 > 2**64
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def primes_below(n: int) -> list[int]:
    """All primes p < n."""
    if n <= 2:
        return []
    if n <= TRIAL_LIMIT:
        return [p for p in _TRIAL_PRIMES if p < n]
    return _small_primes(n - 1)


def gcd_many(values) -> int:
    values = list(values)
    if not values:
        raise ValueError("gcd_many needs at least one value")
    return reduce(math.gcd, (abs(v) for v in values), 0)


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def crt(residues) -> tuple[int, int]:
    """Combine [(r, m), ...] with pairwise coprime moduli into (r, M)."""
    r, m = 0, 1
    for ri, mi in residues:
        if mi <= 0:
            raise ValueError("moduli must be positive")
        g, s, _ = ext_gcd(m, mi)
        if g != 1:
            raise NonCoprimeModuli(f"moduli {m} and {mi} share factor {g}")
        # r + m*k ≡ ri (mod mi)  =>  k ≡ (ri - r) * m^-1
        k = ((ri - r) * s) % mi
        r, m = r + m * k, m * mi
        r %= m
    return r, m


def jacobi(a: int, n: int) -> int:
    if n <= 0 or n % 2 == 0:
        raise ValueError(f"Jacobi symbol needs odd positive n, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def legendre(a: int, p: int) -> int:
    """Legendre symbol; (a/2) is taken as 0 for even a and 1 otherwise."""
    if p == 2:
        return 0 if a % 2 == 0 else 1
    return jacobi(a, p)


def _check_width(n: int):
    if n.bit_length() > MAX_BITS:
        raise OverflowError128(f"{n} exceeds {MAX_BITS} bits")


def _strong_probable_prime(n: int, base: int) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(base, d, n)
    if x in (1, n - 1):
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _lucas_strong(n: int) -> bool:
    # Selfridge parameters, strong Lucas test (completes Baillie-PSW)
    D = 5
    while True:
        j = jacobi(D, n)
        if j == -1:
            break
        if j == 0 and abs(D) != n:
            return False
        D = -D - 2 if D > 0 else -D + 2
        if D == 13 and math.isqrt(n) ** 2 == n:
            return False
    P, Q = 1, (1 - D) // 4
    d, s = n + 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    inv2 = pow(2, -1, n)
    U, V, Qk = 1, P, Q % n
    for bit in bin(d)[3:]:
        U, V = U * V % n, (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if bit == "1":
            U, V = (P * U + V) * inv2 % n, (D * U + P * V) * inv2 % n
            Qk = Qk * Q % n
    if U == 0 or V == 0:
        return True
    for _ in range(s - 1):
        V = (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if V == 0:
            return True
    return False


def is_prime(n: int) -> bool:
    """Deterministic below 2**64 (fixed Miller-Rabin bases).

    Above that, Miller-Rabin plus a strong Lucas test (Baillie-PSW),
    which has no known counterexample.
    """
    if n < 2:
        return False
    _check_width(n)
    for p in _TRIAL_PRIMES[:25]:
        if n % p == 0:
            return n == p
    if not all(_strong_probable_prime(n, b) for b in _MR_BASES):
        return False
    if n < 1 << 64:
        return True
    return _lucas_strong(n)


def _pollard_brent(n: int, c: int) -> int:
    y, m, g, r, q = 2, 128, 1, 1, 1
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
        r *= 2
    if g == n:
        while True:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
            if g > 1:
                break
    return g


def _split(n: int) -> int:
    c = 1
    while True:
        g = _pollard_brent(n, c)
        if 1 < g < n:
            return g
        c += 1  # cycle failure: retry with a new polynomial


@dataclass(frozen=True)
class PrimeFactorization:
    factors: tuple[tuple[int, int], ...]

    @property
    def value(self) -> int:
        out = 1
        for p, e in self.factors:
            out *= p**e
        return out

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def __iter__(self):
        return iter(self.factors)

    def __len__(self):
        return len(self.factors)


def factorize(n: int) -> PrimeFactorization:
    if n < 1:
        raise ValueError(f"factorize needs n >= 1, got {n}")
    _check_width(n)
    counts: dict[int, int] = {}
    for p in _TRIAL_PRIMES:
        if p * p > n:
            break
        while n % p == 0:
            counts[p] = counts.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m < TRIAL_LIMIT**2 or is_prime(m):
            # after trial division any cofactor below TRIAL_LIMIT**2 is prime
            counts[m] = counts.get(m, 0) + 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack += [r, r]
            continue
        g = _split(m)
        stack += [g, m // g]
    return PrimeFactorization(tuple(sorted(counts.items())))


def omega_big(n: int) -> int:
    """Number of prime factors of n counted with multiplicity."""
    return sum(e for _, e in factorize(n))


def nu(n: int) -> int:
    """Number of distinct prime factors."""
    return len(factorize(n))


def mobius(n: int) -> int:
    fac = factorize(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def euler_phi(n: int) -> int:
    out = n
    for p, _ in factorize(n):
        out = out // p * (p - 1)
    return out


def num_divisors(n: int) -> int:
    return math.prod(e + 1 for _, e in factorize(n))


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def is_squarefree(n: int) -> bool:
    return n >= 1 and all(e == 1 for _, e in factorize(n))


def radical(n: int) -> int:
    return math.prod(factorize(n).primes)
