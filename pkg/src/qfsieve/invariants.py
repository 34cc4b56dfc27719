"""Exact identity checks over finite ranges.

Each check returns a CheckResult; ``failures`` lists the first few
counterexamples so a red check is diagnosable.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .lattice import rho_star_via_classes
from .localdensity import (
    count_Ad,
    omega_closed,
    omega_from_definition,
    rho,
    rho_star,
    rho_via_transition,
)
from .numutil import is_squarefree, legendre, primes_below
from .regions import Region


@dataclass
class CheckResult:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and self.checked > 0

    def fail(self, item):
        if len(self.failures) < 10:
            self.failures.append(item)

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = f" first failures: {self.failures[:3]}" if self.failures else ""
        return f"[{status}] {self.name} ({self.checked} cases){extra}"


def modulus_vectors(g: int, a_max: int):
    """Every (d_1..d_g) of positive integers with product at most a_max."""
    def rec(k, budget):
        if k == 0:
            yield ()
            return
        for x in range(1, budget + 1):
            for rest in rec(k - 1, budget // x):
                yield (x,) + rest
    yield from rec(g, a_max)


def check_transition(system, a_max: int) -> CheckResult:
    res = CheckResult(f"rho = transition sum, a <= {a_max}")
    for d in modulus_vectors(system.g, a_max):
        res.checked += 1
        if rho(system, d) != rho_via_transition(system, d):
            res.fail(d)
    return res


def check_multiplicativity(system, a_max: int) -> CheckResult:
    res = CheckResult(f"rho, rho* multiplicative on coprime pairs, product <= {a_max}")
    vecs = list(modulus_vectors(system.g, a_max))
    for d in vecs:
        A = math.prod(d)
        if A == 1:
            continue
        for e in vecs:
            B = math.prod(e)
            if B == 1 or A * B > a_max or math.gcd(A, B) != 1 or e < d:
                continue
            de = tuple(x * y for x, y in zip(d, e))
            res.checked += 1
            if rho(system, de) != rho(system, d) * rho(system, e):
                res.fail(("rho", d, e))
            if rho_star(system, de) != rho_star(system, d) * rho_star(system, e):
                res.fail(("rho*", d, e))
    return res


def check_class_count(system, a_max: int) -> CheckResult:
    res = CheckResult(f"rho* = #U'(d) phi(a), a <= {a_max}")
    for d in modulus_vectors(system.g, a_max):
        res.checked += 1
        if rho_star(system, d) != rho_star_via_classes(system, d):
            res.fail(d)
    return res


def check_diagonal(system, p_max: int) -> CheckResult:
    g = system.g
    res = CheckResult(f"rho(p..p) = rho*(p..p) + p^(2(g-1)), p <= {p_max}")
    for p in primes_below(p_max + 1):
        res.checked += 1
        d = (p,) * g
        if rho(system, d) != rho_star(system, d) + p ** (2 * (g - 1)):
            res.fail(p)
    return res


def check_vanishing(system, p_max: int = 50, e_max: int = 2) -> CheckResult:
    res = CheckResult(f"rho*(p^e) = 0 with two positive exponents, p < {p_max}, p not | D, e <= {e_max}")
    for p in primes_below(p_max):
        if not system.sifts(p):
            continue
        for e in itertools.product(range(e_max + 1), repeat=system.g):
            if sum(1 for x in e if x > 0) < 2:
                continue
            res.checked += 1
            if rho_star(system, tuple(p**x for x in e)) != 0:
                res.fail((p, e))
    return res


def check_one_form(system, p_max: int = 200) -> CheckResult:
    res = CheckResult(f"rho(p e_i) = 1 + (p-1)(1 + (delta_i/p)), p < {p_max}, p not | D")
    g = system.g
    for p in primes_below(p_max):
        if not system.sifts(p):
            continue
        for i, q in enumerate(system.forms):
            res.checked += 1
            d = tuple(p if j == i else 1 for j in range(g))
            if rho(system, d) != 1 + (p - 1) * (1 + legendre(q.delta, p)):
                res.fail((p, i))
    return res


def check_omega(system, p_max: int = 100) -> CheckResult:
    res = CheckResult(f"omega closed = definition = lemma, 0 <= omega < p, omega < 2g + 1/p, p < {p_max}")
    g = system.g
    for p in primes_below(p_max):
        if not system.sifts(p):
            continue
        res.checked += 1
        w = omega_closed(system, p)
        pair = omega_from_definition(system, p)
        if not (w == pair.definition == pair.lemma):
            res.fail((p, w, pair))
        if not (0 <= w < p and w < 2 * g + Fraction(1, p)):
            res.fail((p, "bounds", w))
    return res


def check_count_Ad(system, d_max: int = 105, X: int = 100, region: Region | None = None) -> CheckResult:
    region = region or Region.box((-1, -1), (1, 1))
    res = CheckResult(f"|A_d| direct = inclusion-exclusion, squarefree d <= {d_max}, X = {X}")
    for d in range(1, d_max + 1):
        if math.gcd(d, system.modulus) != 1 or not is_squarefree(d):
            continue
        res.checked += 1
        c = count_Ad(system, d, region, X)
        if c.direct != c.inclusion_exclusion:
            res.fail((d, c))
    return res


def run_suite(system, quick: bool = True) -> list[CheckResult]:
    """All identity checks; ``quick`` shrinks the ranges for interactive use."""
    a = 120 if quick else 500
    return [
        check_transition(system, a),
        check_multiplicativity(system, a),
        check_class_count(system, a),
        check_diagonal(system, 31),
        check_vanishing(system, 30 if quick else 50),
        check_one_form(system, 200),
        check_omega(system, 100),
        check_count_Ad(system, 105, 100),
        check_count_Ad(system, 35, 20 * system.modulus),
    ]
