"""Binary quadratic forms a x^2 + 2b xy + c y^2 and systems of them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import (
    DZero,
    NoAdmissibleResidue,
    NonstandardLeadingCoefficient,
    OverflowError128,
    ReducibleForm,
)
from .numutil import crt, factorize, legendre, primes_below

_LIMIT = 1 << 127


@dataclass(frozen=True)
class QuadraticForm:
    """The form a*x^2 + 2*b*x*y + c*y^2 (note the doubled middle coefficient)."""

    a: int
    b: int
    c: int

    @property
    def delta(self) -> int:
        return discriminant(self)

    def __call__(self, x, y):
        return self.a * x * x + 2 * self.b * x * y + self.c * y * y

    def __str__(self):
        return f"{self.a}x^2 + {2 * self.b}xy + {self.c}y^2"


def discriminant(q: QuadraticForm) -> int:
    return q.b * q.b - q.a * q.c


def is_irreducible(q: QuadraticForm) -> bool:
    d = discriminant(q)
    return d < 0 or math.isqrt(d) ** 2 != d


def resultant(q1: QuadraticForm, q2: QuadraticForm) -> int:
    """Resultant of q1(Y, 1) and q2(Y, 1)."""
    return (q1.a * q2.c - q2.a * q1.c) ** 2 - 4 * (q1.a * q2.b - q2.a * q1.b) * (q1.b * q2.c - q2.b * q1.c)


def eval_form(q: QuadraticForm, x) -> int:
    v = q(int(x[0]), int(x[1]))
    if abs(v) >= _LIMIT:
        raise OverflowError128(f"{q} at {tuple(x)} exceeds 128 bits")
    return v


def system_D(forms) -> int:
    g = len(forms)
    D = math.prod(primes_below(2 * g + 1))
    for q in forms:
        D *= q.a * q.c * discriminant(q)
    for i in range(g):
        for j in range(i + 1, g):
            D *= resultant(forms[i], forms[j])
    return D


@dataclass(frozen=True)
class FormSystem:
    forms: tuple[QuadraticForm, ...]
    D: int
    z: tuple[int, int]
    strict_mode: bool = True
    D_primes: tuple[int, ...] = field(default=(), compare=False)

    @property
    def g(self) -> int:
        return len(self.forms)

    @property
    def modulus(self) -> int:
        """|D|, the modulus of the residue class Psi."""
        return abs(self.D)

    def sifts(self, p: int) -> bool:
        """True when p is a sifting prime (p does not divide D)."""
        return self.D % p != 0

    def in_psi(self, x) -> bool:
        m = self.modulus
        return (x[0] - self.z[0]) % m == 0 and (x[1] - self.z[1]) % m == 0

    def chars(self, p: int) -> list[int]:
        return [legendre(q.delta, p) for q in self.forms]

    def values(self, x) -> list[int]:
        return [eval_form(q, x) for q in self.forms]


def _admissible_mod_p(forms, p):
    # x2 outer so that (1, 0) is met before (0, 1)
    for x2 in range(p):
        for x1 in range(p):
            if all(q(x1, x2) % p for q in forms):
                return x1, x2
    return None


def check_residue(forms, D, z) -> bool:
    m = abs(D)
    return all(math.gcd(q(*z), m) == 1 for q in forms)


def build_system(forms, strict_mode: bool = True, z=None) -> FormSystem:
    """Validate ``forms``, compute D and an admissible residue point z.

    ``forms`` may hold QuadraticForm instances or (a, b, c) triples.  If
    ``z`` is given it is validated instead of searched for.
    """
    forms = tuple(f if isinstance(f, QuadraticForm) else QuadraticForm(*map(int, f)) for f in forms)
    if not forms:
        raise ValueError("need at least one form")
    for q in forms:
        if q.a == 0:
            raise ReducibleForm(f"{q} has a = 0")
        if not is_irreducible(q):
            raise ReducibleForm(f"{q} has square discriminant {discriminant(q)}")
        if strict_mode and q.a % 4 != 1:
            raise NonstandardLeadingCoefficient(f"{q}: a = {q.a} is not 1 mod 4")
    D = system_D(forms)
    if D == 0:
        raise DZero("D vanishes (a zero coefficient product or resultant)")
    primes = tuple(factorize(abs(D)).primes)
    m = abs(D)
    if z is not None:
        z = (int(z[0]) % m, int(z[1]) % m)
        if not check_residue(forms, D, z):
            raise NoAdmissibleResidue(f"z = {z} has some q_i(z) sharing a factor with D")
    else:
        parts = []
        for p in primes:
            pt = _admissible_mod_p(forms, p)
            if pt is None:
                raise NoAdmissibleResidue(f"every point mod {p} is a zero of some form")
            parts.append((pt, p))
        z1, _ = crt([(pt[0], p) for pt, p in parts])
        z2, _ = crt([(pt[1], p) for pt, p in parts])
        z = (z1 % m, z2 % m)
    return FormSystem(forms, D, z, strict_mode, primes)


WORKED_FORMS = ((1, 0, 1), (1, 0, -2))
G3_FORMS = ((1, 0, 1), (1, 0, -2), (1, 0, 3))


def worked_system() -> FormSystem:
    """x^2 + y^2 and x^2 - 2y^2, with D = 216."""
    return build_system(WORKED_FORMS)


def g3_system() -> FormSystem:
    """x^2 + y^2, x^2 - 2y^2 and x^2 + 3y^2."""
    return build_system(G3_FORMS)
