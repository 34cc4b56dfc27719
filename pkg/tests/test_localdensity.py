import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qfsieve.errors import CapExceeded, NotCoprimeToD, NotSquarefree
from qfsieve.forms import build_system
from qfsieve.localdensity import (
    condition_R_sum,
    count_Ad,
    density,
    omega_closed,
    omega_from_definition,
    omega_squarefree,
    omega_squarefree_via_sum,
    psi,
    remainder_Rd,
    rho,
    rho_star,
    rho_via_transition,
    sifted_Y,
)
from qfsieve.numutil import legendre, primes_below
from qfsieve.regions import Region, psi_bands

UNIT_BOX = Region.box((-1, -1), (1, 1))


@pytest.fixture(scope="module")
def one_form():
    return build_system([(1, 0, 1)])


def brute(system, d, primitive=False):
    """Plain double loop over [0, a)^2."""
    a = math.prod(d)
    n = 0
    for x in range(a):
        for y in range(a):
            if all(q(x, y) % di == 0 for q, di in zip(system.forms, d)):
                if not primitive or math.gcd(math.gcd(x, y), a) == 1:
                    n += 1
    return n


def test_one_form_examples(one_form):
    assert rho(one_form, (5,)) == 9
    assert rho(one_form, (3,)) == 1
    assert rho_star(one_form, (5,)) == 8
    assert rho(one_form, (1,)) == rho_star(one_form, (1,)) == 1
    assert rho_via_transition(one_form, (4,)) == 4
    assert rho_via_transition(one_form, (5,)) == 9
    assert rho_via_transition(one_form, (1,)) == 1


def test_worked_coprime_split(worked):
    assert rho_star(worked, (5, 7)) == rho_star(worked, (5, 1)) * rho_star(worked, (1, 7))
    assert rho(worked, (1, 1)) == 1


@pytest.mark.parametrize("d", [(4, 6), (9, 2), (12, 5), (25, 1), (8, 8), (3, 27), (7, 49)])
def test_rho_matches_plain_loop(worked, d):
    assert rho(worked, d) == brute(worked, d)
    assert rho_star(worked, d) == brute(worked, d, primitive=True)


def test_density_value(worked):
    v = density(worked, (5, 7))
    assert v.modulus == 35 and v.rho_star <= v.rho and v.rho >= 1


def test_cap_and_composition(worked):
    with pytest.raises(CapExceeded):
        rho(worked, (10007, 1))
    assert rho(worked, (101, 103)) == rho(worked, (101, 1)) * rho(worked, (1, 103))
    with pytest.raises(ValueError):
        rho(worked, (5,))
    with pytest.raises(ValueError):
        rho(worked, (0, 5))


def test_psi_examples():
    assert psi((7, 1, 1)) == 7
    assert psi((9, 27)) == 9
    assert psi((12, 18)) == 6
    assert psi((4, 8)) == 4
    assert psi((1, 1)) == 1


@given(st.tuples(st.integers(1, 12), st.integers(1, 12)))
def test_transition_identity_small(d):
    from qfsieve.forms import worked_system

    s = worked_system()
    assert rho(s, d) == rho_via_transition(s, d)


def test_omega_examples(worked, one_form):
    assert omega_closed(worked, 7) == Fraction(13, 7)
    assert omega_closed(worked, 2) == 0
    assert omega_closed(one_form, 5) == Fraction(9, 5)
    pair = omega_from_definition(worked, 7)
    assert pair.definition == pair.lemma == Fraction(13, 7)
    assert (rho(worked, (7, 1)) + rho(worked, (1, 7)) + 1 - 2) == 13
    assert omega_from_definition(one_form, 3).lemma == Fraction(1, 3)
    assert omega_from_definition(worked, 3).definition == 0


@pytest.mark.parametrize("system_name", ["worked", "g3"])
def test_omega_agreement_and_bounds(system_name, request):
    s = request.getfixturevalue(system_name)
    for p in primes_below(100):
        w = omega_closed(s, p)
        if not s.sifts(p):
            assert w == 0
            continue
        pair = omega_from_definition(s, p)
        assert w == pair.definition == pair.lemma
        assert 0 <= w < p and w < 2 * s.g + Fraction(1, p)


def test_one_form_formula(g3):
    for p in primes_below(200):
        if not g3.sifts(p):
            continue
        for i, q in enumerate(g3.forms):
            d = tuple(p if j == i else 1 for j in range(3))
            assert rho(g3, d) == 1 + (p - 1) * (1 + legendre(q.delta, p))


def test_omega_squarefree(worked):
    assert omega_squarefree(worked, 1) == 1
    assert omega_squarefree(worked, 7) == omega_closed(worked, 7)
    w35 = 35 * Fraction(13, 49) * omega_closed(worked, 5) / 5
    assert omega_squarefree(worked, 35) == w35 == omega_squarefree_via_sum(worked, 35)
    with pytest.raises(NotSquarefree):
        omega_squarefree(worked, 25)
    with pytest.raises(NotCoprimeToD):
        omega_squarefree(worked, 15)


@given(st.sampled_from([d for d in range(1, 400) if math.gcd(d, 216) == 1 and
                        all(d % (p * p) for p in (5, 7, 11, 13, 17, 19))]))
def test_multlem_sum_equals_product(d):
    from qfsieve.forms import worked_system

    s = worked_system()
    assert omega_squarefree(s, d) == omega_squarefree_via_sum(s, d)


def test_count_Ad_examples(worked):
    full = sum(len(x) for x, _ in psi_bands(worked, UNIT_BOX.scaled(50)))
    assert count_Ad(worked, 1, UNIT_BOX, 50).direct == full
    c = count_Ad(worked, 7, UNIT_BOX, 50)
    assert c.direct == c.inclusion_exclusion
    c = count_Ad(worked, 35, UNIT_BOX, 5000)
    assert c.direct == c.inclusion_exclusion == 213
    with pytest.raises(NotSquarefree):
        count_Ad(worked, 49, UNIT_BOX, 10)


@given(st.sampled_from([5, 7, 11, 13, 35, 55, 77, 65, 91, 143]),
       st.integers(-300, 300), st.integers(-300, 300), st.integers(200, 1500))
def test_count_Ad_agrees_on_shifted_disks(d, cx, cy, r):
    from qfsieve.forms import worked_system

    region = Region.disk((cx, cy), r)
    c = count_Ad(worked_system(), d, region)
    assert c.direct == c.inclusion_exclusion


def test_remainder(worked):
    A = count_Ad(worked, 1, UNIT_BOX, 100).direct
    assert remainder_Rd(worked, 1, UNIT_BOX, 100) == A - sifted_Y(worked, UNIT_BOX, 100)
    assert sifted_Y(worked, UNIT_BOX, 100) == Fraction(40000, 216**2)
    with pytest.raises(NotSquarefree):
        remainder_Rd(worked, 4, UNIT_BOX, 100)
    total = condition_R_sum(worked, UNIT_BOX, 100)
    assert total >= 0 and math.isfinite(float(total))
    # a wider level picks up more terms
    assert condition_R_sum(worked, UNIT_BOX, 2000, level=40) >= condition_R_sum(worked, UNIT_BOX, 2000, level=10)


def test_Ad_density_is_close_to_omega_prediction(worked):
    X = 216 * 60
    for d in (5, 7, 35):
        Y = sifted_Y(worked, UNIT_BOX, X)
        R = remainder_Rd(worked, d, UNIT_BOX, X)
        assert abs(float(R)) < 0.05 * float(omega_squarefree(worked, d) / d * Y)
