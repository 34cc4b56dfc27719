import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qfsieve.errors import CapExceeded
from qfsieve.forms import build_system
from qfsieve.lattice import (
    HERMITE,
    PrimitiveClass,
    class_members,
    classes,
    classes_in_lambda_star,
    count_lattice_region,
    default_region_family,
    gauss_reduce,
    hnf_basis,
    lod_csv,
    lod_diagnostic,
    lod_growth,
    lod_total,
    minimal_vector,
    reduced_lattice,
    rho_star_via_classes,
)
from qfsieve.localdensity import rho, rho_star
from qfsieve.numutil import euler_phi
from qfsieve.regions import Region


def primitive_pairs(a):
    return {(x, y) for x in range(a) for y in range(a) if math.gcd(math.gcd(x, y), a) == 1}


def test_class_counts():
    assert len(classes(5)) == 6
    assert len(classes(1)) == 1
    assert len(classes(4)) == 6
    with pytest.raises(CapExceeded):
        classes(10_001)


@pytest.mark.parametrize("a", list(range(1, 301, 7)) + [256, 289, 300])
def test_classes_partition_primitive_pairs(a):
    cls = classes(a)
    seen = set()
    for c in cls:
        members = class_members(c)
        assert len(members) == euler_phi(a)
        assert min(members) == c.representative
        assert not (members & seen)
        seen |= members
    assert seen == primitive_pairs(a) or a == 1


def test_lambda_star_classes():
    one = build_system([(1, 0, 1)])
    assert len(classes_in_lambda_star(one, (5,))) == 2
    assert len(classes_in_lambda_star(one, (1,))) == 1
    assert len(classes_in_lambda_star(one, (3,))) == 0
    assert rho_star_via_classes(one, (5,)) == 8
    assert rho_star_via_classes(one, (1,)) == 1


def test_classes_match_rho_star(worked):
    assert rho_star_via_classes(worked, (7, 1)) == rho_star(worked, (7, 1))
    for d in [(5, 7), (25, 1), (13, 13), (4, 9), (11, 17)]:
        assert rho_star_via_classes(worked, d) == rho_star(worked, d)


def test_minimal_vector_examples():
    v = minimal_vector(PrimitiveClass((1, 2), 5))
    assert v[0] ** 2 + v[1] ** 2 == 5 and v == (1, 2)
    assert minimal_vector(PrimitiveClass((0, 0), 1)) == (0, 1)
    assert minimal_vector(PrimitiveClass((1, 0), 7)) == (1, 0)


def in_lattice(v, y, a):
    # v in Z y + a Z^2  iff  v = t y mod a for some t
    return any((v[0] - t * y[0]) % a == 0 and (v[1] - t * y[1]) % a == 0 for t in range(a))


def shortest_by_search(y, a):
    r = math.isqrt(int(HERMITE * a)) + 1
    best = None
    for x1 in range(-r, r + 1):
        for x2 in range(-r, r + 1):
            if (x1, x2) != (0, 0) and in_lattice((x1, x2), y, a):
                n = x1 * x1 + x2 * x2
                best = n if best is None else min(best, n)
    return best


@given(st.integers(2, 500).flatmap(
    lambda a: st.tuples(st.just(a), st.integers(0, a - 1), st.integers(0, a - 1))))
def test_minimal_vector_is_shortest_and_hermite(args):
    a, y1, y2 = args
    if math.gcd(math.gcd(y1, y2), a) != 1:
        y1 = 1
    lat = reduced_lattice(PrimitiveClass((y1, y2), a))
    v = lat.minimal_vector
    n = v[0] ** 2 + v[1] ** 2
    assert lat.determinant == a
    assert n <= HERMITE * a + 1e-9
    assert in_lattice(v, (y1, y2), a)
    assert n == shortest_by_search((y1, y2), a)


@given(st.integers(1, 10**6), st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))
def test_gauss_reduction_conditions(a, y1, y2):
    b1, b2 = gauss_reduce(*hnf_basis((y1, y2), a))
    n1 = b1[0] ** 2 + b1[1] ** 2
    n2 = b2[0] ** 2 + b2[1] ** 2
    assert n1 <= n2
    assert abs(2 * (b1[0] * b2[0] + b1[1] * b2[1])) <= n1
    g = math.gcd(math.gcd(y1, y2), a)
    assert abs(b1[0] * b2[1] - b1[1] * b2[0]) == a * a // math.gcd(a, g) // (a // g) or g != 1


def test_count_lattice_region_examples(worked):
    m = worked.modulus
    block = Region.box((0, 0), (m - 1, m - 1))
    assert count_lattice_region(worked, (1, 1), block) == 1
    R = Region.box((-70, -70), (70, 70))
    n = count_lattice_region(worked, (7, 1), R)
    # recount by walking the D-translates of z by hand
    expected = sum(1 for x in range(-70, 71) for y in range(-70, 71)
                   if (x - 1) % m == 0 and y % m == 0 and (x * x + y * y) % 7 == 0)
    assert n == expected
    tiny = Region.box((2, 2), (3, 3))
    assert count_lattice_region(worked, (1, 1), tiny) == 0


@given(st.integers(-5, 5), st.integers(-5, 5), st.sampled_from([(1, 1), (5, 1), (1, 7), (5, 7)]))
def test_translation_by_D_block(worked, m, n, d):
    D = worked.modulus
    R = Region.box((3, -40), (3 + 2 * D - 1, -40 + 3 * D - 1))
    a = math.prod(d)
    # Psi has period D and Lambda_d period a, so shifts by D*a preserve counts
    shifted = R.translated(D * a * m, D * a * n)
    assert count_lattice_region(worked, d, R) == count_lattice_region(worked, d, shifted)
    # one full period block holds exactly rho(d) points
    big = Region.box((0, 0), (D * a - 1, D * a - 1))
    assert count_lattice_region(worked, d, big) == rho(worked, d)


def test_region_family():
    fam = default_region_family(400.0)
    assert len(fam) == 8
    assert all(r.perimeter <= 400.0 + 1e-9 for r in fam)


def test_lod_diagnostic_rows(worked):
    rows = lod_diagnostic(worked, (20, 20), M=2000.0)
    admissible = [n for n in range(1, 21) if math.gcd(n, 216) == 1]
    assert [r.d for r in rows] == [(x, y) for x in admissible for y in admissible]
    text = lod_csv(rows, 2)
    assert text.splitlines()[0] == "d1,d2,a,max_error,main_term,min_vec_len"
    assert len(text.splitlines()) == len(rows) + 1
    assert lod_total(rows, (1, 1)) == rows[0].max_error
    assert lod_total(rows, (20, 20)) >= lod_total(rows, (10, 10))
    assert all(r.max_error >= 0 for r in rows)


def test_lod_single_modulus_is_boundary_term(worked):
    fam = [Region.disk((5, 7), 900), Region.box((-400, -300), (500, 600))]
    rows = lod_diagnostic(worked, (1, 1), region_family=fam)
    from qfsieve.regions import psi_bands
    errs = [abs(sum(len(x) for x, _ in psi_bands(worked, R)) - float(R.volume) / 216**2) for R in fam]
    assert rows[0].max_error == pytest.approx(max(errs))


def test_lod_growth_fixed_family(worked):
    slope, pts = lod_growth(worked, [5, 10, 20], M=4000.0)
    assert len(pts) == 3 and pts[0][0] == 25
    assert 0.0 < slope < 1.5
