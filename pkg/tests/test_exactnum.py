import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from isoquot import exactnum
from isoquot.exactnum import (ConductorTooLarge, Cyclotomic, InvalidConductor,
                              cyclotomic_poly, root_of_unity, sqrt2, sqrt5, totient)

one = Cyclotomic.rational(1)


def test_root_of_unity_basics():
    assert root_of_unity(0, 5) == one
    assert root_of_unity(1, 4) ** 2 == -one
    x = root_of_unity(1, 5) + root_of_unity(4, 5)
    assert x * x + x - one == Cyclotomic.rational(0)


def test_field_ops_examples():
    s = root_of_unity(1, 8) + root_of_unity(7, 8)
    assert s * s == Cyclotomic.rational(2)
    assert root_of_unity(1, 3).inv() == root_of_unity(2, 3)
    assert root_of_unity(1, 2) == -one


def test_approx():
    assert one.approx() == 1
    assert abs(root_of_unity(1, 4).approx() - 1j) < 1e-12
    s = root_of_unity(1, 8) + root_of_unity(7, 8)
    assert abs(s.approx() - math.sqrt(2)) < 1e-9


def test_sqrt_helpers():
    assert sqrt2() * sqrt2() == Cyclotomic.rational(2)
    assert sqrt5() * sqrt5() == Cyclotomic.rational(5)


def test_bad_conductor():
    with pytest.raises(InvalidConductor):
        root_of_unity(1, 0)
    with pytest.raises(ConductorTooLarge):
        cyclotomic_poly(10 ** 6)


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        Cyclotomic.rational(0).inv()


def test_text_round_trip():
    x = root_of_unity(3, 12) * Fraction(2, 3) + one
    assert Cyclotomic.from_text(x.to_text()) == x


def test_totient_matches_degree():
    for M in range(1, 60):
        phi = sum(1 for k in range(1, M + 1) if math.gcd(k, M) == 1)
        assert totient(M) == phi


def test_disk_cache(tmp_path, monkeypatch):
    monkeypatch.setenv(exactnum.CACHE_ENV, str(tmp_path))
    M = 1009 * 2
    exactnum._phi_cache.pop(M, None)
    first = cyclotomic_poly(M)
    assert (tmp_path / f"phi_{M}.json").exists()
    exactnum._phi_cache.pop(M, None)
    assert cyclotomic_poly(M) == first


conductors = st.sampled_from([1, 2, 3, 4, 5, 8, 12, 15, 24])


@st.composite
def elements(draw):
    M = draw(conductors)
    terms = draw(st.lists(st.tuples(st.integers(-3, 3), st.integers(0, 40)), max_size=4))
    x = Cyclotomic.rational(0, M)
    for c, j in terms:
        x = x + root_of_unity(j % M, M) * c
    return x


@settings(max_examples=60, deadline=None)
@given(elements(), elements(), elements())
def test_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a - a == Cyclotomic.rational(0)


@settings(max_examples=60, deadline=None)
@given(elements())
def test_inverse_and_conj(a):
    if a:
        assert a * a.inv() == one
    assert abs(a.conj().approx() - a.approx().conjugate()) < 1e-8
    assert abs((a * a.conj()).approx().imag) < 1e-8


@settings(max_examples=40, deadline=None)
@given(elements(), elements(), st.sampled_from([1, 5, 7, 11]))
def test_galois_is_ring_map(a, b, t):
    M = math.lcm(a.M, b.M, 1)
    if math.gcd(t, M) != 1:
        return
    assert (a * b).galois(t) == a.galois(t) * b.galois(t)
    assert (a + b).galois(t) == a.galois(t) + b.galois(t)


@settings(max_examples=40, deadline=None)
@given(elements())
def test_approx_consistent_with_power_basis(a):
    z = cmath.exp(2j * math.pi / a.M)
    expect = sum(float(c) * z ** i for i, c in enumerate(a.coeffs))
    assert abs(a.approx() - expect) < 1e-8
