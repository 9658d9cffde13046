"""Exact-arithmetic kernel: spec examples frozen against independent checks,
plus field-axiom property suites in Q(zeta_12)."""

from fractions import Fraction

import pytest
from hypothesis import given, settings

from moduli.cyclo import (
    CycloElement,
    QuadExtField,
    certify_nonsquare,
    cyclotomic_polynomial,
    embed_conductor,
    euler_phi,
    eval_poly_at,
    field_norm,
    is_rational_square_in_cyclo,
    minimal_polynomial,
    root_extract,
    roots_of_unity,
    sign_of_real,
    units_mod,
)
from moduli.errors import DivisionByZero, NotDivisible, NotReal, ZeroRadicand

from conftest import cyclo_elements, nonzero_cyclo, C, zeta, ONE


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(2) == (1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)
    for n in (3, 8, 9, 16, 36):
        assert len(cyclotomic_polynomial(n)) == euler_phi(n) + 1


def test_mul_i_squared():
    z4 = CycloElement.zeta(4)
    assert z4 * z4 == CycloElement.from_rational(4, -1)


def test_conj_of_power():
    z12 = CycloElement.zeta(12)
    assert (z12**5).conj() == z12**7 == -z12


def test_inverse_of_one_plus_zeta3():
    # oracle: extended Euclid result must multiply back to 1
    z3 = CycloElement.zeta(3)
    inv = (1 + z3).inv()
    assert (1 + z3) * inv == CycloElement.one(3)
    assert inv == -z3  # (1+z)( -z ) = -z - z^2 = 1
    with pytest.raises(DivisionByZero):
        CycloElement.zero(3).inv()


def test_embed_conductor():
    z3 = CycloElement.zeta(3)
    z12 = CycloElement.zeta(12)
    assert embed_conductor(z3, 12) == z12**4
    half = CycloElement.from_rational(2, Fraction(1, 2))
    assert embed_conductor(half, 8) == CycloElement.from_rational(8, Fraction(1, 2))
    y = CycloElement.zeta(4) + 1
    emb = embed_conductor(y, 12)
    assert emb == CycloElement.zeta(12, 3) + 1
    assert minimal_polynomial(y) == minimal_polynomial(emb)
    with pytest.raises(NotDivisible):
        embed_conductor(z3, 8)


def test_minimal_polynomials():
    assert minimal_polynomial(CycloElement.zeta(4)) == (Fraction(1), Fraction(0), Fraction(1))
    z8 = CycloElement.zeta(8)
    assert minimal_polynomial(z8 + z8**-1) == (Fraction(-2), Fraction(0), Fraction(1))
    assert minimal_polynomial(CycloElement.from_rational(8, Fraction(3, 2))) == \
        (Fraction(-3, 2), Fraction(1))


def test_sign_of_real():
    assert sign_of_real(CycloElement.zero(8)) == 0
    z8 = CycloElement.zeta(8)
    assert sign_of_real(z8 + z8**-1) == 1
    z3 = CycloElement.zeta(3)
    assert sign_of_real(z3 + z3**2) == -1
    with pytest.raises(NotReal):
        sign_of_real(z3)


def test_root_extract():
    assert root_extract(C(4, 4), 2).value == C(2, 4)
    z3_in9 = embed_conductor(CycloElement.zeta(3), 9)
    res = root_extract(z3_in9, 3)
    assert res.in_field and res.value**3 == z3_in9
    res2 = root_extract(1 + CycloElement.zeta(3), 2)
    assert not res2.in_field and res2.power == 2
    with pytest.raises(ZeroRadicand):
        root_extract(CycloElement.zero(3), 2)


def test_rational_square_detection():
    assert is_rational_square_in_cyclo(Fraction(2), 8)
    assert not is_rational_square_in_cyclo(Fraction(2), 12)
    assert is_rational_square_in_cyclo(Fraction(-3), 3)
    assert is_rational_square_in_cyclo(Fraction(-1), 4)
    assert not is_rational_square_in_cyclo(Fraction(-1), 6)
    assert is_rational_square_in_cyclo(Fraction(9, 4), 5)


def test_quadext_basics():
    z3 = CycloElement.zeta(3)
    F = QuadExtField(3, 1 + z3)
    s = F.sqrt_d()
    assert s * s == F.of(1 + z3)
    e = F.of(1) + s
    assert e * e.inv() == F.of(1)
    assert (e.bar() * e).in_base()
    with pytest.raises(ValueError):
        QuadExtField(8, CycloElement.from_rational(8, 2))  # 2 is a square there


def test_roots_of_unity_count():
    assert len(roots_of_unity(12)) == 12
    assert len(roots_of_unity(9)) == 18
    for u in roots_of_unity(9):
        assert u**18 == CycloElement.one(9)


# -- property suites ---------------------------------------------------------


@settings(max_examples=200, derandomize=True, deadline=None)
@given(cyclo_elements, cyclo_elements, cyclo_elements)
def test_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * y == y * x
    assert x * (y + z) == x * y + x * z


@settings(max_examples=200, derandomize=True, deadline=None)
@given(nonzero_cyclo)
def test_multiplicative_inverse(x):
    assert x * x.inv() == ONE


@settings(max_examples=200, derandomize=True, deadline=None)
@given(cyclo_elements, cyclo_elements)
def test_conj_is_ring_hom_and_involution(x, y):
    assert (x + y).conj() == x.conj() + y.conj()
    assert (x * y).conj() == x.conj() * y.conj()
    assert x.conj().conj() == x


@settings(max_examples=100, derandomize=True, deadline=None)
@given(cyclo_elements)
def test_minimal_polynomial_annihilates(x):
    mp = minimal_polynomial(x)
    assert eval_poly_at(mp, x).is_zero()
    degree = len(mp) - 1
    stab = sum(1 for a in units_mod(12) if x.galois(a) == x)
    assert degree * stab == euler_phi(12)


@settings(max_examples=100, derandomize=True, deadline=None)
@given(small := cyclo_elements)
def test_sign_matches_rational_comparison(x):
    q = x.coeffs[0]
    rat = CycloElement.from_rational(12, q)
    expected = 0 if q == 0 else (1 if q > 0 else -1)
    assert sign_of_real(rat) == expected


@settings(max_examples=100, derandomize=True, deadline=None)
@given(nonzero_cyclo, nonzero_cyclo)
def test_galois_commutes_with_arithmetic(x, y):
    for a in units_mod(12):
        assert (x * y).galois(a) == x.galois(a) * y.galois(a)
        assert (x + y).galois(a) == x.galois(a) + y.galois(a)


def test_root_extract_verified_by_exponentiation(rng):
    for _ in range(200):
        n = rng.choice([8, 9, 12])
        q = Fraction(rng.choice([1, 2, 3, 4, 8, 9]), rng.choice([1, 2]))
        j = rng.randrange(n)
        m = rng.choice([2, 3])
        c = CycloElement.from_rational(n, q) * CycloElement.zeta(n, j)
        res = root_extract(c, m)
        if res.in_field:
            assert res.value**m == c
        else:
            assert res.power == m and res.radicand == c
