"""Quadratic-form classification: j-invariant, signatures, three- and
four-point moduli fields."""

from fractions import Fraction

import pytest

from moduli.cyclo import CycloElement
from moduli.errors import DegenerateExponents, DegenerateMu, SupportSizeMismatch
from moduli.projline import INF, ProjPoint
from moduli.ratmap import KForm, RationalMap
from moduli.flatmod import (
    anharmonic_orbit,
    flat_signature,
    four_point_moduli,
    j_invariant,
    three_point_normal_form,
)

from conftest import C, ONE, ZERO, pt, zeta

Z5 = CycloElement.zeta(5)


def test_j_values():
    assert j_invariant(C(-1)).as_rational() == Fraction(27, 4)
    assert j_invariant(C(2)).as_rational() == Fraction(27, 4)
    with pytest.raises(DegenerateMu):
        j_invariant(C(0))
    with pytest.raises(DegenerateMu):
        j_invariant(C(1))


def test_j_constant_on_anharmonic_orbit(rng):
    from conftest import random_nonzero

    count = 0
    while count < 200:
        mu = random_nonzero(rng)
        if mu == ONE:
            continue
        j = j_invariant(mu)
        for image in anharmonic_orbit(mu):
            assert j_invariant(image) == j
        count += 1


def test_flat_signature_examples():
    R11 = RationalMap.from_factored(ONE, [(pt(0), 1), (pt(1), 1)])
    sig = flat_signature(KForm(R11, 2))
    assert sig.support_size == 3 and sig.orders == (-6, 1, 1)
    assert not sig.simple_poles

    one5 = CycloElement.one(5)
    zero5 = one5.zero_like()
    Rq = RationalMap.from_factored(
        one5, [(ProjPoint(zero5), -1), (ProjPoint(one5), -1), (ProjPoint(Z5), -1)])
    sig2 = flat_signature(KForm(Rq, 2))
    assert sig2.support_size == 4 and sig2.orders == (-1, -1, -1, -1)
    assert sig2.simple_poles

    sig3 = flat_signature(KForm(RationalMap.constant(ONE), 2))
    assert sig3.support_size == 1 and sig3.orders == (-4,)


def test_four_point_moduli_positive_distinct():
    fp = four_point_moduli(1, 2, 3, Z5)
    assert fp.resolved.field_equals(fp.upper)
    assert fp.index_over_resolved == 1
    assert fp.compatible == (0,)


def test_four_point_moduli_all_simple_poles():
    fp = four_point_moduli(-1, -1, -1, Z5)
    assert fp.resolved.field_equals(fp.lower)
    assert len(fp.compatible) == 6
    assert fp.index_over_resolved == 2


def test_four_point_moduli_intermediate():
    fp = four_point_moduli(1, 1, 2, Z5)
    assert len(fp.compatible) == 2
    assert fp.index_over_resolved in (1, 2, 3, 6)
    assert fp.upper.field_contains(fp.resolved)
    assert fp.resolved.field_contains(fp.lower)


def test_four_point_degenerate_exponents():
    with pytest.raises(DegenerateExponents):
        four_point_moduli(0, 1, 1, Z5)
    with pytest.raises(DegenerateExponents):
        four_point_moduli(-2, -2, -2, Z5)


def test_three_point_normal_form():
    z3 = zeta(4)
    R = RationalMap.from_factored(ONE, [(ProjPoint(z3), 1), (pt(1), 1)])
    nf = three_point_normal_form(KForm(R, 2))
    assert sorted((nf.a, nf.b)) == [1, 1]
    assert nf.moduli_field.degree == 1
    R2 = RationalMap.from_factored(ONE, [(pt(0), 1), (pt(1), 1)])
    nf2 = three_point_normal_form(KForm(R2, 2))
    assert sorted((nf2.a, nf2.b)) == [1, 1]
    with pytest.raises(SupportSizeMismatch):
        three_point_normal_form(KForm(RationalMap.constant(ONE), 2))
