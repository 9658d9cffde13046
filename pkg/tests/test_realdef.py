"""Real moduli and real definability: reflections, the worked example at
theta = pi/3, and the non-definable family."""

from fractions import Fraction

import pytest

from moduli.cyclo import CycloElement
from moduli.errors import PreconditionViolated
from moduli.polys import Poly
from moduli.projline import INF, MoebiusMap, ProjPoint
from moduli.ratmap import KForm, RationalMap
from moduli.actions import ActionTag, apply_action
from moduli.realdef import (
    AntiMoebius,
    antiholo_auts,
    anti_fixed_points_exist,
    ejemplo2_map,
    ejemplo2_preconditions,
    is_reflection,
    real_definability_check,
    real_model,
    real_moduli_check,
)

from conftest import C, ONE, ZERO, pt, random_moebius, zeta

Z6 = zeta(2)
Z12 = zeta(1)


def example1_form():
    R = RationalMap.from_factored(
        ONE, [(pt(0), 1), (pt(1), -1), (ProjPoint(Z6), -1)])
    return KForm(R, 1)


def test_reflection_predicates():
    assert is_reflection(AntiMoebius(MoebiusMap.identity(ONE)))
    assert not is_reflection(AntiMoebius(MoebiusMap(ZERO, -ONE, ONE, ZERO)))
    assert is_reflection(AntiMoebius(MoebiusMap.scaling(zeta(4))))
    # unit-circle inversion 1/conj(z): fixed circle
    assert is_reflection(AntiMoebius(MoebiusMap(ZERO, ONE, ONE, ZERO)))
    # translation-composed: conj(z) + i-ish has a fixed line
    delta = zeta(1) - zeta(1).conj()
    glide = MoebiusMap(ONE, delta, ZERO, ONE)
    assert AntiMoebius(glide).is_involution()
    assert anti_fixed_points_exist(glide)


def test_reflection_conjugation_invariance(rng):
    # conjugating a reflection stays a reflection
    base = AntiMoebius(MoebiusMap.identity(ONE))
    for _ in range(30):
        V = random_moebius(rng)
        M = V.compose(base.M).compose(V.conj().inverse())
        U = AntiMoebius(M)
        assert U.is_involution()
        assert is_reflection(U)


def test_example1_anti_automorphism():
    w = example1_form()
    auts = antiholo_auts(w)
    assert len(auts) == 1
    # the witness is e^(i theta) conj(z), a rotation reflection
    U = auts[0]
    assert U.M == MoebiusMap.scaling(Z6)
    assert real_moduli_check(w)
    verdict = real_definability_check(w)
    assert verdict.verdict == "DefinableOverR"


def test_example1_descends_to_the_stated_real_model():
    w = example1_form()
    T = MoebiusMap.scaling(Z12)
    model = apply_action(ActionTag.chi_k(1), T, w.R)
    s3 = Z12 + Z12**11
    expected = RationalMap.from_coeffs(Poly([ZERO, ONE]), Poly([ONE, -s3, ONE]))
    assert model == expected
    # the machinery road: reflection -> cocycle -> coboundary -> real model
    verdict = real_definability_check(w)
    mdl = real_model(w, verdict.witness)
    for coeff in mdl.coefficients():
        assert coeff.conj() == coeff


def test_rational_form_has_J():
    R = RationalMap.from_factored(ONE, [(pt(1), 1), (pt(-1), 1), (pt(0), -3), (INF, 1)])
    w = KForm(R, 1)
    verdict = real_definability_check(w)
    assert verdict.verdict == "DefinableOverR"
    assert real_moduli_check(w)


def test_non_real_moduli():
    # omega = (z^2 + zeta5-ish) dz with no anti-automorphism: use zeta12 twist
    R = RationalMap.from_factored(
        zeta(1), [(pt(1), 1), (pt(2), 1), (pt(0), -1), (pt(-1), -1)])
    w = KForm(R, 1)
    if not real_moduli_check(w):
        assert real_definability_check(w).verdict == "ModuliNotReal"


def test_parametric_small_support():
    # c z dz with e = m + k = 2: always definable over R
    Rc = RationalMap.from_factored(zeta(1), [(pt(0), 1)])
    v = real_definability_check(KForm(Rc, 1))
    assert v.verdict == "DefinableOverR"
    # c dz/z (e = 0): definable iff c real or swap-condition -c real (k odd)
    Rreal = RationalMap.from_factored(C(3), [(pt(0), -1)])
    assert real_definability_check(KForm(Rreal, 1)).verdict == "DefinableOverR"
    Rim = RationalMap.from_factored(zeta(3), [(pt(0), -1)])  # c = zeta4: -conj = c
    v2 = real_definability_check(KForm(Rim, 1))
    assert v2.verdict == "DefinableOverR"  # swap family works for k = 1
    z12 = zeta(1)
    Rbad = RationalMap.from_factored(z12, [(pt(0), -1)])
    v3 = real_definability_check(KForm(Rbad, 1))
    assert v3.verdict == "ModuliNotReal"


def test_ejemplo2_preconditions():
    lam = Z12**5
    classes = ejemplo2_preconditions(Fraction(2), Z6, lam)
    assert len(classes) == 3
    with pytest.raises(PreconditionViolated):
        ejemplo2_preconditions(Fraction(1, 2), Z6, lam)        # r > 1 fails
    with pytest.raises(PreconditionViolated):
        ejemplo2_preconditions(Fraction(2), zeta(3), zeta(3))  # e^(2i theta) = -1
    with pytest.raises(PreconditionViolated):
        ejemplo2_preconditions(Fraction(2), Z6, ONE)  # lam = 1 breaks the sign law


def test_ejemplo2_not_definable_k1():
    lam = Z12**5
    w = ejemplo2_map(Fraction(2), Z6, lam, k=1)
    assert w.R.degree == 4
    auts = antiholo_auts(w)
    assert len(auts) == 1
    # the paper's witness: T(z) = -4/z composed with conjugation
    expected = MoebiusMap(ZERO, C(-4), ONE, ZERO)
    assert auts[0].M == expected
    assert real_moduli_check(w)
    v = real_definability_check(w)
    assert v.verdict == "NotDefinable"


def test_ejemplo2_not_definable_k2():
    lam = Z12**5
    w = ejemplo2_map(Fraction(2), Z6, lam, k=2)
    assert w.R.degree == 8
    assert w.divisor().degree() == -4
    assert real_moduli_check(w)
    v = real_definability_check(w)
    assert v.verdict == "NotDefinable"


def test_definable_implies_moduli_real(rng):
    # logical containment on a mixed bag of small forms
    samples = [
        example1_form(),
        KForm(RationalMap.from_factored(ONE, [(pt(0), 2)]), 1),
        KForm(RationalMap.from_factored(zeta(1), [(pt(0), 1)]), 1),
        ejemplo2_map(Fraction(2), Z6, Z12**5, 1),
    ]
    for w in samples:
        v = real_definability_check(w)
        if v.verdict == "DefinableOverR":
            assert real_moduli_check(w)
