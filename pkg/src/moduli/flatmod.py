"""Projective pull-back classification for quadratic forms: flat-structure
signatures, the j-invariant, and the three- and four-point moduli analysis."""

from __future__ import annotations

import itertools
from fractions import Fraction

from .cyclo import CycloElement, units_mod
from .errors import (
    DegenerateExponents,
    DegenerateMu,
    SupportSizeMismatch,
    WeightMismatch,
)
from .projline import INF, Divisor, MoebiusMap, ProjPoint, three_point_map
from .ratmap import KForm, RationalMap


def j_invariant(mu: CycloElement) -> CycloElement:
    """j(mu) = (1 - mu + mu^2)^3 / (mu^2 (1 - mu)^2), anharmonic-invariant."""
    one = mu.one_like()
    if mu.is_zero() or mu == one:
        raise DegenerateMu("j is undefined at 0 and 1")
    num = (one - mu + mu * mu) ** 3
    den = (mu * mu) * (one - mu) ** 2
    return num / den


def anharmonic_orbit(mu: CycloElement):
    """The six cross-ratio companions of mu."""
    one = mu.one_like()
    if mu.is_zero() or mu == one:
        raise DegenerateMu("orbit undefined at 0 and 1")
    return [
        mu,
        one / mu,
        one - mu,
        one / (one - mu),
        mu / (mu - one),
        (mu - one) / mu,
    ]


class FlatSignature:
    __slots__ = ("support_size", "orders", "simple_poles")

    def __init__(self, support_size, orders, simple_poles):
        self.support_size = support_size
        self.orders = tuple(orders)
        self.simple_poles = simple_poles

    def __repr__(self):
        flag = "integrable" if self.simple_poles else "non-integrable"
        return f"signature: {self.support_size} punctures, orders {list(self.orders)}, {flag}"


def flat_signature(omega: KForm) -> FlatSignature:
    """Support data of a quadratic form; total order is -4."""
    if omega.k != 2:
        raise WeightMismatch("flat structures come from quadratic forms (k = 2)")
    D = omega.divisor()
    assert D.degree() == -4
    orders = sorted(m for _, m in D)
    simple = all(m == -1 for m in orders if m < 0)
    return FlatSignature(len(D), orders, simple)


# -- permutations of a four-point configuration -------------------------------


def _anharmonic_index_table():
    """For each permutation of four marked positions, which of the six
    cross-ratio transformations it induces (computed on a generic value)."""
    mu0 = Fraction(7, 3)
    values = [
        mu0,
        1 / mu0,
        1 - mu0,
        1 / (1 - mu0),
        mu0 / (mu0 - 1),
        (mu0 - 1) / mu0,
    ]
    assert len(set(values)) == 6
    pts = ["inf", Fraction(0), Fraction(1), mu0]

    def cr(p1, p2, p3, p4):
        # cross ratio sending (p1,p2,p3) to (inf,0,1), on extended rationals
        def sub(x, y):
            return None if (x == "inf" or y == "inf") else x - y

        if p1 == "inf":
            num, den = sub(p4, p2), sub(p3, p2)
        elif p2 == "inf":
            num, den = sub(p3, p1), sub(p4, p1)
        elif p3 == "inf":
            num, den = sub(p4, p2), sub(p4, p1)
        elif p4 == "inf":
            num, den = sub(p3, p1), sub(p3, p2)
        else:
            num = (p4 - p2) * (p3 - p1)
            den = (p4 - p1) * (p3 - p2)
        return num / den

    table = {}
    for perm in itertools.permutations(range(4)):
        val = cr(*(pts[i] for i in perm))
        table[perm] = values.index(val)
    return table

_PERM_TO_ANHARMONIC = _anharmonic_index_table()


class FourPointModuli:
    __slots__ = ("lower", "upper", "resolved", "compatible", "index_over_resolved")

    def __init__(self, lower, upper, resolved, compatible, index_over_resolved):
        self.lower = lower        # Q(j(mu)) descriptor
        self.upper = upper        # Q(mu) descriptor
        self.resolved = resolved  # the exact moduli field descriptor
        self.compatible = compatible  # indices into the anharmonic orbit
        self.index_over_resolved = index_over_resolved

    def __repr__(self):
        return (f"moduli field {self.resolved!r}; bounds Q(j(mu)) <= . <= Q(mu), "
                f"[Q(mu) : field] = {self.index_over_resolved}")


def four_point_moduli(a: int, b: int, c: int, mu: CycloElement) -> FourPointModuli:
    """Moduli field of z^a (z-1)^b (z-mu)^c dz^2 under the projective action.

    The compatible subgroup of the anharmonic group is cut out by order
    preservation; the exact field is the fixed field of the Galois elements
    sending mu into the compatible orbit."""
    from .galois import subfield_fixed_by, subfield_of_element

    if a == 0 or b == 0 or c == 0:
        raise DegenerateExponents("exponents must be nonzero")
    if a + b + c <= -4:
        raise DegenerateExponents("need a + b + c > -4")
    one = mu.one_like()
    if mu.is_zero() or mu == one:
        raise DegenerateMu("mu must avoid 0 and 1")
    e = -(a + b + c) - 4
    orders = (e, a, b, c)  # at positions (inf, 0, 1, mu)
    compatible = set()
    for perm, idx in _PERM_TO_ANHARMONIC.items():
        if all(orders[perm[j]] == orders[j] for j in range(4)):
            compatible.add(idx)
    orbit = anharmonic_orbit(mu)
    targets = [orbit[i] for i in sorted(compatible)]
    n = mu.n
    members = [g for g in units_mod(n) if any(mu.galois(g) == t for t in targets)]
    resolved = subfield_fixed_by(n, members)
    upper = subfield_of_element(mu)
    lower = subfield_of_element(j_invariant(mu))
    if not (upper.field_contains(resolved) and resolved.field_contains(lower)):
        raise AssertionError("moduli field must sit between Q(j(mu)) and Q(mu)")
    index = upper.degree and resolved.degree and (upper.degree // resolved.degree)
    if resolved.degree * index != upper.degree or index not in (1, 2, 3, 6):
        raise AssertionError("index over the moduli field must divide 6")
    return FourPointModuli(lower, upper, resolved, tuple(sorted(compatible)), index)


class ThreePointNormalForm:
    __slots__ = ("a", "b", "transport", "normal", "moduli_field")

    def __init__(self, a, b, transport, normal, moduli_field):
        self.a = a
        self.b = b
        self.transport = transport
        self.normal = normal
        self.moduli_field = moduli_field

    def __repr__(self):
        return f"z^{self.a} (z-1)^{self.b} dz^2 (moduli field Q)"


def three_point_normal_form(omega: KForm) -> ThreePointNormalForm:
    """Transport a three-puncture quadratic form to z^a (z-1)^b dz^2 with the
    pole at infinity; the moduli field is Q."""
    from .actions import ActionTag, apply_action
    from .galois import subfield_fixed_by

    if omega.k != 2:
        raise WeightMismatch("normal form defined for quadratic forms")
    D = omega.divisor()
    if len(D) != 3:
        raise SupportSizeMismatch(f"support size {len(D)}, need 3")
    poles = [(m, p) for p, m in D if m < 0]
    m_inf, p_inf = min(poles, key=lambda t: (t[0], t[1].sort_key()))
    rest = [p for p, _ in D if p != p_inf]
    one = omega.R.one()
    zero = one.zero_like()
    T = three_point_map((INF, ProjPoint(zero), ProjPoint(one)),
                        (p_inf, rest[0], rest[1]), one)
    normal = apply_action(ActionTag.chi_k(2), T, omega.R)
    a = KForm(normal, 2).divisor().multiplicity(ProjPoint(zero))
    b = KForm(normal, 2).divisor().multiplicity(ProjPoint(one))
    field = subfield_fixed_by(omega.R.conductor, units_mod(omega.R.conductor))
    return ThreePointNormalForm(a, b, T, normal, field)
