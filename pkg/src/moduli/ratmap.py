"""Rational maps on P^1 in dual representation (normalized coefficients plus
an optional exact zero/pole divisor), k-forms, and fixed/critical marked data.
"""

from __future__ import annotations

from fractions import Fraction

from .cyclo import CycloElement, embed_conductor, root_extract, unity_group_order, roots_of_unity
from .errors import (
    FactoredFormRequired,
    InvariantViolation,
    RootsNotInField,
    WeightMismatch,
    ZeroMap,
)
from .polys import Poly, poly_from_roots
from .projline import INF, Divisor, MoebiusMap, ProjPoint


class ZeroDerivativeType:
    """Marker for the derivative of a constant map (the excluded zero map)."""

    def __repr__(self):
        return "ZeroDerivative"


ZERO_DERIVATIVE = ZeroDerivativeType()


class RationalMap:
    """R = P/Q with P monic and gcd(P, Q) = 1; optionally a factored form
    R = lead * prod (z - a_i)^(m_i) recorded as a divisor including infinity."""

    __slots__ = ("P", "Q", "lead", "div_map")

    def __init__(self, P: Poly, Q: Poly, lead=None, div_map=None):
        self.P = P
        self.Q = Q
        self.lead = lead
        self.div_map = div_map

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_coeffs(cls, P_raw: Poly, Q_raw: Poly, roots=None):
        """Normalize a fraction of polynomials; optional root certificate
        (values for every root of P_raw and Q_raw) restores the factored form."""
        if P_raw.is_zero():
            raise ZeroMap("the zero map is excluded")
        if Q_raw.is_zero():
            raise ZeroMap("denominator must be nonzero")
        g = P_raw.gcd(Q_raw)
        if g.degree > 0:
            P_raw = P_raw.divmod(g)[0]
            Q_raw = Q_raw.divmod(g)[0]
        lead_inv = P_raw.leading().inv()
        P = P_raw.scale(lead_inv)
        Q = Q_raw.scale(lead_inv)
        R = cls(P, Q)
        if roots is not None:
            R._attach_roots(roots)
        return R

    @classmethod
    def from_factored(cls, lead, pairs):
        """Build from a scalar and finite (point, multiplicity) data; an
        explicit entry at infinity is checked against the degree bookkeeping."""
        if lead.is_zero():
            raise ZeroMap("leading scalar must be nonzero")
        one = lead.one_like()
        finite = [(p, m) for p, m in pairs if not p.is_inf]
        inf_given = [m for p, m in pairs if p.is_inf]
        zeros = [(p.x, m) for p, m in finite if m > 0]
        poles = [(p.x, -m) for p, m in finite if m < 0]
        P = poly_from_roots(zeros, one)
        Qm = poly_from_roots(poles, one)
        Q = Qm.scale(lead.inv())
        g = P.gcd(Qm)
        if g.degree > 0:
            raise InvariantViolation("zero and pole divisors must be disjoint")
        inf_mult = Q.degree - P.degree
        if inf_given and inf_given[0] != inf_mult:
            raise InvariantViolation(
                f"multiplicity at infinity must be {inf_mult}, got {inf_given[0]}"
            )
        div_items = [(p, m) for p, m in finite]
        if inf_mult != 0:
            div_items.append((INF, inf_mult))
        return cls(P, Q, lead=lead, div_map=Divisor(div_items))

    @classmethod
    def constant(cls, c):
        if c.is_zero():
            raise ZeroMap("the zero map is excluded")
        return cls.from_factored(c, [])

    @classmethod
    def from_moebius(cls, T: MoebiusMap):
        return cls.from_coeffs(T.num_poly(), T.den_poly())

    def _attach_roots(self, roots):
        """Verify a root certificate by exact division and record the divisor."""
        one = self.one()
        pairs = {}
        leftovers = []
        for poly, sign in ((self.P, 1), (self.Q, -1)):
            rem = poly
            for r in roots:
                lin = Poly([-r, one])
                while True:
                    q, rr = rem.divmod(lin)
                    if rr.is_zero():
                        rem = q
                        key = ProjPoint(r)
                        pairs[key] = pairs.get(key, 0) + sign
                    else:
                        break
            if rem.degree > 0:
                raise InvariantViolation(
                    f"root certificate does not exhaust a factor of degree {rem.degree}"
                )
            leftovers.append(rem.coeff(0, like=one))
        inf_mult = self.Q.degree - self.P.degree
        items = [(p, m) for p, m in pairs.items() if m != 0]
        if inf_mult != 0:
            items.append((INF, inf_mult))
        self.lead = leftovers[1].inv()  # Q = (1/lead) * prod over poles
        self.div_map = Divisor(items)
        if self.expand_factored() != (self.P, self.Q):
            raise InvariantViolation("root certificate does not reproduce the map")

    # -- basic structure -------------------------------------------------

    def one(self):
        return self.P.leading()  # P is monic, so this is the field's one

    @property
    def conductor(self):
        return self.one().n

    @property
    def degree(self):
        return max(self.P.degree, self.Q.degree)

    def is_polynomial(self):
        return self.Q.degree == 0

    def is_constant(self):
        return self.degree == 0

    def has_factored(self):
        return self.div_map is not None

    def require_factored(self):
        if not self.has_factored():
            raise FactoredFormRequired("operation needs the zero/pole divisor")

    def coefficients(self):
        return list(self.P.coeffs) + list(self.Q.coeffs)

    def expand_factored(self):
        one = self.one()
        zeros = [(p.x, m) for p, m in self.div_map if not p.is_inf and m > 0]
        poles = [(p.x, -m) for p, m in self.div_map if not p.is_inf and m < 0]
        P = poly_from_roots(zeros, one)
        Q = poly_from_roots(poles, one).scale(self.lead.inv())
        return P, Q

    def map_divisor(self) -> Divisor:
        self.require_factored()
        return self.div_map

    # -- arithmetic-on-maps ----------------------------------------------

    def evaluate_extended(self, p: ProjPoint) -> ProjPoint:
        if p.is_inf:
            dp, dq = self.P.degree, self.Q.degree
            if dp > dq:
                return INF
            if dp < dq:
                return ProjPoint(self.one().zero_like())
            return ProjPoint(self.one() / self.Q.leading())
        num = self.P.evaluate(p.x)
        den = self.Q.evaluate(p.x)
        if den.is_zero():
            return INF
        return ProjPoint(num / den)

    def compose(self, other: "RationalMap") -> "RationalMap":
        """self after other."""
        Ps, Qs = other.P, other.Q
        d = self.degree
        one = self.one()
        num = Poly([])
        den = Poly([])
        ppow = [Poly([one])]
        qpow = [Poly([one])]
        for i in range(d):
            ppow.append(ppow[-1] * Ps)
            qpow.append(qpow[-1] * Qs)
        for i in range(d + 1):
            pc = self.P.coeff(i, like=one)
            if not pc.is_zero():
                num = num + (ppow[i] * qpow[d - i]).scale(pc)
            qc = self.Q.coeff(i, like=one)
            if not qc.is_zero():
                den = den + (ppow[i] * qpow[d - i]).scale(qc)
        return RationalMap.from_coeffs(num, den)

    def compose_moebius(self, T: MoebiusMap) -> "RationalMap":
        """R . T (precompose with a Moebius map)."""
        return self.compose(RationalMap.from_moebius(T))

    def postcompose_moebius(self, T: MoebiusMap) -> "RationalMap":
        """T . R."""
        num = self.P.scale(T.a) + self.Q.scale(T.b)
        den = self.P.scale(T.c) + self.Q.scale(T.d)
        return RationalMap.from_coeffs(num, den)

    def derivative(self):
        num = self.P.derivative() * self.Q - self.P * self.Q.derivative()
        if num.is_zero():
            return ZERO_DERIVATIVE
        return RationalMap.from_coeffs(num, self.Q * self.Q)

    def reciprocal(self) -> "RationalMap":
        R = RationalMap.from_coeffs(self.Q, self.P)
        if self.has_factored():
            R.lead = self.lead.inv()
            R.div_map = -self.div_map
        return R

    def scale_by(self, c) -> "RationalMap":
        """c * R as a rational map."""
        if c.is_zero():
            raise ZeroMap("scaling by zero")
        R = RationalMap.from_coeffs(self.P.scale(c), self.Q)
        if self.has_factored():
            R.lead = self.lead * c
            R.div_map = self.div_map
        return R

    # -- field structure ---------------------------------------------------

    def galois(self, a: int) -> "RationalMap":
        R = RationalMap(self.P.map_coeffs(lambda x: x.galois(a)),
                        self.Q.map_coeffs(lambda x: x.galois(a)))
        if self.has_factored():
            R.lead = self.lead.galois(a)
            R.div_map = self.div_map.galois(a)
        return R

    def conj(self) -> "RationalMap":
        n = self.conductor
        if n <= 2:
            return self
        return self.galois(n - 1)

    def embed(self, m: int) -> "RationalMap":
        if m == self.conductor:
            return self
        emb = lambda x: embed_conductor(x, m)
        R = RationalMap(self.P.map_coeffs(emb), self.Q.map_coeffs(emb))
        if self.has_factored():
            R.lead = emb(self.lead)
            R.div_map = self.div_map.map_points(
                lambda p: p if p.is_inf else ProjPoint(emb(p.x))
            )
        return R

    def __eq__(self, other):
        if not isinstance(other, RationalMap):
            return NotImplemented
        return self.P == other.P and self.Q == other.Q

    def __hash__(self):
        return hash((self.P, self.Q))

    def __repr__(self):
        pn = " + ".join(f"({c})z^{i}" for i, c in enumerate(self.P.coeffs))
        qn = " + ".join(f"({c})z^{i}" for i, c in enumerate(self.Q.coeffs))
        return f"({pn}) / ({qn})"


class KForm:
    """omega = R dz^k."""

    __slots__ = ("R", "k")

    def __init__(self, R: RationalMap, k: int):
        self.R = R
        self.k = k

    def divisor(self) -> Divisor:
        """Exact zero/pole divisor of the form; total degree is -2k."""
        self.R.require_factored()
        D = self.R.map_divisor()
        return D + Divisor([(INF, -2 * self.k)])

    def embed(self, m: int) -> "KForm":
        return KForm(self.R.embed(m), self.k)

    def galois(self, a: int) -> "KForm":
        return KForm(self.R.galois(a), self.k)

    def conj(self) -> "KForm":
        return KForm(self.R.conj(), self.k)

    def __eq__(self, other):
        if not isinstance(other, KForm):
            return NotImplemented
        return self.k == other.k and self.R == other.R

    def __repr__(self):
        return f"({self.R!r}) dz^{self.k}"


def kform_divisor(omega: KForm) -> Divisor:
    return omega.divisor()


def theta_involution(omega: KForm) -> KForm:
    """R dz^k -> (1/R) dz^(-k); an involution commuting with pull-back."""
    return KForm(omega.R.reciprocal(), -omega.k)


# -- root extraction within the working field ---------------------------


def roots_in_field(f: Poly):
    """Split off the roots of f reachable in-field (linear and quadratic
    pieces, binomials with full sets of roots of unity).

    Returns (list of (root, multiplicity), leftover polynomial or None).
    """
    if f.is_zero():
        raise ValueError("zero polynomial")
    one = f.leading().one_like()
    roots = []
    v = f.valuation()
    if v:
        roots.append((one.zero_like(), v))
        f = Poly(f.coeffs[v:])
    while f.degree >= 1:
        found = _find_roots_step(f, one)
        if not found:
            return roots, f
        for r in found:
            mult = 0
            lin = Poly([-r, one])
            while True:
                q, rem = f.divmod(lin)
                if rem.is_zero():
                    f = q
                    mult += 1
                else:
                    break
            if mult:
                roots.append((r, mult))
    return roots, None


def _find_roots_step(f: Poly, one):
    """Some in-field roots of f: linear, quadratic, or a full binomial set."""
    if f.degree == 1:
        return [-f.coeffs[0] / f.coeffs[1]]
    if f.degree == 2:
        c, b, a = f.coeffs
        disc = b * b - 4 * a * c
        if disc.is_zero():
            return [-b / (2 * a)]
        if isinstance(disc, CycloElement):
            res = root_extract(disc, 2)
            if res.in_field:
                return [(-b + res.value) / (2 * a), (-b - res.value) / (2 * a)]
        return []
    # binomial a*z^e + c: all roots at once when mu_e lives in the field
    interior = [i for i in range(1, f.degree) if not f.coeff(i, like=one).is_zero()]
    if not interior and isinstance(one, CycloElement):
        e = f.degree
        c0 = f.coeffs[0]
        target = -c0 / f.leading()
        res = root_extract(target, e)
        if res.in_field and unity_group_order(one.n) % e == 0:
            n = one.n
            step = unity_group_order(n) // e
            out = []
            for j in range(e):
                u = _unity_power(n, step * j)
                out.append(res.value * u)
            return out
    return []


def _unity_power(n, j):
    """The j-th power of a fixed generator of the roots of unity in Q(zeta_n)."""
    if n % 2 == 0:
        return CycloElement.zeta(n, j % n)
    # the unit group is cyclic of order 2n, generated by -zeta^((n+1)/2)
    base_exp = ((n + 1) // 2) * j
    sign = -1 if j % 2 else 1
    z = CycloElement.zeta(n, base_exp % n)
    return z if sign == 1 else -z


def all_roots_or_fail(f: Poly, context: str):
    roots, leftover = roots_in_field(f)
    if leftover is not None:
        raise RootsNotInField(leftover, f"{context}: no in-field splitting of a "
                                        f"degree-{leftover.degree} factor")
    return roots


# -- marked data ---------------------------------------------------------


class MarkedPoint:
    __slots__ = ("point", "is_fixed", "fixed_multiplicity", "multiplier",
                 "is_critical", "local_degree")

    def __init__(self, point, is_fixed=False, fixed_multiplicity=0,
                 multiplier=None, is_critical=False, local_degree=1):
        self.point = point
        self.is_fixed = is_fixed
        self.fixed_multiplicity = fixed_multiplicity
        self.multiplier = multiplier
        self.is_critical = is_critical
        self.local_degree = local_degree

    def role(self):
        if self.is_fixed and self.is_critical:
            return "both"
        return "fixed" if self.is_fixed else "critical"

    def signature(self):
        mult_key = None if self.multiplier is None else self.multiplier.sort_key()
        return (self.is_fixed, self.fixed_multiplicity, mult_key,
                self.is_critical, self.local_degree)

    def __repr__(self):
        return (f"MarkedPoint({self.point}, role={self.role()}, "
                f"mult={self.multiplier}, deg={self.local_degree})")


class MarkedSet:
    __slots__ = ("points",)

    def __init__(self, points):
        self.points = sorted(points, key=lambda mp: mp.point.sort_key())

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)


def multiplier_at_fixed(R: RationalMap, p: ProjPoint):
    if p.is_inf:
        one = R.one()
        zero = one.zero_like()
        J = MoebiusMap(zero, one, one, zero)
        S = R.compose_moebius(J).postcompose_moebius(J)
        return multiplier_at_fixed(S, ProjPoint(zero))
    der = R.derivative()
    if der is ZERO_DERIVATIVE:
        raise ZeroMap("constant map has no fixed-point multipliers")
    val = der.evaluate_extended(p)
    assert not val.is_inf, "multiplier must be finite at a fixed point"
    return val.x


def local_degree(R: RationalMap, p: ProjPoint) -> int:
    one = R.one()
    zero = one.zero_like()
    if p.is_inf:
        pre = MoebiusMap(zero, one, one, zero)
    else:
        pre = MoebiusMap(one, p.x, zero, one)
    S = R.compose_moebius(pre)
    v = S.evaluate_extended(ProjPoint(zero))
    if v.is_inf:
        post = MoebiusMap(zero, one, one, zero)
    else:
        post = MoebiusMap(one, -v.x, zero, one)
    S2 = S.postcompose_moebius(post)
    num = S2.P
    if S2.Q.evaluate(zero).is_zero():
        raise AssertionError("unexpected pole after normalization")
    return num.valuation()


def fixed_marked_set(R: RationalMap) -> MarkedSet:
    """Fixed points with multipliers and critical points with local degrees.

    The fixed-point divisor has homogeneous degree d+1; an explicit error is
    raised when a required factor does not split over the working field.
    """
    d = R.degree
    if d < 1:
        raise ZeroMap("marked data needs degree >= 1")
    one = R.one()
    entries = {}

    fixp = R.P - Poly.x_poly(one) * R.Q
    if fixp.is_zero():
        raise InvariantViolation("the identity map has no marked-set reduction")
    finite_fixed = all_roots_or_fail(fixp, "fixed points")
    inf_fixed = R.P.degree > R.Q.degree
    total = sum(m for _, m in finite_fixed)
    for r, m in finite_fixed:
        p = ProjPoint(r)
        entries[p] = MarkedPoint(p, is_fixed=True, fixed_multiplicity=m,
                                 multiplier=multiplier_at_fixed(R, p))
    if inf_fixed:
        m_inf = (d + 1) - total
        assert m_inf >= 1
        entries[INF] = MarkedPoint(INF, is_fixed=True, fixed_multiplicity=m_inf,
                                   multiplier=multiplier_at_fixed(R, INF))
    elif total != d + 1:
        raise InvariantViolation("fixed-point degree bookkeeping failed")

    crit_num = R.P.derivative() * R.Q - R.P * R.Q.derivative()
    if crit_num.is_zero():
        raise InvariantViolation("derivative vanished for a nonconstant map")
    finite_crit = all_roots_or_fail(crit_num, "critical points")
    crit_total = 0
    for r, m in finite_crit:
        p = ProjPoint(r)
        e = local_degree(R, p)
        assert e == m + 1, "critical multiplicity mismatch"
        crit_total += m
        mp = entries.get(p)
        if mp is None:
            mp = MarkedPoint(p)
            entries[p] = mp
        mp.is_critical = True
        mp.local_degree = e
    e_inf = local_degree(R, INF)
    if e_inf >= 2:
        crit_total += e_inf - 1
        mp = entries.get(INF)
        if mp is None:
            mp = MarkedPoint(INF)
            entries[INF] = mp
        mp.is_critical = True
        mp.local_degree = e_inf
    if crit_total != 2 * d - 2:
        raise RootsNotInField(crit_num, "critical points: degree bookkeeping "
                                        "requires factors outside the field")
    return MarkedSet(entries.values())
