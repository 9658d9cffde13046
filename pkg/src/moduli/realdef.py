"""Real fields of moduli and real definability for pull-back actions:
anti-holomorphic automorphisms U(z) = M(conj z), reflections, and the exact
fixed-point decision over the maximal real subfield."""

from __future__ import annotations

from fractions import Fraction

from .cyclo import CycloElement, root_extract, roots_of_unity, sign_of_real
from .errors import (
    InfiniteAutomorphismGroup,
    PreconditionViolated,
    UnsupportedConfiguration,
)
from .polys import Poly
from .projline import INF, Divisor, MoebiusMap, ProjPoint, cross_ratio, three_point_map
from .ratmap import KForm, RationalMap
from .actions import (
    ActionTag,
    _normal_position,
    apply_action,
    aut_group,
    chi_k_coeffwise,
    equiv_chi_k,
)
from .flatmod import j_invariant


class AntiMoebius:
    """U(z) = M(conj z); composing two of these gives a Moebius map."""

    __slots__ = ("M",)

    def __init__(self, M: MoebiusMap):
        self.M = M

    def compose_anti(self, other: "AntiMoebius") -> MoebiusMap:
        return self.M.compose(other.M.conj())

    def apply(self, p: ProjPoint) -> ProjPoint:
        return self.M.apply(p.conj())

    def is_involution(self) -> bool:
        return self.M.compose(self.M.conj()).is_identity()

    def __eq__(self, other):
        return isinstance(other, AntiMoebius) and self.M == other.M

    def __hash__(self):
        return hash(("anti", self.M))

    def __repr__(self):
        return f"({self.M!r}) . conj"


def _real_imag_split(alpha: CycloElement):
    """alpha = a_r + delta * a_i with a_r, a_i in the maximal real subfield,
    where delta = zeta - conj(zeta) and delta^2 = -D < 0. Returns (a_r, a_i, D)."""
    n = alpha.n
    if n <= 2:
        return alpha, alpha.zero_like(), alpha.one_like()
    zeta = CycloElement.zeta(n)
    delta = zeta - zeta.conj()
    D = -(delta * delta)
    bar = alpha.conj()
    a_r = (alpha + bar) / 2
    a_i = (alpha - bar) / (2 * delta)
    return a_r, a_i, D


def _real_linear_solvable(rows):
    """Does a real 2x2 linear system (a, b | c) have a solution over R?"""
    (a1, b1, c1), (a2, b2, c2) = rows
    det = a1 * b2 - a2 * b1
    if not det.is_zero():
        return True
    # rank <= 1: consistency of both rows
    for (a, b, c) in rows:
        if a.is_zero() and b.is_zero() and not c.is_zero():
            return False
    # rows proportional: cross products with the right-hand sides must agree
    if not (a1 * c2 - a2 * c1).is_zero():
        return False
    if not (b1 * c2 - b2 * c1).is_zero():
        return False
    return True


def _real_quadratic_solvable(A, B, C):
    """Does A x^2 + B x + C = 0 have a real solution (coefficients real)?"""
    if A.is_zero():
        if B.is_zero():
            return C.is_zero()
        return True
    disc = B * B - 4 * A * C
    return sign_of_real(disc) >= 0


def anti_fixed_points_exist(M: MoebiusMap) -> bool:
    """Exact decision: does M(conj z) = z have a solution on the sphere?

    The equation c z conj(z) + d z - a conj(z) - b = 0 is split over the
    maximal real subfield; infinity is a fixed point iff c = 0 (then it is)."""
    a, b, c, d = M.entries()
    if c.is_zero():
        return True  # M(conj(inf)) = inf
    ar, ai, D = _real_imag_split(a)
    br, bi, _ = _real_imag_split(b)
    cr, ci, _ = _real_imag_split(c)
    dr, di, _ = _real_imag_split(d)
    zero = a.zero_like()
    # with z = x + delta y:  real part / imaginary part of the equation
    #   c (x^2 + D y^2) + d(x + delta y) - a(x - delta y) - b = 0
    q1 = (cr, dr - ar, -D * (di + ai), -br)   # cr*(x^2+Dy^2) + .x + .y + .
    q2 = (ci, di - ai, dr + ar, -bi)
    if cr.is_zero() and ci.is_zero():
        rows = [(q1[1], q1[2], -q1[3]), (q2[1], q2[2], -q2[3])]
        return _real_linear_solvable(rows)
    # eliminate the quadratic term
    lin = tuple(ci * u - cr * v for u, v in zip(q1, q2))  # (0, p, q, r)
    _, p, q, r = lin
    conic = q1 if not cr.is_zero() else q2
    cq, cx, cy, cc = conic
    if p.is_zero() and q.is_zero():
        if not r.is_zero():
            return False
        # single circle: complete squares on cq(x^2+Dy^2) + cx x + cy y + cc
        rho = cx * cx * D + cy * cy - 4 * cq * cc * D  # sign of radius^2 (x D)
        return sign_of_real(rho) >= 0
    if q.is_zero():
        # x = -r/p; quadratic in y
        x0 = -r / p
        A = cq * D
        B = cy
        C = cq * x0 * x0 + cx * x0 + cc
        return _real_quadratic_solvable(A, B, C)
    # y = -(p x + r)/q
    A = cq * (q * q + D * p * p)
    B = cx * q * q + 2 * cq * D * p * r - cy * p * q
    C = cq * D * r * r - cy * r * q + cc * q * q
    return _real_quadratic_solvable(A, B, C)


def is_reflection(U: AntiMoebius) -> bool:
    """Order two with fixed points, decided exactly."""
    return U.is_involution() and anti_fixed_points_exist(U.M)


class RealVerdict:
    DEFINABLE = "DefinableOverR"
    NOT_DEFINABLE = "NotDefinable"
    MODULI_NOT_REAL = "ModuliNotReal"

    def __init__(self, verdict, witness=None, note=None):
        self.verdict = verdict
        self.witness = witness
        self.note = note

    def __repr__(self):
        out = self.verdict
        if self.witness is not None:
            out += f" via {self.witness!r}"
        return out


def antiholo_auts(omega: KForm):
    """The coset of anti-holomorphic automorphisms of omega, possibly empty.

    The full coset is Aut(omega) . U0 for any single anti-automorphism U0."""
    R = omega.R
    k = omega.k
    Rbar = R.conj()
    w = equiv_chi_k(KForm(Rbar, k), omega)
    if w is None:
        return []
    if w.extension is not None or not w.in_field:
        raise UnsupportedConfiguration(
            "anti-automorphism witness lies outside the working field")
    T = w.t.conj()
    # exact re-verification of the defining identity
    if chi_k_coeffwise(T.conj(), Rbar, k) != R:
        raise AssertionError("anti-automorphism witness failed re-verification")
    aut = aut_group(ActionTag.chi_k(k), R)
    if not aut.is_finite:
        raise InfiniteAutomorphismGroup("one-parameter automorphism group")
    out = {AntiMoebius(A.compose(T)) for A in aut.elements}
    return sorted(out, key=lambda u: u.M.sort_key())


def real_moduli_check(omega: KForm) -> bool:
    """Is the field of moduli real-embeddable (some anti-automorphism exists)?"""
    try:
        return bool(antiholo_auts(omega))
    except InfiniteAutomorphismGroup:
        verdict = _parametric_real_check(omega)
        return verdict.verdict != RealVerdict.MODULI_NOT_REAL
    except UnsupportedConfiguration:
        return True  # witness exists over the closure


def real_definability_check(omega: KForm) -> RealVerdict:
    """DefinableOverR with a reflection witness, NotDefinable, or ModuliNotReal."""
    try:
        coset = antiholo_auts(omega)
    except InfiniteAutomorphismGroup:
        return _parametric_real_check(omega)
    if not coset:
        return RealVerdict(RealVerdict.MODULI_NOT_REAL)
    for U in coset:
        if is_reflection(U):
            return RealVerdict(RealVerdict.DEFINABLE, witness=U)
    return RealVerdict(RealVerdict.NOT_DEFINABLE,
                       note="anti-automorphisms exist but none is a reflection")


def _parametric_real_check(omega: KForm) -> RealVerdict:
    """Small-support forms (infinite automorphism group): the reduced form is
    c z^m dz^k and the anti-automorphism families are lam*conj and lam/conj."""
    R = omega.R
    k = omega.k
    R.require_factored()
    D = omega.divisor()
    if len(D) > 2:
        raise UnsupportedConfiguration("parametric route expects small support")
    V, red, m = _normal_position(R, k, D)
    c = red.lead
    cbar = c.conj()
    e = m + k
    one = R.one()

    def conjugated(Mprime):
        M = V.compose(Mprime).compose(V.conj().inverse())
        return AntiMoebius(M)

    if len(D) <= 1:
        # affine family a*conj(z) + b with conj(a)^k = c/cbar; b = 0 reflects
        target = c / cbar
        if k == 0:
            if c == cbar:
                return RealVerdict(RealVerdict.DEFINABLE,
                                   witness=conjugated(MoebiusMap.identity(one)))
            return RealVerdict(RealVerdict.MODULI_NOT_REAL)
        res = root_extract(target.conj() if k > 0 else target, abs(k))
        if res.in_field:
            a = res.value if k > 0 else res.value.inv()
            U = conjugated(MoebiusMap.scaling(a))
            if is_reflection(U):
                return RealVerdict(RealVerdict.DEFINABLE, witness=U)
        return RealVerdict(
            RealVerdict.DEFINABLE, witness=None,
            note=f"reflection a*conj(z) with a^{abs(k)} defined by an extension root")
    if e != 0:
        # scaling family: conj(lam)^e = c/cbar is always solvable over the
        # closure and any solution has unit norm, hence reflects
        x = c / cbar
        res = root_extract(x.conj() if e > 0 else x.conj().inv(), abs(e))
        if res.in_field:
            for u in roots_of_unity(one.n):
                lam = (res.value * u).conj()
                if (lam * lam.conj()) == one and (lam.conj()) ** e == x:
                    U = conjugated(MoebiusMap.scaling(lam))
                    if is_reflection(U):
                        return RealVerdict(RealVerdict.DEFINABLE, witness=U)
        return RealVerdict(
            RealVerdict.DEFINABLE, witness=None,
            note=f"reflection lam*conj(z) with lam^{abs(e)} defined by an extension root")
    # e = 0: lam-free conditions
    if c == cbar:
        U = conjugated(MoebiusMap.scaling(one))
        if is_reflection(U):
            return RealVerdict(RealVerdict.DEFINABLE, witness=U)
    swap_ok = (cbar if k % 2 == 0 else -cbar) == c
    if swap_ok:
        zero = one.zero_like()
        U = conjugated(MoebiusMap(zero, one, one, zero))
        if is_reflection(U):
            return RealVerdict(RealVerdict.DEFINABLE, witness=U)
    if c == cbar or swap_ok:
        return RealVerdict(RealVerdict.NOT_DEFINABLE,
                           note="anti-automorphisms exist but none reflects")
    return RealVerdict(RealVerdict.MODULI_NOT_REAL)


def real_model(omega: KForm, reflection: AntiMoebius) -> RationalMap:
    """Descend along a reflection to an exact model over the real subfield."""
    from .galois import Cocycle, descend, trivialize_cocycle

    R = omega.R
    n = R.conductor
    if n <= 2:
        return R
    conj_a = n - 1
    T_tau = reflection.M.conj().inverse()
    c = Cocycle(ActionTag.chi_k(omega.k), R, (1, conj_a), {1: MoebiusMap.identity(R.one()),
                                                           conj_a: T_tau})
    from .galois import verify_cocycle
    check = verify_cocycle(c)
    if not check:
        raise AssertionError(f"reflection did not induce a cocycle: {check}")
    triv = trivialize_cocycle(c)
    if triv.kind != "coboundary":
        raise UnsupportedConfiguration(
            "reflection cocycle did not split over the working field")
    return descend(ActionTag.chi_k(omega.k), R, triv.t, (1, conj_a))


# -- the family of non-definable examples ------------------------------------


def ejemplo2_map(r: Fraction, e_itheta: CycloElement, lam: CycloElement,
                 k: int = 1) -> KForm:
    """The exhibited maps with real moduli but no real model: for k = 1,
    (z - 1)(z + r^2)(z^2 - r^2 e^(2 i theta)) / (lam z^3), then k-th powers."""
    n = lam.n
    one = CycloElement.one(n)
    e2 = embed_like(e_itheta, n) ** 2
    rr = CycloElement.from_rational(n, Fraction(r))
    root = embed_like(e_itheta, n) * rr
    pairs = [
        (ProjPoint(one), k),
        (ProjPoint(-(rr * rr)), k),
        (ProjPoint(root), k),
        (ProjPoint(-root), k),
        (ProjPoint(one.zero_like()), -3 * k),
    ]
    lead = (lam ** k).inv()
    return KForm(RationalMap.from_factored(lead, pairs), k)


def embed_like(x: CycloElement, n: int) -> CycloElement:
    from .cyclo import embed_conductor

    return embed_conductor(x, n) if x.n != n else x


def ejemplo2_preconditions(r: Fraction, e_itheta: CycloElement,
                           lam: CycloElement):
    """Exact checks for the non-definability family; raises naming the failed
    clause, returns the three pairwise-distinct cross-ratio classes."""
    r = Fraction(r)
    if not r > 1:
        raise PreconditionViolated("r > 1")
    n = lam.n
    one = CycloElement.one(n)
    e1 = embed_like(e_itheta, n)
    e2 = e1 * e1
    if e2 == e2.conj():
        raise PreconditionViolated("e^(2 i theta) != e^(-2 i theta)")
    if e2 == -one:
        raise PreconditionViolated("e^(2 i theta) != -1")
    if lam != -lam.conj() * e2:
        raise PreconditionViolated("lam = -conj(lam) e^(2 i theta)")
    rr = CycloElement.from_rational(n, r)
    root = e1 * rr
    zero = one.zero_like()
    subsets = [
        (ProjPoint(-(rr * rr)), ProjPoint(zero), ProjPoint(one), INF),
        (ProjPoint(-root), ProjPoint(zero), ProjPoint(root), INF),
        (ProjPoint(one), ProjPoint(root), ProjPoint(-(rr * rr)), ProjPoint(-root)),
    ]
    classes = []
    for p1, p2, p3, p4 in subsets:
        value = cross_ratio(p1, p2, p3, p4, one)
        if value.is_inf:
            raise PreconditionViolated("degenerate cross-ratio")
        classes.append(j_invariant(value.x))
    if classes[0] == classes[1] or classes[0] == classes[2] or classes[1] == classes[2]:
        raise PreconditionViolated("the three circle classes must be distinct (r != r_theta)")
    return classes
