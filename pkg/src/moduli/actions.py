"""Right actions of PGL2 on rational maps: conjugation, k-form pull-back and
its projective variant; equivalence deciders with exact witnesses;
automorphism groups and their abstract types."""

from __future__ import annotations

from .cyclo import (
    CycloElement,
    QuadExtElem,
    QuadExtField,
    certify_nonsquare,
    embed_conductor,
    root_extract,
    roots_of_unity,
)
from .errors import (
    DegenerateTriple,
    NotAGroup,
    SingularMatrix,
    UnclassifiedOrder,
    UnsupportedConfiguration,
    WeightMismatch,
)
from .polys import Poly
from .projline import INF, Divisor, MoebiusMap, ProjPoint, pullback_divisor, three_point_map
from .ratmap import KForm, RationalMap, fixed_marked_set, roots_in_field


class ActionTag:
    """One of chi_inf (conjugation), chi_k (pull-back), proj_chi_k."""

    __slots__ = ("kind", "k")

    def __init__(self, kind, k=None):
        assert kind in ("chi_inf", "chi_k", "proj_chi_k")
        if kind != "chi_inf":
            assert k is not None
        self.kind = kind
        self.k = k

    @classmethod
    def chi_inf(cls):
        return cls("chi_inf")

    @classmethod
    def chi_k(cls, k):
        return cls("chi_k", k)

    @classmethod
    def proj_chi_k(cls, k):
        return cls("proj_chi_k", k)

    @property
    def is_projective(self):
        return self.kind == "proj_chi_k"

    def __eq__(self, other):
        return isinstance(other, ActionTag) and (self.kind, self.k) == (other.kind, other.k)

    def __hash__(self):
        return hash((self.kind, self.k))

    def __repr__(self):
        return self.kind if self.kind == "chi_inf" else f"{self.kind}({self.k})"


class ExtensionDescriptor:
    """Defining data t^power = radicand for a witness entry outside the field."""

    __slots__ = ("power", "radicand")

    def __init__(self, power, radicand):
        self.power = power
        self.radicand = radicand

    def __repr__(self):
        return f"t^{self.power} - ({self.radicand})"


class EquivWitness:
    """T (and a scalar for the projective action) carrying source to target."""

    __slots__ = ("t", "scalar", "extension")

    def __init__(self, t, scalar=None, extension=None):
        self.t = t
        self.scalar = scalar
        self.extension = extension

    @property
    def in_field(self):
        return self.extension is None and not isinstance(self.t.a, QuadExtElem)

    def __repr__(self):
        parts = [f"T={self.t!r}"]
        if self.scalar is not None:
            parts.append(f"scalar={self.scalar}")
        if self.extension is not None:
            parts.append(f"extension={self.extension!r}")
        return "Witness(" + ", ".join(parts) + ")"


class AutGroup:
    """Finite list of Moebius maps, or a one-parameter family description."""

    __slots__ = ("elements", "one_parameter")

    def __init__(self, elements=None, one_parameter=None):
        self.elements = elements
        self.one_parameter = one_parameter

    @property
    def is_finite(self):
        return self.elements is not None

    def __repr__(self):
        if self.is_finite:
            return f"AutGroup({len(self.elements)} elements)"
        return f"AutGroup(one-parameter: {self.one_parameter})"


# -- applying actions ---------------------------------------------------


def apply_action(chi: ActionTag, T: MoebiusMap, R: RationalMap, scalar=None) -> RationalMap:
    """chi(T)(R), exactly; the optional scalar multiplies the result
    (projective action witnesses)."""
    if chi.kind == "chi_inf":
        out = R.compose_moebius(T).postcompose_moebius(T.inverse())
    else:
        out = _apply_chi_k(T, R, chi.k)
    if scalar is not None:
        out = out.scale_by(scalar)
    return out


def _apply_chi_k(T: MoebiusMap, R: RationalMap, k: int) -> RationalMap:
    R.require_factored()
    form_div = R.map_divisor() + Divisor([(INF, -2 * k)])
    new_form = pullback_divisor(T, form_div)
    new_map_div = new_form + Divisor([(INF, 2 * k)])
    one = T.a.one_like() if not T.a.is_zero() else T.b.one_like()
    det = T.det()
    finite = [(p, m) for p, m in new_map_div if not p.is_inf]
    for q in _sample_points(one):
        if any(p.x == q for p, _ in finite):
            continue
        den = T.c * q + T.d
        if den.is_zero():
            continue
        img = T.apply(ProjPoint(q))
        val = R.evaluate_extended(img)
        if val.is_inf or val.x.is_zero():
            continue
        tprime = det / (den * den)
        target = val.x * tprime**k
        base = one
        for p, m in finite:
            base = base * (q - p.x) ** m
        lead = target / base
        return RationalMap.from_factored(lead, list(new_map_div))
    raise AssertionError("no usable sample point found")


def chi_k_coeffwise(T: MoebiusMap, R: RationalMap, k: int) -> RationalMap:
    """chi_k(T)(R) straight from coefficients: (R . T) * (T')^k."""
    comp = R.compose_moebius(T)
    det = T.det()
    den = T.den_poly()
    num_factor = den * den
    P, Q = comp.P, comp.Q
    if k >= 0:
        P = P.scale(det**k)
        for _ in range(k):
            Q = Q * num_factor
    else:
        Q = Q.scale(det**(-k))
        for _ in range(-k):
            P = P * num_factor
    return RationalMap.from_coeffs(P, Q)


def _sample_points(one):
    yield one.zero_like()
    q = one
    while True:
        yield q
        yield -q
        q = q + one


def unify_conductor(*maps):
    """Embed rational maps over cyclotomic fields into a common conductor."""
    ns = [R.conductor for R in maps]
    m = 1
    for n in ns:
        m = m * n // __import__("math").gcd(m, n)
    return tuple(R.embed(m) for R in maps)


def lift_map_to_quadext(R: RationalMap, field: QuadExtField) -> RationalMap:
    emb = lambda x: field.of(embed_conductor(x, field.n))
    out = RationalMap(R.P.map_coeffs(emb), R.Q.map_coeffs(emb))
    if R.has_factored():
        out.lead = emb(R.lead)
        out.div_map = R.div_map.map_points(
            lambda p: p if p.is_inf else ProjPoint(emb(p.x)))
    return out


def lift_moebius_to_quadext(T: MoebiusMap, field: QuadExtField) -> MoebiusMap:
    emb = lambda x: field.of(embed_conductor(x, field.n))
    return MoebiusMap(*(emb(e) for e in T.entries()))


# -- chi_k equivalence ---------------------------------------------------


def equiv_chi_k(omega_R: KForm, omega_S: KForm):
    """A witness T with chi_k(T)(R) = S, or None."""
    return _equiv_forms(omega_R, omega_S, projective=False)


def equiv_proj_chi_k(omega_R: KForm, omega_S: KForm):
    """A witness (T, scalar) with S = scalar * chi_k(T)(R), or None."""
    return _equiv_forms(omega_R, omega_S, projective=True)


def _equiv_forms(omega_R, omega_S, projective):
    if omega_R.k != omega_S.k:
        raise WeightMismatch(f"k = {omega_R.k} vs {omega_S.k}")
    k = omega_R.k
    R, S = unify_conductor(omega_R.R, omega_S.R)
    R.require_factored()
    S.require_factored()
    DR = KForm(R, k).divisor()
    DS = KForm(S, k).divisor()
    if sorted(m for _, m in DR) != sorted(m for _, m in DS):
        return None
    if len(DR) >= 3:
        found = _bijection_witnesses(R, S, DR, DS, k, projective, first_only=True)
        return found[0] if found else None
    return _small_support_equiv(R, S, DR, DS, k, projective)


def _bijection_witnesses(R, S, DR, DS, k, projective, first_only=False,
                         collect=None):
    """Witness search through order-preserving support bijections built from
    a base triple of supp(omega_S) and three-point transport."""
    one = R.one()
    base = DS.support()[:3]
    base_orders = [DS.multiplicity(p) for p in base]
    cands = [[p for p, m in DR if m == o] for o in base_orders]
    out = []
    for r1 in cands[0]:
        for r2 in cands[1]:
            if r2 == r1:
                continue
            for r3 in cands[2]:
                if r3 == r1 or r3 == r2:
                    continue
                try:
                    T = three_point_map(tuple(base), (r1, r2, r3), one)
                except SingularMatrix:
                    continue
                w = _verify_form_witness(T, R, S, k, projective)
                if w is not None:
                    out.append(w)
                    if first_only:
                        out.sort(key=lambda v: v.t.sort_key())
                        return out
    out.sort(key=lambda v: v.t.sort_key())
    return out


def _verify_form_witness(T, R, S, k, projective):
    try:
        A = apply_action(ActionTag.chi_k(k), T, R)
    except AssertionError:
        return None
    if A == S:
        return EquivWitness(T, scalar=R.one() if projective else None)
    if projective:
        lam = _proportionality(A, S)
        if lam is not None:
            return EquivWitness(T, scalar=lam)
    return None


def _proportionality(A, S):
    """lam with S = lam * A, or None (both maps normalized)."""
    if A.P != S.P:
        return None
    if A.Q.degree != S.Q.degree:
        return None
    j = next(i for i, c in enumerate(A.Q.coeffs) if not c.is_zero())
    if S.Q.coeff(j, like=A.one()).is_zero():
        return None
    lam = A.Q.coeffs[j] / S.Q.coeffs[j]
    if S.Q.scale(lam) == A.Q:
        return lam
    return None


def _normal_position(R, k, D):
    """Transport a small-support form so its divisor sits inside {0, inf}.

    Returns (V, reduced_map, m) where reduced = chi_k(V)(R) = c * z^m.
    """
    one = R.one()
    zero = one.zero_like()
    supp = D.support()
    if len(supp) == 0:
        V = MoebiusMap.identity(one)
        return V, R, 0
    if len(supp) == 1:
        p = supp[0]
        m0 = D.multiplicity(p)
        if m0 < 0:
            # pole goes to infinity
            if p.is_inf:
                V = MoebiusMap.identity(one)
            else:
                V = MoebiusMap(p.x, one, one, zero)  # V(inf) = p, V(0)=?, ok
            red = apply_action(ActionTag.chi_k(k), V, R)
            return V, red, 0
        if p.is_inf:
            V = MoebiusMap(zero, one, one, zero)  # 1/z sends 0 -> inf
        else:
            V = MoebiusMap(one, p.x, zero, one)  # z + p sends 0 -> p
        red = apply_action(ActionTag.chi_k(k), V, R)
        return V, red, m0
    # two support points: the more negative order goes to infinity
    (p1, m1), (p2, m2) = D.items
    if (m1, p1.sort_key()) <= (m2, p2.sort_key()):
        p_inf, p_zero, m0 = p1, p2, m2
    else:
        p_inf, p_zero, m0 = p2, p1, m1
    V = three_point_map((ProjPoint(zero), INF, ProjPoint(one)),
                        (p_zero, p_inf, _third_point(p_zero, p_inf, one)), one)
    red = apply_action(ActionTag.chi_k(k), V, R)
    return V, red, m0


def _third_point(p, q, one):
    for s in _sample_points(one):
        cand = ProjPoint(s)
        if cand != p and cand != q:
            return cand
    raise AssertionError


def _small_support_equiv(R, S, DR, DS, k, projective):
    VR, redR, mR = _normal_position(R, k, DR)
    VS, redS, mS = _normal_position(S, k, DS)
    c1, c2 = redR.lead, redS.lead
    one = R.one()
    witnesses = []

    def finish(D):
        T = VR.compose(D).compose(VS.inverse())
        return _verify_form_witness(T, R, S, k, projective)

    families = []
    if mS == mR:
        families.append(("lam_z", c2 / c1))
    if mS == -mR - 2 * k:
        swap_val = c2 / c1
        if k % 2 == 1:
            swap_val = -swap_val
        families.append(("lam_over_z", swap_val))
    e = mR + k
    zero = one.zero_like()
    for family, value in families:
        if projective:
            lam = one
            D = (MoebiusMap.scaling(lam) if family == "lam_z"
                 else MoebiusMap(zero, lam, one, zero))
            T = VR.compose(D).compose(VS.inverse())
            w = _verify_form_witness(T, R, S, k, True)
            if w is not None:
                witnesses.append(w)
            continue
        if e == 0:
            if value == one:
                D = (MoebiusMap.scaling(one) if family == "lam_z"
                     else MoebiusMap(zero, one, one, zero))
                w = finish(D)
                if w is not None:
                    witnesses.append(w)
            continue
        target = value if e > 0 else value.inv()
        res = root_extract(target, abs(e))
        if res.in_field:
            lam = res.value
            D = (MoebiusMap.scaling(lam) if family == "lam_z"
                 else MoebiusMap(zero, lam, one, zero))
            w = finish(D)
            if w is not None:
                witnesses.append(w)
        elif abs(e) == 2 and certify_nonsquare(target):
            field = QuadExtField(one.n, target)
            lam = field.sqrt_d()
            Rq = lift_map_to_quadext(R, field)
            Sq = lift_map_to_quadext(S, field)
            onq = field.of(1)
            zq = field.of(0)
            D = (MoebiusMap.scaling(lam) if family == "lam_z"
                 else MoebiusMap(zq, lam, onq, zq))
            Tq = (lift_moebius_to_quadext(VR, field).compose(D)
                  .compose(lift_moebius_to_quadext(VS, field).inverse()))
            if apply_action(ActionTag.chi_k(k), Tq, Rq) == Sq:
                witnesses.append(EquivWitness(Tq, extension=ExtensionDescriptor(2, target)))
        else:
            # certified over the algebraic closure by the monomial reduction
            D = MoebiusMap.scaling(one) if family == "lam_z" else MoebiusMap(zero, one, one, zero)
            T = VR.compose(D).compose(VS.inverse())
            witnesses.append(
                EquivWitness(T, extension=ExtensionDescriptor(abs(e), target)))
    if not witnesses:
        return None
    in_field = [w for w in witnesses if w.extension is None]
    pool = in_field or witnesses
    pool.sort(key=lambda w: w.t.sort_key())
    return pool[0]


# -- chi_inf equivalence --------------------------------------------------


class _TaggedPoint:
    __slots__ = ("point", "sig")

    def __init__(self, point, sig):
        self.point = point
        self.sig = sig


class _MarkedData:
    """In-field marked points of a map, with per-category completeness flags
    (a category is complete when its defining polynomial split entirely)."""

    __slots__ = ("points", "fixed_complete", "crit_complete", "aug_complete")

    def __init__(self, points, fixed_complete, crit_complete, aug_complete):
        self.points = points
        self.fixed_complete = fixed_complete
        self.crit_complete = crit_complete
        self.aug_complete = aug_complete

    @property
    def complete(self):
        return self.fixed_complete and self.crit_complete and self.aug_complete


def _marked_data(R, rounds=3) -> _MarkedData:
    from .ratmap import local_degree, multiplier_at_fixed

    one = R.one()
    entries = {}

    fixp = R.P - Poly.x_poly(one) * R.Q
    froots, leftover_f = roots_in_field(fixp)
    fixed_complete = leftover_f is None
    fixed = {}
    for r, m in froots:
        fixed[ProjPoint(r)] = m
    if R.P.degree > R.Q.degree:
        fixed[INF] = (R.degree + 1) - fixp.degree

    crit = R.P.derivative() * R.Q - R.P * R.Q.derivative()
    croots, leftover_c = roots_in_field(crit)
    crit_complete = leftover_c is None
    critical = {}
    for r, _ in croots:
        p = ProjPoint(r)
        critical[p] = local_degree(R, p)
    e_inf = local_degree(R, INF)
    if e_inf >= 2:
        critical[INF] = e_inf

    for p in sorted(set(fixed) | set(critical), key=lambda q: q.sort_key()):
        fm = fixed.get(p, 0)
        mult_key = multiplier_at_fixed(R, p).sort_key() if fm else None
        ld = critical.get(p, 1)
        entries[p] = _TaggedPoint(p, ("base", fm > 0, fm, mult_key, ld))

    # preimage augmentation when fewer than three points are available
    aug_complete = True
    for level in range(1, rounds + 1):
        if len(entries) >= 3:
            break
        new = {}
        for tp in sorted(entries.values(), key=lambda t: t.point.sort_key()):
            pre, split_ok = _preimages(R, tp.point)
            if not split_ok:
                aug_complete = False
            for q, e in pre:
                if q in entries or q in new:
                    continue
                new[q] = _TaggedPoint(q, ("pre", level, tp.sig, e))
        if not new:
            break
        entries.update(new)
    points = sorted(entries.values(), key=lambda t: t.point.sort_key())
    return _MarkedData(points, fixed_complete, crit_complete, aug_complete)


def _preimages(R, p):
    """In-field preimages of a point with local degrees; flag = split fully."""
    from .ratmap import local_degree

    if p.is_inf:
        poly = R.Q
    else:
        poly = R.P - R.Q.scale(p.x)
    out = []
    if R.evaluate_extended(INF) == p:
        out.append((INF, local_degree(R, INF)))
    if poly.is_zero() or poly.degree < 1:
        return out, True
    roots, leftover = roots_in_field(poly)
    out += [(ProjPoint(r), m) for r, m in roots]
    return out, leftover is None


def equiv_chi_inf(R: RationalMap, S: RationalMap):
    """A witness T with T^(-1) . R . T = S, or None (degree >= 2)."""
    found = _chi_inf_witnesses(R, S, first_only=True)
    return found[0] if found else None


def _chi_inf_witnesses(R, S, first_only):
    if R.degree != S.degree:
        return []
    if R.degree < 2:
        raise UnsupportedConfiguration("conjugation decider needs degree >= 2; "
                                       "degree <= 1 has closed forms")
    R, S = unify_conductor(R, S)
    one = R.one()
    mR = _marked_data(R)
    mS = _marked_data(S)
    complete = mR.complete and mS.complete
    out = []
    if len(mR.points) >= 3 and len(mS.points) >= 3:
        sig_map = {}
        for tp in mR.points:
            sig_map.setdefault(tp.sig, []).append(tp.point)
        base = mS.points[:3]
        cands = [sig_map.get(tp.sig, []) for tp in base]
        for r1 in cands[0]:
            for r2 in cands[1]:
                if r2 == r1:
                    continue
                for r3 in cands[2]:
                    if r3 in (r1, r2):
                        continue
                    try:
                        T = three_point_map(tuple(tp.point for tp in base),
                                            (r1, r2, r3), one)
                    except (SingularMatrix, DegenerateTriple):
                        continue
                    if apply_action(ActionTag.chi_inf(), T, R) == S:
                        out.append(EquivWitness(T))
                        if first_only:
                            return out
        if out or complete:
            out.sort(key=lambda w: w.t.sort_key())
            return out
    res = _anchor_parametric(R, S, mR, mS, first_only)
    if res is not None:
        return res
    if complete:
        return []
    raise UnsupportedConfiguration(
        "marked data does not determine the conjugation search in-field")


def _closure_safe_anchors(mR: _MarkedData, mS: _MarkedData):
    """Forced point pairs (s, r): signatures unique within a category whose
    in-field list is provably the full list over the closure."""
    pairs = []
    use_crit = mR.crit_complete and mS.crit_complete
    use_fixed = mR.fixed_complete and mS.fixed_complete
    sigR, sigS = {}, {}
    for data, store in ((mR, sigR), (mS, sigS)):
        for tp in data.points:
            if tp.sig[0] != "base":
                continue
            _, is_fixed, fm, mult_key, ld = tp.sig
            if use_crit and ld >= 2:
                store.setdefault(("crit", ld, is_fixed, mult_key), []).append(tp.point)
            elif use_fixed and is_fixed:
                store.setdefault(("fix", fm, mult_key), []).append(tp.point)
    forced = []
    for sig in sorted(sigS):
        if len(sigS[sig]) == 1 and len(sigR.get(sig, [])) == 1:
            forced.append((sigS[sig][0], sigR[sig][0]))
    return forced


def _anchor_parametric(R, S, mR, mS, first_only):
    """T = V_R . (a z) . V_S^(-1) with two anchors forced by closure-safe
    unique signatures; complete over the algebraic closure."""
    one = R.one()
    zero = one.zero_like()
    forced = _closure_safe_anchors(mR, mS)
    if len(forced) < 2:
        return None
    (s1, r1), (s2, r2) = forced[0], forced[1]
    base = (ProjPoint(zero), INF, ProjPoint(one))
    VS = three_point_map(base, (s1, s2, _third_point(s1, s2, one)), one)
    VR = three_point_map(base, (r1, r2, _third_point(r1, r2, one)), one)
    Rp = apply_action(ActionTag.chi_inf(), VR, R)
    Sp = apply_action(ActionTag.chi_inf(), VS, S)
    out = []
    sols, closure_nonempty, leftover = _solve_scaling_conj(Rp, Sp)
    for lam in sols:
        D = MoebiusMap.scaling(lam)
        T = VR.compose(D).compose(VS.inverse())
        if apply_action(ActionTag.chi_inf(), T, R) == S:
            out.append(EquivWitness(T))
            if first_only:
                return out
    if not out and closure_nonempty:
        # equivalent over the closure; expose the defining factor
        out.append(EquivWitness(VR.compose(VS.inverse()),
                                extension=ExtensionDescriptor("root of", leftover)))
    out.sort(key=lambda w: (w.extension is not None, w.t.sort_key()))
    return out


def _solve_scaling_conj(Rp, Sp):
    """Solve (az)^(-1) . Rp . (az) = Sp: a polynomial system in a, reduced by
    gcd; complete over the algebraic closure.

    Returns (in-field nonzero solutions, closure-has-solutions, leftover factor).
    """
    one = Rp.one()
    eqs = _conj_equations(Rp, Sp, one)
    g = None
    for eq in eqs:
        g = eq if g is None else g.gcd(eq)
        if g.degree == 0:
            return [], False, None
    if g is None:
        # identical maps: every a works; use a = 1
        return [one], True, None
    if g.is_zero():
        return [one], True, None
    v = g.valuation()
    if v:
        g = Poly(g.coeffs[v:])
    if g.degree == 0:
        return [], False, None
    roots, leftover = roots_in_field(g)
    sols = [r for r, _ in roots if not r.is_zero()]
    return sols, True, leftover


def _conj_equations(Rp, Sp, one):
    """Equations in a (one Poly per z-power) for P(az) Qs(z) = a Ps(z) Q(az)."""
    P, Q = Rp.P, Rp.Q
    Ps, Qs = Sp.P, Sp.Q
    d = max(P.degree, Q.degree)
    zero = one.zero_like()

    def a_poly(pairs):
        coeffs = [zero] * (d + 2)
        for coef, apow in pairs:
            coeffs[apow] = coeffs[apow] + coef
        return coeffs

    lhs, rhs = {}, {}
    for i in range(P.degree + 1):
        pc = P.coeff(i, like=one)
        if pc.is_zero():
            continue
        for j in range(Qs.degree + 1):
            qc = Qs.coeff(j, like=one)
            if not qc.is_zero():
                lhs.setdefault(i + j, []).append((pc * qc, i))
    for i in range(Q.degree + 1):
        qc = Q.coeff(i, like=one)
        if qc.is_zero():
            continue
        for j in range(Ps.degree + 1):
            pc = Ps.coeff(j, like=one)
            if not pc.is_zero():
                rhs.setdefault(i + j, []).append((qc * pc, i + 1))
    eqs = []
    for zpow in sorted(set(lhs) | set(rhs)):
        l = a_poly(lhs.get(zpow, []))
        r = a_poly(rhs.get(zpow, []))
        diff = Poly([x - y for x, y in zip(l, r)])
        if not diff.is_zero():
            eqs.append(diff)
    return eqs


# -- automorphism groups ---------------------------------------------------


def aut_group(chi: ActionTag, R: RationalMap) -> AutGroup:
    """All chi-automorphisms of R (or a one-parameter description)."""
    if chi.kind == "chi_inf":
        wits = _chi_inf_witnesses(R, R, first_only=False)
        elems = sorted({w.t for w in wits if w.extension is None},
                       key=lambda t: t.sort_key())
        _check_group(elems)
        return AutGroup(elements=elems)
    k = chi.k
    R.require_factored()
    D = KForm(R, k).divisor()
    if len(D) >= 3:
        if chi.is_projective:
            wits = _bijection_witnesses(R, R, D, D, k, projective=True)
        else:
            wits = _bijection_witnesses(R, R, D, D, k, projective=False)
        elems = sorted({w.t for w in wits}, key=lambda t: t.sort_key())
        _check_group(elems)
        return AutGroup(elements=elems)
    return _small_support_aut(chi, R, D, k)


def _small_support_aut(chi, R, D, k):
    VR, red, m = _normal_position(R, k, D)
    one = R.one()
    zero = one.zero_like()
    e = m + k
    if chi.is_projective:
        if len(D) <= 1:
            return AutGroup(one_parameter="affine maps a*z + b (scalar action)")
        return AutGroup(one_parameter="a*z for every nonzero a (scalar action)"
                        + ("; with the swap b/z" if D.items[0][1] == D.items[1][1] else ""))
    if len(D) == 0:
        return AutGroup(one_parameter="all of PGL2 (constant 0-form)")
    if len(D) == 1:
        # affine stabilizer a^k = 1 with free translation part
        return AutGroup(one_parameter=f"z + b plus scalings a*z with a^{abs(k)} = 1")
    if e == 0:
        desc = "a*z for every nonzero a"
        if k % 2 == 0:
            desc += "; with every swap b/z"
        return AutGroup(one_parameter=desc)
    # torsion case: lambda^e = 1; enlarge the conductor so mu_e is inside
    need = abs(e)
    n = one.n
    m_target = n * need // __import__("math").gcd(n, need)
    Rbig = R.embed(m_target)
    VRb = MoebiusMap(*(embed_conductor(x, m_target) for x in VR.entries()))
    elems = []
    oneb = Rbig.one()
    zerob = oneb.zero_like()
    for u in roots_of_unity(m_target):
        if not (u**need == oneb):
            continue
        D_mat = MoebiusMap.scaling(u)
        T = VRb.compose(D_mat).compose(VRb.inverse())
        if apply_action(ActionTag.chi_k(k), T, Rbig) == Rbig:
            elems.append(T)
    # swap family applies only when the two orders coincide (m = -m-2k)
    elems = sorted(set(elems), key=lambda t: t.sort_key())
    _check_group(elems)
    return AutGroup(elements=elems)


def _check_group(elems):
    if not elems:
        raise NotAGroup("empty automorphism list")
    idx = {t: i for i, t in enumerate(elems)}
    for a in elems:
        if a.inverse() not in idx:
            raise NotAGroup("not closed under inverse")
        for b in elems:
            if a.compose(b) not in idx:
                raise NotAGroup("not closed under composition")


def identify_group_type(G: AutGroup):
    """Abstract type by element-order statistics (characteristic-zero list)."""
    if not G.is_finite:
        return ("OneParameter", None)
    elems = G.elements
    _check_group(elems)
    n = len(elems)
    orders = {}
    for t in elems:
        o = _element_order(t, n)
        orders[o] = orders.get(o, 0) + 1
    if orders.get(n):
        return ("Zn", n)
    if n % 2 == 0:
        m = n // 2
        dihedral = {1: 1}
        for d in range(2, m + 1):
            if m % d == 0:
                dihedral[d] = dihedral.get(d, 0) + _phi_small(d)
        dihedral[2] = dihedral.get(2, 0) + m
        if orders == dihedral:
            return ("Dn", m)
    if n == 12 and orders == {1: 1, 2: 3, 3: 8}:
        return ("A4", None)
    if n == 24 and orders == {1: 1, 2: 9, 3: 8, 4: 6}:
        return ("S4", None)
    if n == 60 and orders == {1: 1, 2: 15, 3: 20, 5: 24}:
        return ("A5", None)
    raise UnclassifiedOrder(f"order statistics {sorted(orders.items())} match no "
                            "characteristic-zero subgroup of PGL2")


def _element_order(t: MoebiusMap, bound: int) -> int:
    acc = t
    for o in range(1, bound + 1):
        if acc.is_identity():
            return o
        acc = acc.compose(t)
    raise NotAGroup(f"element order exceeds group size {bound}")


def _phi_small(d):
    from .cyclo import euler_phi
    return euler_phi(d)
