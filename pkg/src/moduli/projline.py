"""The projective line and PGL2 over an exact field: points, Moebius maps,
cross-ratio, three-point transport, divisors with pull-back."""

from __future__ import annotations

from .errors import DegenerateTriple, SingularMatrix
from .polys import Poly


class ProjPoint:
    """A point of P^1 in canonical form: finite value x, or infinity."""

    __slots__ = ("x",)

    def __init__(self, x=None):
        self.x = x  # None encodes infinity

    @classmethod
    def of(cls, x):
        return cls(x)

    @classmethod
    def infinity(cls):
        return cls(None)

    @property
    def is_inf(self):
        return self.x is None

    def __eq__(self, other):
        if not isinstance(other, ProjPoint):
            return NotImplemented
        if self.is_inf or other.is_inf:
            return self.is_inf and other.is_inf
        return self.x == other.x

    def __hash__(self):
        return hash(None) if self.is_inf else hash(self.x)

    def sort_key(self):
        if self.is_inf:
            return (1, ())
        return (0, self.x.sort_key())

    def galois(self, a):
        return self if self.is_inf else ProjPoint(self.x.galois(a))

    def conj(self):
        return self if self.is_inf else ProjPoint(self.x.conj())

    def __repr__(self):
        return "inf" if self.is_inf else f"[{self.x}]"


INF = ProjPoint.infinity()


class MoebiusMap:
    """An element of PGL2: z -> (a z + b)/(c z + d), stored projectively
    normalized (first nonzero entry scaled to 1)."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d):
        det = a * d - b * c
        if det.is_zero():
            raise SingularMatrix("degenerate matrix")
        lead = next(e for e in (a, b, c, d) if not e.is_zero())
        s = lead.inv()
        self.a, self.b, self.c, self.d = a * s, b * s, c * s, d * s

    @classmethod
    def identity(cls, one):
        zero = one.zero_like()
        return cls(one.one_like(), zero, zero, one.one_like())

    @classmethod
    def scaling(cls, t):
        zero = t.zero_like()
        return cls(t, zero, zero, t.one_like())

    @classmethod
    def translation(cls, b):
        one = b.one_like()
        return cls(one, b, b.zero_like(), one)

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def det(self):
        return self.a * self.d - self.b * self.c

    def compose(self, other):
        """self after other: (self . other)(z) = self(other(z))."""
        a1, b1, c1, d1 = self.entries()
        a2, b2, c2, d2 = other.entries()
        return MoebiusMap(
            a1 * a2 + b1 * c2,
            a1 * b2 + b1 * d2,
            c1 * a2 + d1 * c2,
            c1 * b2 + d1 * d2,
        )

    def inverse(self):
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def apply(self, p: ProjPoint) -> ProjPoint:
        if p.is_inf:
            num, den = self.a, self.c
        else:
            num = self.a * p.x + self.b
            den = self.c * p.x + self.d
        if den.is_zero():
            return ProjPoint.infinity()
        return ProjPoint(num / den)

    def num_poly(self) -> Poly:
        return Poly([self.b, self.a])

    def den_poly(self) -> Poly:
        return Poly([self.d, self.c])

    def is_identity(self):
        return self == MoebiusMap.identity(self.a if not self.a.is_zero() else self.b)

    def galois(self, a: int):
        return MoebiusMap(*(e.galois(a) for e in self.entries()))

    def conj(self):
        return MoebiusMap(*(e.conj() for e in self.entries()))

    def __eq__(self, other):
        if not isinstance(other, MoebiusMap):
            return NotImplemented
        return self.entries() == other.entries()

    def __hash__(self):
        return hash(self.entries())

    def sort_key(self):
        return tuple(e.sort_key() for e in self.entries())

    def __repr__(self):
        return f"Moebius[({self.a})z + ({self.b}) / ({self.c})z + ({self.d})]"


def moebius_from_rows(rows):
    return MoebiusMap(rows[0][0], rows[0][1], rows[1][0], rows[1][1])


def _to_inf_zero_one(p1, p2, p3, one):
    """The unique T with T(p1)=inf, T(p2)=0, T(p3)=1."""
    zero = one.zero_like()
    if len({p1, p2, p3}) != 3:
        raise DegenerateTriple("points must be pairwise distinct")
    if p1.is_inf:
        return MoebiusMap(one, -p2.x, zero, p3.x - p2.x)
    if p2.is_inf:
        return MoebiusMap(zero, p3.x - p1.x, one, -p1.x)
    if p3.is_inf:
        return MoebiusMap(one, -p2.x, one, -p1.x)
    return MoebiusMap(p3.x - p1.x, -p2.x * (p3.x - p1.x),
                      p3.x - p2.x, -p1.x * (p3.x - p2.x))


def three_point_map(src, dst, one) -> MoebiusMap:
    """The unique Moebius map sending src[i] to dst[i] (triples distinct)."""
    A = _to_inf_zero_one(src[0], src[1], src[2], one)
    B = _to_inf_zero_one(dst[0], dst[1], dst[2], one)
    return B.inverse().compose(A)


def cross_ratio(p1, p2, p3, p4, one) -> ProjPoint:
    """The invariant sending (p1,p2,p3) to (inf,0,1), evaluated at p4."""
    T = _to_inf_zero_one(p1, p2, p3, one)
    return T.apply(p4)


class Divisor:
    """Formal sum of points with nonzero integer multiplicities."""

    __slots__ = ("items",)

    def __init__(self, items):
        merged = {}
        order = []
        for p, m in items:
            if p in merged:
                merged[p] += m
            else:
                merged[p] = m
                order.append(p)
        cleaned = [(p, merged[p]) for p in order if merged[p] != 0]
        cleaned.sort(key=lambda pm: pm[0].sort_key())
        self.items = tuple(cleaned)

    @classmethod
    def zero(cls):
        return cls([])

    def degree(self):
        return sum(m for _, m in self.items)

    def support(self):
        return [p for p, _ in self.items]

    def multiplicity(self, p):
        for q, m in self.items:
            if q == p:
                return m
        return 0

    def __add__(self, other):
        return Divisor(list(self.items) + list(other.items))

    def __neg__(self):
        return Divisor([(p, -m) for p, m in self.items])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k: int):
        return Divisor([(p, k * m) for p, m in self.items])

    def map_points(self, fn):
        return Divisor([(fn(p), m) for p, m in self.items])

    def galois(self, a):
        return self.map_points(lambda p: p.galois(a))

    def __eq__(self, other):
        if not isinstance(other, Divisor):
            return NotImplemented
        return self.items == other.items

    def __hash__(self):
        return hash(self.items)

    def __iter__(self):
        return iter(self.items)

    def __len__(self):
        return len(self.items)

    def __repr__(self):
        body = ", ".join(f"({p}, {m})" for p, m in self.items)
        return f"div {{ {body} }}"


def pullback_divisor(T: MoebiusMap, D: Divisor) -> Divisor:
    """Divisor transport under pull-back: points move by T^(-1)."""
    Tinv = T.inverse()
    return D.map_points(Tinv.apply)
