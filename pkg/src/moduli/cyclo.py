"""Exact arithmetic in cyclotomic fields Q(zeta_n) and quadratic extensions.

Elements are stored in the power basis 1, z, ..., z^(phi(n)-1) modulo the
n-th cyclotomic polynomial, with arbitrary-precision rational coordinates.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import mpmath

from .errors import (
    ConductorMismatch,
    DivisionByZero,
    NotDivisible,
    NotReal,
    ZeroRadicand,
)

Rational = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    assert n >= 1
    result = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _poly_trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _intpoly_divexact(a, b):
    # exact division of integer polynomials, ascending coefficients
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    for i in range(len(q) - 1, -1, -1):
        coef = a[i + len(b) - 1] // b[-1]
        q[i] = coef
        for j, bj in enumerate(b):
            a[i + j] -= coef * bj
    assert not any(a), "division was not exact"
    return q


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple:
    """Coefficients of Phi_n, ascending, as a tuple of ints (monic)."""
    if n == 1:
        return (-1, 1)
    poly = [-1] + [0] * (n - 1) + [1]  # t^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly = _intpoly_divexact(poly, cyclotomic_polynomial(d))
    return tuple(poly)


@lru_cache(maxsize=None)
def _reduction_table(n: int) -> tuple:
    """Power basis vectors of t^k mod Phi_n for 0 <= k < max(n, 2*phi-1)."""
    phi = euler_phi(n)
    top = max(n, 2 * phi - 1)
    phin = cyclotomic_polynomial(n)
    rows = []
    cur = [_ZERO] * phi
    cur[0] = _ONE
    for _ in range(top):
        rows.append(tuple(cur))
        # multiply by t, reduce by Phi_n (monic)
        nxt = [_ZERO] + cur[:-1]
        lead = cur[-1]
        if lead != 0:
            for i in range(phi):
                nxt[i] -= lead * phin[i]
        cur = nxt
    return tuple(rows)


@lru_cache(maxsize=None)
def _galois_table(n: int, a: int) -> tuple:
    """Images of the power basis under zeta -> zeta^a."""
    phi = euler_phi(n)
    table = _reduction_table(n)
    return tuple(table[(a * i) % n] for i in range(phi))


def units_mod(n: int) -> tuple:
    if n == 1:
        return (1,)
    return tuple(a for a in range(1, n) if math.gcd(a, n) == 1)


class CycloElement:
    """An element of Q(zeta_n) in the power basis."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs):
        phi = euler_phi(n)
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != phi:
            raise ValueError(f"need {phi} coordinates for conductor {n}")
        self.n = n
        self.coeffs = coeffs

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "CycloElement":
        return cls(n, [_ZERO] * euler_phi(n))

    @classmethod
    def one(cls, n: int) -> "CycloElement":
        return cls.from_rational(n, 1)

    @classmethod
    def from_rational(cls, n: int, q) -> "CycloElement":
        c = [_ZERO] * euler_phi(n)
        c[0] = Fraction(q)
        return cls(n, c)

    @classmethod
    def zeta(cls, n: int, e: int = 1) -> "CycloElement":
        return cls(n, _reduction_table(n)[e % n])

    def zero_like(self) -> "CycloElement":
        return CycloElement.zero(self.n)

    def one_like(self) -> "CycloElement":
        return CycloElement.one(self.n)

    # -- predicates ----------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"not rational: {self}")
        return self.coeffs[0]

    def is_real(self) -> bool:
        return self.conj() == self

    # -- arithmetic ----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, CycloElement):
            if other.n != self.n:
                raise ConductorMismatch(f"conductor {other.n} vs {self.n}")
            return other
        if isinstance(other, (int, Fraction)):
            return CycloElement.from_rational(self.n, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return CycloElement(self.n, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycloElement(self.n, [-a for a in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return CycloElement(self.n, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        phi = len(a)
        conv = [_ZERO] * (2 * phi - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                if bj == 0:
                    continue
                conv[i + j] += ai * bj
        table = _reduction_table(self.n)
        out = [_ZERO] * phi
        for k, ck in enumerate(conv):
            if ck == 0:
                continue
            row = table[k]
            for i in range(phi):
                if row[i] != 0:
                    out[i] += ck * row[i]
        return CycloElement(self.n, out)

    __rmul__ = __mul__

    def inv(self) -> "CycloElement":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        if self.is_rational():
            return CycloElement.from_rational(self.n, 1 / self.coeffs[0])
        # extended Euclid against Phi_n over Q
        phin = [Fraction(c) for c in cyclotomic_polynomial(self.n)]
        g, u = _poly_xgcd_mod(list(self.coeffs), phin)
        if len(g) != 1:
            raise DivisionByZero("element not invertible (unexpected)")
        scale = 1 / g[0]
        phi = euler_phi(self.n)
        u = [c * scale for c in u] + [_ZERO] * phi
        return CycloElement(self.n, u[:phi])

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        result = CycloElement.one(self.n)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- Galois structure ----------------------------------------------

    def galois(self, a: int) -> "CycloElement":
        """Apply the field automorphism zeta -> zeta^a."""
        if math.gcd(a, self.n) != 1:
            raise ValueError(f"{a} is not a unit mod {self.n}")
        table = _galois_table(self.n, a % self.n if self.n > 1 else 1)
        phi = len(self.coeffs)
        out = [_ZERO] * phi
        for i, ci in enumerate(self.coeffs):
            if ci == 0:
                continue
            row = table[i]
            for j in range(phi):
                if row[j] != 0:
                    out[j] += ci * row[j]
        return CycloElement(self.n, out)

    def conj(self) -> "CycloElement":
        """Complex conjugation zeta -> zeta^(n-1)."""
        if self.n <= 2:
            return self
        return self.galois(self.n - 1)

    def embed(self, m: int) -> "CycloElement":
        return embed_conductor(self, m)

    # -- misc ----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloElement.from_rational(self.n, other)
        if not isinstance(other, CycloElement):
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.n, self.coeffs))

    def sort_key(self):
        return tuple((c.numerator, c.denominator) for c in self.coeffs)

    def to_complex(self) -> complex:
        """Float approximation (for display/debug only, never decisions)."""
        z = complex(mpmath.e ** (2j * mpmath.pi / self.n))
        return sum(float(c) * z**i for i, c in enumerate(self.coeffs))

    def __repr__(self):
        return f"CycloElement({self.n}, {format_element(self)!r})"

    def __str__(self):
        return format_element(self)


def format_element(x: "CycloElement", gen: str = "q") -> str:
    terms = []
    for i, c in enumerate(x.coeffs):
        if c == 0:
            continue
        if i == 0:
            terms.append(str(c))
            continue
        mono = gen if i == 1 else f"{gen}^{i}"
        if c == 1:
            terms.append(mono)
        elif c == -1:
            terms.append(f"-{mono}")
        elif c.denominator == 1:
            terms.append(f"{c}*{mono}")
        else:
            terms.append(f"({c})*{mono}")
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


# -- polynomial helpers over Q (lists of Fractions, ascending) ----------


def _poly_divmod(a, b):
    a = list(a)
    if len(a) < len(b):
        return [], a
    q = [_ZERO] * (len(a) - len(b) + 1)
    inv_lead = 1 / b[-1]
    for i in range(len(q) - 1, -1, -1):
        coef = a[i + len(b) - 1] * inv_lead
        q[i] = coef
        if coef != 0:
            for j, bj in enumerate(b):
                a[i + j] -= coef * bj
    return _poly_trim(q), _poly_trim(a)


def _poly_xgcd_mod(a, m):
    """Return (g, u) with u*a = g mod m, g the gcd of a and m over Q."""
    r0, r1 = _poly_trim(m), _poly_trim(a)
    s0, s1 = [], [_ONE]
    while r1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        qs1 = _poly_mul_q(q, s1)
        s0, s1 = s1, _poly_trim([x - y for x, y in _zip_pad(s0, qs1)])
    return r0, s0


def _zip_pad(a, b):
    n = max(len(a), len(b))
    a = list(a) + [_ZERO] * (n - len(a))
    b = list(b) + [_ZERO] * (n - len(b))
    return zip(a, b)


def _poly_mul_q(a, b):
    if not a or not b:
        return []
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return _poly_trim(out)


# -- spec operations -------------------------------------------------


def embed_conductor(x: CycloElement, m: int) -> CycloElement:
    """Re-express x in Q(zeta_m); requires conductor(x) | m."""
    if m % x.n != 0:
        raise NotDivisible(f"conductor {x.n} does not divide {m}")
    if m == x.n:
        return x
    k = m // x.n
    table = _reduction_table(m)
    phi = euler_phi(m)
    out = [_ZERO] * phi
    for i, ci in enumerate(x.coeffs):
        if ci == 0:
            continue
        row = table[(i * k) % m]
        for j in range(phi):
            if row[j] != 0:
                out[j] += ci * row[j]
    return CycloElement(m, out)


def common_conductor(x: CycloElement, y: CycloElement):
    m = x.n * y.n // math.gcd(x.n, y.n)
    return embed_conductor(x, m), embed_conductor(y, m)


def coefficient_conductor(elements) -> int:
    """Smallest m | n with every given element inside Q(zeta_m)."""
    elements = list(elements)
    if not elements:
        return 1
    n = elements[0].n
    best = n
    for m in sorted(d for d in range(1, n + 1) if n % d == 0):
        if all(_fixed_by_rel_group(x, m) for x in elements):
            best = m
            break
    return best


def _fixed_by_rel_group(x: CycloElement, m: int) -> bool:
    n = x.n
    return all(x.galois(a) == x for a in units_mod(n) if a % m == 1 % m)


def minimal_polynomial(x: CycloElement) -> tuple:
    """Monic minimal polynomial of x over Q, ascending Fraction coefficients."""
    phi = euler_phi(x.n)
    # rows of an echelon basis for span{1, x, x^2, ...}; find first dependence
    basis = []  # list of (pivot index, vector, combo) with combo over powers
    power = CycloElement.one(x.n)
    powers = []
    for k in range(phi + 1):
        vec = list(power.coeffs)
        combo = [_ZERO] * (phi + 1)
        combo[k] = _ONE
        for pivot, bvec, bcombo in basis:
            c = vec[pivot]
            if c != 0:
                vec = [v - c * w for v, w in zip(vec, bvec)]
                combo = [v - c * w for v, w in zip(combo, bcombo)]
        nz = next((i for i, v in enumerate(vec) if v != 0), None)
        if nz is None:
            # 0 = sum combo[j] x^j with combo[k] = 1: monic of degree k
            coeffs = list(combo[:k]) + [_ONE]
            return tuple(coeffs)
        scale = 1 / vec[nz]
        vec = [v * scale for v in vec]
        combo = [v * scale for v in combo]
        basis.append((nz, vec, combo))
        powers.append(power)
        power = power * x
    raise AssertionError("no minimal polynomial found (unreachable)")


def eval_poly_at(coeffs, x):
    """Evaluate a polynomial (ascending coefficients) at a field element."""
    acc = x.zero_like()
    for c in reversed(list(coeffs)):
        acc = acc * x + c
    return acc


def sign_of_real(x: CycloElement) -> int:
    """Certified sign of a real element: -1, 0 or +1."""
    if x.is_zero():
        return 0
    if not x.is_real():
        raise NotReal(f"not fixed by conjugation: {x}")
    if x.is_rational():
        q = x.as_rational()
        return -1 if q < 0 else 1
    # x = sum c_i cos(2*pi*i/n), refined interval evaluation
    iv = mpmath.iv
    prec = 64
    while True:
        old = iv.prec
        iv.prec = prec
        try:
            total = iv.mpf(0)
            two_pi = 2 * iv.pi
            for i, c in enumerate(x.coeffs):
                if c == 0:
                    continue
                term = iv.mpf(c.numerator) / iv.mpf(c.denominator)
                if i:
                    term *= iv.cos(two_pi * i / x.n)
                total += term
            if total.a > 0:
                return 1
            if total.b < 0:
                return -1
        finally:
            iv.prec = old
        prec *= 2
        if prec > 1 << 20:  # nonzero reals always separate; guard anyway
            raise AssertionError("interval refinement failed to separate from 0")


def rational_nth_root(q: Fraction, m: int):
    """Exact m-th root of a rational, or None."""
    q = Fraction(q)
    if q == 0:
        return Fraction(0)
    if q < 0:
        if m % 2 == 0:
            return None
        r = rational_nth_root(-q, m)
        return None if r is None else -r
    def iroot(v):
        r = round(v ** (1.0 / m)) if v > 1 else 1
        while r**m > v:
            r -= 1
        while (r + 1) ** m <= v:
            r += 1
        return r if r**m == v else None
    rn = iroot(q.numerator)
    rd = iroot(q.denominator)
    if rn is None or rd is None:
        return None
    return Fraction(rn, rd)


class RootResult:
    """Outcome of root extraction: in-field value or extension descriptor."""

    __slots__ = ("value", "power", "radicand")

    def __init__(self, value=None, power=None, radicand=None):
        self.value = value
        self.power = power
        self.radicand = radicand

    @property
    def in_field(self) -> bool:
        return self.value is not None

    def __repr__(self):
        if self.in_field:
            return f"InField({self.value})"
        return f"Extension(t^{self.power} - ({self.radicand}))"


def root_extract(c: CycloElement, m: int) -> RootResult:
    """Find x with x^m = c when c has the shape (rational)*(root of unity).

    Candidate roots s*r*zeta^i are verified by exact exponentiation; anything
    outside that shape yields an Extension descriptor.
    """
    if c.is_zero():
        raise ZeroRadicand("no roots of zero requested")
    if m < 1:
        raise ValueError("power must be >= 1")
    if m == 1:
        return RootResult(value=c)
    n = c.n
    zeta_pows = [CycloElement.zeta(n, i) for i in range(n)]
    shape = None
    for j, zj in enumerate(zeta_pows):
        ratio = c / zj
        if ratio.is_rational():
            shape = (ratio.as_rational(), j)
            break
    if shape is None:
        return RootResult(power=m, radicand=c)
    q, _ = shape
    r = rational_nth_root(abs(q), m)
    if r is not None:
        for sign in (1, -1):
            base = CycloElement.from_rational(n, sign * r)
            for zi in zeta_pows:
                x = base * zi
                if x**m == c:
                    return RootResult(value=x)
    return RootResult(power=m, radicand=c)


def roots_of_unity(n: int):
    """All roots of unity inside Q(zeta_n): mu_n (n even) or mu_2n (n odd)."""
    if n % 2 == 0:
        return [CycloElement.zeta(n, i) for i in range(n)]
    out = []
    for i in range(n):
        z = CycloElement.zeta(n, i)
        out.append(z)
        out.append(-z)
    return out


def unity_group_order(n: int) -> int:
    return n if n % 2 == 0 else 2 * n


# -- quadratic extensions -------------------------------------------


def is_rational_square_in_cyclo(q: Fraction, n: int) -> bool:
    """Complete test: is the rational q a square in Q(zeta_n)?"""
    q = Fraction(q)
    if q == 0:
        return True
    num = q.numerator * q.denominator  # square class representative
    d0 = 1
    v = abs(num)
    p = 2
    while p * p <= v:
        while v % (p * p) == 0:
            v //= p * p
        if v % p == 0:
            d0 *= p
            v //= p
        p += 1
    d0 *= v
    if num < 0:
        d0 = -d0
    if d0 == 1:
        return True
    cond = abs(d0) if d0 % 4 == 1 else 4 * abs(d0)
    return n % cond == 0


def field_norm(x: CycloElement) -> Fraction:
    """Norm of x from Q(zeta_n) down to Q."""
    acc = CycloElement.one(x.n)
    for a in units_mod(x.n):
        acc = acc * x.galois(a)
    return acc.as_rational()


class QuadExtField:
    """Q(zeta_n)(sqrt(d)) for a d that passed non-squareness screening."""

    __slots__ = ("n", "d")

    def __init__(self, n: int, d: CycloElement):
        if d.n != n:
            d = embed_conductor(d, n)
        if d.is_zero():
            raise ValueError("discriminant must be nonzero")
        if not certify_nonsquare(d):
            raise ValueError(f"discriminant is a square in Q(zeta_{n}): {d}")
        self.n = n
        self.d = d

    def of(self, a, b=None) -> "QuadExtElem":
        if isinstance(a, (int, Fraction)):
            a = CycloElement.from_rational(self.n, a)
        if b is None:
            b = CycloElement.zero(self.n)
        elif isinstance(b, (int, Fraction)):
            b = CycloElement.from_rational(self.n, b)
        return QuadExtElem(self, a, b)

    def sqrt_d(self) -> "QuadExtElem":
        return QuadExtElem(self, CycloElement.zero(self.n), CycloElement.one(self.n))

    def __eq__(self, other):
        return (
            isinstance(other, QuadExtField) and self.n == other.n and self.d == other.d
        )

    def __hash__(self):
        return hash((self.n, self.d))

    def __repr__(self):
        return f"QuadExtField(n={self.n}, d={self.d})"


def certify_nonsquare(d: CycloElement) -> bool:
    """Screen d for squareness; complete for rational d, heuristic otherwise."""
    if d.is_rational():
        return not is_rational_square_in_cyclo(d.as_rational(), d.n)
    if root_extract(d, 2).in_field:
        return False
    nrm = field_norm(d)
    if rational_nth_root(nrm, 2) is None:
        return True
    # norm is a square, shape detection failed: accept with the caveat that a
    # hidden square d surfaces later as a DivisionByZero in QuadExtElem.inv
    return True


class QuadExtElem:
    """a + b*sqrt(d) with a, b in Q(zeta_n)."""

    __slots__ = ("field", "a", "b")

    def __init__(self, field: QuadExtField, a: CycloElement, b: CycloElement):
        self.field = field
        self.a = a
        self.b = b

    def zero_like(self):
        return self.field.of(0)

    def one_like(self):
        return self.field.of(1)

    def is_zero(self):
        return self.a.is_zero() and self.b.is_zero()

    def in_base(self) -> bool:
        return self.b.is_zero()

    def base_part(self) -> CycloElement:
        if not self.in_base():
            raise ValueError("element has a sqrt(d) component")
        return self.a

    def _coerce(self, other):
        if isinstance(other, QuadExtElem):
            if other.field != self.field:
                raise ConductorMismatch("mixed quadratic extensions")
            return other
        if isinstance(other, CycloElement):
            return QuadExtElem(self.field, embed_conductor(other, self.field.n),
                               CycloElement.zero(self.field.n))
        if isinstance(other, (int, Fraction)):
            return self.field.of(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return QuadExtElem(self.field, self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadExtElem(self.field, -self.a, -self.b)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return QuadExtElem(self.field, self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        d = self.field.d
        return QuadExtElem(
            self.field,
            self.a * other.a + d * self.b * other.b,
            self.a * other.b + self.b * other.a,
        )

    __rmul__ = __mul__

    def bar(self) -> "QuadExtElem":
        """The extension automorphism sqrt(d) -> -sqrt(d)."""
        return QuadExtElem(self.field, self.a, -self.b)

    def inv(self) -> "QuadExtElem":
        nrm = self.a * self.a - self.field.d * self.b * self.b
        if nrm.is_zero():
            raise DivisionByZero("non-invertible element of quadratic extension")
        ninv = nrm.inv()
        return QuadExtElem(self.field, self.a * ninv, -self.b * ninv)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        result = self.one_like()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def galois(self, a: int) -> "QuadExtElem":
        """Lift of sigma_a acting trivially on sqrt(d); requires sigma_a(d)=d."""
        if self.field.d.galois(a) != self.field.d:
            raise ConductorMismatch("automorphism does not fix the discriminant")
        return QuadExtElem(self.field, self.a.galois(a), self.b.galois(a))

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.field, self.a, self.b))

    def sort_key(self):
        return self.a.sort_key() + self.b.sort_key()

    def __repr__(self):
        return f"({self.a}) + ({self.b})*sqrt({self.field.d})"


def lift_to_quadext(x, field: QuadExtField) -> QuadExtElem:
    if isinstance(x, QuadExtElem):
        if x.field != field:
            raise ConductorMismatch("mixed quadratic extensions")
        return x
    if isinstance(x, CycloElement):
        return field.of(embed_conductor(x, field.n))
    return field.of(x)
