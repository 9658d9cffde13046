"""Dense univariate polynomials over an exact field (duck-typed coefficients).

Coefficients ascend; the zero polynomial has an empty tuple. Works for both
CycloElement and QuadExtElem entries.
"""

from __future__ import annotations


class Poly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = list(coeffs)
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def constant(cls, c):
        return cls([c])

    @classmethod
    def x_poly(cls, one):
        """The polynomial z, given a field token (any one-element)."""
        return cls([one.zero_like(), one])

    def is_zero(self):
        return not self.coeffs

    @property
    def degree(self):
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def leading(self):
        if self.is_zero():
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, i, like=None):
        if i < len(self.coeffs):
            return self.coeffs[i]
        if self.coeffs:
            return self.coeffs[0].zero_like()
        if like is None:
            raise ValueError("cannot type a coefficient of the zero polynomial")
        return like.zero_like()

    def map_coeffs(self, fn):
        return Poly([fn(c) for c in self.coeffs])

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        a, b = self.coeffs, other.coeffs
        out = []
        for i in range(n):
            if i < len(a) and i < len(b):
                out.append(a[i] + b[i])
            elif i < len(a):
                out.append(a[i])
            else:
                out.append(b[i])
        return Poly(out)

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if self.is_zero() or other.is_zero():
            return Poly([])
        out = [self.coeffs[0].zero_like()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return Poly(out)

    def scale(self, c):
        return Poly([a * c for a in self.coeffs])

    def shift(self, k):
        """Multiply by z^k."""
        if self.is_zero() or k == 0:
            return self
        zero = self.coeffs[0].zero_like()
        return Poly([zero] * k + list(self.coeffs))

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db, lead_inv = other.degree, other.leading().inv()
        if self.degree < db:
            return Poly([]), Poly(rem)
        q = [self.coeffs[0].zero_like()] * (self.degree - db + 1)
        for i in range(len(q) - 1, -1, -1):
            c = rem[i + db] * lead_inv
            q[i] = c
            if not c.is_zero():
                for j, bj in enumerate(other.coeffs):
                    rem[i + j] = rem[i + j] - c * bj
        return Poly(q), Poly(rem[:db])

    def mod(self, other):
        return self.divmod(other)[1]

    def monic(self):
        if self.is_zero():
            return self
        return self.scale(self.leading().inv())

    def gcd(self, other):
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.mod(b)
        return a.monic()

    def derivative(self):
        if self.degree < 1:
            return Poly([])
        out = []
        for i in range(1, len(self.coeffs)):
            out.append(self.coeffs[i] * i)
        return Poly(out)

    def compose(self, inner, like=None):
        """Substitute another polynomial for z (Horner)."""
        if self.is_zero():
            return Poly([])
        acc = Poly([self.coeffs[-1]])
        for c in reversed(self.coeffs[:-1]):
            acc = acc * inner + Poly([c])
        return acc

    def evaluate(self, x):
        acc = x.zero_like()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def valuation(self):
        """Order of vanishing at 0."""
        if self.is_zero():
            raise ValueError("zero polynomial")
        for i, c in enumerate(self.coeffs):
            if not c.is_zero():
                return i
        raise AssertionError

    def reversed_poly(self, at_degree=None):
        """z^d * p(1/z) with d = at_degree (default deg p)."""
        if self.is_zero():
            return self
        d = self.degree if at_degree is None else at_degree
        assert d >= self.degree
        zero = self.coeffs[0].zero_like()
        out = [zero] * (d + 1)
        for i, c in enumerate(self.coeffs):
            out[d - i] = c
        return Poly(out)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({[str(c) for c in self.coeffs]})"


def poly_from_roots(roots_with_mult, one):
    """Monic polynomial with prescribed roots and multiplicities."""
    acc = Poly([one])
    for r, m in roots_with_mult:
        lin = Poly([-r, one])
        for _ in range(m):
            acc = acc * lin
    return acc
