"""Text grammar for maps and forms.

    file   := header stmt
    header := 'cyclotomic_order' '=' INT
    stmt   := map { ... } | form { k = INT ; map { ... } }
    map    := 'map' '{' fields '}' with either
                scalar = EXPR ; zeros = [(PT, INT), ...] ; poles = [(PT, INT), ...]
              or
                num = POLY ; den = POLY [; roots = [PT, ...]]
    PT     := EXPR | 'inf'

Expressions use 'q' for the primitive root of unity, rationals 'p/q', and
'+ - * / ^ ( )'; polynomial expressions additionally use 'z'.
"""

from __future__ import annotations

from .cyclo import CycloElement
from .errors import InvariantViolation, ParseError
from .polys import Poly
from .projline import INF, ProjPoint
from .ratmap import KForm, RationalMap

_PUNCT = ("=", "{", "}", "[", "]", "(", ")", ",", ";", "+", "-", "*", "/", "^")


class _Token:
    __slots__ = ("kind", "value", "line", "col")

    def __init__(self, kind, value, line, col):
        self.kind = kind
        self.value = value
        self.line = line
        self.col = col

    def __repr__(self):
        return f"{self.kind}({self.value})"


def _tokenize(text):
    tokens = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < len(text) and text[i] != "\n":
                i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(_Token("INT", int(text[i:j]), line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("NAME", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch in _PUNCT:
            tokens.append(_Token(ch, ch, line, col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(_Token("EOF", None, line, col))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.n = None

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind, value=None):
        tok = self.next()
        if tok.kind != kind or (value is not None and tok.value != value):
            want = value if value is not None else kind
            raise ParseError(f"expected {want!r}, found {tok.value!r}",
                             tok.line, tok.col)
        return tok

    # -- expressions -------------------------------------------------------

    def parse_expr(self, allow_z=False):
        return self._add(allow_z)

    @staticmethod
    def _promote(a, b):
        if isinstance(a, Poly) and not isinstance(b, Poly):
            return a, Poly.constant(b)
        if isinstance(b, Poly) and not isinstance(a, Poly):
            return Poly.constant(a), b
        return a, b

    def _add(self, allow_z):
        left = self._mul(allow_z)
        while self.peek().kind in ("+", "-"):
            op = self.next().kind
            right = self._mul(allow_z)
            left, right = self._promote(left, right)
            left = left + right if op == "+" else left - right
        return left

    def _mul(self, allow_z):
        left = self._unary(allow_z)
        while self.peek().kind in ("*", "/"):
            op = self.next().kind
            tok = self.peek()
            right = self._unary(allow_z)
            if op == "*":
                left, right = self._promote(left, right)
                left = left * right
            else:
                if isinstance(right, Poly):
                    if right.degree > 0:
                        raise ParseError("division by a polynomial", tok.line, tok.col)
                    right = right.coeffs[0]
                if isinstance(left, Poly):
                    left = left.scale(right.inv())
                else:
                    left = left * right.inv()
        return left

    def _unary(self, allow_z):
        tok = self.peek()
        if tok.kind == "-":
            self.next()
            return -self._unary(allow_z)
        if tok.kind == "+":
            self.next()
            return self._unary(allow_z)
        return self._power(allow_z)

    def _power(self, allow_z):
        base = self._atom(allow_z)
        if self.peek().kind == "^":
            self.next()
            neg = False
            if self.peek().kind == "-":
                self.next()
                neg = True
            tok = self.expect("INT")
            e = -tok.value if neg else tok.value
            if isinstance(base, Poly):
                if e < 0:
                    raise ParseError("negative power of a polynomial", tok.line, tok.col)
                out = Poly.constant(CycloElement.one(self.n))
                for _ in range(e):
                    out = out * base
                return out
            return base ** e
        return base

    def _atom(self, allow_z):
        tok = self.next()
        if tok.kind == "INT":
            return CycloElement.from_rational(self.n, tok.value)
        if tok.kind == "NAME" and tok.value == "q":
            return CycloElement.zeta(self.n)
        if tok.kind == "NAME" and tok.value == "z":
            if not allow_z:
                raise ParseError("'z' is only allowed in polynomial context",
                                 tok.line, tok.col)
            return Poly.x_poly(CycloElement.one(self.n))
        if tok.kind == "(":
            value = self.parse_expr(allow_z)
            self.expect(")")
            return value
        raise ParseError(f"unexpected token {tok.value!r}", tok.line, tok.col)

    # -- structures ---------------------------------------------------------

    def parse_point(self):
        tok = self.peek()
        if tok.kind == "NAME" and tok.value == "inf":
            self.next()
            return INF
        value = self.parse_expr(allow_z=False)
        return ProjPoint(value)

    def parse_pair_list(self):
        self.expect("[")
        out = []
        while self.peek().kind != "]":
            self.expect("(")
            pt = self.parse_point()
            self.expect(",")
            neg = False
            if self.peek().kind == "-":
                self.next()
                neg = True
            m = self.expect("INT").value
            out.append((pt, -m if neg else m))
            self.expect(")")
            if self.peek().kind == ",":
                self.next()
        self.expect("]")
        return out

    def parse_point_list(self):
        self.expect("[")
        out = []
        while self.peek().kind != "]":
            out.append(self.parse_point())
            if self.peek().kind == ",":
                self.next()
        self.expect("]")
        return out

    def parse_map_body(self):
        fields = {}
        self.expect("{")
        while self.peek().kind != "}":
            name = self.expect("NAME").value
            self.expect("=")
            if name == "scalar":
                fields["scalar"] = self.parse_expr(allow_z=False)
            elif name in ("zeros", "poles"):
                fields[name] = self.parse_pair_list()
            elif name in ("num", "den"):
                value = self.parse_expr(allow_z=True)
                if not isinstance(value, Poly):
                    value = Poly.constant(value)
                fields[name] = value
            elif name == "roots":
                fields["roots"] = self.parse_point_list()
            else:
                tok = self.peek()
                raise ParseError(f"unknown map field {name!r}", tok.line, tok.col)
            if self.peek().kind == ";":
                self.next()
        self.expect("}")
        return self._build_map(fields)

    def _build_map(self, fields):
        if "scalar" in fields:
            pairs = []
            for pt, m in fields.get("zeros", []):
                pairs.append((pt, m))
            for pt, m in fields.get("poles", []):
                pairs.append((pt, -abs(m)))
            return RationalMap.from_factored(fields["scalar"], pairs)
        if "num" in fields and "den" in fields:
            roots = None
            if "roots" in fields:
                roots = []
                for pt in fields["roots"]:
                    if pt.is_inf:
                        raise InvariantViolation("root certificates list finite roots")
                    roots.append(pt.x)
            return RationalMap.from_coeffs(fields["num"], fields["den"], roots=roots)
        raise InvariantViolation("map needs either scalar/zeros/poles or num/den")

    def parse_file(self):
        self.expect("NAME", "cyclotomic_order")
        self.expect("=")
        self.n = self.expect("INT").value
        if self.n < 1:
            raise ParseError("cyclotomic order must be positive")
        if self.peek().kind == ";":
            self.next()
        tok = self.expect("NAME")
        if tok.value == "map":
            return self.parse_map_body()
        if tok.value == "form":
            self.expect("{")
            self.expect("NAME", "k")
            self.expect("=")
            neg = False
            if self.peek().kind == "-":
                self.next()
                neg = True
            k = self.expect("INT").value
            if neg:
                k = -k
            if self.peek().kind == ";":
                self.next()
            self.expect("NAME", "map")
            R = self.parse_map_body()
            self.expect("}")
            form = KForm(R, k)
            if R.has_factored() and form.divisor().degree() != -2 * k:
                raise InvariantViolation("form divisor degree must be -2k")
            return form
        raise ParseError(f"expected 'map' or 'form', found {tok.value!r}",
                         tok.line, tok.col)


def parse_input(text):
    """Parse a .map or .kform text into a RationalMap or KForm."""
    return _Parser(text).parse_file()


def parse_element(text, n):
    """Parse a single field-element expression at a given conductor."""
    p = _Parser(text)
    p.n = n
    value = p.parse_expr(allow_z=False)
    p.expect("EOF")
    if isinstance(value, Poly):
        raise ParseError("expected a constant expression")
    return value
