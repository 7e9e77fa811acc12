"""Exact arithmetic and linear algebra over the exponent field K.

Three field modes are supported:

* ``RATIONAL``: K = Q.
* ``FORMAL_TAU``: K = Q(t), the exponent symbol treated as transcendental.
  Elements are reduced fractions of rational polynomials.
* ``ALGEBRAIC_TAU``: K = Q[t]/(p) for an irreducible p.

Values are immutable. Linear algebra is plain Gauss-Jordan elimination over
the field; the same routines run on ``Fraction`` matrices.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd as igcd
from math import lcm as ilcm

from . import _poly as P
from .errors import DivisionByZero, InvalidMinimalPolynomial, ModeMismatch, ParseError


class Kind(str, enum.Enum):
    RATIONAL = "rational"
    FORMAL_TAU = "formal_tau"
    ALGEBRAIC_TAU = "algebraic_tau"


@dataclass(frozen=True)
class FieldMode:
    kind: Kind
    minimal_polynomial: tuple = ()

    def __post_init__(self):
        kind = Kind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is not Kind.ALGEBRAIC_TAU:
            if self.minimal_polynomial:
                raise InvalidMinimalPolynomial(f"{kind.value} mode carries no minimal polynomial")
            return
        poly = P.monic(P.make(self.minimal_polynomial))
        if P.degree(poly) < 1:
            raise InvalidMinimalPolynomial("minimal polynomial must have degree >= 1")
        if not _is_irreducible(poly):
            raise InvalidMinimalPolynomial(
                f"{P.to_str(poly, 'x')} is reducible over Q", polynomial=P.to_str(poly, "x")
            )
        object.__setattr__(self, "minimal_polynomial", poly)

    @classmethod
    def algebraic(cls, poly) -> "FieldMode":
        """Build ALGEBRAIC_TAU mode from coefficients (lowest degree first) or a string in t/x."""
        if isinstance(poly, str):
            s = parse_scalar(poly.replace("x", "t"), FORMAL_TAU)
            if s.den != P.ONE:
                raise InvalidMinimalPolynomial("minimal polynomial must be a polynomial")
            poly = s.num
        return cls(Kind.ALGEBRAIC_TAU, tuple(poly))

    @property
    def degree(self) -> int:
        """Q-dimension of K, or 0 when infinite (FORMAL_TAU)."""
        if self.kind is Kind.RATIONAL:
            return 1
        if self.kind is Kind.ALGEBRAIC_TAU:
            return P.degree(self.minimal_polynomial)
        return 0

    def describe(self) -> dict:
        out = {"kind": self.kind.value}
        if self.kind is Kind.ALGEBRAIC_TAU:
            out["minimal_polynomial"] = P.to_str(self.minimal_polynomial)
        return out

    def zero(self) -> "KScalar":
        return KScalar(self, P.ZERO)

    def one(self) -> "KScalar":
        return KScalar(self, P.ONE)

    def tau(self) -> "KScalar":
        if self.kind is Kind.RATIONAL:
            raise ModeMismatch("the exponent symbol t does not exist in RATIONAL mode")
        return KScalar(self, (Fraction(0), Fraction(1)))

    def __call__(self, value) -> "KScalar":
        return as_scalar(value, self)


def _is_irreducible(poly) -> bool:
    import sympy

    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * x**k for k, c in enumerate(poly))
    return sympy.Poly(expr, x, domain="QQ").is_irreducible


RATIONAL = FieldMode(Kind.RATIONAL)
FORMAL_TAU = FieldMode(Kind.FORMAL_TAU)


class KScalar:
    """Element of K in canonical form.

    ``num``/``den`` are polynomials in t. ``den`` is monic and coprime to ``num``
    in FORMAL_TAU mode and is 1 otherwise; in ALGEBRAIC_TAU mode ``num`` is
    reduced modulo the minimal polynomial.
    """

    __slots__ = ("mode", "num", "den", "_hash")

    def __init__(self, mode: FieldMode, num, den=P.ONE, *, _canonical=False):
        self.mode = mode
        if not _canonical:
            num, den = _canonicalize(mode, P.make(num), P.make(den))
        self.num = num
        self.den = den
        self._hash = None

    # construction helpers -------------------------------------------------
    @classmethod
    def rational(cls, mode: FieldMode, q) -> "KScalar":
        q = Fraction(q)
        return cls(mode, (q,) if q else P.ZERO, _canonical=True)

    def _coerce(self, other) -> "KScalar":
        if isinstance(other, KScalar):
            if other.mode != self.mode:
                raise ModeMismatch(f"{self.mode.kind.value} vs {other.mode.kind.value}")
            return other
        if isinstance(other, (int, Fraction)):
            return KScalar.rational(self.mode, other)
        return NotImplemented

    # predicates --------------------------------------------------------------
    def __bool__(self):
        return bool(self.num)

    def is_rational(self) -> bool:
        return len(self.num) <= 1 and self.den == P.ONE

    def is_integer(self) -> bool:
        return self.is_rational() and self.to_fraction().denominator == 1

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.num[0] if self.num else Fraction(0)

    # arithmetic --------------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.mode.kind is Kind.FORMAL_TAU:
            if self.den == o.den:
                return KScalar(self.mode, P.add(self.num, o.num), self.den)
            return KScalar(
                self.mode,
                P.add(P.mul(self.num, o.den), P.mul(o.num, self.den)),
                P.mul(self.den, o.den),
            )
        return KScalar(self.mode, P.add(self.num, o.num), _canonical=True)

    __radd__ = __add__

    def __neg__(self):
        return KScalar(self.mode, P.neg(self.num), self.den, _canonical=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.mode.kind is Kind.FORMAL_TAU:
            return KScalar(self.mode, P.mul(self.num, o.num), P.mul(self.den, o.den))
        if self.mode.kind is Kind.ALGEBRAIC_TAU:
            return KScalar(self.mode, P.mul(self.num, o.num))
        return KScalar(self.mode, P.mul(self.num, o.num), _canonical=True)

    __rmul__ = __mul__

    def inv(self) -> "KScalar":
        if not self.num:
            raise DivisionByZero("inverse of zero")
        kind = self.mode.kind
        if kind is Kind.FORMAL_TAU:
            return KScalar(self.mode, self.den, self.num)
        if kind is Kind.ALGEBRAIC_TAU:
            g, s, _ = P.xgcd(self.num, self.mode.minimal_polynomial)
            if P.degree(g) != 0:
                raise DivisionByZero("element is a zero divisor")
            return KScalar(self.mode, s)
        return KScalar.rational(self.mode, 1 / self.num[0])

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inv()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inv() ** (-k)
        out = self.mode.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # comparison --------------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.to_fraction() == other
        if not isinstance(other, KScalar):
            return NotImplemented
        return self.mode == other.mode and self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self.to_fraction())
            else:
                self._hash = hash((self.mode, self.num, self.den))
        return self._hash

    def __repr__(self):
        return f"KScalar({str(self)!r}, {self.mode.kind.value})"

    def __str__(self):
        if self.mode.kind is Kind.RATIONAL:
            return str(self.to_fraction())
        num = P.to_str(self.num)
        if self.den == P.ONE:
            return num
        den = P.to_str(self.den)
        if sum(1 for c in self.num if c) > 1:
            num = f"({num})"
        if sum(1 for c in self.den if c) > 1:
            den = f"({den})"
        return f"{num}/{den}"


def _canonicalize(mode: FieldMode, num, den):
    if not den:
        raise DivisionByZero("zero denominator")
    kind = mode.kind
    if kind is Kind.RATIONAL:
        if len(num) > 1 or len(den) > 1:
            raise ModeMismatch("polynomial value in RATIONAL mode")
        if not num:
            return P.ZERO, P.ONE
        return (num[0] / den[0],), P.ONE
    if kind is Kind.ALGEBRAIC_TAU:
        p = mode.minimal_polynomial
        if den != P.ONE:
            g, s, _ = P.xgcd(P.divmod_(den, p)[1], p)
            if P.degree(g) != 0:
                raise DivisionByZero("denominator vanishes modulo the minimal polynomial")
            num = P.mul(num, s)
        return P.divmod_(num, p)[1], P.ONE
    if not num:
        return P.ZERO, P.ONE
    g = P.gcd(num, den)
    if g != P.ONE:
        num = P.divmod_(num, g)[0]
        den = P.divmod_(den, g)[0]
    lead = den[-1]
    if lead != 1:
        num = P.scale(num, 1 / lead)
        den = P.scale(den, 1 / lead)
    return num, den


def as_scalar(value, mode: FieldMode) -> KScalar:
    if isinstance(value, KScalar):
        if value.mode != mode:
            raise ModeMismatch(f"{value.mode.kind.value} vs {mode.kind.value}")
        return value
    if isinstance(value, (int, Fraction)):
        return KScalar.rational(mode, value)
    if isinstance(value, str):
        return parse_scalar(value, mode)
    raise TypeError(f"cannot interpret {value!r} as a K-scalar")


def scalar_arith(op: str, a: KScalar, b: KScalar | None = None) -> KScalar:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inv()
    if op == "sub":
        return a - b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|(\*\*|[-+*/^()])|(tau|t|x))")


def parse_scalar(text: str, mode: FieldMode) -> KScalar:
    """Parse an exact expression such as ``"(2*t+1)/(t-3)"`` or ``"-3/4"``."""
    tokens = []
    pos = 0
    text = str(text)
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r} in {text!r}", line=1, column=pos + 1)
        start = m.start(m.lastindex)
        tokens.append((m.group(m.lastindex), m.lastindex, start + 1))
        pos = m.end()
    parser = _ScalarParser(tokens, mode, text)
    value = parser.expr()
    if parser.i != len(tokens):
        tok = tokens[parser.i]
        raise ParseError(f"trailing input {tok[0]!r} in {text!r}", line=1, column=tok[2])
    return value


class _ScalarParser:
    def __init__(self, tokens, mode, text):
        self.tokens = tokens
        self.mode = mode
        self.text = text
        self.i = 0

    def _peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def _fail(self, msg):
        col = self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.text) + 1
        raise ParseError(f"{msg} in {self.text!r}", line=1, column=col)

    def expr(self):
        value = self.term()
        while self._peek() in ("+", "-"):
            op = self.tokens[self.i][0]
            self.i += 1
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while True:
            tok = self._peek()
            if tok in ("*", "/"):
                self.i += 1
                rhs = self.unary()
                if tok == "*":
                    value = value * rhs
                else:
                    if not rhs:
                        self._fail("division by zero")
                    value = value / rhs
            elif tok is not None and (tok == "(" or self.tokens[self.i][1] == 3):
                value = value * self.power()  # implicit product, e.g. 2t
            else:
                return value

    def unary(self):
        tok = self._peek()
        if tok == "-":
            self.i += 1
            return -self.unary()
        if tok == "+":
            self.i += 1
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self._peek() in ("^", "**"):
            self.i += 1
            sign = 1
            if self._peek() == "-":
                sign = -1
                self.i += 1
            tok = self._peek()
            if tok is None or not tok.isdigit():
                self._fail("expected integer exponent")
            self.i += 1
            e = sign * int(tok)
            if e < 0 and not base:
                self._fail("division by zero")
            return base**e
        return base

    def atom(self):
        if self.i >= len(self.tokens):
            self._fail("unexpected end of expression")
        tok, kind, _ = self.tokens[self.i]
        if kind == 1:
            self.i += 1
            return KScalar.rational(self.mode, int(tok))
        if kind == 3:
            if self.mode.kind is Kind.RATIONAL:
                self._fail("symbol t is not available in RATIONAL mode")
            self.i += 1
            return self.mode.tau()
        if tok == "(":
            self.i += 1
            value = self.expr()
            if self._peek() != ")":
                self._fail("expected ')'")
            self.i += 1
            return value
        self._fail(f"unexpected token {tok!r}")


# ---------------------------------------------------------------------------
# linear algebra (generic over Fraction or KScalar entries)


def rref(rows):
    """Reduced row echelon form. Returns ``(nonzero_rows, pivot_columns)``."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        lead = m[r][c]
        if lead != 1:
            inv = 1 / lead
            m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                row_r = m[r]
                m[i] = [a - f * b if b else a for a, b in zip(m[i], row_r)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def _check_mode(M):
    mode = None
    for row in M:
        for x in row:
            if isinstance(x, KScalar):
                if mode is None:
                    mode = x.mode
                elif x.mode != mode:
                    raise ModeMismatch(f"{mode.kind.value} vs {x.mode.kind.value}")
    return mode


def matrix_rank_k(M) -> int:
    M = [list(r) for r in M]
    _check_mode(M)
    return len(rref(M)[1])


def kernel_basis(M, ncols: int | None = None):
    """Right-kernel basis from RREF, free coordinate set to 1 (not canonicalized)."""
    M = [list(r) for r in M]
    if ncols is None:
        ncols = len(M[0]) if M else 0
    R, pivots = rref(M)
    mode = _check_mode(M)
    zero = mode.zero() if mode else Fraction(0)
    one = mode.one() if mode else Fraction(1)
    basis = []
    piv_set = set(pivots)
    for f in range(ncols):
        if f in piv_set:
            continue
        v = [zero] * ncols
        v[f] = one
        for row, pc in zip(R, pivots):
            if row[f]:
                v[pc] = -row[f]
        basis.append(v)
    return basis


def matrix_kernel_k(M, ncols: int | None = None):
    """Canonical right-kernel basis.

    The kernel is put in reduced echelon form and every vector is scaled to be
    integer-primitive with positive leading coefficient.
    """
    basis = kernel_basis(M, ncols)
    if not basis:
        return []
    R, _ = rref(basis)
    return [primitive_vector(v) for v in R]


def primitive_vector(v):
    """Scale ``v`` by a nonzero element of K to its canonical representative.

    Entries become polynomials in t with integer coefficients, jointly primitive
    over Q[t] and over Z, and the first nonzero entry has positive leading
    coefficient. Works for Fraction vectors too.
    """
    v = list(v)
    nz = [x for x in v if x]
    if not nz:
        return v
    if not isinstance(nz[0], KScalar):
        d = ilcm(*(Fraction(x).denominator for x in nz))
        ints = [int(Fraction(x) * d) for x in v]
        g = 0
        for x in ints:
            g = igcd(g, x)
        if ints[next(i for i, x in enumerate(ints) if x)] < 0:
            g = -g
        return [Fraction(x // g) for x in ints]
    mode = nz[0].mode
    if mode.kind is Kind.FORMAL_TAU:
        den = P.ONE
        for x in nz:
            den = P.divmod_(P.mul(den, x.den), P.gcd(den, x.den))[0]
        nums = [P.divmod_(P.mul(x.num, den), x.den)[0] if x else P.ZERO for x in v]
        g = P.ZERO
        for p in nums:
            g = P.gcd(g, p) if g else P.monic(p)
        nums = [P.divmod_(p, g)[0] if p else P.ZERO for p in nums]
    else:
        nums = [x.num for x in v]
    coeffs = [a for p in nums for a in p]
    d = ilcm(*(a.denominator for a in coeffs))
    gi = 0
    for a in coeffs:
        gi = igcd(gi, int(a * d))
    c = Fraction(gi, d)
    lead = next(p for p in nums if p)[-1]
    if lead < 0:
        c = -c
    return [KScalar(mode, P.scale(p, 1 / c), _canonical=True) if p else mode.zero() for p in nums]


def rational_coordinates(scalars) -> list[list[Fraction]]:
    """Flatten K-scalars to rational coordinate rows.

    RATIONAL: one coordinate. ALGEBRAIC_TAU: coefficients on 1, t, ..., t^(d-1).
    FORMAL_TAU: numerator coefficients after bringing every scalar over one
    common denominator (chosen per call). The Q-row-rank of the output equals
    the Q-linear dimension of the inputs.
    """
    scalars = list(scalars)
    if not scalars:
        return []
    mode = scalars[0].mode
    for s in scalars:
        if s.mode != mode:
            raise ModeMismatch(f"{mode.kind.value} vs {s.mode.kind.value}")
    if mode.kind is Kind.RATIONAL:
        return [[s.to_fraction()] for s in scalars]
    if mode.kind is Kind.ALGEBRAIC_TAU:
        width = mode.degree
        return [list(s.num) + [Fraction(0)] * (width - len(s.num)) for s in scalars]
    den = P.ONE
    for s in scalars:
        if s.den != den:
            den = P.divmod_(P.mul(den, s.den), P.gcd(den, s.den))[0]
    nums = [P.divmod_(P.mul(s.num, den), s.den)[0] if s else P.ZERO for s in scalars]
    width = max(1, max(len(p) for p in nums))
    return [list(p) + [Fraction(0)] * (width - len(p)) for p in nums]


def rational_rank(rows) -> int:
    rows = [[Fraction(x) for x in r] for r in rows]
    return len(rref(rows)[1]) if rows else 0
