"""Exact arithmetic in the field of rational functions of one variable q.

A :class:`Scalar` is a fraction of integer-coefficient polynomials in q,
kept in a canonical form (lowest terms, positive leading coefficient in
the denominator), so structural equality is field equality.  Negative
powers of q are absorbed into the denominator: q^-1 is 1/q.

The classical (q = 1) layer of the package uses :class:`fractions.Fraction`
directly; :func:`specialize_at_1` bridges the two.  All arithmetic is exact
big-integer arithmetic; nothing here ever touches floating point.
"""

from __future__ import annotations

import ast
import operator
from fractions import Fraction
from math import gcd

# ---------------------------------------------------------------------------
# dense integer polynomials: tuple of coefficients, index = power of q,
# trailing zeros stripped, () is the zero polynomial
# ---------------------------------------------------------------------------

ZERO_P: tuple[int, ...] = ()
ONE_P: tuple[int, ...] = (1,)


def _trim(c):
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return tuple(c[:n])


def padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    c = list(a)
    for i, x in enumerate(b):
        c[i] += x
    return _trim(c)


def pneg(a):
    return tuple(-x for x in a)


def psub(a, b):
    return padd(a, pneg(b))


def pmul(a, b):
    if not a or not b:
        return ZERO_P
    c = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    c[i + j] += x * y
    return tuple(c)


def pmul_int(a, n):
    if n == 0:
        return ZERO_P
    return tuple(x * n for x in a)


def pcontent(a):
    g = 0
    for x in a:
        g = gcd(g, x)
        if g == 1:
            return 1
    return g


def pprimitive(a):
    """Primitive part with positive leading coefficient; () for zero."""
    if not a:
        return ZERO_P
    c = pcontent(a)
    if a[-1] < 0:
        c = -c
    return tuple(x // c for x in a)


def pquo(a, b):
    """Exact quotient a // b; raises if b does not divide a over the integers."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return ZERO_P
    r = list(a)
    db, lb = len(b) - 1, b[-1]
    dq = len(a) - 1 - db
    if dq < 0:
        raise ArithmeticError("inexact polynomial division")
    quot = [0] * (dq + 1)
    for k in range(dq, -1, -1):
        head = r[k + db]
        if head % lb:
            raise ArithmeticError("inexact polynomial division")
        t = head // lb
        quot[k] = t
        if t:
            for j, y in enumerate(b):
                r[k + j] -= t * y
    if any(r):
        raise ArithmeticError("inexact polynomial division")
    return _trim(quot)


def _pseudo_rem(a, b):
    # lc(b)^(deg a - deg b + 1) * a  mod b, computed over the integers
    da, db = len(a) - 1, len(b) - 1
    lb = b[-1]
    r = list(a)
    for k in range(da - db, -1, -1):
        head = r[k + db]
        if head:
            for i in range(len(r)):
                r[i] *= lb
            for j, y in enumerate(b):
                r[k + j] -= head * y
            r[k + db] = 0
        # keep coefficients small between steps
    return _trim(r)


def pgcd(a, b):
    """Primitive gcd with positive leading coefficient (primitive PRS)."""
    a, b = pprimitive(a), pprimitive(b)
    while b:
        a, b = b, pprimitive(_pseudo_rem(a, b))
    return a


def peval1(a) -> int:
    return sum(a)


def pstr(a) -> str:
    if not a:
        return "0"
    parts = []
    for i in range(len(a) - 1, -1, -1):
        c = a[i]
        if not c:
            continue
        if i == 0:
            term = str(abs(c))
        else:
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            term = f"{mag}q" if i == 1 else f"{mag}q^{i}"
        if not parts:
            parts.append(term if c > 0 else "-" + term)
        else:
            parts.append(("+" if c > 0 else "-") + term)
    return "".join(parts)


# ---------------------------------------------------------------------------
# scalars
# ---------------------------------------------------------------------------


class PoleAtOne(ArithmeticError):
    """Raised when specializing a scalar with a pole at q = 1."""

    def __init__(self, scalar, order):
        super().__init__(f"pole of order {order} at q=1: {scalar}")
        self.order = order


class Scalar:
    """A rational function in q with integer coefficients, in lowest terms."""

    __slots__ = ("num", "den")

    def __init__(self, num=0, den=None):
        if isinstance(num, Scalar):
            if den is not None:
                raise TypeError("Scalar(num, den) expects polynomial parts")
            self.num, self.den = num.num, num.den
            return
        num = self._coerce_poly(num)
        den = ONE_P if den is None else self._coerce_poly(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            self.num, self.den = ZERO_P, ONE_P
            return
        g = pgcd(num, den)
        if len(g) > 1 or g[0] != 1:
            num, den = pquo(num, g), pquo(den, g)
        c = gcd(pcontent(num), pcontent(den))
        if den[-1] < 0:
            c = -c
        if c != 1:
            num = tuple(x // c for x in num)
            den = tuple(x // c for x in den)
        self.num, self.den = num, den

    @staticmethod
    def _coerce_poly(v):
        if isinstance(v, tuple):
            return _trim(v)
        if isinstance(v, int):
            return (v,) if v else ZERO_P
        if isinstance(v, list):
            return _trim(tuple(v))
        raise TypeError(f"cannot build polynomial from {type(v).__name__}")

    @classmethod
    def _wrap(cls, num, den):
        # already canonical; skip normalization
        s = object.__new__(cls)
        s.num, s.den = num, den
        return s

    @classmethod
    def from_fraction(cls, f):
        f = Fraction(f)
        return cls((f.numerator,), (f.denominator,))

    @classmethod
    def coerce(cls, v):
        if isinstance(v, Scalar):
            return v
        if isinstance(v, int):
            return cls(v)
        if isinstance(v, Fraction):
            return cls.from_fraction(v)
        raise TypeError(f"cannot coerce {type(v).__name__} to Scalar")

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self) -> bool:
        return bool(self.num)

    def is_one(self) -> bool:
        return self.num == ONE_P and self.den == ONE_P

    def is_constant(self) -> bool:
        return len(self.num) <= 1 and self.den == ONE_P

    def as_integer(self):
        """The integer value if this scalar is a constant integer, else None."""
        if self.den == ONE_P and len(self.num) <= 1:
            return self.num[0] if self.num else 0
        return None

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        if not self.num:
            return other
        if not other.num:
            return self
        if self.den == other.den:
            return Scalar(padd(self.num, other.num), self.den)
        return Scalar(
            padd(pmul(self.num, other.den), pmul(other.num, self.den)),
            pmul(self.den, other.den),
        )

    __radd__ = __add__

    def __neg__(self):
        return Scalar._wrap(pneg(self.num), self.den)

    def __sub__(self, other):
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return Scalar.coerce(other) + (-self)

    def __mul__(self, other):
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        if not self.num or not other.num:
            return ZERO
        # cross-cancel before multiplying to keep degrees small
        a, b, c, d = self.num, self.den, other.num, other.den
        g1 = pgcd(a, d)
        if len(g1) > 1 or g1 != ONE_P:
            a, d = pquo(a, g1), pquo(d, g1)
        g2 = pgcd(c, b)
        if len(g2) > 1 or g2 != ONE_P:
            c, b = pquo(c, g2), pquo(b, g2)
        return Scalar(pmul(a, c), pmul(b, d))

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        if not other.num:
            raise ZeroDivisionError("scalar division by zero")
        if other.num[-1] > 0:
            return self * Scalar._wrap(other.den, other.num)
        return self * Scalar._wrap(pneg(other.den), pneg(other.num))

    def __rtruediv__(self, other):
        return Scalar.coerce(other) / self

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k == 0:
            return ONE
        base = self
        if k < 0:
            if not self.num:
                raise ZeroDivisionError("inverting zero scalar")
            base, k = ONE / self, -k
        out = ONE
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar.coerce(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self.den == ONE_P and len(self.num) <= 1:
            # agree with hash of plain ints and Fractions for constants
            return hash(self.num[0] if self.num else 0)
        return hash((self.num, self.den))

    # -- q = 1 --------------------------------------------------------------

    def in_A(self) -> bool:
        """Membership in the local ring of functions with no pole at q = 1."""
        return peval1(self.den) != 0

    def pole_order_at_1(self) -> int:
        if peval1(self.den) != 0:
            return 0
        order, den = 0, self.den
        qm1 = (-1, 1)
        while peval1(den) == 0:
            den = pquo(den, qm1)
            order += 1
        return order

    def specialize_at_1(self) -> Fraction:
        d = peval1(self.den)
        if d == 0:
            raise PoleAtOne(self, self.pole_order_at_1())
        return Fraction(peval1(self.num), d)

    # -- text form ----------------------------------------------------------

    def __str__(self):
        if self.den == ONE_P:
            return pstr(self.num)
        ns, ds = pstr(self.num), pstr(self.den)
        if "+" in ns[1:] or "-" in ns[1:] or "*" in ns:
            ns = f"({ns})"
        if "+" in ds[1:] or "-" in ds[1:] or "*" in ds:
            ds = f"({ds})"
        return f"{ns}/{ds}"

    def __repr__(self):
        return f"Scalar({self})"


ZERO = Scalar(0)
ONE = Scalar(1)
Q = Scalar._wrap((0, 1), ONE_P)


def q_power(k: int) -> Scalar:
    """q^k as a Scalar (negative k lands in the denominator)."""
    if k >= 0:
        return Scalar._wrap((0,) * k + (1,), ONE_P)
    return Scalar._wrap(ONE_P, (0,) * (-k) + (1,))


def qnum(k: int) -> Scalar:
    """The symmetric q-integer (q^k - q^-k)/(q - q^-1)."""
    if k == 0:
        return ZERO
    if k < 0:
        return -qnum(-k)
    # q^(1-k) * (1 + q^2 + ... + q^(2k-2))
    num = [0] * (2 * k - 1)
    num[0::2] = [1] * k
    return Scalar(tuple(num), (0,) * (k - 1) + (1,))


# ---------------------------------------------------------------------------
# parsing: ASCII expressions like "(q^2+1)/(q*(q-1))"
# ---------------------------------------------------------------------------

_BIN_OPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
}


def _eval_node(node):
    if isinstance(node, ast.Expression):
        return _eval_node(node.body)
    if isinstance(node, ast.BinOp):
        op = _BIN_OPS.get(type(node.op))
        if type(node.op) is ast.Pow:
            base = _eval_node(node.left)
            exp = _eval_node(node.right)
            k = exp.as_integer() if isinstance(exp, Scalar) else None
            if k is None:
                raise ValueError("exponent must be an integer")
            return base ** k
        if op is None:
            raise ValueError(f"unsupported operator {type(node.op).__name__}")
        return op(_eval_node(node.left), _eval_node(node.right))
    if isinstance(node, ast.UnaryOp):
        if isinstance(node.op, ast.USub):
            return -_eval_node(node.operand)
        if isinstance(node.op, ast.UAdd):
            return _eval_node(node.operand)
        raise ValueError("unsupported unary operator")
    if isinstance(node, ast.Constant):
        if isinstance(node.value, int):
            return Scalar(node.value)
        raise ValueError(f"unsupported literal {node.value!r}")
    if isinstance(node, ast.Name):
        if node.id == "q":
            return Q
        raise ValueError(f"unknown symbol {node.id!r} (only q is allowed)")
    raise ValueError(f"unsupported syntax: {ast.dump(node)}")


def parse_scalar(text: str) -> Scalar:
    """Parse an ASCII scalar expression in q with + - * / ^ and parentheses."""
    try:
        tree = ast.parse(text.replace("^", "**").strip(), mode="eval")
        return _eval_node(tree)
    except ZeroDivisionError:
        raise
    except (SyntaxError, ValueError) as exc:
        raise ValueError(f"cannot parse scalar {text!r}: {exc}") from None
