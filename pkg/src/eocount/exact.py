"""Exact arithmetic in the field Q(i, sqrt 2).

Every partition function value, signature entry and Gauss-sum scalar lives
here. An element is stored as four rationals ``(a, b, c, d)`` standing for
``a + b*sqrt2 + (c + d*sqrt2)*i``; the four coordinates form a basis over Q,
so equality is coordinate equality.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Union

Number = Union[int, Fraction, "ExactComplex"]

_F0 = Fraction(0)
_F1 = Fraction(1)
_HALF = Fraction(1, 2)


class ExactComplex:
    __slots__ = ("a", "b", "c", "d", "_hash")

    def __init__(self, a=0, b=0, c=0, d=0) -> None:
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.c = Fraction(c)
        self.d = Fraction(d)
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def coerce(cls, x: Number) -> ExactComplex:
        if isinstance(x, ExactComplex):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x)
        raise TypeError(f"cannot interpret {x!r} as an element of Q(i, sqrt2)")

    @classmethod
    def gaussian(cls, re=0, im=0) -> ExactComplex:
        return cls(re, 0, im, 0)

    @classmethod
    def parse(cls, text: str) -> ExactComplex:
        """Parse the four-rational form ``"a b c d"``."""
        parts = text.split()
        if len(parts) != 4:
            raise ValueError(f"expected four rationals, got {text!r}")
        try:
            coords = [_parse_rational(p) for p in parts]
        except ValueError as exc:
            raise ValueError(f"malformed number {text!r}: {exc}") from None
        return cls(*coords)

    # -- queries ------------------------------------------------------
    def coords(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.d)

    def is_zero(self) -> bool:
        return not (self.a or self.b or self.c or self.d)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not (self.b or self.c or self.d)

    def power_of_i(self) -> int | None:
        """Return ``k`` in 0..3 with ``self == i**k``, else None."""
        if self.b or self.d:
            return None
        if self.c == 0:
            if self.a == 1:
                return 0
            if self.a == -1:
                return 2
        elif self.a == 0:
            if self.c == 1:
                return 1
            if self.c == -1:
                return 3
        return None

    def conjugate(self) -> ExactComplex:
        """Complex conjugate (i -> -i)."""
        return ExactComplex(self.a, self.b, -self.c, -self.d)

    def __str__(self) -> str:
        return " ".join(str(x) for x in self.coords())

    def __repr__(self) -> str:
        return f"ExactComplex({self})"

    def __complex__(self) -> complex:
        r2 = 2 ** 0.5
        return complex(float(self.a) + float(self.b) * r2, float(self.c) + float(self.d) * r2)

    # -- ring operations ----------------------------------------------
    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.a == other and not (self.b or self.c or self.d)
        if not isinstance(other, ExactComplex):
            return NotImplemented
        return (
            self.a == other.a
            and self.b == other.b
            and self.c == other.c
            and self.d == other.d
        )

    def __hash__(self) -> int:
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self.a)
            else:
                self._hash = hash(self.coords())
        return self._hash

    def __neg__(self) -> ExactComplex:
        return ExactComplex(-self.a, -self.b, -self.c, -self.d)

    def __add__(self, other: Number) -> ExactComplex:
        if isinstance(other, (int, Fraction)):
            return ExactComplex(self.a + other, self.b, self.c, self.d)
        if not isinstance(other, ExactComplex):
            return NotImplemented
        return ExactComplex(
            self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d
        )

    __radd__ = __add__

    def __sub__(self, other: Number) -> ExactComplex:
        if isinstance(other, (int, Fraction)):
            return ExactComplex(self.a - other, self.b, self.c, self.d)
        if not isinstance(other, ExactComplex):
            return NotImplemented
        return ExactComplex(
            self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d
        )

    def __rsub__(self, other: Number) -> ExactComplex:
        return (-self) + other

    def __mul__(self, other: Number) -> ExactComplex:
        if isinstance(other, (int, Fraction)):
            return ExactComplex(self.a * other, self.b * other, self.c * other, self.d * other)
        if not isinstance(other, ExactComplex):
            return NotImplemented
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = other.a, other.b, other.c, other.d
        # (p1 + q1 i)(p2 + q2 i) with p, q in Q(sqrt2)
        re_a = a1 * a2 + 2 * b1 * b2 - (c1 * c2 + 2 * d1 * d2)
        re_b = a1 * b2 + b1 * a2 - (c1 * d2 + d1 * c2)
        im_a = a1 * c2 + 2 * b1 * d2 + c1 * a2 + 2 * d1 * b2
        im_b = a1 * d2 + b1 * c2 + c1 * b2 + d1 * a2
        return ExactComplex(re_a, re_b, im_a, im_b)

    __rmul__ = __mul__

    def inverse(self) -> ExactComplex:
        if self.is_zero():
            raise ZeroDivisionError("division by zero in Q(i, sqrt2)")
        # 1/(p + qi) = (p - qi) / (p^2 + q^2), then rationalise p^2 + q^2 = u + v sqrt2
        a, b, c, d = self.a, self.b, self.c, self.d
        u = a * a + 2 * b * b + c * c + 2 * d * d
        v = 2 * (a * b + c * d)
        norm = u * u - 2 * v * v
        # 1/(u + v sqrt2) = (u - v sqrt2) / norm
        inv = ExactComplex(u / norm, -v / norm)
        return ExactComplex(a, b, -c, -d) * inv

    def __truediv__(self, other: Number) -> ExactComplex:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero in Q(i, sqrt2)")
            return ExactComplex(self.a / other, self.b / other, self.c / other, self.d / other)
        if not isinstance(other, ExactComplex):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: Number) -> ExactComplex:
        return ExactComplex.coerce(other) * self.inverse()

    def __pow__(self, n: int) -> ExactComplex:
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result


def _parse_rational(text: str) -> Fraction:
    num, sep, den = text.partition("/")
    if not _is_int_literal(num) or (sep and not _is_int_literal(den)):
        raise ValueError(f"bad rational {text!r}")
    if sep and int(den) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if sep else 1)


def _is_int_literal(s: str) -> bool:
    body = s[1:] if s[:1] in "+-" else s
    return body.isdigit() and body.isascii()


ZERO = ExactComplex(0)
ONE = ExactComplex(1)
I = ExactComplex(0, 0, 1, 0)
SQRT2 = ExactComplex(0, 1)
OMEGA = ExactComplex(0, _HALF, 0, _HALF)

_OMEGA_POWERS = (
    ONE,
    OMEGA,
    I,
    ExactComplex(0, -_HALF, 0, _HALF),
    -ONE,
    -OMEGA,
    -I,
    ExactComplex(0, _HALF, 0, -_HALF),
)


def i_power(k: int) -> ExactComplex:
    return _OMEGA_POWERS[(2 * k) % 8]


def omega_power(k: int) -> ExactComplex:
    return _OMEGA_POWERS[k % 8]


def sqrt2_power(k: int) -> ExactComplex:
    """Return ``sqrt2 ** k`` for any integer ``k``."""
    q, r = divmod(k, 2)
    scale = Fraction(2) ** q
    return ExactComplex(0, scale) if r else ExactComplex(scale)


def scaled_phase(half_powers_of_two: int, omega_exponent: int) -> ExactComplex:
    """Return ``2**(half_powers_of_two/2) * omega**omega_exponent``."""
    return sqrt2_power(half_powers_of_two) * omega_power(omega_exponent)


def ec_arith(x: Number, y: Number, op: str) -> ExactComplex:
    x = ExactComplex.coerce(x)
    y = ExactComplex.coerce(y)
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown operation {op!r}")


def product(values) -> ExactComplex:
    result = ONE
    for v in values:
        result = result * v
    return result
