"""Exact scalars: Gaussian rationals Q(i) and quadratic extensions Q(i)(sqrt c).

Points of a hyperelliptic curve over a Gaussian-rational x-coordinate have
y = +-sqrt(F(x)), which usually lives in a quadratic extension.  Everything in
the exact layer is built from the two element types defined here.  Mixed
arithmetic between them works through the usual reflected-operator protocol.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Union

Scalar = Union[int, Fraction, "GaussianRational", "QuadElement"]


def _frac(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


class GaussianRational:
    """Element re + im*i of Q(i) with Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _frac(re)
        self.im = _frac(im)

    @classmethod
    def _raw(cls, re: Fraction, im: Fraction) -> "GaussianRational":
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return cls._raw(Fraction(value), Fraction(0))
        if isinstance(value, str):
            return parse_gaussian(value)
        if isinstance(value, complex):
            raise TypeError("floating complex values are not exact; pass strings or Fractions")
        raise TypeError(f"cannot coerce {value!r} to a Gaussian rational")

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational._raw(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Fraction)):
            return GaussianRational._raw(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational._raw(self.re - other.re, self.im - other.im)
        if isinstance(other, (int, Fraction)):
            return GaussianRational._raw(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussianRational._raw(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational._raw(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        if isinstance(other, (int, Fraction)):
            return GaussianRational._raw(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational._raw(self.re / n, -self.im / n)

    def __truediv__(self, other):
        if isinstance(other, GaussianRational):
            return self * other.inverse()
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return GaussianRational._raw(self.re / other, self.im / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __neg__(self):
        return GaussianRational._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = GaussianRational._raw(Fraction(1), Fraction(0))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._raw(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    # comparison / hashing ---------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def sort_key(self) -> tuple[Fraction, Fraction]:
        return (self.re, self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({format_gaussian(self)!r})"

    def __str__(self):
        return format_gaussian(self)


ZERO = GaussianRational._raw(Fraction(0), Fraction(0))
ONE = GaussianRational._raw(Fraction(1), Fraction(0))
I = GaussianRational._raw(Fraction(0), Fraction(1))


_NUM = r"(?:\d+(?:\.\d+)?(?:/\d+)?)"
_COMPLEX_RE = re.compile(
    rf"^(?P<re>[+-]?{_NUM})?(?:(?P<sign>[+-])?(?P<im>{_NUM})?(?P<i>[ij]))?$"
)


def parse_gaussian(text: str) -> GaussianRational:
    """Parse strings such as ``"3"``, ``"-1/2"``, ``"2i"``, ``"1/2-3/4i"``."""
    s = str(text).replace(" ", "").replace("*", "")
    if not s:
        raise ValueError("empty Gaussian rational")
    m = _COMPLEX_RE.match(s)
    if m is None or (m.group("re") is None and m.group("i") is None):
        raise ValueError(f"cannot parse Gaussian rational {text!r}")
    re_part = Fraction(m.group("re")) if m.group("re") else Fraction(0)
    if m.group("i"):
        if m.group("re") is not None and m.group("sign") is None:
            # "3i" parses as re="3" with no imaginary coefficient
            re_txt = m.group("re")
            return GaussianRational._raw(Fraction(0), Fraction(re_txt))
        im_part = Fraction(m.group("im")) if m.group("im") else Fraction(1)
        if m.group("sign") == "-":
            im_part = -im_part
    else:
        im_part = Fraction(0)
    return GaussianRational._raw(re_part, im_part)


def format_gaussian(z) -> str:
    z = GaussianRational.coerce(z)
    if z.im == 0:
        return str(z.re)
    if z.re == 0:
        return f"{z.im}i"
    sign = "+" if z.im > 0 else "-"
    return f"{z.re}{sign}{abs(z.im)}i"


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def gaussian_sqrt(z) -> GaussianRational | None:
    """Square root in Q(i) if one exists, normalised to Re > 0 (or Re = 0, Im > 0)."""
    z = GaussianRational.coerce(z)
    u, v = z.re, z.im
    if v == 0:
        r = _rational_sqrt(u)
        if r is not None:
            return GaussianRational._raw(r, Fraction(0))
        r = _rational_sqrt(-u)
        if r is not None:
            return GaussianRational._raw(Fraction(0), r)
        return None
    modulus = _rational_sqrt(u * u + v * v)
    if modulus is None:
        return None
    a = _rational_sqrt((u + modulus) / 2)
    if a is None or a == 0:
        return None
    b = v / (2 * a)
    return GaussianRational._raw(a, b)


class QuadraticField:
    """The field Q(i)(s) with s^2 = c, c a non-square Gaussian rational."""

    __slots__ = ("c",)

    def __init__(self, c):
        c = GaussianRational.coerce(c)
        if gaussian_sqrt(c) is not None:
            raise ValueError(f"{c} is a square in Q(i); no extension needed")
        self.c = c

    def __eq__(self, other):
        return isinstance(other, QuadraticField) and self.c == other.c

    def __hash__(self):
        return hash(("QuadraticField", self.c))

    def __repr__(self):
        return f"QuadraticField(sqrt({self.c}))"

    def gen(self) -> "QuadElement":
        return QuadElement(self, ZERO, ONE)

    def element(self, a, b=0) -> "QuadElement":
        return QuadElement(self, GaussianRational.coerce(a), GaussianRational.coerce(b))


class QuadElement:
    """a + b*s in a QuadraticField."""

    __slots__ = ("field", "a", "b")

    def __init__(self, field: QuadraticField, a: GaussianRational, b: GaussianRational):
        self.field = field
        self.a = a
        self.b = b

    def _lift(self, other):
        if isinstance(other, QuadElement):
            if other.field is not self.field and other.field != self.field:
                raise ValueError("mixing elements of different quadratic fields")
            return other
        if isinstance(other, (GaussianRational, int, Fraction)):
            return QuadElement(self.field, GaussianRational.coerce(other), ZERO)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadElement(self.field, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadElement(self.field, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadElement(self.field, o.a - self.a, o.b - self.b)

    def __mul__(self, other):
        if isinstance(other, (GaussianRational, int, Fraction)):
            return QuadElement(self.field, self.a * other, self.b * other)
        o = self._lift(other)
        if o is None:
            return NotImplemented
        c = self.field.c
        return QuadElement(
            self.field,
            self.a * o.a + self.b * o.b * c,
            self.a * o.b + self.b * o.a,
        )

    __rmul__ = __mul__

    def inverse(self) -> "QuadElement":
        n = self.a * self.a - self.b * self.b * self.field.c
        if not n:
            raise ZeroDivisionError("division by zero in quadratic extension")
        inv = n.inverse()
        return QuadElement(self.field, self.a * inv, -self.b * inv)

    def __truediv__(self, other):
        if isinstance(other, (GaussianRational, int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return QuadElement(self.field, self.a / other, self.b / other)
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __neg__(self):
        return QuadElement(self.field, -self.a, -self.b)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = QuadElement(self.field, ONE, ZERO)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        o = self._lift(other) if not isinstance(other, QuadElement) else other
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if not self.b:
            return hash(self.a)
        return hash((self.field.c, self.a, self.b))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def conjugate_root(self) -> "QuadElement":
        """Galois conjugate s -> -s."""
        return QuadElement(self.field, self.a, -self.b)

    def to_base(self) -> GaussianRational:
        if self.b:
            raise ValueError(f"{self} is not in Q(i)")
        return self.a

    def __complex__(self):
        import cmath

        return complex(self.a) + complex(self.b) * cmath.sqrt(complex(self.field.c))

    def __repr__(self):
        return f"({self.a}) + ({self.b})*sqrt({self.field.c})"


def to_base_if_possible(value):
    """Collapse a QuadElement with zero irrational part back to Q(i)."""
    if isinstance(value, QuadElement) and not value.b:
        return value.a
    return value


def exact(value):
    """Coerce ints/Fractions/strings to GaussianRational; pass field elements through."""
    if isinstance(value, (GaussianRational, QuadElement)):
        return value
    return GaussianRational.coerce(value)
