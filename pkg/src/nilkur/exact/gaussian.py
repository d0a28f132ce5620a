"""Exact Gaussian rationals, the scalar field Q(i)."""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd

from nilkur.errors import InputError

_RATIONAL = r"\d+(?:/\d+)?"
_REAL_RE = re.compile(rf"^[+-]?{_RATIONAL}$")
_IMAG_RE = re.compile(rf"^[+-]?(?:{_RATIONAL})?$")


class GaussQ:
    """A Gaussian rational ``(a + b*i) / d`` held in lowest terms.

    The value is stored as three integers with ``d > 0`` and
    ``gcd(a, b, d) == 1``; ``re`` and ``im`` expose the parts as
    :class:`fractions.Fraction`.
    """

    __slots__ = ("_a", "_b", "_d")

    def __init__(self, re=0, im=0):
        re = Fraction(re)
        im = Fraction(im)
        d = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
        self._set(re.numerator * (d // re.denominator), im.numerator * (d // im.denominator), d)

    def _set(self, a, b, d):
        if d < 0:
            a, b, d = -a, -b, -d
        g = gcd(gcd(a, b), d)
        if g != 1:
            a //= g
            b //= g
            d //= g
        self._a = a
        self._b = b
        self._d = d

    @classmethod
    def _raw(cls, a, b, d):
        obj = object.__new__(cls)
        obj._set(a, b, d)
        return obj

    @classmethod
    def coerce(cls, value) -> "GaussQ":
        if isinstance(value, GaussQ):
            return value
        if isinstance(value, str):
            return cls.parse(value)
        if isinstance(value, complex):
            raise TypeError("floating complex values are not exact")
        return cls(value)

    @classmethod
    def parse(cls, text: str) -> "GaussQ":
        """Parse ``"1"``, ``"-1/2i"``, ``"1/2-1/2i"``, ``"i"`` and the like."""
        s = text.replace(" ", "")
        if not s:
            raise InputError(f"empty Gaussian rational {text!r}")
        if not s.endswith("i"):
            if not _REAL_RE.match(s):
                raise InputError(f"bad Gaussian rational {text!r}")
            return cls(Fraction(s))
        body = s[:-1]
        split = max(body.rfind("+"), body.rfind("-"))
        if split > 0:
            real_txt, imag_txt = body[:split], body[split:]
            if not _REAL_RE.match(real_txt):
                raise InputError(f"bad Gaussian rational {text!r}")
        else:
            real_txt, imag_txt = "0", body
        if not _IMAG_RE.match(imag_txt):
            raise InputError(f"bad Gaussian rational {text!r}")
        if imag_txt in ("", "+"):
            imag = Fraction(1)
        elif imag_txt == "-":
            imag = Fraction(-1)
        else:
            imag = Fraction(imag_txt)
        return cls(Fraction(real_txt), imag)

    @property
    def re(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def im(self) -> Fraction:
        return Fraction(self._b, self._d)

    def conjugate(self) -> "GaussQ":
        return GaussQ._raw(self._a, -self._b, self._d)

    def abs2(self) -> Fraction:
        return Fraction(self._a * self._a + self._b * self._b, self._d * self._d)

    def is_real(self) -> bool:
        return self._b == 0

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, GaussQ):
            if isinstance(other, (int, Fraction)):
                other = GaussQ(other)
            else:
                return NotImplemented
        if self._d == other._d:
            return GaussQ._raw(self._a + other._a, self._b + other._b, self._d)
        return GaussQ._raw(
            self._a * other._d + other._a * self._d,
            self._b * other._d + other._b * self._d,
            self._d * other._d,
        )

    __radd__ = __add__

    def __neg__(self):
        return GaussQ._raw(-self._a, -self._b, self._d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if not isinstance(other, GaussQ):
            if isinstance(other, (int, Fraction)):
                other = GaussQ(other)
            else:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, GaussQ):
            if isinstance(other, int):
                return GaussQ._raw(self._a * other, self._b * other, self._d)
            if isinstance(other, Fraction):
                other = GaussQ(other)
            else:
                return NotImplemented
        a, b, d = self._a, self._b, self._d
        c, e, f = other._a, other._b, other._d
        return GaussQ._raw(a * c - b * e, a * e + b * c, d * f)

    __rmul__ = __mul__

    def inverse(self) -> "GaussQ":
        n = self._a * self._a + self._b * self._b
        if n == 0:
            raise ZeroDivisionError("GaussQ division by zero")
        return GaussQ._raw(self._a * self._d, -self._b * self._d, n)

    def __truediv__(self, other):
        if not isinstance(other, GaussQ):
            if isinstance(other, (int, Fraction)):
                other = GaussQ(other)
            else:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return GaussQ.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # comparisons ----------------------------------------------------------

    def __bool__(self):
        return self._a != 0 or self._b != 0

    def __eq__(self, other):
        if isinstance(other, GaussQ):
            return self._a == other._a and self._b == other._b and self._d == other._d
        if isinstance(other, (int, Fraction)):
            return self._b == 0 and Fraction(self._a, self._d) == other
        return NotImplemented

    def __hash__(self):
        if self._b == 0:
            return hash(Fraction(self._a, self._d))
        return hash((self._a, self._b, self._d))

    def sort_key(self):
        return (self.re, self.im)

    # printing -------------------------------------------------------------

    def __str__(self):
        re_part, im_part = self.re, self.im
        if im_part == 0:
            return str(re_part)
        if im_part == 1:
            im_txt = "i"
        elif im_part == -1:
            im_txt = "-i"
        else:
            im_txt = f"{im_part}i"
        if re_part == 0:
            return im_txt
        sign = "" if im_txt.startswith("-") else "+"
        return f"{re_part}{sign}{im_txt}"

    def __repr__(self):
        return f"GaussQ('{self}')"


ZERO = GaussQ(0)
ONE = GaussQ(1)
I = GaussQ(0, 1)
HALF = GaussQ(Fraction(1, 2))


def gq(value) -> GaussQ:
    """Shorthand coercion: ``gq("1/2i")``, ``gq(3)``."""
    return GaussQ.coerce(value)
