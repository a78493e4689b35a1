"""Arbitrary-precision binary floats with explicit precision.

:class:`BigFloat` is a thin immutable wrapper around mpmath's low-level
``libmp`` number tuples. Every operation rounds to nearest-even at an explicit
bit precision; there is no global context.
"""

from __future__ import annotations

import math
from fractions import Fraction

from mpmath import libmp

_RND = libmp.round_nearest
_LOG2_10 = math.log2(10)


def digits_to_bits(digits: int) -> int:
    """Working precision for a decimal target, including guard bits."""
    if digits < 1:
        raise ValueError("digits must be positive")
    return math.ceil(digits * 3.33) + 64


def bits_to_digits(bits: int) -> int:
    return int((bits - 1) * math.log10(2))


class BigFloat:
    """Binary float ``significand * 2**exponent`` rounded to ``prec`` bits."""

    __slots__ = ("_mpf", "prec")

    def __init__(self, mpf, prec: int):
        if prec < 2:
            raise ValueError("precision must be at least 2 bits")
        object.__setattr__(self, "_mpf", libmp.normalize(*mpf, prec, _RND) if mpf[1] else mpf)
        object.__setattr__(self, "prec", prec)

    def __setattr__(self, name, value):
        raise AttributeError("BigFloat is immutable")

    # -- construction -----------------------------------------------------

    @classmethod
    def from_int(cls, n: int, prec: int) -> "BigFloat":
        return cls(libmp.from_int(n, prec, _RND), prec)

    @classmethod
    def from_fraction(cls, q, prec: int) -> "BigFloat":
        q = Fraction(q)
        return cls(libmp.from_rational(q.numerator, q.denominator, prec, _RND), prec)

    @classmethod
    def from_man_exp(cls, man: int, exp: int, prec: int) -> "BigFloat":
        return cls(libmp.from_man_exp(man, exp, prec, _RND), prec)

    @classmethod
    def zero(cls, prec: int) -> "BigFloat":
        return cls(libmp.fzero, prec)

    # -- fields ------------------------------------------------------------

    @property
    def significand(self) -> int:
        sign, man, _, _ = self._mpf
        return -int(man) if sign else int(man)

    @property
    def exponent(self) -> int:
        return int(self._mpf[2]) if self._mpf[1] else 0

    def with_prec(self, prec: int) -> "BigFloat":
        return BigFloat(self._mpf, prec)

    def to_fraction(self) -> Fraction:
        """Exact dyadic value."""
        if self._mpf == libmp.fzero:
            return Fraction(0)
        sign, man, exp, _ = self._mpf
        man, exp = (-int(man) if sign else int(man)), int(exp)
        return Fraction(man) * 2**exp if exp >= 0 else Fraction(man, 2**-exp)

    def is_zero(self) -> bool:
        return self._mpf == libmp.fzero

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, BigFloat):
            return other._mpf, max(self.prec, other.prec)
        if isinstance(other, int) and not isinstance(other, bool):
            return libmp.from_int(other), self.prec
        if isinstance(other, Fraction):
            return libmp.from_rational(other.numerator, other.denominator, self.prec + 8, _RND), self.prec
        return NotImplemented, 0

    def __add__(self, other):
        o, p = self._coerce(other)
        if o is NotImplemented:
            return o
        return BigFloat(libmp.mpf_add(self._mpf, o, p, _RND), p)

    __radd__ = __add__

    def __sub__(self, other):
        o, p = self._coerce(other)
        if o is NotImplemented:
            return o
        return BigFloat(libmp.mpf_sub(self._mpf, o, p, _RND), p)

    def __rsub__(self, other):
        o, p = self._coerce(other)
        if o is NotImplemented:
            return o
        return BigFloat(libmp.mpf_sub(o, self._mpf, p, _RND), p)

    def __mul__(self, other):
        o, p = self._coerce(other)
        if o is NotImplemented:
            return o
        return BigFloat(libmp.mpf_mul(self._mpf, o, p, _RND), p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o, p = self._coerce(other)
        if o is NotImplemented:
            return o
        if o == libmp.fzero:
            raise ZeroDivisionError("BigFloat division by zero")
        return BigFloat(libmp.mpf_div(self._mpf, o, p, _RND), p)

    def __rtruediv__(self, other):
        o, p = self._coerce(other)
        if o is NotImplemented:
            return o
        if self._mpf == libmp.fzero:
            raise ZeroDivisionError("BigFloat division by zero")
        return BigFloat(libmp.mpf_div(o, self._mpf, p, _RND), p)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0 and self._mpf == libmp.fzero:
            raise ZeroDivisionError("zero to a negative power")
        return BigFloat(libmp.mpf_pow_int(self._mpf, k, self.prec, _RND), self.prec)

    def __neg__(self):
        return BigFloat(libmp.mpf_neg(self._mpf), self.prec)

    def __pos__(self):
        return self

    def __abs__(self):
        return BigFloat(libmp.mpf_abs(self._mpf), self.prec)

    def sqrt(self) -> "BigFloat":
        if libmp.mpf_sign(self._mpf) < 0:
            raise ValueError("square root of a negative number")
        return BigFloat(libmp.mpf_sqrt(self._mpf, self.prec, _RND), self.prec)

    def log(self) -> "BigFloat":
        if libmp.mpf_sign(self._mpf) <= 0:
            raise ValueError("logarithm of a nonpositive number")
        return BigFloat(libmp.mpf_log(self._mpf, self.prec, _RND), self.prec)

    def exp(self) -> "BigFloat":
        return BigFloat(libmp.mpf_exp(self._mpf, self.prec, _RND), self.prec)

    # -- comparison --------------------------------------------------------

    def _cmp(self, other) -> int:
        if isinstance(other, BigFloat):
            return libmp.mpf_cmp(self._mpf, other._mpf)
        return (self.to_fraction() > Fraction(other)) - (self.to_fraction() < Fraction(other))

    def __eq__(self, other):
        if not isinstance(other, (BigFloat, int, Fraction)):
            return NotImplemented
        return self._cmp(other) == 0

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __hash__(self):
        return hash(self.to_fraction())

    def sign(self) -> int:
        return libmp.mpf_sign(self._mpf)

    # -- output ------------------------------------------------------------

    def __float__(self):
        return libmp.to_float(self._mpf)

    def to_fixed(self, places: int, truncate: bool = False) -> str:
        """Decimal string with exactly ``places`` digits after the point."""
        q = self.to_fraction() * 10**places
        if truncate:
            n = abs(q.numerator) // q.denominator
            neg = q < 0
        else:
            r = round(q)
            n, neg = abs(r), r < 0
        digits = str(n).rjust(places + 1, "0")
        body = digits[:-places] + "." + digits[-places:] if places else digits
        return ("-" if neg and n else "") + body

    def __str__(self):
        return libmp.to_str(self._mpf, max(1, bits_to_digits(self.prec)))

    def __repr__(self):
        return f"BigFloat('{self}', prec={self.prec})"


def agree_digits(x: BigFloat, y: BigFloat) -> int:
    """Largest ``d`` with ``|x - y| < 10**-d * max(1, |x|)``.

    The difference is widened by the combined half-ulp rounding uncertainty of
    both inputs, so representation noise never counts as an extra digit.
    Identical values return the precision cap of the coarser operand.
    """
    prec = min(x.prec, y.prec)
    cap = bits_to_digits(prec)
    fx, fy = x.to_fraction(), y.to_fraction()
    diff = abs(fx - fy)
    if diff == 0:
        return cap
    slack = max(abs(fx), abs(fy)) / 2 ** (prec - 1)
    v = (diff + slack) / max(Fraction(1), abs(fx))
    if v >= 1:
        return 0
    d = max(0, math.floor(-(math.log10(v.numerator) - math.log10(v.denominator))))
    while v < Fraction(1, 10 ** (d + 1)):
        d += 1
    while d > 0 and not v < Fraction(1, 10**d):
        d -= 1
    return min(d, cap)
