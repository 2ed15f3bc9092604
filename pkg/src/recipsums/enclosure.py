"""Rigorous real enclosures with dyadic endpoints.

An enclosure is a closed interval [lo, hi] certified to contain an exact
real value.  Endpoints are kept as ``Fraction`` objects whose denominators
are powers of two, so results are bit-exact and platform independent.
Exact operations (+, -, integer scaling) need no rounding; everything
transcendental (log, powers) goes through gmpy2/MPFR with directed
rounding, widened by construction so containment is never lost.
"""

from __future__ import annotations

import math
from fractions import Fraction

import gmpy2

from .errors import DomainError

_ZERO = Fraction(0)
_ONE = Fraction(1)


def dy_floor(x: Fraction, bits: int) -> Fraction:
    """Largest dyadic multiple of 2**-bits that is <= x."""
    return Fraction((x.numerator << bits) // x.denominator, 1 << bits)


def dy_ceil(x: Fraction, bits: int) -> Fraction:
    return Fraction(-((-x.numerator << bits) // x.denominator), 1 << bits)


def _mpfr_fraction(v) -> Fraction:
    n, d = v.as_integer_ratio()
    return Fraction(int(n), int(d))


def _ctx(bits: int, rounding):
    return gmpy2.context(precision=bits + 8, round=rounding)


class RealEnclosure:
    """A certified interval [lo, hi] around an exact real value."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo: Fraction, hi: Fraction):
        if lo > hi:
            raise ValueError("enclosure endpoints out of order")
        self.lo = lo
        self.hi = hi

    @classmethod
    def exact(cls, value) -> "RealEnclosure":
        f = Fraction(value)
        return cls(f, f)

    @classmethod
    def from_scaled(cls, lo: int, hi: int, bits: int) -> "RealEnclosure":
        s = 1 << bits
        return cls(Fraction(lo, s), Fraction(hi, s))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, value) -> bool:
        return self.lo <= value <= self.hi

    def contains_enclosure(self, other: "RealEnclosure") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def strictly_positive(self) -> bool:
        return self.lo > 0

    def strictly_less(self, other: "RealEnclosure") -> bool:
        return self.hi < other.lo

    def overlaps(self, other: "RealEnclosure") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def outward(self, bits: int) -> "RealEnclosure":
        """Round endpoints outward onto the 2**-bits dyadic grid."""
        return RealEnclosure(dy_floor(self.lo, bits), dy_ceil(self.hi, bits))

    # -- exact arithmetic (dyadic endpoints stay dyadic) ----------------

    def __add__(self, other):
        if isinstance(other, RealEnclosure):
            return RealEnclosure(self.lo + other.lo, self.hi + other.hi)
        f = Fraction(other)
        return RealEnclosure(self.lo + f, self.hi + f)

    __radd__ = __add__

    def __neg__(self):
        return RealEnclosure(-self.hi, -self.lo)

    def __sub__(self, other):
        if isinstance(other, RealEnclosure):
            return RealEnclosure(self.lo - other.hi, self.hi - other.lo)
        f = Fraction(other)
        return RealEnclosure(self.lo - f, self.hi - f)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, factor) -> "RealEnclosure":
        """Multiply by an exact rational factor."""
        f = Fraction(factor)
        if f >= 0:
            return RealEnclosure(self.lo * f, self.hi * f)
        return RealEnclosure(self.hi * f, self.lo * f)

    def __mul__(self, other):
        if isinstance(other, RealEnclosure):
            prods = [
                self.lo * other.lo,
                self.lo * other.hi,
                self.hi * other.lo,
                self.hi * other.hi,
            ]
            return RealEnclosure(min(prods), max(prods))
        return self.scale(other)

    __rmul__ = __mul__

    # -- rounded operations ---------------------------------------------

    def reciprocal(self, bits: int = 96) -> "RealEnclosure":
        if self.lo <= 0:
            raise DomainError("reciprocal of enclosure touching zero")
        return RealEnclosure(dy_floor(1 / self.hi, bits), dy_ceil(1 / self.lo, bits))

    def log(self, bits: int = 96) -> "RealEnclosure":
        if self.lo <= 0:
            raise DomainError("log of enclosure touching zero")
        lo = _ctx(bits, gmpy2.RoundDown).log(
            gmpy2.mpq(self.lo.numerator, self.lo.denominator)
        )
        hi = _ctx(bits, gmpy2.RoundUp).log(
            gmpy2.mpq(self.hi.numerator, self.hi.denominator)
        )
        return RealEnclosure(_mpfr_fraction(lo), _mpfr_fraction(hi))

    def pow(self, exponent, bits: int = 96) -> "RealEnclosure":
        """x**exponent for x > 0; exponent is an exact rational."""
        e = Fraction(exponent)
        if e.denominator == 1:
            n = e.numerator
            if n >= 0:
                return RealEnclosure(self.lo ** n, self.hi ** n)
            return self.pow(-n, bits).reciprocal(bits)
        if self.lo <= 0:
            raise DomainError("fractional power of enclosure touching zero")
        # x^e = exp(e * log x); all steps directed, monotone in x for e > 0.
        down, up = _ctx(bits, gmpy2.RoundDown), _ctx(bits, gmpy2.RoundUp)
        eq = gmpy2.mpq(e.numerator, e.denominator)
        if e > 0:
            xl, xh = self.lo, self.hi
            log_lo, log_hi = down.log, up.log
        else:
            # decreasing in x, and a larger log makes e*log(x) smaller
            xl, xh = self.hi, self.lo
            log_lo, log_hi = up.log, down.log
        lo = down.exp(down.mul(eq, log_lo(gmpy2.mpq(xl.numerator, xl.denominator))))
        hi = up.exp(up.mul(eq, log_hi(gmpy2.mpq(xh.numerator, xh.denominator))))
        return RealEnclosure(_mpfr_fraction(lo), _mpfr_fraction(hi))

    # -- presentation -----------------------------------------------------

    def float_lo(self) -> float:
        f = float(self.lo)
        if Fraction(f) > self.lo:
            f = math.nextafter(f, -math.inf)
        return f

    def float_hi(self) -> float:
        f = float(self.hi)
        if Fraction(f) < self.hi:
            f = math.nextafter(f, math.inf)
        return f

    def __float__(self) -> float:
        return float(self.midpoint())

    def __repr__(self):
        return f"RealEnclosure({self.float_lo()!r}, {self.float_hi()!r})"
