"""Exact carriers for the irrational base point and the shift.

Two representations of an irrational are supported:

* ``QuadraticSurd`` -- (a + b*sqrt(d))/c with integer coefficients, which
  makes every comparison the rest of the system needs decidable in pure
  integer arithmetic;
* ``CfStream`` -- an explicit continued-fraction digit prefix (finite or
  generator backed).  A finite prefix only pins the value to an interval,
  so operations that need more digits fail with ``InsufficientDigits``.

Shifts are held as u + v*x with exact rational u, v plus an optional
enclosure radius, which keeps "is n*x - shift an integer?" decidable
whenever the radius is zero.
"""

from __future__ import annotations

import math
import os
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Union

from .enclosure import RealEnclosure, dy_ceil, dy_floor
from .errors import (
    InsufficientDigits,
    ParseError,
    PerfectSquare,
    RationalValue,
    UnresolvedComparison,
    ZeroDenominator,
)

DEFAULT_PRECISION_CAP = 1 << 16
START_PRECISION = 64


def precision_cap() -> int:
    raw = os.environ.get("RECIP_PRECISION_CAP")
    if raw:
        try:
            return max(START_PRECISION, int(raw))
        except ValueError:
            pass
    return DEFAULT_PRECISION_CAP


class ExactZero:
    """Certified answer that a fractional part is exactly zero."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ExactZero"


EXACT_ZERO = ExactZero()


@dataclass(frozen=True)
class QuadraticSurd:
    """The irrational (a + b*sqrt(d)) / c in canonical form."""

    a: int
    b: int
    c: int
    d: int

    def spec(self) -> str:
        return f"surd:{self.a},{self.b},{self.c},{self.d}"

    def __str__(self):
        return self.spec()


class CfStream:
    """An irrational given by continued-fraction digits [a0; a1, a2, ...].

    Digits are memoized under a lock, so a generator-backed stream can be
    shared between threads.  ``digit(k)`` raises ``InsufficientDigits``
    once the supply runs out.
    """

    def __init__(self, a0: int, digits: Union[Iterable[int], Iterator[int]]):
        self.a0 = int(a0)
        self._cached: list[int] = []
        self._lock = threading.Lock()
        if hasattr(digits, "__next__"):
            self._source: Optional[Iterator[int]] = digits
        else:
            self._source = None
            for d in digits:
                d = int(d)
                if d < 1:
                    raise ParseError(f"cf digit must be >= 1, got {d}")
                self._cached.append(d)

    def digit(self, k: int) -> int:
        if k == 0:
            return self.a0
        with self._lock:
            while len(self._cached) < k and self._source is not None:
                try:
                    d = int(next(self._source))
                except StopIteration:
                    self._source = None
                    break
                if d < 1:
                    raise ParseError(f"cf digit must be >= 1, got {d}")
                self._cached.append(d)
            if len(self._cached) < k:
                raise InsufficientDigits(
                    f"cf prefix has {len(self._cached)} digits after a0, need {k}"
                )
            return self._cached[k - 1]

    def available(self) -> int:
        """Number of digits after a0 currently pinned (finite streams only)."""
        with self._lock:
            if self._source is not None:
                return -1
            return len(self._cached)

    def spec(self) -> str:
        with self._lock:
            return "cf:" + ",".join(str(x) for x in [self.a0, *self._cached])

    def __str__(self):
        return self.spec()


IrrationalNumber = Union[QuadraticSurd, CfStream]


@dataclass(frozen=True)
class Shift:
    """The shift written as u + v*alpha with an optional enclosure radius."""

    u: Fraction = Fraction(0)
    v: Fraction = Fraction(0)
    radius: Fraction = Fraction(0)

    @classmethod
    def rational(cls, value) -> "Shift":
        return cls(u=Fraction(value))

    @classmethod
    def lincomb(cls, u, v) -> "Shift":
        return cls(u=Fraction(u), v=Fraction(v))

    @classmethod
    def enclosed(cls, value, radius) -> "Shift":
        return cls(u=Fraction(value), radius=Fraction(radius))

    @property
    def exact(self) -> bool:
        return self.radius == 0

    def spec(self) -> str:
        if self.radius != 0:
            bits = -self.radius.as_integer_ratio()[1].bit_length() + 1
            return f"dec:{float(self.u)}@{abs(bits)}"
        if self.v != 0:
            return f"lincomb:{self.u},{self.v}"
        return f"rat:{self.u}"

    def __str__(self):
        return self.spec()


def make_quadratic_surd(a: int, b: int, c: int, d: int) -> QuadraticSurd:
    """Build (a + b*sqrt(d))/c, canonicalized: gcd(a,b,c)=1, c>0."""
    a, b, c, d = int(a), int(b), int(c), int(d)
    if c == 0:
        raise ZeroDenominator("denominator c must be nonzero")
    if b == 0:
        raise RationalValue("b = 0 gives a rational value")
    if d < 2:
        raise PerfectSquare(f"d must be >= 2 and non-square, got {d}")
    r = math.isqrt(d)
    if r * r == d:
        raise PerfectSquare(f"d = {d} is a perfect square")
    if c < 0:
        a, b, c = -a, -b, -c
    g = math.gcd(math.gcd(abs(a), abs(b)), c)
    return QuadraticSurd(a // g, b // g, c // g, d)


# ---------------------------------------------------------------------------
# scaled (fixed-point) evaluation
# ---------------------------------------------------------------------------


def surd_scaled(x: QuadraticSurd, bits: int) -> tuple[int, int]:
    """Integers (lo, hi) with lo/2^bits <= x < hi/2^bits, hi = lo+1 tight."""
    s = math.isqrt(x.d << (2 * bits))  # s <= sqrt(d)*2^bits < s+1
    if x.b >= 0:
        num_lo = (x.a << bits) + x.b * s
        num_hi = (x.a << bits) + x.b * (s + 1)
    else:
        num_lo = (x.a << bits) + x.b * (s + 1)
        num_hi = (x.a << bits) + x.b * s
    lo = num_lo // x.c
    hi = -((-num_hi) // x.c)
    return lo, hi


def _cf_bracket(x: CfStream) -> tuple[Fraction, Fraction]:
    """Interval of all reals whose continued fraction starts with the prefix."""
    m = x.available()
    if m < 0:
        # generator-backed: pull a generous batch to pin the value
        try:
            x.digit(64)
        except InsufficientDigits:
            pass
        m = x.available()
        if m < 0:  # still unbounded; use what is cached
            m = 64
    p_prev, q_prev = 1, 0
    p, q = x.a0, 1
    for k in range(1, m + 1):
        a = x.digit(k)
        p, p_prev = a * p + p_prev, p
        q, q_prev = a * q + q_prev, q
    end_a = Fraction(p, q)
    end_b = Fraction(p + p_prev, q + q_prev)
    return (end_a, end_b) if end_a < end_b else (end_b, end_a)


def alpha_scaled(x: IrrationalNumber, bits: int) -> tuple[int, int]:
    """Fixed-point enclosure of x: returns (lo, hi) at scale 2^bits.

    For a CF prefix, raises ``InsufficientDigits`` when the prefix interval
    is wider than one unit in the last place would allow to be useful.
    """
    if isinstance(x, QuadraticSurd):
        return surd_scaled(x, bits)
    lo_f, hi_f = _cf_bracket(x)
    lo = (lo_f.numerator << bits) // lo_f.denominator
    hi = -((-hi_f.numerator << bits) // hi_f.denominator)
    return lo, hi


def eval_enclosure(x: IrrationalNumber, target_width: Fraction) -> RealEnclosure:
    """Enclosure of x with width <= target_width."""
    target_width = Fraction(target_width)
    if target_width <= 0:
        raise ValueError("target_width must be positive")
    if isinstance(x, QuadraticSurd):
        bits = START_PRECISION
        cap = precision_cap()
        while True:
            lo, hi = surd_scaled(x, bits)
            enc = RealEnclosure.from_scaled(lo, hi, bits)
            if enc.width <= target_width:
                return enc
            bits *= 2
            if bits > cap:
                raise UnresolvedComparison(
                    f"precision cap {cap} reached enclosing {x}"
                )
    lo_f, hi_f = _cf_bracket(x)
    if hi_f - lo_f > target_width:
        raise InsufficientDigits(
            f"cf prefix pins {x.spec()} only to width {float(hi_f - lo_f):g}"
        )
    bits = max(START_PRECISION, (target_width.denominator.bit_length() + 8))
    return RealEnclosure(dy_floor(lo_f, bits), dy_ceil(hi_f, bits))


# ---------------------------------------------------------------------------
# exact sign of linear forms  u + v*alpha
# ---------------------------------------------------------------------------


def _sign_rational_plus_root(A: Fraction, B: Fraction, d: int) -> int:
    """Exact sign of A + B*sqrt(d)."""
    if B == 0:
        return (A > 0) - (A < 0)
    if A == 0:
        return 1 if B > 0 else -1
    if A > 0 and B > 0:
        return 1
    if A < 0 and B < 0:
        return -1
    # opposite signs: compare A^2 against B^2 * d
    lhs = A * A
    rhs = B * B * d
    if lhs == rhs:
        return 0  # only possible if sqrt(d) rational; never for non-square d
    if A > 0:  # B < 0
        return 1 if lhs > rhs else -1
    return -1 if lhs > rhs else 1


def linear_form_sign(x: IrrationalNumber, u: Fraction, v: Fraction) -> int:
    """Exact sign of u + v*x.  For CF prefixes this may raise
    ``UnresolvedComparison`` if the available digits cannot separate the
    form from zero."""
    u, v = Fraction(u), Fraction(v)
    if v == 0:
        return (u > 0) - (u < 0)
    if isinstance(x, QuadraticSurd):
        # u + v*(a + b*sqrt(d))/c  ==  (u*c + v*a)/c + (v*b/c) * sqrt(d)
        A = u + v * Fraction(x.a, x.c)
        B = v * Fraction(x.b, x.c)
        return _sign_rational_plus_root(A, B, x.d)
    lo_f, hi_f = _cf_bracket(x)
    if v > 0:
        lo, hi = u + v * lo_f, u + v * hi_f
    else:
        lo, hi = u + v * hi_f, u + v * lo_f
    if lo > 0:
        return 1
    if hi < 0:
        return -1
    raise UnresolvedComparison(
        f"sign of {u} + {v}*alpha not separable with available cf digits"
    )


def linear_form_enclosure(
    x: IrrationalNumber, u: Fraction, v: Fraction, bits: int
) -> tuple[int, int]:
    """Fixed-point enclosure of u + v*x at scale 2^bits."""
    alo, ahi = alpha_scaled(x, bits)
    u, v = Fraction(u), Fraction(v)
    if v >= 0:
        lo_f = u + v * Fraction(alo, 1 << bits)
        hi_f = u + v * Fraction(ahi, 1 << bits)
    else:
        lo_f = u + v * Fraction(ahi, 1 << bits)
        hi_f = u + v * Fraction(alo, 1 << bits)
    lo = (lo_f.numerator << bits) // lo_f.denominator
    hi = -((-hi_f.numerator << bits) // hi_f.denominator)
    return lo, hi


# ---------------------------------------------------------------------------
# fractional parts
# ---------------------------------------------------------------------------


def shift_is_exact_integer_at(x: IrrationalNumber, n: int, gamma: Shift) -> bool:
    """Decide whether n*x - gamma is exactly an integer.

    n*x - gamma = (n - v)*x - u; with x irrational this is an integer iff
    v == n and u is an integer.  Needs an exact shift (radius 0).
    """
    return gamma.exact and gamma.v == n and Fraction(gamma.u).denominator == 1


def frac_part(
    x: IrrationalNumber,
    n: int,
    gamma: Shift,
    target_width: Fraction,
) -> Union[RealEnclosure, ExactZero]:
    """Enclosure of {n*x - gamma}, or EXACT_ZERO when it vanishes exactly."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    target_width = Fraction(target_width)
    if shift_is_exact_integer_at(x, n, gamma):
        return EXACT_ZERO
    coef_v = n - gamma.v
    coef_u = -gamma.u
    if isinstance(x, CfStream) and coef_v != 0:
        lo_f, hi_f = _cf_bracket(x)
        if abs(coef_v) * (hi_f - lo_f) > target_width:
            raise InsufficientDigits(
                f"cf prefix too short for width {float(target_width):g} at n={n}"
            )
    bits = START_PRECISION
    cap = precision_cap()
    while True:
        lo, hi = linear_form_enclosure(x, coef_u, coef_v, bits)
        if gamma.radius != 0:
            pad = (gamma.radius.numerator << bits) // gamma.radius.denominator + 1
            lo, hi = lo - pad, hi + pad
        scale = 1 << bits
        m = lo >> bits
        fl, fh = lo - (m << bits), hi - (m << bits)
        if fh < scale and fl > 0 and Fraction(fh - fl, scale) <= target_width:
            return RealEnclosure.from_scaled(fl, fh, bits)
        if fh - fl <= 2 and (fh >= scale or fl <= 0):
            # pinned tightly against an integer: decide the side exactly
            boundary = m if fl <= 0 else m + 1
            try:
                sgn = linear_form_sign(x, coef_u - boundary, coef_v)
            except UnresolvedComparison:
                sgn = None
            if sgn is not None and gamma.radius == 0:
                if sgn == 0:
                    return EXACT_ZERO
                # fall through and refine: the side is known but the
                # enclosure still has to shrink below target_width
        bits *= 2
        if bits > cap:
            raise UnresolvedComparison(
                f"{{ {n}*alpha - gamma }} within cap width of an integer"
            )


@dataclass(frozen=True)
class LinearForm:
    """An exact value u + v*alpha, supporting symbolic arithmetic."""

    u: Fraction
    v: Fraction

    @classmethod
    def of(cls, u, v) -> "LinearForm":
        return cls(Fraction(u), Fraction(v))

    def __add__(self, other: "LinearForm") -> "LinearForm":
        return LinearForm(self.u + other.u, self.v + other.v)

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        return LinearForm(self.u - other.u, self.v - other.v)

    def __neg__(self) -> "LinearForm":
        return LinearForm(-self.u, -self.v)

    def scale(self, factor) -> "LinearForm":
        f = Fraction(factor)
        return LinearForm(self.u * f, self.v * f)

    def sign(self, x: IrrationalNumber) -> int:
        return linear_form_sign(x, self.u, self.v)

    def enclosure(self, x: IrrationalNumber, bits: int = START_PRECISION) -> RealEnclosure:
        lo, hi = linear_form_enclosure(x, self.u, self.v, bits)
        return RealEnclosure.from_scaled(lo, hi, bits)

    def __eq__(self, other):
        return isinstance(other, LinearForm) and self.u == other.u and self.v == other.v

    def __hash__(self):
        return hash((self.u, self.v))

    def __repr__(self):
        return f"LinearForm({self.u} + {self.v}*alpha)"


# ---------------------------------------------------------------------------
# parameter-string parsing
# ---------------------------------------------------------------------------

_PRESETS = {
    "phi": (1, 1, 2, 5),
    "phifrac": (-1, 1, 2, 5),
    "sqrt2": (0, 1, 1, 2),
    "sqrt2m1": (-1, 1, 1, 2),
    "sqrt3m1": (-1, 1, 1, 3),
}


def parse_alpha(spec: str) -> IrrationalNumber:
    spec = spec.strip()
    if spec in _PRESETS:
        return make_quadratic_surd(*_PRESETS[spec])
    if spec.startswith("surd:"):
        parts = spec[5:].split(",")
        if len(parts) != 4:
            raise ParseError(f"surd spec needs a,b,c,d: {spec!r}")
        try:
            a, b, c, d = (int(p) for p in parts)
        except ValueError as exc:
            raise ParseError(f"bad surd spec {spec!r}") from exc
        return make_quadratic_surd(a, b, c, d)
    if spec.startswith("cf:"):
        parts = spec[3:].split(",")
        if not parts or parts == [""]:
            raise ParseError(f"empty cf spec {spec!r}")
        try:
            vals = [int(p) for p in parts]
        except ValueError as exc:
            raise ParseError(f"bad cf spec {spec!r}") from exc
        return CfStream(vals[0], vals[1:])
    raise ParseError(f"unrecognized alpha spec {spec!r}")


def _parse_rational(text: str) -> Fraction:
    try:
        if "/" in text:
            num, den = text.split("/")
            return Fraction(int(num), int(den))
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {text!r}") from exc


def parse_gamma(spec: str) -> Shift:
    spec = spec.strip()
    if spec.startswith("rat:"):
        return Shift.rational(_parse_rational(spec[4:]))
    if spec.startswith("lincomb:"):
        parts = spec[8:].split(",")
        if len(parts) != 2:
            raise ParseError(f"lincomb spec needs u,v: {spec!r}")
        return Shift.lincomb(_parse_rational(parts[0]), _parse_rational(parts[1]))
    if spec.startswith("dec:"):
        body = spec[4:]
        if "@" not in body:
            raise ParseError(f"dec spec needs value@bits: {spec!r}")
        val, bits = body.rsplit("@", 1)
        try:
            nbits = int(bits)
        except ValueError as exc:
            raise ParseError(f"bad bit count in {spec!r}") from exc
        return Shift.enclosed(_parse_rational(val), Fraction(1, 1 << nbits))
    raise ParseError(f"unrecognized gamma spec {spec!r}")
