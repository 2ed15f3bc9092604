"""Continued-fraction engine: partial quotients, convergents, signed errors.

For quadratic surds the digits come from the classical integer-only step
alpha_{k+1} = 1/(alpha_k - a_k) on exact surd states, so arbitrarily many
digits are available.  For a ``CfStream`` the digits are whatever the
prefix supplies; running out raises ``InsufficientDigits``.

Convergent tables are append-only caches behind a lock, so parallel
sweeps can share one engine per alpha.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction

from .alpha import (
    CfStream,
    IrrationalNumber,
    LinearForm,
    QuadraticSurd,
    precision_cap,
)
from .enclosure import RealEnclosure
from .errors import InsufficientDigits


@dataclass(frozen=True)
class Convergent:
    k: int
    a: int  # partial quotient a_k
    p: int
    q: int

    @property
    def error_form(self) -> LinearForm:
        """D_k = q_k*alpha - p_k as an exact linear form."""
        return LinearForm.of(-self.p, self.q)


def _surd_floor(a: int, b: int, c: int, d: int) -> int:
    """Exact floor of (a + b*sqrt(d))/c with c > 0 and d non-square."""
    s = math.isqrt(b * b * d)
    if b >= 0:
        return (a + s) // c
    return (a - s - 1) // c


def _surd_step(a: int, b: int, c: int, d: int, f: int) -> tuple[int, int, int, int]:
    """Canonical state of 1/((a + b*sqrt(d))/c - f)."""
    a -= f * c
    # 1/((a + b sqrt d)/c) = (c*a - c*b sqrt d) / (a^2 - b^2 d)
    na, nb, nc = c * a, -c * b, a * a - b * b * d
    if nc < 0:
        na, nb, nc = -na, -nb, -nc
    g = math.gcd(math.gcd(abs(na), abs(nb)), nc)
    return na // g, nb // g, nc // g, d


class ContinuedFraction:
    """Cached digits and convergents of one irrational."""

    def __init__(self, x: IrrationalNumber):
        self.x = x
        self._lock = threading.RLock()
        self._digits: list[int] = []
        # p/q tables indexed k+1 so that [0] holds the k = -1 seed
        self._p: list[int] = [1]
        self._q: list[int] = [0]
        if isinstance(x, QuadraticSurd):
            self._state: tuple[int, int, int, int] | None = (x.a, x.b, x.c, x.d)
        else:
            self._state = None

    def _extend_one(self) -> None:
        k = len(self._digits)
        if self._state is not None:
            a, b, c, d = self._state
            dig = _surd_floor(a, b, c, d)
            self._state = _surd_step(a, b, c, d, dig)
        else:
            dig = self.x.digit(k)  # raises InsufficientDigits when exhausted
        self._digits.append(dig)
        self._p.append(dig * self._p[-1] + (self._p[-2] if k >= 1 else 0))
        self._q.append(dig * self._q[-1] + (self._q[-2] if k >= 1 else 0))
        if k == 0:
            # seeds: p_0 = a_0, p_{-1} = 1, q_0 = 1, q_{-1} = 0
            self._p[-1] = dig
            self._q[-1] = 1

    def ensure(self, k: int) -> None:
        with self._lock:
            while len(self._digits) <= k:
                self._extend_one()

    def a(self, k: int) -> int:
        self.ensure(k)
        return self._digits[k]

    def p(self, k: int) -> int:
        if k == -1:
            return 1
        self.ensure(k)
        return self._p[k + 1]

    def q(self, k: int) -> int:
        if k == -1:
            return 0
        self.ensure(k)
        return self._q[k + 1]

    def convergent(self, k: int) -> Convergent:
        self.ensure(k)
        return Convergent(k, self._digits[k], self._p[k + 1], self._q[k + 1])

    def largest_index_leq(self, N: int) -> int:
        """K with q_K <= N < q_{K+1} (largest index when q repeats at 1)."""
        if N < 1:
            raise ValueError("N must be >= 1")
        k = 0
        while self.q(k + 1) <= N:
            k += 1
        return k

    def error_enclosure(self, k: int, bits: int | None = None) -> RealEnclosure:
        """Rigorous enclosure of D_k, tight enough to bracket inside
        (1/(q_{k+1}+q_k), 1/q_{k+1}) in absolute value."""
        form = self.convergent(k).error_form
        qk1 = self.q(k + 1)
        want = bits or max(64, 2 * qk1.bit_length() + 32)
        cap = precision_cap()
        lo_bound = Fraction(1, qk1 + self.q(k))
        hi_bound = Fraction(1, qk1)
        positive = k % 2 == 0  # D_k has sign (-1)^k
        while True:
            enc = form.enclosure(self.x, want)
            a_lo, a_hi = (enc.lo, enc.hi) if positive else (-enc.hi, -enc.lo)
            if a_lo > lo_bound and a_hi < hi_bound:
                return enc
            want *= 2
            if want > cap:
                raise InsufficientDigits(
                    f"cannot certify D_{k} bracketing at precision cap"
                )


_SURD_ENGINES: dict[QuadraticSurd, ContinuedFraction] = {}
_ENGINE_LOCK = threading.Lock()


def cf_engine(x: IrrationalNumber) -> ContinuedFraction:
    if isinstance(x, QuadraticSurd):
        with _ENGINE_LOCK:
            eng = _SURD_ENGINES.get(x)
            if eng is None:
                eng = _SURD_ENGINES[x] = ContinuedFraction(x)
            return eng
    eng = getattr(x, "_cf_engine", None)
    if eng is None:
        eng = ContinuedFraction(x)
        x._cf_engine = eng
    return eng


# -- module-level convenience operations -------------------------------------


def partial_quotients(x: IrrationalNumber, count: int) -> list[int]:
    """[a_0, a_1, ..., a_count]."""
    if count < 1:
        raise ValueError("count must be positive")
    eng = cf_engine(x)
    eng.ensure(count)
    return [eng.a(k) for k in range(count + 1)]


def convergents(x: IrrationalNumber, count: int) -> list[Convergent]:
    if count < 1:
        raise ValueError("count must be positive")
    eng = cf_engine(x)
    eng.ensure(count)
    return [eng.convergent(k) for k in range(count + 1)]


def approximation_error(x: IrrationalNumber, k: int) -> tuple[LinearForm, RealEnclosure]:
    eng = cf_engine(x)
    return eng.convergent(k).error_form, eng.error_enclosure(k)


def largest_convergent_index(x: IrrationalNumber, N: int) -> int:
    return cf_engine(x).largest_index_leq(N)
