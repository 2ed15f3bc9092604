"""Explicit upper bounds for the reciprocal sums, as rigorous enclosures.

All logarithms are natural.  A verification verdict of Holds means
sum.upper <= bound.lower with directed rounding on both sides, so every
reported Holds is a proof.  Non-verification is reported as Inconclusive
(never "fails"): the bounds are mathematically guaranteed for correct
inputs, so a failure to verify signals an input or harness problem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import gmpy2

from .alpha import IrrationalNumber, Shift
from .cf import cf_engine
from .enclosure import RealEnclosure
from .errors import DomainError, ParameterMismatch
from .sums import (
    SumReport,
    sum_reciprocal_dist,
    sum_reciprocal_frac,
    sum_reciprocal_frac_excluding_residue,
    sum_reciprocal_power,
)

_LOG_BITS = 96
_ZETA_DEFAULT_TOL = Fraction(1, 1 << 24)


@dataclass
class BoundValue:
    kind: str  # frac | frac-residue | dist | power-zeta | power-sublinear
    K: int
    alpha_spec: str
    N: int
    b: Optional[Fraction]
    enclosure: RealEnclosure


@dataclass
class BoundReport:
    kind: str
    K: int
    bound: RealEnclosure
    sum: RealEnclosure
    verdict: str  # Holds | Inconclusive
    tightness: float

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "K": self.K,
            "bound": {"lo": self.bound.float_lo(), "hi": self.bound.float_hi()},
            "sum": {"lo": self.sum.float_lo(), "hi": self.sum.float_hi()},
            "verdict": self.verdict,
            "tightness": self.tightness,
        }


def _k_data(x: IrrationalNumber, N: int) -> tuple[int, int, int]:
    eng = cf_engine(x)
    K = eng.largest_index_leq(N)
    return K, eng.q(K), eng.q(K + 1)


def _log_enc(value: Fraction) -> RealEnclosure:
    if value == 1:
        return RealEnclosure.exact(0)
    return RealEnclosure.exact(value).log(_LOG_BITS)


def bound_T(x: IrrationalNumber, N: int) -> BoundValue:
    """4N(log q_K + 1) + 2 q_{K+1} (log(N/q_K) + 1)."""
    K, qk, qk1 = _k_data(x, N)
    enc = (_log_enc(Fraction(qk)) + 1).scale(4 * N) + (
        _log_enc(Fraction(N, qk)) + 1
    ).scale(2 * qk1)
    return BoundValue("frac", K, x.spec(), N, None, enc)


def bound_T_excluding(x: IrrationalNumber, N: int) -> BoundValue:
    """4N(log q_K + 1)."""
    K, qk, _ = _k_data(x, N)
    enc = (_log_enc(Fraction(qk)) + 1).scale(4 * N)
    return BoundValue("frac-residue", K, x.spec(), N, None, enc)


def bound_dist(x: IrrationalNumber, N: int) -> BoundValue:
    """8N(log q_K + 1) + 4 q_{K+1} (log(N/q_K) + 2)."""
    K, qk, qk1 = _k_data(x, N)
    enc = (_log_enc(Fraction(qk)) + 1).scale(8 * N) + (
        _log_enc(Fraction(N, qk)) + 2
    ).scale(4 * qk1)
    return BoundValue("dist", K, x.spec(), N, None, enc)


@lru_cache(maxsize=64)
def zeta(b, tol=_ZETA_DEFAULT_TOL) -> RealEnclosure:
    """Enclosure of zeta(b) = sum j^-b for b > 1.

    Partial sum with directed rounding plus the integral tail bracket
    int_M <= tail <= int_{M-1}.  The cut M is sized so the bracket width
    (about M^-b) meets tol; the stated tolerance is verified on exit.
    """
    b = Fraction(b)
    tol = Fraction(tol)
    if b <= 1:
        raise DomainError("zeta enclosure requires b > 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    M = max(16, math.ceil(float(2 / tol) ** (1.0 / float(b))) + 2)
    sbits = max(64, M.bit_length() + max(0, tol.denominator.bit_length()) + 16)
    if b.denominator == 1:
        ib = int(b)
        one = 1 << sbits
        acc_lo = acc_hi = 0
        for j in range(1, M):
            t = one // j**ib
            acc_lo += t
            acc_hi += t + 1
        partial = RealEnclosure.from_scaled(acc_lo, acc_hi, sbits)
        tail = RealEnclosure(
            Fraction(1, (ib - 1) * M ** (ib - 1)),
            Fraction(1, (ib - 1) * (M - 1) ** (ib - 1)),
        )
    else:
        down = gmpy2.context(precision=sbits, round=gmpy2.RoundDown)
        up = gmpy2.context(precision=sbits, round=gmpy2.RoundUp)
        nbq = gmpy2.mpq(-b.numerator, b.denominator)
        s_lo = gmpy2.mpfr(0)
        s_hi = gmpy2.mpfr(0)
        for j in range(1, M):
            jz = gmpy2.mpz(j)
            s_lo = down.add(s_lo, down.exp(down.mul(nbq, up.log(jz))))
            s_hi = up.add(s_hi, up.exp(up.mul(nbq, down.log(jz))))
        ln_, ld_ = s_lo.as_integer_ratio()
        hn_, hd_ = s_hi.as_integer_ratio()
        partial = RealEnclosure(Fraction(int(ln_), int(ld_)), Fraction(int(hn_), int(hd_)))
        # tail bracket via M^(1-b)/(b-1)
        lo_t = RealEnclosure.exact(M).pow(1 - b, sbits).scale(Fraction(1) / (b - 1))
        hi_t = RealEnclosure.exact(M - 1).pow(1 - b, sbits).scale(Fraction(1) / (b - 1))
        tail = RealEnclosure(lo_t.lo, hi_t.hi)
    enc = partial + tail
    if enc.width > tol:
        raise DomainError(
            f"zeta({b}) enclosure width {float(enc.width):g} misses tol {float(tol):g}"
        )
    return enc


def _pow2(exponent: Fraction) -> RealEnclosure:
    return RealEnclosure.exact(2).pow(exponent, _LOG_BITS)


def bound_power(x: IrrationalNumber, N: int, b) -> BoundValue:
    """The matching branch of the power-sum bound (b > 1 uses zeta)."""
    b = Fraction(b)
    if b <= 0:
        raise DomainError("b must be positive")
    if b == 1:
        raise DomainError("b = 1 is covered by the plain reciprocal-sum bound")
    K, qk, qk1 = _k_data(x, N)
    if b > 1:
        z = zeta(b)
        n_pow = RealEnclosure.exact(N).pow(b, _LOG_BITS)
        q_pow = RealEnclosure.exact(qk1).pow(b, _LOG_BITS)
        enc = _pow2(1 + b) * z * n_pow + _pow2(b) * z * q_pow
        kind = "power-zeta"
    else:
        inv = Fraction(1) / (1 - b)
        q_pow = RealEnclosure.exact(qk1).pow(b, _LOG_BITS)
        ratio_pow = RealEnclosure.exact(Fraction(N, qk)).pow(1 - b, _LOG_BITS)
        enc = _pow2(1 + b).scale(inv * N) + (_pow2(b) * q_pow * ratio_pow).scale(inv)
        kind = "power-sublinear"
    return BoundValue(kind, K, x.spec(), N, b, enc)


def verify(sum_report: SumReport, bound: BoundValue) -> BoundReport:
    """Rigorous comparison: Holds iff sum.upper <= bound.lower."""
    if sum_report.alpha_spec != bound.alpha_spec or sum_report.N != bound.N:
        raise ParameterMismatch(
            f"sum over ({sum_report.alpha_spec}, N={sum_report.N}) vs "
            f"bound for ({bound.alpha_spec}, N={bound.N})"
        )
    if bound.b is not None and sum_report.b is not None and bound.b != sum_report.b:
        raise ParameterMismatch(f"sum b={sum_report.b} vs bound b={bound.b}")
    holds = sum_report.value.hi <= bound.enclosure.lo
    tightness = float(Fraction(sum_report.value.hi) / Fraction(bound.enclosure.lo))
    return BoundReport(
        kind=bound.kind,
        K=bound.K,
        bound=bound.enclosure,
        sum=sum_report.value,
        verdict="Holds" if holds else "Inconclusive",
        tightness=tightness,
    )


_KINDS = ("e1", "e2", "dist", "power")


def check_bound(
    x: IrrationalNumber,
    gamma: Shift,
    N: int,
    kind: str = "e1",
    b=None,
    tol=Fraction(1, 1 << 30),
) -> BoundReport:
    """Compute the matching (sum, bound) pair and verify it.

    A non-Holds outcome triggers one retry at quadrupled sum precision
    before being reported as Inconclusive.
    """
    if kind not in _KINDS:
        raise DomainError(f"unknown bound kind {kind!r}")
    tol = Fraction(tol)

    def compute(t: Fraction) -> tuple[SumReport, BoundValue]:
        if kind == "e1":
            return sum_reciprocal_frac(x, gamma, N, t), bound_T(x, N)
        if kind == "e2":
            return (
                sum_reciprocal_frac_excluding_residue(x, gamma, N, t),
                bound_T_excluding(x, N),
            )
        if kind == "dist":
            return sum_reciprocal_dist(x, gamma, N, t), bound_dist(x, N)
        if b is None:
            raise DomainError("power verification needs b")
        return sum_reciprocal_power(x, gamma, N, b, t), bound_power(x, N, b)

    rep = verify(*compute(tol))
    if rep.verdict != "Holds":
        rep = verify(*compute(tol / 4))
    return rep
