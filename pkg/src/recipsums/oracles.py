"""Independent brute-force reference implementations.

Everything here recomputes from scratch: alpha is bracketed by integer
square roots (or a locally run convergent recurrence for digit streams),
points are sorted naively, and sums are plain rational or mpmath
interval arithmetic.  None of the linear-form or fixed-point machinery
from the fast modules is used, so the two paths cannot share a bug.
Performance is a non-goal.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from mpmath import iv

from .alpha import (
    CfStream,
    IrrationalNumber,
    QuadraticSurd,
    Shift,
    shift_is_exact_integer_at,
)
from .enclosure import RealEnclosure
from .errors import DomainError, InsufficientDigits, UnresolvedComparison

_MAX_DOUBLINGS = 10


@dataclass(frozen=True)
class OracleConfig:
    precision_bits: int = 256
    seed: int = 0

    def __post_init__(self):
        if self.precision_bits < 128:
            raise ValueError("oracle precision must be at least 128 bits")

    def rng(self) -> random.Random:
        return random.Random(self.seed)


def _alpha_bracket(x: IrrationalNumber, bits: int) -> tuple[Fraction, Fraction]:
    """Fractions lo <= x <= hi with hi - lo about 2**-bits."""
    if isinstance(x, QuadraticSurd):
        s = math.isqrt(x.d << (2 * bits))
        root_lo = Fraction(s, 1 << bits)
        root_hi = Fraction(s + 1, 1 << bits)
        if x.b >= 0:
            lo = (x.a + x.b * root_lo) / x.c
            hi = (x.a + x.b * root_hi) / x.c
        else:
            lo = (x.a + x.b * root_hi) / x.c
            hi = (x.a + x.b * root_lo) / x.c
        return lo, hi
    if isinstance(x, CfStream):
        p, pm = x.digit(0), 1
        q, qm = 1, 0
        k = 1
        while True:
            if q > 1 and Fraction(1, q * qm if qm else q) <= Fraction(1, 1 << bits):
                break
            try:
                a = x.digit(k)
            except InsufficientDigits:
                if k < 2:
                    raise
                break
            p, pm = a * p + pm, p
            q, qm = a * q + qm, q
            k += 1
        lo, hi = Fraction(p, q), Fraction(p + pm, q + qm)
        if lo > hi:
            lo, hi = hi, lo
        return lo, hi
    raise DomainError(f"unsupported alpha type {type(x).__name__}")


def _scaled_down(f: Fraction, bits: int) -> int:
    return (f.numerator << bits) // f.denominator


def _scaled_up(f: Fraction, bits: int) -> int:
    return -((-f.numerator << bits) // f.denominator)


def _frac_brackets(
    x: IrrationalNumber, gamma: Shift, N: int, bits: int, start: int
) -> list[tuple[int, Fraction, Fraction] | None]:
    """[(n, lo, hi)] with lo <= {n*alpha - gamma} <= hi; None marks an
    exact-zero entry.  Returns [] when some floor is still ambiguous.

    The work happens in integer fixed point at scale 2**bits; only the
    returned endpoints are Fractions.
    """
    a_lo, a_hi = _alpha_bracket(x, bits)
    g_lo = gamma.u + gamma.v * a_lo - gamma.radius
    g_hi = gamma.u + gamma.v * a_hi + gamma.radius
    if gamma.v < 0:
        g_lo = gamma.u + gamma.v * a_hi - gamma.radius
        g_hi = gamma.u + gamma.v * a_lo + gamma.radius
    rows = _int_brackets(x, gamma, N, bits, start)
    scale = 1 << bits
    return [
        row if row is None else (row[0], Fraction(row[1], scale), Fraction(row[2], scale))
        for row in rows
    ]


def _int_brackets(
    x: IrrationalNumber, gamma: Shift, N: int, bits: int, start: int
) -> list[tuple[int, int, int] | None]:
    a_lo, a_hi = _alpha_bracket(x, bits)
    g_lo = gamma.u + gamma.v * a_lo - gamma.radius
    g_hi = gamma.u + gamma.v * a_hi + gamma.radius
    if gamma.v < 0:
        g_lo = gamma.u + gamma.v * a_hi - gamma.radius
        g_hi = gamma.u + gamma.v * a_lo + gamma.radius
    al = _scaled_down(a_lo, bits)
    ah = _scaled_up(a_hi, bits)
    gl = _scaled_down(g_lo, bits)
    gh = _scaled_up(g_hi, bits)
    out: list[tuple[int, int, int] | None] = []
    for n in range(start, N + 1):
        if shift_is_exact_integer_at(x, n, gamma):
            out.append(None)
            continue
        lo = n * al - gh
        hi = n * ah - gl
        m = lo >> bits
        if hi >> bits != m:
            return []
        out.append((n, lo - (m << bits), hi - (m << bits)))
    return out


def _resolved_brackets(x, gamma, N, cfg, start=1):
    bits = cfg.precision_bits
    for _ in range(_MAX_DOUBLINGS):
        rows = _frac_brackets(x, gamma, N, bits, start)
        if rows:
            return rows
        bits *= 2
    raise UnresolvedComparison("oracle cannot separate a point from an integer")


def _sorted_int_rows(
    x: IrrationalNumber, N: int, cfg: OracleConfig
) -> tuple[list[tuple[int, int, int]], int]:
    bits = cfg.precision_bits
    for _ in range(_MAX_DOUBLINGS):
        rows = _int_brackets(x, Shift(), N, bits, 1)
        if rows:
            rows.sort(key=lambda t: t[1])
            if all(rows[i][2] < rows[i + 1][1] for i in range(len(rows) - 1)):
                return rows, bits
        bits *= 2
    raise UnresolvedComparison("oracle cannot certify the sort order")


def sorted_points(
    x: IrrationalNumber, N: int, cfg: OracleConfig = OracleConfig()
) -> list[tuple[int, RealEnclosure]]:
    """The points {alpha}, ..., {N alpha} in certified ascending order."""
    if N < 1:
        raise ValueError("N must be >= 1")
    rows, bits = _sorted_int_rows(x, N, cfg)
    scale = 1 << bits
    return [
        (n, RealEnclosure(Fraction(lo, scale), Fraction(hi, scale)))
        for n, lo, hi in rows
    ]


def gap_multiset(
    x: IrrationalNumber, N: int, cfg: OracleConfig = OracleConfig()
) -> list[tuple[RealEnclosure, int]]:
    """Lengths of the N+1 intervals cut by the sorted points, grouped
    into certified-distinct values (ascending), with multiplicities."""
    if N < 1:
        raise ValueError("N must be >= 1")
    rows, bits = _sorted_int_rows(x, N, cfg)
    scale = 1 << bits
    cuts_lo = [0] + [lo for _, lo, _ in rows] + [scale]
    cuts_hi = [0] + [hi for _, _, hi in rows] + [scale]
    gaps = [
        (cuts_lo[i + 1] - cuts_hi[i], cuts_hi[i + 1] - cuts_lo[i])
        for i in range(len(rows) + 1)
    ]
    gaps.sort()
    clusters: list[list[int]] = []
    for lo, hi in gaps:
        if clusters and lo <= clusters[-1][1]:
            clusters[-1][0] = min(clusters[-1][0], lo)
            clusters[-1][1] = max(clusters[-1][1], hi)
            clusters[-1][2] += 1
        else:
            clusters.append([lo, hi, 1])
    if len(clusters) > 3:
        raise UnresolvedComparison(
            f"{len(clusters)} gap clusters; cannot certify three-value structure"
        )
    return [
        (RealEnclosure(Fraction(lo, scale), Fraction(hi, scale)), cnt)
        for lo, hi, cnt in clusters
    ]


def _oracle_argmin(rows, dist: bool, gamma: Shift) -> int:
    """Certified index of the smallest (distance to Z of the) bracket."""
    vals = []
    for row in rows:
        if row is None:
            continue
        n, lo, hi = row
        if dist:
            lo, hi = min(lo, 1 - hi), min(hi, 1 - lo, Fraction(1, 2))
        vals.append((n, lo, hi))
    if not vals:
        raise DomainError("no candidate terms")
    best = min(vals, key=lambda t: t[2])
    ties = [t for t in vals if t[1] <= best[2]]
    if len(ties) == 1:
        return best[0]
    if dist and gamma.exact and len(ties) == 2:
        n1, n2 = sorted(t[0] for t in ties)
        # exact mirror pair: n1*alpha - g = -(n2*alpha - g) mod 1
        if Fraction(n1 + n2) == 2 * gamma.v and (2 * gamma.u).denominator == 1:
            return n1
    raise UnresolvedComparison("oracle argmin not separated")


def sum_brute(
    x: IrrationalNumber,
    gamma: Shift,
    N: int,
    a=0,
    b=1,
    cfg: OracleConfig = OracleConfig(),
    dist: bool = False,
    exclude_residue_mod: int | None = None,
) -> RealEnclosure:
    """Direct high-precision enclosure of sum 1/(n^a * f_n^b).

    f_n is {n*alpha - gamma}, or the distance to the nearest integer
    when dist is set.  The minimizing index is excluded; with
    exclude_residue_mod = q its whole residue class mod q is.  The index
    range is 0..N, shrinking to 1..N when a != 0.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    a, b = Fraction(a), Fraction(b)
    start = 1 if a != 0 else 0
    bits = cfg.precision_bits
    for _ in range(_MAX_DOUBLINGS):
        # the minimizing index is always taken over the full range 0..N,
        # even when the summation itself starts at n = 1
        rows = _resolved_brackets(x, gamma, N, OracleConfig(bits, cfg.seed), 0)
        zero_ns = {i for i, r in enumerate(rows) if r is None}
        if zero_ns:
            n_min = min(zero_ns)
        else:
            n_min = _oracle_argmin(rows, dist, gamma)
        rows = rows[start:]
        if exclude_residue_mod:
            skip = lambda n: n % exclude_residue_mod == n_min % exclude_residue_mod
        else:
            skip = lambda n: n == n_min
        terms = []
        ok = True
        for row in rows:
            if row is None:
                continue
            n, lo, hi = row
            if skip(n):
                continue
            if dist:
                lo, hi = min(lo, 1 - hi), min(hi, 1 - lo, Fraction(1, 2))
            if lo <= 0:
                ok = False
                break
            terms.append((n, lo, hi))
        if ok:
            return _eval_terms(terms, a, b, bits)
        bits *= 2
    raise UnresolvedComparison("oracle sum terms not separated from zero")


def _eval_terms(terms, a: Fraction, b: Fraction, bits: int) -> RealEnclosure:
    if a.denominator == 1 and b.denominator == 1:
        ia, ib = int(a), int(b)
        total_lo = total_hi = Fraction(0)
        for n, lo, hi in terms:
            w = Fraction(n**ia) if ia else Fraction(1)
            total_lo += 1 / (w * hi**ib)
            total_hi += 1 / (w * lo**ib)
        return RealEnclosure(total_lo, total_hi)
    old = iv.prec
    try:
        iv.prec = max(bits, 128)
        nb = iv.mpf(f"-{b.numerator}/{b.denominator}")
        na = iv.mpf(f"-{a.numerator}/{a.denominator}")
        acc = iv.mpf(0)
        for n, lo, hi in terms:
            f = _iv_rational(lo, hi)
            t = iv.exp(nb * iv.log(f))
            if a != 0:
                t = t * iv.exp(na * iv.log(iv.mpf(n)))
            acc = acc + t
        lo_raw, hi_raw = acc._mpi_
        return RealEnclosure(_mpf_fraction(lo_raw), _mpf_fraction(hi_raw))
    finally:
        iv.prec = old


def _iv_rational(lo: Fraction, hi: Fraction):
    return iv.mpf(
        [f"{lo.numerator}/{lo.denominator}", f"{hi.numerator}/{hi.denominator}"]
    )


def _mpf_fraction(raw) -> Fraction:
    sign, man, exp, _ = raw
    f = Fraction(int(man)) * Fraction(2) ** int(exp)
    return -f if sign else f
