"""Rigorous enclosures of the reciprocal sums and their excluded indices.

The workhorse is a fixed-point table of {n*alpha - gamma} for n = 0..N:
each entry is an integer interval at scale 2**bits, built incrementally
(one interval addition per n), with near-integer entries refined
individually through the exact linear-form machinery.  Reciprocals are
accumulated with directed integer division, so the final enclosure is a
proof, not a float estimate.  Summation order is fixed (ascending n) and
results depend only on the inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import gmpy2

from .alpha import (
    EXACT_ZERO,
    CfStream,
    ExactZero,
    IrrationalNumber,
    Shift,
    alpha_scaled,
    frac_part,
    linear_form_enclosure,
    precision_cap,
    shift_is_exact_integer_at,
)
from .cf import cf_engine
from .enclosure import RealEnclosure
from .errors import DomainError, InsufficientDigits, UnresolvedComparison

QBITS = 64  # extra fractional bits used when accumulating reciprocals


@dataclass
class SumReport:
    alpha_spec: str
    gamma_spec: str
    N: int
    a: Optional[Fraction]
    b: Optional[Fraction]
    excluded: list[int]
    exact_hit: bool
    value: RealEnclosure
    term_count: int
    tol: Fraction
    kind: str = "frac"

    def to_json(self) -> dict:
        return {
            "alpha": self.alpha_spec,
            "gamma": self.gamma_spec,
            "N": self.N,
            "a": None if self.a is None else str(self.a),
            "b": None if self.b is None else str(self.b),
            "kind": self.kind,
            "excluded": self.excluded,
            "exact_hit": self.exact_hit,
            "value": {"lo": self.value.float_lo(), "hi": self.value.float_hi()},
            "term_count": self.term_count,
            "tol": float(self.tol),
        }


class FracTable:
    """Fixed-point enclosures of {n*alpha - gamma}, n = 0..N."""

    __slots__ = ("bits", "N", "fl", "fh", "override", "zero_idx")

    def __init__(self, bits: int, N: int):
        self.bits = bits
        self.N = N
        self.fl: list[int] = []
        self.fh: list[int] = []
        self.override: dict[int, tuple[int, int, int]] = {}
        self.zero_idx: Optional[int] = None

    def term(self, n: int) -> tuple[int, int, int]:
        """(lo, hi, bits) of {n*alpha - gamma}; zero entries are (0, 0, bits)."""
        ov = self.override.get(n)
        if ov is not None:
            return ov
        return self.fl[n], self.fh[n], self.bits


def _refine_term(x, gamma: Shift, n: int, bits: int) -> tuple[int, int, int]:
    """Single-term re-evaluation used for entries pinned near an integer.

    Keeps doubling until the scaled interval has plenty of significant
    bits, so downstream reciprocals stay tight even for tiny values.
    """
    while True:
        res = frac_part(x, n, gamma, Fraction(1, 1 << bits))
        if isinstance(res, ExactZero):
            return 0, 0, bits
        fl = (res.lo.numerator << bits) // res.lo.denominator
        fh = -((-res.hi.numerator << bits) // res.hi.denominator)
        if fl >= 1 << 48 and fh - fl <= max(2, fl >> 40):
            return fl, fh, bits
        bits *= 2  # precision cap enforced inside frac_part


def build_table(x: IrrationalNumber, gamma: Shift, N: int, bits: int) -> FracTable:
    table = FracTable(bits, N)
    scale = 1 << bits
    alo, ahi = alpha_scaled(x, bits)
    tl, th = linear_form_enclosure(x, -gamma.u, -gamma.v, bits)
    if gamma.radius != 0:
        pad = (gamma.radius.numerator << bits) // gamma.radius.denominator + 1
        tl, th = tl - pad, th + pad
    fl_list, fh_list = table.fl, table.fh
    zero_exact = gamma.exact and gamma.v.denominator == 1 and gamma.u.denominator == 1
    zero_n = int(gamma.v) if zero_exact and 0 <= gamma.v <= N else None
    for n in range(N + 1):
        m = tl >> bits
        fl = tl - (m << bits)
        fh = th - (m << bits)
        if fh >= scale or fl == 0:
            if n == zero_n:
                table.zero_idx = n
                table.override[n] = (0, 0, bits)
            else:
                table.override[n] = _refine_term(x, gamma, n, 2 * bits)
            fl, fh = -1, -1  # placeholder, never read
        fl_list.append(fl)
        fh_list.append(fh)
        tl += alo
        th += ahi
    return table


def _dist_interval(term: tuple[int, int, int]) -> tuple[int, int, int]:
    """||.|| = min(f, 1-f) on a fixed-point interval of f."""
    fl, fh, bits = term
    scale = 1 << bits
    dl = min(fl, scale - fh)
    dh = min(fh, scale - fl, scale >> 1)
    return dl, dh, bits


# ---------------------------------------------------------------------------
# argmin with certification
# ---------------------------------------------------------------------------


def _interval_frac(t: tuple[int, int, int], dist: bool) -> tuple[Fraction, Fraction]:
    if dist:
        t = _dist_interval(t)
    l, h, tb = t
    s = 1 << tb
    return Fraction(l, s), Fraction(h, s)


def _certified_argmin(
    x,
    gamma: Shift,
    N: int,
    table: FracTable,
    dist: bool,
) -> tuple[int, bool]:
    if table.zero_idx is not None:
        return table.zero_idx, True

    bits = table.bits
    scale = 1 << bits
    half = scale >> 1
    fls, fhs = table.fl, table.fh
    override = table.override

    # pass 1: same-scale integer scan over the regular entries
    best = -1
    bh = None
    for n in range(N + 1):
        if n in override:
            continue
        l, h = fls[n], fhs[n]
        if dist:
            h = min(h, scale - l, half)
        if best < 0 or h < bh:
            best, bh = n, h
    # candidates that might still undercut the best upper bound
    cands = []
    for n in range(N + 1):
        if n == best:
            continue
        if n in override:
            lo_f, _ = _interval_frac(override[n], dist)
            if lo_f * scale <= bh:
                cands.append(n)
            continue
        l, h = fls[n], fhs[n]
        if dist:
            l = min(l, scale - h)
        if l <= bh:
            cands.append(n)
    if not cands:
        return best, False

    cap = precision_cap()
    rbits = 2 * table.bits
    pool = sorted(cands if best < 0 else [best, *cands])
    while True:
        vals = {n: _interval_frac(_refine_term(x, gamma, n, rbits), dist) for n in pool}
        lo_best = min(pool, key=lambda n: (vals[n][1], n))
        hi0 = vals[lo_best][1]
        pool2 = [n for n in pool if n == lo_best or vals[n][0] <= hi0]
        if len(pool2) == 1:
            return lo_best, False
        if dist and gamma.exact and len(pool2) == 2:
            # exact tie ||x|| = ||y|| happens iff the two fractional parts
            # sum to an integer; break toward the smaller n
            n1, n2 = sorted(pool2)
            if Fraction(n1 + n2) == 2 * gamma.v and (2 * gamma.u).denominator == 1:
                return n1, False
        pool = pool2
        rbits *= 2
        if rbits > cap:
            raise UnresolvedComparison(
                f"argmin candidates {sorted(pool)} not separable below cap"
            )


def argmin_frac(x: IrrationalNumber, gamma: Shift, N: int) -> tuple[int, bool]:
    """Index n' minimizing {n*alpha - gamma}; second value flags an exact zero."""
    if N < 1:
        raise ValueError("N must be >= 1")
    table = build_table(x, gamma, N, _start_bits(N, Fraction(1, 1 << 30)))
    return _certified_argmin(x, gamma, N, table, dist=False)


def argmin_dist(x: IrrationalNumber, gamma: Shift, N: int) -> tuple[int, bool]:
    """Index n* minimizing ||n*alpha - gamma||, smallest n on exact ties."""
    if N < 1:
        raise ValueError("N must be >= 1")
    table = build_table(x, gamma, N, _start_bits(N, Fraction(1, 1 << 30)))
    return _certified_argmin(x, gamma, N, table, dist=True)


# ---------------------------------------------------------------------------
# summation
# ---------------------------------------------------------------------------


def _start_bits(N: int, tol: Fraction) -> int:
    tol_bits = max(0, (tol.denominator // max(1, tol.numerator)).bit_length())
    return max(160, QBITS + 2 * N.bit_length() + tol_bits + 32)


def _accumulate(
    table: FracTable,
    indices,
    *,
    a: Fraction,
    b: Fraction,
    dist: bool,
    guard_bits: int = QBITS,
) -> RealEnclosure:
    """Directed-rounded sum of 1 / (n^a * f_n^b) over the given indices."""
    int_a = a.denominator == 1 and a >= 0
    int_b = b.denominator == 1 and b >= 1
    if int_a and int_b:
        ia, ib = int(a), int(b)
        acc_lo = acc_hi = 0
        qshift = guard_bits
        for n in indices:
            t = table.term(n)
            if dist:
                t = _dist_interval(t)
            fl, fh, bits = t
            num = 1 << (bits * ib + qshift)
            if ib == 1:
                dh, dl = fh, fl
            else:
                dh, dl = fh**ib, fl**ib
            if ia:
                w = n**ia
                dh, dl = dh * w, dl * w
            acc_lo += num // dh
            acc_hi += num // dl + 1
        return RealEnclosure.from_scaled(acc_lo, acc_hi, qshift)

    # general exponents: directed mpfr evaluation of exp(-b ln f - a ln n)
    prec = max(128, guard_bits + 64)
    down = gmpy2.context(precision=prec, round=gmpy2.RoundDown)
    up = gmpy2.context(precision=prec, round=gmpy2.RoundUp)
    bq = gmpy2.mpq(b.numerator, b.denominator)
    aq = gmpy2.mpq(a.numerator, a.denominator)
    s_lo = gmpy2.mpfr(0)
    s_hi = gmpy2.mpfr(0)
    for n in indices:
        t = table.term(n)
        if dist:
            t = _dist_interval(t)
        fl, fh, bits = t
        den = 1 << bits
        e_lo = down.mul(-bq, up.log(gmpy2.mpq(fh, den)))
        e_hi = up.mul(-bq, down.log(gmpy2.mpq(fl, den)))
        if a != 0 and n > 1:
            e_lo = down.sub(e_lo, up.mul(aq, up.log(gmpy2.mpz(n))))
            e_hi = up.sub(e_hi, down.mul(aq, down.log(gmpy2.mpz(n))))
        s_lo = down.add(s_lo, down.exp(e_lo))
        s_hi = up.add(s_hi, up.exp(e_hi))
    lo_n, lo_d = s_lo.as_integer_ratio()
    hi_n, hi_d = s_hi.as_integer_ratio()
    return RealEnclosure(Fraction(int(lo_n), int(lo_d)), Fraction(int(hi_n), int(hi_d)))


def _spec_of(x) -> str:
    return x.spec()


def _sum_impl(
    x: IrrationalNumber,
    gamma: Shift,
    N: int,
    tol: Fraction,
    *,
    kind: str,
    a: Fraction = Fraction(0),
    b: Fraction = Fraction(1),
) -> SumReport:
    if N < 1:
        raise ValueError("N must be >= 1")
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    bits = _start_bits(N, tol)
    cap = precision_cap()
    prev_width = None
    while True:
        table = build_table(x, gamma, N, bits)
        dist = kind == "dist"
        n_excl, exact_hit = _certified_argmin(x, gamma, N, table, dist=dist)
        if kind == "residue":
            q_k = cf_engine(x).q(cf_engine(x).largest_index_leq(N))
            excluded = [n for n in range(N + 1) if n % q_k == n_excl % q_k]
            indices = [n for n in range(N + 1) if n % q_k != n_excl % q_k]
        elif kind == "general":
            excluded = [n_excl] if n_excl >= 1 else []
            indices = [n for n in range(1, N + 1) if n != n_excl]
        else:
            excluded = [n_excl]
            indices = [n for n in range(N + 1) if n != n_excl]
        tol_bits = max(0, (tol.denominator // max(1, tol.numerator)).bit_length())
        guard = max(QBITS, tol_bits + N.bit_length() + 8)
        value = _accumulate(table, indices, a=a, b=b, dist=dist, guard_bits=guard)
        if value.width <= tol:
            return SumReport(
                alpha_spec=_spec_of(x),
                gamma_spec=gamma.spec(),
                N=N,
                a=a if kind == "general" else None,
                b=b if b != 1 or kind == "general" else None,
                excluded=excluded,
                exact_hit=exact_hit,
                value=value,
                term_count=len(indices),
                tol=tol,
                kind=kind,
            )
        if (
            isinstance(x, CfStream)
            and prev_width is not None
            and value.width > prev_width * Fraction(3, 4)
        ):
            # more working precision no longer helps: the digit prefix
            # itself is what limits the enclosure
            raise InsufficientDigits(
                f"cf prefix of {x.spec()} cannot reach sum tolerance "
                f"{float(tol):g} (stuck near width {float(value.width):g})"
            )
        prev_width = value.width
        bits *= 2
        if bits > cap:
            raise UnresolvedComparison(
                f"sum enclosure width {float(value.width):g} above tol at cap"
            )


def sum_reciprocal_frac(x, gamma: Shift, N: int, tol) -> SumReport:
    """T_N: sum of 1/{n*alpha - gamma} over 0 <= n <= N, n != n'."""
    return _sum_impl(x, gamma, N, Fraction(tol), kind="frac")


def sum_reciprocal_frac_excluding_residue(x, gamma: Shift, N: int, tol) -> SumReport:
    """Same sum but dropping the whole residue class n = n' (mod q_K)."""
    return _sum_impl(x, gamma, N, Fraction(tol), kind="residue")


def sum_reciprocal_dist(x, gamma: Shift, N: int, tol) -> SumReport:
    """Sum of 1/||n*alpha - gamma|| excluding the minimizing index n*."""
    return _sum_impl(x, gamma, N, Fraction(tol), kind="dist")


def sum_reciprocal_power(x, gamma: Shift, N: int, b, tol) -> SumReport:
    b = Fraction(b)
    if b <= 0:
        raise DomainError("b must be positive")
    if b == 1:
        return sum_reciprocal_frac(x, gamma, N, tol)
    return _sum_impl(x, gamma, N, Fraction(tol), kind="power", b=b)


def sum_general(x, gamma: Shift, N: int, a, b, tol) -> SumReport:
    """Sum of 1/(n^a {n*alpha - gamma}^b) over 1 <= n <= N, n != n'."""
    a, b = Fraction(a), Fraction(b)
    if a < 0:
        raise DomainError("a must be nonnegative")
    if b <= 0:
        raise DomainError("b must be positive")
    if a == 0:
        rep = sum_reciprocal_power(x, gamma, N, b, tol)
        return rep
    return _sum_impl(x, gamma, N, Fraction(tol), kind="general", a=a, b=b)


# ---------------------------------------------------------------------------
# reduction to the semi-homogeneous case
# ---------------------------------------------------------------------------


def reduce_to_semihomogeneous(
    x: IrrationalNumber, gamma: Shift, N: int
) -> tuple[int, Shift]:
    """Replacement shift gamma' = {n' alpha} dominating the original sum.

    n' is the index of the smallest point {n alpha} that is >= gamma, or 0
    when every point lies below gamma.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    zero = Shift.rational(0)
    if gamma.exact and gamma.u == 0 and gamma.v == 0:
        return 0, zero
    bits = _start_bits(N, Fraction(1, 1 << 30))
    cap = precision_cap()
    while True:
        table = build_table(x, zero, N, bits)  # {n alpha}
        glo, ghi = linear_form_enclosure(x, gamma.u, gamma.v, bits)
        if gamma.radius != 0:
            pad = (gamma.radius.numerator << bits) // gamma.radius.denominator + 1
            glo, ghi = glo - pad, ghi + pad
        g_lo = Fraction(glo, 1 << bits)
        g_hi = Fraction(ghi, 1 << bits)
        best_n = None
        best_lo = best_hi = None
        undecided = False
        for n in range(1, N + 1):
            f_lo, f_hi = _interval_frac(table.term(n), False)
            if f_hi < g_lo:
                continue  # certainly below gamma
            if f_lo <= g_hi:
                # overlaps gamma: exact tie means {n alpha} == gamma
                if gamma.exact and gamma.v == n and gamma.u.denominator == 1:
                    f_lo = g_lo  # equality: point counts as >= gamma
                else:
                    undecided = True
                    break
            if best_hi is None or f_hi < best_lo:
                best_n, best_lo, best_hi = n, f_lo, f_hi
            elif f_lo <= best_hi:
                undecided = True
                break
        if not undecided:
            n_prime = best_n if best_n is not None else 0
            if n_prime == 0:
                return 0, zero
            # gamma' = {n' alpha} = n' alpha - floor(n' alpha)
            fbits = bits
            while True:
                tl, th = linear_form_enclosure(x, Fraction(0), Fraction(n_prime), fbits)
                if (tl >> fbits) == (th >> fbits):
                    return n_prime, Shift.lincomb(-(tl >> fbits), n_prime)
                fbits *= 2
                if fbits > cap:
                    raise UnresolvedComparison("floor(n' alpha) not separable")
        bits *= 2
        if bits > cap:
            raise UnresolvedComparison(
                "cannot order points around gamma below the precision cap"
            )
