"""Constructive three-distance decomposition of {alpha}, ..., {N alpha}.

Everything here is pure integer arithmetic on the convergent tables: the
(k, r, s) split, the A/B/C index classification, the successor step and
the full sorted permutation.  Gap lengths are carried as exact linear
forms u + v*alpha; enclosures are derived on demand.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .alpha import IrrationalNumber, LinearForm
from .cf import cf_engine
from .enclosure import RealEnclosure
from .errors import OutOfRange


class GapClass(Enum):
    A = "A"
    B = "B"
    C = "C"


@dataclass(frozen=True)
class ThreeGapDecomposition:
    alpha: IrrationalNumber = field(compare=False)
    N: int
    k: int
    r: int
    s: int
    q_k: int
    q_km1: int
    delta_A: LinearForm
    delta_B: LinearForm
    delta_C: LinearForm
    count_A: int
    count_B: int
    count_C: int

    def delta(self, cls: GapClass) -> LinearForm:
        if cls is GapClass.A:
            return self.delta_A
        if cls is GapClass.B:
            return self.delta_B
        return self.delta_C

    def delta_enclosure(self, cls: GapClass, bits: int = 128) -> RealEnclosure:
        return self.delta(cls).enclosure(self.alpha, bits)

    def to_json(self) -> dict:
        def d(form: LinearForm) -> dict:
            enc = form.enclosure(self.alpha, 96)
            return {"u": str(form.u), "v": str(form.v), "approx": float(enc)}

        return {
            "N": self.N,
            "k": self.k,
            "r": self.r,
            "s": self.s,
            "delta": {
                "A": d(self.delta_A),
                "B": d(self.delta_B),
                "C": d(self.delta_C),
            },
            "counts": {"A": self.count_A, "B": self.count_B, "C": self.count_C},
        }


def decompose(x: IrrationalNumber, N: int) -> ThreeGapDecomposition:
    """The unique (k, r, s) split of N with gap lengths and counts."""
    if N < 1:
        raise ValueError("N must be >= 1")
    eng = cf_engine(x)
    k = 0
    while eng.q(k + 1) + eng.q(k) <= N:
        k += 1
    q_k, q_km1 = eng.q(k), eng.q(k - 1)
    r, s = divmod(N - q_km1, q_k)
    a_k1 = eng.a(k + 1)
    assert 1 <= r <= a_k1 and 0 <= s <= q_k - 1

    p_k, p_k1 = eng.p(k), eng.p(k + 1)
    q_k1 = eng.q(k + 1)
    sign = 1 if k % 2 == 0 else -1
    # |D_k| = (-1)^k (q_k alpha - p_k);  |D_{k+1}| has the opposite sign.
    abs_dk = LinearForm.of(-sign * p_k, sign * q_k)
    abs_dk1 = LinearForm.of(sign * p_k1, -sign * q_k1)
    delta_a = abs_dk
    delta_b = abs_dk1 + abs_dk.scale(a_k1 - r)
    return ThreeGapDecomposition(
        alpha=x,
        N=N,
        k=k,
        r=r,
        s=s,
        q_k=q_k,
        q_km1=q_km1,
        delta_A=delta_a,
        delta_B=delta_b,
        delta_C=delta_a + delta_b,
        count_A=N + 1 - q_k,
        count_B=s + 1,
        count_C=q_k - s - 1,
    )


def _jump_A(dec: ThreeGapDecomposition) -> int:
    return dec.q_k if dec.k % 2 == 0 else -dec.q_k


def _jump_B(dec: ThreeGapDecomposition) -> int:
    step = dec.q_km1 + dec.r * dec.q_k
    return -step if dec.k % 2 == 0 else step


def _jump_C(dec: ThreeGapDecomposition) -> int:
    step = dec.q_km1 + (dec.r - 1) * dec.q_k
    return -step if dec.k % 2 == 0 else step


def classify(n: int, dec: ThreeGapDecomposition) -> GapClass:
    """Which of the three gap lengths follows the point {n alpha}."""
    if not 0 <= n <= dec.N:
        raise OutOfRange(f"n = {n} outside [0, {dec.N}]")
    if 0 <= n + _jump_A(dec) <= dec.N:
        return GapClass.A
    if 0 <= n + _jump_B(dec) <= dec.N:
        return GapClass.B
    return GapClass.C


def step(n: int, dec: ThreeGapDecomposition) -> int:
    """Index whose point is the sorted successor of {n alpha} (cyclic)."""
    cls = classify(n, dec)
    if cls is GapClass.A:
        return n + _jump_A(dec)
    if cls is GapClass.B:
        return n + _jump_B(dec)
    return n + _jump_C(dec)


def permutation(x: IrrationalNumber, N: int) -> list[int]:
    """(n_1, ..., n_N) with 0 < {n_1 a} < ... < {n_N a} < 1."""
    dec = decompose(x, N)
    out = []
    n = 0
    for _ in range(N):
        n = step(n, dec)
        out.append(n)
    return out


def gap_after(n: int, dec: ThreeGapDecomposition) -> LinearForm:
    """Exact length of the interval that starts at {n alpha}."""
    return dec.delta(classify(n, dec))
