"""The brute-force reference path, and its agreement with the fast path."""

import random
from fractions import Fraction

import pytest

from recipsums.alpha import Shift, parse_alpha, parse_gamma
from recipsums.cf import cf_engine
from recipsums.oracles import OracleConfig, gap_multiset, sorted_points, sum_brute
from recipsums.sums import (
    sum_general,
    sum_reciprocal_dist,
    sum_reciprocal_frac,
    sum_reciprocal_frac_excluding_residue,
    sum_reciprocal_power,
)
from recipsums.threegap import decompose, permutation

CFG = OracleConfig()
TOL = Fraction(1, 1 << 30)


def overlap(enclosure, report):
    return enclosure.lo <= report.value.hi and report.value.lo <= enclosure.hi


class TestConfig:
    def test_minimum_precision(self):
        with pytest.raises(ValueError):
            OracleConfig(precision_bits=64)

    def test_seeded_rng(self):
        assert OracleConfig(seed=5).rng().random() == OracleConfig(seed=5).rng().random()


class TestSortedPoints:
    def test_sqrt2m1_order(self):
        pts = sorted_points(parse_alpha("sqrt2m1"), 4, CFG)
        assert [n for n, _ in pts] == [3, 1, 4, 2]
        mids = [float(e.midpoint()) for _, e in pts]
        expect = [0.242641, 0.414214, 0.656854, 0.828427]
        assert all(abs(m - v) < 1e-6 for m, v in zip(mids, expect))

    def test_phifrac_order(self):
        pts = sorted_points(parse_alpha("phifrac"), 5, CFG)
        assert [n for n, _ in pts] == [5, 2, 4, 1, 3]

    def test_single_point(self):
        pts = sorted_points(parse_alpha("sqrt2m1"), 1, CFG)
        assert len(pts) == 1 and pts[0][0] == 1

    def test_matches_permutation(self):
        for spec in ("phifrac", "sqrt2m1", "sqrt3m1"):
            x = parse_alpha(spec)
            for N in (1, 2, 3, 5, 8, 21, 55, 144):
                assert [n for n, _ in sorted_points(x, N, CFG)] == permutation(x, N)


class TestGapMultiset:
    def test_sqrt2m1_N4(self):
        gm = gap_multiset(parse_alpha("sqrt2m1"), 4, CFG)
        assert [(round(float(e.midpoint()), 6), c) for e, c in gm] == [
            (0.171573, 3),
            (0.242641, 2),
        ]

    def test_phifrac_N5(self):
        gm = gap_multiset(parse_alpha("phifrac"), 5, CFG)
        assert [(round(float(e.midpoint()), 6), c) for e, c in gm] == [
            (0.09017, 1),
            (0.145898, 3),
            (0.236068, 2),
        ]

    def test_N1_two_gaps(self):
        gm = gap_multiset(parse_alpha("sqrt2m1"), 1, CFG)
        assert len(gm) == 2
        assert sum(c for _, c in gm) == 2

    def test_at_most_three_and_sum_rule(self):
        for spec in ("phifrac", "sqrt2m1", "sqrt3m1"):
            x = parse_alpha(spec)
            for N in range(1, 120):
                gm = gap_multiset(x, N, CFG)
                assert len(gm) <= 3
                assert sum(c for _, c in gm) == N + 1
                if len(gm) == 3:
                    a, b, c = (e for e, _ in gm)
                    # largest = sum of the two others, up to enclosures
                    assert c.lo <= a.hi + b.hi and a.lo + b.lo <= c.hi

    def test_counts_match_decomposition(self):
        for spec in ("phifrac", "sqrt2m1", "sqrt3m1"):
            x = parse_alpha(spec)
            for N in range(1, 120):
                dec = decompose(x, N)
                expected = sorted(
                    c for c in (dec.count_A, dec.count_B, dec.count_C) if c
                )
                got = sorted(c for _, c in gap_multiset(x, N, CFG))
                # identical-length classes merge in the multiset view
                assert sum(got) == sum(expected)
                assert len(got) <= len(expected)


class TestSumBrute:
    def test_matches_fast_frac(self):
        x = parse_alpha("sqrt2m1")
        assert overlap(
            sum_brute(x, Shift(), 4, cfg=CFG),
            sum_reciprocal_frac(x, Shift(), 4, TOL),
        )

    def test_matches_fast_everything(self):
        x = parse_alpha("sqrt2m1")
        g = parse_gamma("rat:1/2")
        assert overlap(
            sum_brute(x, g, 4, cfg=CFG, dist=True),
            sum_reciprocal_dist(x, g, 4, TOL),
        )
        assert overlap(
            sum_brute(x, g, 4, b=2, cfg=CFG),
            sum_reciprocal_power(x, g, 4, 2, TOL),
        )
        assert overlap(
            sum_brute(x, g, 4, a=1, b=1, cfg=CFG),
            sum_general(x, g, 4, 1, 1, TOL),
        )
        assert overlap(
            sum_brute(x, g, 4, a=Fraction(1, 2), b=Fraction(3, 2), cfg=CFG),
            sum_general(x, g, 4, Fraction(1, 2), Fraction(3, 2), TOL),
        )

    def test_residue_exclusion(self):
        x = parse_alpha("sqrt2m1")
        eng = cf_engine(x)
        q = eng.q(eng.largest_index_leq(4))
        assert overlap(
            sum_brute(x, Shift(), 4, cfg=CFG, exclude_residue_mod=q),
            sum_reciprocal_frac_excluding_residue(x, Shift(), 4, TOL),
        )

    def test_single_term_edge(self):
        x = parse_alpha("sqrt2m1")
        g = Shift.lincomb(0, 1)  # gamma = {alpha}
        enc = sum_brute(x, g, 1, cfg=CFG)
        # only the n = 0 term remains: 1/{-alpha} = 1/(1 - alpha)
        assert abs(float(enc.midpoint()) - 1.7071067811865475) < 1e-12

    def test_random_grid_agreement(self):
        rng = random.Random(CFG.seed)
        surds = [parse_alpha(s) for s in ("phifrac", "sqrt2m1", "sqrt3m1")]
        for _ in range(30):
            x = rng.choice(surds)
            N = rng.randint(1, 200)
            g = Shift.rational(Fraction(rng.randint(0, 99), 100))
            assert overlap(
                sum_brute(x, g, N, cfg=CFG),
                sum_reciprocal_frac(x, g, N, TOL),
            ), (x.spec(), str(g.u), N)
