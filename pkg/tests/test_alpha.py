"""Parsing, canonical forms and exact fractional parts."""

from fractions import Fraction

import pytest

from recipsums.alpha import (
    EXACT_ZERO,
    CfStream,
    QuadraticSurd,
    Shift,
    eval_enclosure,
    frac_part,
    linear_form_sign,
    make_quadratic_surd,
    parse_alpha,
    parse_gamma,
    shift_is_exact_integer_at,
)
from recipsums.errors import (
    InsufficientDigits,
    ParseError,
    PerfectSquare,
    RationalValue,
    ZeroDenominator,
)


class TestSurdConstruction:
    def test_canonicalization_gcd(self):
        s = make_quadratic_surd(2, 2, 4, 3)
        assert (s.a, s.b, s.c, s.d) == (1, 1, 2, 3)

    def test_canonicalization_sign(self):
        s = make_quadratic_surd(1, 1, -2, 5)
        assert s.c > 0 and (s.a, s.b) == (-1, -1)

    def test_perfect_square_rejected(self):
        with pytest.raises(PerfectSquare):
            make_quadratic_surd(0, 1, 1, 9)

    def test_small_d_rejected(self):
        with pytest.raises(PerfectSquare):
            make_quadratic_surd(0, 1, 1, 1)

    def test_zero_denominator(self):
        with pytest.raises(ZeroDenominator):
            make_quadratic_surd(1, 1, 0, 2)

    def test_rational_value(self):
        with pytest.raises(RationalValue):
            make_quadratic_surd(3, 0, 2, 2)


class TestParseAlpha:
    def test_presets(self):
        assert parse_alpha("phi") == QuadraticSurd(1, 1, 2, 5)
        assert parse_alpha("phifrac") == QuadraticSurd(-1, 1, 2, 5)
        assert parse_alpha("sqrt2m1") == QuadraticSurd(-1, 1, 1, 2)
        assert parse_alpha("sqrt2") == QuadraticSurd(0, 1, 1, 2)
        assert parse_alpha("sqrt3m1") == QuadraticSurd(-1, 1, 1, 3)

    def test_surd_spec_roundtrip(self):
        x = parse_alpha("surd:-1,1,1,2")
        assert x == parse_alpha("sqrt2m1")
        assert x.spec() == "surd:-1,1,1,2"

    def test_cf_spec(self):
        x = parse_alpha("cf:2,1,2,1,1,4")
        assert isinstance(x, CfStream)
        assert x.a0 == 2
        assert x.digit(3) == 1
        with pytest.raises(InsufficientDigits):
            x.digit(6)

    def test_cf_digit_must_be_positive(self):
        with pytest.raises(ParseError):
            parse_alpha("cf:1,0,2")

    @pytest.mark.parametrize(
        "bad", ["", "nope", "surd:1,2,3", "surd:x,1,1,2", "cf:", "cf:a,b"]
    )
    def test_bad_specs(self, bad):
        with pytest.raises(ParseError):
            parse_alpha(bad)


class TestParseGamma:
    def test_rational(self):
        g = parse_gamma("rat:1/2")
        assert g.u == Fraction(1, 2) and g.v == 0 and g.exact

    def test_lincomb(self):
        g = parse_gamma("lincomb:-1,4")
        assert (g.u, g.v) == (Fraction(-1), Fraction(4))

    def test_dec(self):
        g = parse_gamma("dec:0.5@64")
        assert g.u == Fraction(1, 2)
        assert g.radius == Fraction(1, 2**64)
        assert not g.exact

    @pytest.mark.parametrize("bad", ["", "rat:x", "lincomb:1", "dec:0.5", "0.5"])
    def test_bad_specs(self, bad):
        with pytest.raises(ParseError):
            parse_gamma(bad)


class TestSigns:
    def test_surd_sign_exact(self):
        x = parse_alpha("sqrt2m1")  # 0.4142...
        assert linear_form_sign(x, Fraction(0), Fraction(1)) == 1
        assert linear_form_sign(x, Fraction(-1, 2), Fraction(1)) == -1
        # 12*alpha - 5 = 12 sqrt2 - 17 < 0 by a whisker (~ -0.029)
        assert linear_form_sign(x, Fraction(-5), Fraction(12)) == -1
        assert linear_form_sign(x, Fraction(-2), Fraction(5)) == 1

    def test_cf_sign_unresolvable(self):
        x = parse_alpha("cf:0,2,2")
        from recipsums.errors import UnresolvedComparison

        # 12*alpha - 5 changes sign inside the prefix interval
        with pytest.raises(UnresolvedComparison):
            linear_form_sign(x, Fraction(-5), Fraction(12))


class TestFracPart:
    def setup_method(self):
        self.x = parse_alpha("sqrt2m1")
        self.tol = Fraction(1, 1 << 40)

    def test_plain_value(self):
        enc = frac_part(self.x, 2, Shift(), self.tol)
        # {2*alpha} = 2*sqrt(2) - 2 = 0.82842712474619029...
        assert abs(float(enc.midpoint()) - 0.8284271247461903) < 1e-12
        assert enc.width <= self.tol

    def test_exact_zero_at_origin(self):
        assert frac_part(self.x, 0, Shift(), self.tol) is EXACT_ZERO

    def test_exact_zero_lincomb(self):
        g = Shift.lincomb(-1, 3)  # gamma = 3*alpha - 1, so {3a - g} = {1} = 0
        assert shift_is_exact_integer_at(self.x, 3, g)
        assert frac_part(self.x, 3, g, self.tol) is EXACT_ZERO

    def test_near_integer_resolved(self):
        # gamma just below {3*alpha}: the fractional part is 2^-80, not 0
        g = Shift.lincomb(Fraction(-1) - Fraction(1, 1 << 80), 3)
        enc = frac_part(self.x, 3, g, Fraction(1, 1 << 100))
        assert enc.lo > 0
        assert enc.lo <= Fraction(1, 1 << 80) <= enc.hi

    def test_wraparound_side(self):
        # gamma just above {3*alpha}: the fractional part wraps to ~1
        g = Shift.lincomb(Fraction(-1) + Fraction(1, 1 << 80), 3)
        enc = frac_part(self.x, 3, g, Fraction(1, 1 << 40))
        assert enc.hi < 1
        assert enc.lo > Fraction(99, 100)

    def test_cf_insufficient(self):
        x = parse_alpha("cf:0,2,2,2")
        with pytest.raises(InsufficientDigits):
            frac_part(x, 5, Shift(), Fraction(1, 1 << 60))


class TestEvalEnclosure:
    def test_surd_width(self):
        x = parse_alpha("sqrt2")
        enc = eval_enclosure(x, Fraction(1, 1 << 100))
        assert enc.width <= Fraction(1, 1 << 100)
        assert abs(float(enc.midpoint()) - 1.4142135623730951) < 1e-12

    def test_cf_prefix_limited(self):
        x = parse_alpha("cf:1,2,2")
        with pytest.raises(InsufficientDigits):
            eval_enclosure(x, Fraction(1, 1 << 60))


class TestShiftSpec:
    def test_rational_roundtrip(self):
        assert parse_gamma(Shift.rational(Fraction(2, 7)).spec()).u == Fraction(2, 7)

    def test_lincomb_roundtrip(self):
        g = Shift.lincomb(Fraction(-1), Fraction(4))
        assert parse_gamma(g.spec()) == g
