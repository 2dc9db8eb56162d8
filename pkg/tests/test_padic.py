import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padicq import (
    BadPrecision,
    ContextMismatch,
    DivisionByZero,
    EvenPrime,
    NonPrime,
    NotAOneUnit,
    NotAUnit,
    OutsideConvergenceDomain,
    PadicContext,
    PadicSyntaxError,
    ZeroArgument,
    ZeroDenominator,
    ZeroHasNoValuation,
    diff_valuation,
    exp_p,
    log_classical,
    log_iwasawa,
    teichmuller,
    unit_part,
    valuation,
)
from conftest import assert_agree, random_padic


class TestContext:
    def test_create(self):
        ctx = PadicContext(3, 30)
        assert ctx.prime == 3 and ctx.precision == 30

    def test_even_prime_rejected(self):
        with pytest.raises(EvenPrime):
            PadicContext(2, 10)

    def test_nonprime_rejected(self):
        with pytest.raises(NonPrime):
            PadicContext(9, 10)

    def test_bad_precision(self):
        with pytest.raises(BadPrecision):
            PadicContext(3, 0)


class TestFromRational:
    def test_one_third(self, ctx3):
        a = ctx3.from_rational(1, 3)
        assert a.valuation() == -1 and a.unit == 1

    def test_seven_base_five(self):
        a = PadicContext(5, 3).from_int(7)
        assert a.valuation() == 0 and a.digits() == [2, 1, 0]

    def test_fifth_mod_nine(self):
        # modular inverse by extended Euclid: 5*2 = 10 = 1 (mod 9)
        a = PadicContext(3, 2).from_rational(1, 5)
        assert a.valuation() == 0 and a.unit == 2

    def test_zero_denominator(self, ctx3):
        with pytest.raises(ZeroDenominator):
            ctx3.from_rational(1, 0)

    def test_zero(self, ctx3):
        z = ctx3.from_int(0)
        assert z.is_zero and z.v == ctx3.precision

    def test_fraction_argument(self, ctx3):
        assert ctx3.from_rational(Fraction(7, 5)) == ctx3.from_rational(7, 5)


class TestArithmetic:
    def test_thirds_add_to_one(self, ctx3):
        a = ctx3.from_rational(1, 3) + ctx3.from_rational(2, 3)
        assert_agree(a, ctx3.one())

    def test_valuations_cancel(self, ctx3):
        a = ctx3.from_int(3) * ctx3.from_rational(1, 3)
        assert a == ctx3.one()

    def test_division_by_zero(self, ctx3):
        with pytest.raises(DivisionByZero):
            ctx3.one() / ctx3.zero()

    def test_context_mismatch(self, ctx3, ctx5):
        with pytest.raises(ContextMismatch):
            ctx3.one() + ctx5.one()

    def test_cancellation_gives_tracked_zero(self, ctx3):
        a = ctx3.from_rational(22, 7)
        d = a - a
        assert d.is_zero and d.v == a.abs_prec

    def test_subtraction_partial_cancellation(self, ctx3):
        a = ctx3.from_int(1 + 3**5)
        d = a - ctx3.one()
        assert d.valuation() == 5

    def test_integer_pow(self, ctx3):
        a = ctx3.from_rational(2, 3)
        assert_agree(a**3, ctx3.from_rational(8, 27))
        assert_agree(a**-2, ctx3.from_rational(9, 4))


class TestValuation:
    def test_one_third(self, ctx3):
        a = ctx3.from_rational(1, 3)
        assert valuation(a) == -1
        assert unit_part(a) == ctx3.one()

    def test_fortyfive(self, ctx3):
        a = ctx3.from_int(45)
        assert valuation(a) == 2
        assert_agree(unit_part(a), ctx3.from_int(5))

    def test_zero_has_none(self, ctx3):
        with pytest.raises(ZeroHasNoValuation):
            valuation(ctx3.zero())

    def test_product_rule_and_ultrametric(self, ctx3):
        rng = random.Random(7)
        for _ in range(50):
            a = random_padic(rng, ctx3)
            b = random_padic(rng, ctx3)
            assert (a * b).valuation() == a.valuation() + b.valuation()
            s = a + b
            if not s.is_zero:
                assert s.valuation() >= min(a.valuation(), b.valuation())
            if a.valuation() != b.valuation():
                assert s.valuation() == min(a.valuation(), b.valuation())


class TestTeichmuller:
    def test_fixed_point_one(self, ctx3):
        assert teichmuller(ctx3.one()) == ctx3.one()

    def test_frozen_value_p5(self):
        # iterate a -> a^p to the fixed point mod 5^6 (computed independently)
        ctx = PadicContext(5, 6)
        w = teichmuller(ctx.from_int(2))
        assert w.unit == 14557
        assert w**4 == ctx.one()
        assert w.unit % 5 == 2

    def test_root_of_unity_and_congruence(self, ctx7):
        rng = random.Random(11)
        for _ in range(10):
            a = random_padic(rng, ctx7, 0, 1)
            w = teichmuller(a)
            assert (w ** (ctx7.prime - 1)) == ctx7.one()
            assert (w - a).valuation_lower_bound >= 1

    def test_not_a_unit(self):
        ctx = PadicContext(5, 10)
        with pytest.raises(NotAUnit):
            teichmuller(ctx.from_int(5))


class TestExpLog:
    def test_exp_zero(self, ctx3):
        assert exp_p(ctx3.zero()) == ctx3.one().abs_truncate(ctx3.precision)

    def test_exp_homomorphism(self, ctx3):
        e = exp_p(ctx3.from_int(3)) * exp_p(ctx3.from_int(-3))
        assert_agree(e, ctx3.one())

    def test_exp_domain(self, ctx3):
        with pytest.raises(OutsideConvergenceDomain):
            exp_p(ctx3.one())

    def test_log_one(self, ctx3):
        assert log_classical(ctx3.one()).is_zero

    def test_log_exp_inverse(self, ctx3):
        p = ctx3.from_int(3)
        assert_agree(log_classical(exp_p(p)), p)
        rng = random.Random(23)
        for _ in range(10):
            a = random_padic(rng, ctx3, 1, 4)
            assert_agree(log_classical(exp_p(a)), a)
            u = ctx3.one() + a
            assert_agree(exp_p(log_classical(u)), u)

    def test_log_multiplicative(self, ctx3):
        rng = random.Random(29)
        for _ in range(10):
            u = ctx3.one() + random_padic(rng, ctx3, 1, 4)
            w = ctx3.one() + random_padic(rng, ctx3, 1, 4)
            assert_agree(log_classical(u * w), log_classical(u) + log_classical(w))

    def test_log_domain(self, ctx3):
        with pytest.raises(NotAOneUnit):
            log_classical(ctx3.from_int(2))


class TestIwasawa:
    def test_log_p_is_zero(self, ctx3):
        assert log_iwasawa(ctx3.from_int(3)).is_zero

    def test_torsion_maps_to_zero(self):
        ctx = PadicContext(5, 12)
        w = teichmuller(ctx.from_int(3))
        assert log_iwasawa(w).is_zero

    def test_decomposition(self, ctx5):
        rng = random.Random(31)
        for _ in range(10):
            u = random_padic(rng, ctx5, 0, 1)
            a = u.shifted(2)  # p^2 * u
            w = teichmuller(u)
            assert_agree(log_iwasawa(a), log_classical(u / w))

    def test_additivity_mixed_valuations(self, ctx3):
        rng = random.Random(37)
        for _ in range(25):
            a = random_padic(rng, ctx3)
            b = random_padic(rng, ctx3)
            assert_agree(log_iwasawa(a * b), log_iwasawa(a) + log_iwasawa(b))

    def test_zero_rejected(self, ctx3):
        with pytest.raises(ZeroArgument):
            log_iwasawa(ctx3.zero())


class TestRenderParse:
    def test_render_spec_format(self):
        ctx = PadicContext(3, 4)
        assert ctx.from_rational(1, 3).render() == "3^-1 * [1,0,0,0] + O(3^3)"

    def test_render_zero(self, ctx3):
        assert ctx3.zero(5).render() == "0 + O(3^5)"

    def test_roundtrip(self, ctx3):
        rng = random.Random(41)
        for _ in range(25):
            a = random_padic(rng, ctx3)
            assert ctx3.parse(a.render()) == a
        assert ctx3.parse(ctx3.zero(7).render()) == ctx3.zero(7)

    def test_parse_elided_trailing_zeros(self, ctx3):
        # O-bound larger than the digit list implies trailing zero digits
        a = ctx3.parse("3^0 * [1] + O(3^20)")
        assert a.valuation() == 0 and a.unit == 1 and a.k == 20

    def test_parse_rejects_bad_digits(self, ctx3):
        with pytest.raises(PadicSyntaxError):
            ctx3.parse("3^0 * [4,1] + O(3^2)")
        with pytest.raises(PadicSyntaxError):
            ctx3.parse("3^0 * [0,1] + O(3^2)")
        with pytest.raises(PadicSyntaxError):
            ctx3.parse("3^0 * [1,1] + O(3^1)")
        with pytest.raises(PadicSyntaxError):
            ctx3.parse("not a number")

    def test_parse_prime_mismatch(self, ctx3):
        with pytest.raises(ContextMismatch):
            ctx3.parse("5^0 * [1] + O(5^2)")

    def test_json_roundtrip(self, ctx5):
        rng = random.Random(43)
        for _ in range(10):
            a = random_padic(rng, ctx5)
            assert ctx5.from_json_dict(a.to_json_dict()) == a
        z = ctx5.zero(9)
        assert ctx5.from_json_dict(z.to_json_dict()) == z

    def test_json_spec_shape(self):
        d = PadicContext(3, 3).from_rational(1, 3).to_json_dict()
        assert set(d) == {"p", "valuation", "digits", "precision"}
        assert d["p"] == 3 and d["valuation"] == -1 and d["precision"] == 2
        assert d["digits"][0] == 1


_units = st.integers(min_value=1, max_value=3**12 - 1).filter(lambda u: u % 3 != 0)
_vals = st.integers(min_value=-4, max_value=4)


def _mk(ctx, v, u):
    return ctx.from_int(u).shifted(v)


class TestFieldAxioms:
    @settings(max_examples=60, deadline=None)
    @given(_vals, _units, _vals, _units, _vals, _units)
    def test_associativity_and_distributivity(self, va, ua, vb, ub, vc, uc):
        ctx = PadicContext(3, 30)
        a, b, c = _mk(ctx, va, ua), _mk(ctx, vb, ub), _mk(ctx, vc, uc)
        assert_agree((a + b) + c, a + (b + c))
        assert_agree((a * b) * c, a * (b * c))
        assert_agree(a * (b + c), a * b + a * c)

    @settings(max_examples=60, deadline=None)
    @given(_vals, _units)
    def test_multiplicative_inverse(self, v, u):
        ctx = PadicContext(3, 30)
        a = _mk(ctx, v, u)
        assert_agree(a * (ctx.one() / a), ctx.one())


class TestPrecisionSoundness:
    def test_recompute_at_higher_precision(self):
        # every digit claimed at precision N must survive at N+10
        lo = PadicContext(3, 20)
        hi = PadicContext(3, 30)

        def pipeline(ctx, seed):
            r = random.Random(seed)
            ua = 3 * r.randrange(1, 3**12) + 1
            ub = 3 * r.randrange(1, 3**12) + 2
            a = ctx.from_int(ua).shifted(r.randrange(1, 3))
            b = ctx.from_int(ub)
            return (exp_p(a) * b - ctx.from_rational(5, 7)) / log_classical(ctx.one() + a)

        for seed in range(12):
            xl = pipeline(lo, seed)
            xh = pipeline(hi, seed)
            dv = (xh - xl.in_context(hi)).valuation_lower_bound
            assert dv >= xl.abs_prec
