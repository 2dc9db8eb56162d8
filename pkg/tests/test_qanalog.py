import random
from fractions import Fraction

import pytest

from padicq import (
    DepthTooSmall,
    ExponentOutOfDomain,
    PadicContext,
    UnitPartDivisible,
    q_bracket,
    q_bracket_neg,
    q_make,
    q_pow,
)
from conftest import assert_agree, random_padic


class TestQMake:
    def test_basic(self, ctx3):
        q = q_make(1, 2, ctx3)
        assert q.q_int == 10 and q.depth == 2
        assert q.log_q.valuation() == 2

    def test_unit_part_divisible(self, ctx3):
        with pytest.raises(UnitPartDivisible):
            q_make(3, 1, ctx3)

    def test_depth_too_small(self, ctx5):
        with pytest.raises(DepthTooSmall):
            q_make(1, 0, ctx5)
        with pytest.raises(DepthTooSmall):
            q_make(0, 2, ctx5)

    def test_negative_t(self, ctx3):
        q = q_make(-1, 2, ctx3)
        assert q.q_int == -8
        assert q.log_q.valuation() == 2


class TestQPow:
    def test_zero_exponent(self, ctx3):
        q = q_make(1, 2, ctx3)
        assert q_pow(q, ctx3.from_int(0)).abs_truncate(20) == ctx3.one().abs_truncate(20)

    def test_one_exponent(self, ctx3):
        q = q_make(1, 2, ctx3)
        assert_agree(q_pow(q, ctx3.one()), q.value)

    def test_integer_powers_match_exact(self, ctx3):
        q = q_make(2, 2, ctx3)
        for n in (2, 5, -3):
            assert_agree(q_pow(q, ctx3.from_int(n)), ctx3.from_rational(q.pow_int(n)))

    def test_cube_root(self, ctx3):
        q = q_make(1, 2, ctx3)
        r = q_pow(q, ctx3.from_rational(1, 3))
        assert_agree(r**3, q.value)

    def test_homomorphism(self, ctx5):
        q = q_make(1, 3, ctx5)
        rng = random.Random(5)
        for _ in range(10):
            x = random_padic(rng, ctx5, -1, 3)
            y = random_padic(rng, ctx5, -1, 3)
            assert_agree(q_pow(q, x + y), q_pow(q, x) * q_pow(q, y))

    def test_domain(self, ctx3):
        q = q_make(1, 2, ctx3)
        with pytest.raises(ExponentOutOfDomain):
            q_pow(q, ctx3.from_rational(1, 9))  # v = -2, m = 2: outside


class TestBracket:
    def test_zero(self, ctx3):
        q = q_make(1, 2, ctx3)
        assert q_bracket(ctx3.from_int(0), q).is_zero

    def test_two_is_one_plus_q(self, ctx3):
        q = q_make(1, 2, ctx3)
        assert_agree(q_bracket(ctx3.from_int(2), q), ctx3.from_int(1 + q.q_int))

    def test_matches_geometric_polynomial_up_to_50(self, ctx3):
        q = q_make(1, 2, ctx3)
        for n in range(51):
            poly = sum(Fraction(q.q_int) ** i for i in range(n))
            assert_agree(q_bracket(ctx3.from_int(n), q), ctx3.from_rational(poly))

    def test_valuation_equals_argument_valuation(self, ctx3):
        q = q_make(1, 2, ctx3)
        for x in (ctx3.from_rational(1, 3), ctx3.from_int(3), ctx3.from_int(2)):
            assert q_bracket(x, q).valuation() == x.valuation()

    def test_q_to_one_limit(self, ctx3):
        # [x]_q - x has valuation >= m + v(x) + min(v(x), 0): the first
        # deformation term is -x(q-1)/2, the second x^2 (log q)^2/(2(q-1))
        rng = random.Random(17)
        for m in (2, 4, 6):
            q = q_make(1, m, ctx3)
            for _ in range(8):
                x = random_padic(rng, ctx3, -1, 4)
                v = x.valuation()
                dv = (q_bracket(x, q) - x).valuation_lower_bound
                assert dv >= m + v + min(v, 0)
                if v >= 0:
                    assert dv >= m + v

    def test_cocycle(self, ctx5):
        # [x+z]_q = [x]_q + q^x [z]_q
        q = q_make(2, 2, ctx5)
        rng = random.Random(19)
        for _ in range(100):
            x = random_padic(rng, ctx5, 0, 4)
            z = random_padic(rng, ctx5, 0, 4)
            lhs = q_bracket(x + z, q)
            rhs = q_bracket(x, q) + q_pow(q, x) * q_bracket(z, q)
            assert_agree(lhs, rhs)


class TestBracketNeg:
    def test_one(self, ctx3):
        q = q_make(1, 2, ctx3)
        assert q_bracket_neg(1, q) == ctx3.one()

    def test_two_is_one_minus_q(self, ctx3):
        q = q_make(1, 2, ctx3)
        assert_agree(q_bracket_neg(2, q), ctx3.from_int(1 - q.q_int))

    def test_normalizer_is_unit(self, ctx3, ctx5):
        # [p^N]_{-q} = (1 + q^(p^N))/(1 + q) = 1 (mod p)
        for ctx in (ctx3, ctx5):
            for m in (1, 2, 3):
                q = q_make(1, m, ctx)
                for N in (1, 2, 3):
                    val = q_bracket_neg(ctx.prime**N, q)
                    assert val.valuation() == 0

    def test_negative_rejected(self, ctx3):
        q = q_make(1, 2, ctx3)
        with pytest.raises(ExponentOutOfDomain):
            q_bracket_neg(-1, q)
