"""q-deformation primitives: validated q, q-powers, and the brackets.

q is restricted to 1 + t*p^m with p not dividing t and m >= 1, which keeps
|q-1|_p <= 1/p (inside the convergence region of exp/log) and makes q an
exact integer.  q^x for p-adic x is exp(x log q) and nothing else; (-q)^x is
only supported for integer x, where it is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DepthTooSmall, ExponentOutOfDomain, UnitPartDivisible
from .padic import PadicContext, PadicNumber, exp_p, log_classical


@dataclass(frozen=True)
class QParam:
    """A deformation parameter q = 1 + t*p^m with cached log q."""

    ctx: PadicContext
    t: int
    m: int
    value: PadicNumber = field(compare=False)
    log_q: PadicNumber = field(compare=False)

    @property
    def q_int(self) -> int:
        """q as an exact integer."""
        return 1 + self.t * self.ctx.prime**self.m

    @property
    def depth(self) -> int:
        return self.m

    # exact rational helpers used by closed forms and the sum engine

    def pow_int(self, e: int) -> Fraction:
        """q^e as an exact rational (e may be negative)."""
        return Fraction(self.q_int) ** e

    def bracket_int(self, n: int) -> Fraction:
        """[n]_q = (1-q^n)/(1-q), exact."""
        q = Fraction(self.q_int)
        return (1 - q**n) / (1 - q)

    def bracket_neg_int(self, n: int) -> Fraction:
        """[n]_{-q} = (1-(-q)^n)/(1+q), exact."""
        q = Fraction(self.q_int)
        return (1 - (-q) ** n) / (1 + q)

    def two_bracket(self) -> Fraction:
        """[2]_q = 1 + q."""
        return Fraction(1 + self.q_int)

    def __repr__(self):
        return f"QParam(p={self.ctx.prime}, q=1+{self.t}*{self.ctx.prime}^{self.m})"


def q_make(t: int, m: int, ctx: PadicContext) -> QParam:
    """Validated q = 1 + t*p^m."""
    if m < 1:
        raise DepthTooSmall(f"depth m must be >= 1, got {m}")
    if t == 0:
        raise DepthTooSmall("t = 0 gives q = 1, which has no finite depth")
    if t % ctx.prime == 0:
        raise UnitPartDivisible(f"p={ctx.prime} divides t={t}")
    value = ctx.from_int(1 + t * ctx.prime**m)
    log_q = log_classical(value)
    assert log_q.valuation() == m, "v_p(log q) must equal the depth"
    return QParam(ctx, t, m, value, log_q)


def q_pow(q: QParam, x: PadicNumber) -> PadicNumber:
    """q^x = exp(x log q); needs v_p(x) + m >= 1."""
    if x.valuation_lower_bound + q.m < 1:
        raise ExponentOutOfDomain(
            f"v_p(x)={x.valuation_lower_bound} with depth m={q.m}: x log q is outside pZ_p"
        )
    return exp_p(x * q.log_q)


def q_bracket(x: PadicNumber, q: QParam) -> PadicNumber:
    """[x]_q = (1 - q^x)/(1 - q)."""
    one = q.ctx.one()
    return (one - q_pow(q, x)) / (one - q.value)


def q_bracket_neg(n: int, q: QParam) -> PadicNumber:
    """[n]_{-q} for a nonnegative integer n, via exact integer powers."""
    if n < 0:
        raise ExponentOutOfDomain("[n]_{-q} is only used for nonnegative integers")
    return q.ctx.from_rational(q.bracket_neg_int(n))
