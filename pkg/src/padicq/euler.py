"""q-deformed Euler polynomials and numbers, the classical sequences they
degenerate to, q-Bernoulli numbers, and the formal (1+x)log(1+x) expansion.

The q-Euler closed form evaluates over exact rationals whenever the argument
is an integer (q itself is an integer), so those values carry no rounding at
all; the p-adic path exists for general arguments and raises its working
precision internally to absorb the (1-q)^-m cancellation.

The closed form carries the alternating-sum exponent q^(i*x); this is the
variant forced by expanding the shifted bracket binomially under the
integral, and the one that matches the integral oracle.  The variant with a
plain q^x factor is kept behind a flag so the disagreement can be quantified
instead of silently corrected.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .errors import BoundExceeded
from .integrals import (
    BracketMonomial,
    IntegralResult,
    IntegrandSpec,
    bosonic_integral,
)
from .padic import PadicContext, PadicNumber
from .qanalog import QParam, q_make, q_pow
from .reporting import AuditReport, verdict_for

DEFAULT_SEQUENCE_BOUND = 64

DERIVED = "derived_coefficient"
AS_PRINTED = "as_printed"


# --------------------------------------------------------------------------
# classical sequences (exact rationals)
# --------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _euler_table(n: int) -> Fraction:
    # (e^t + 1) E(t) = 2:  sum_k C(n,k) E_k + E_n = 2*[n=0]
    if n == 0:
        return Fraction(1)
    s = sum(Fraction(comb(n, k)) * _euler_table(k) for k in range(n))
    return -s / 2


def classical_euler(n: int, bound: int = DEFAULT_SEQUENCE_BOUND) -> Fraction:
    """Euler numbers from 2/(e^t+1): 1, -1/2, 0, 1/4, 0, -1/2, ..."""
    if n < 0 or n > bound:
        raise BoundExceeded(f"n={n} outside [0, {bound}]")
    return _euler_table(n)


@lru_cache(maxsize=None)
def _bernoulli_table(n: int) -> Fraction:
    # sum_{k<=n} C(n+1,k) B_k = (n+1)*[n=0]; this normalization has B_1 = -1/2
    if n == 0:
        return Fraction(1)
    s = sum(Fraction(comb(n + 1, k)) * _bernoulli_table(k) for k in range(n))
    return -s / (n + 1)


def classical_bernoulli(n: int, bound: int = DEFAULT_SEQUENCE_BOUND) -> Fraction:
    """Bernoulli numbers with B_1 = -1/2: 1, -1/2, 1/6, 0, -1/30, ..."""
    if n < 0 or n > bound:
        raise BoundExceeded(f"n={n} outside [0, {bound}]")
    return _bernoulli_table(n)


# --------------------------------------------------------------------------
# q-Euler polynomials and numbers
# --------------------------------------------------------------------------

def q_euler_polynomial_exact(m: int, x: int, q: QParam,
                             variant: str = DERIVED) -> Fraction:
    """E_{m,q}(x) over exact rationals (integer argument only).

    [2]_q (1/(1-q))^m sum_i C(m,i) (-1)^i q^(i*x) / (1 + q^(i+1)); the
    as_printed variant replaces q^(i*x) by a common q^x factor.
    """
    if m < 0:
        raise ValueError("order must be >= 0")
    qr = Fraction(q.q_int)
    inv = 1 / (1 - qr)
    total = Fraction(0)
    for i in range(m + 1):
        e = i * x if variant == DERIVED else x
        total += comb(m, i) * (-1) ** i * qr**e / (1 + qr ** (i + 1))
    return (1 + qr) * inv**m * total


def q_euler_number_exact(n: int, q: QParam) -> Fraction:
    """E_{n,q} = E_{n,q}(0), exact."""
    return q_euler_polynomial_exact(n, 0, q)


def q_euler_polynomial(m: int, x: PadicNumber, q: QParam,
                       variant: str = DERIVED) -> PadicNumber:
    """E_{m,q}(x) for a p-adic argument (needs v_p(x) + depth >= 1).

    Works at elevated precision: the alternating sum cancels down by
    m*depth digits before the (1/(1-q))^m factor scales it back.
    """
    if m < 0:
        raise ValueError("order must be >= 0")
    ctx = x.ctx
    lift = PadicContext(ctx.prime, ctx.precision + m * q.m + 8)
    ql = q_make(q.t, q.m, lift)
    xl = x.in_context(lift)
    one = lift.one()
    inv = one / (one - lift.from_int(ql.q_int))
    qx = q_pow(ql, xl)
    total = lift.zero()
    qxi = one
    for i in range(m + 1):
        if variant == DERIVED:
            factor = qxi
        else:
            factor = qx
        den = lift.from_rational(1 + ql.pow_int(i + 1))
        term = lift.from_int(comb(m, i) * (-1) ** i) * factor / den
        total = total + term
        qxi = qxi * qx
    val = lift.from_rational(ql.two_bracket()) * inv**m * total
    return val.in_context(ctx)


def q_euler_number(n: int, q: QParam) -> PadicNumber:
    """E_{n,q} embedded at context precision (exact rational underneath)."""
    return q.ctx.from_rational(q_euler_number_exact(n, q))


def verify_translation_identity(n: int, q: QParam, target: int) -> AuditReport:
    """q E_{n,q}(1) + E_{n,q} = [2]_q [n=0], both sides exact."""
    qr = Fraction(q.q_int)
    lhs = qr * q_euler_polynomial_exact(n, 1, q) + q_euler_number_exact(n, q)
    rhs = q.two_bracket() if n == 0 else Fraction(0)
    diff = lhs - rhs
    dv = None if diff == 0 else _fraction_valuation(diff, q.ctx.prime)
    return AuditReport(
        identity="eq8",
        params={"p": q.ctx.prime, "q": f"{q.t},{q.m}", "n": n},
        lhs=str(lhs),
        rhs=str(rhs),
        diff_valuation=dv,
        target=target,
        verdict=verdict_for(dv, target),
    )


def _fraction_valuation(x: Fraction, p: int) -> int:
    from .padic import int_valuation

    return int_valuation(x.numerator, p) - int_valuation(x.denominator, p)


# --------------------------------------------------------------------------
# q-Bernoulli numbers (integral oracle only; no closed form is assumed)
# --------------------------------------------------------------------------

def q_bernoulli(n: int, q: QParam, target: int,
                max_depth: int | None = None,
                strategy: str = "auto",
                workers: int = 1) -> IntegralResult:
    """beta_{n,q}: the q^(-y)-weighted moment of [y]^n under the bosonic
    integral, stability-certified."""
    spec = IntegrandSpec(BracketMonomial(0, n), weight_q_inverse=True)
    return bosonic_integral(spec, q, target, max_depth=max_depth,
                            strategy=strategy, workers=workers)


# --------------------------------------------------------------------------
# formal power series over exact rationals
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class FormalSeries:
    """Truncated power series: coefficients[i] is the x^i coefficient."""

    coefficients: tuple[Fraction, ...]

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def derivative(self) -> "FormalSeries":
        cs = tuple(i * c for i, c in enumerate(self.coefficients))[1:]
        return FormalSeries(cs)

    def mul_truncated(self, other: "FormalSeries", degree: int) -> "FormalSeries":
        out = [Fraction(0)] * (degree + 1)
        for i, a in enumerate(self.coefficients):
            if i > degree or a == 0:
                continue
            for j, b in enumerate(other.coefficients):
                if i + j > degree:
                    break
                out[i + j] += a * b
        return FormalSeries(tuple(out))


def log1p_series(degree: int) -> FormalSeries:
    """log(1+x) = sum (-1)^(n+1) x^n / n."""
    cs = [Fraction(0)] + [Fraction((-1) ** (n + 1), n) for n in range(1, degree + 1)]
    return FormalSeries(tuple(cs))


def verify_log_series(degree: int) -> AuditReport:
    """(1+x) log(1+x) = x + sum (-1)^(n+1) x^(n+1) / (n(n+1)), exactly.

    Also checks the derivative identity ((1+x)log(1+x))' = 1 + log(1+x)
    coefficient-wise; both comparisons are exact rational equalities.
    """
    if degree > 200:
        raise BoundExceeded("series verification capped at degree 200")
    one_plus_x = FormalSeries((Fraction(1), Fraction(1)))
    product = one_plus_x.mul_truncated(log1p_series(degree), degree)
    claimed = [Fraction(0), Fraction(1)] + [
        Fraction((-1) ** (n + 1), n * (n + 1)) for n in range(1, degree)
    ]
    series_ok = product.coefficients == tuple(claimed)
    derivative = product.derivative()
    expected_derivative = FormalSeries(
        (Fraction(1),) + log1p_series(degree - 1).coefficients[1:]
    )
    derivative_ok = derivative.coefficients == expected_derivative.coefficients
    ok = series_ok and derivative_ok
    return AuditReport(
        identity="eq6",
        params={"degree": degree, "derivative_identity": derivative_ok},
        lhs="(1+x)log(1+x) Cauchy product",
        rhs="x + sum (-1)^(n+1) x^(n+1)/(n(n+1))",
        diff_valuation=None if ok else 0,
        target=0,
        verdict="PASS" if ok else "FAIL",
    )
