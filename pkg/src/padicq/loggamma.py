"""p-adic q-log-gamma functions on arguments outside Z_p.

G(x) is the fermionic integral of the kernel [x+z](log[x+z] - 1); it also has
a closed expansion in inverse bracket powers whose coefficients are q-Euler
numbers.  Both evaluators live here, together with the functional-equation
audit and the bosonic counterpart T(x) with its conjectured expansion in
q-Bernoulli numbers (report-only: the expansion is checked, never assumed).

All logarithms on this domain are the Iwasawa branch: the brackets have
nonzero valuation, so the classical log does not apply.

Two leading-coefficient variants of the expansion are first-class citizens:
``derived_coefficient`` uses q^x * E_{1,q} (what the kernel decomposition
yields) and is the one audits assert; ``as_printed`` uses -q^x/[2]_{q^2} and
is only quantified.  The two differ by q^x (E_{1,q} + 1/[2]_{q^2}) log[x]_q,
a nonzero multiple of log[x]_q.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ExponentOutOfDomain, GammaDomainError, SeriesBudgetExceeded
from .euler import AS_PRINTED, DERIVED, q_bernoulli, q_euler_number_exact
from .integrals import (
    BOSONIC,
    GammaKernel,
    IntegralResult,
    IntegrandSpec,
    bosonic_integral,
    fermionic_integral,
    stability_report,
)
from .padic import PadicContext, PadicNumber, log_iwasawa
from .qanalog import QParam, q_bracket, q_make, q_pow
from .reporting import AuditReport, verdict_for

SERIES_TERM_CAP = 200


@dataclass(frozen=True)
class GammaArgument:
    """An argument x with v_p(x) <= -1 (outside Z_p), optionally exact."""

    value: PadicNumber
    exact: Fraction | None = None

    def __post_init__(self):
        if self.value.is_zero or self.value.valuation() > -1:
            raise GammaDomainError(
                "log-gamma arguments must have valuation <= -1"
            )

    @classmethod
    def from_rational(cls, ctx: PadicContext, a: int | Fraction, b: int = 1) -> "GammaArgument":
        x = Fraction(a, b) if not isinstance(a, Fraction) else a / b
        return cls(ctx.from_rational(x), exact=x)

    @property
    def ctx(self) -> PadicContext:
        return self.value.ctx

    def check_compatible(self, q: QParam) -> None:
        if self.value.valuation() + q.m < 1:
            raise ExponentOutOfDomain(
                f"v_p(x)={self.value.valuation()} needs depth m>={1 - self.value.valuation()}"
            )

    def plus_one(self) -> "GammaArgument":
        one = self.ctx.one()
        return GammaArgument(
            self.value + one,
            exact=None if self.exact is None else self.exact + 1,
        )

    def engine_constant(self) -> Fraction | PadicNumber:
        return self.exact if self.exact is not None else self.value

    def params(self) -> str:
        if self.exact is not None:
            return f"{self.exact.numerator}/{self.exact.denominator}"
        return self.value.render()


@dataclass(frozen=True)
class SeriesEvaluation:
    """Result of the inverse-bracket expansion."""

    value: PadicNumber
    terms_used: int
    tail_valuation_bound: int
    variant: str


def _ilog(n: int, p: int) -> int:
    e = 0
    while n >= p:
        n //= p
        e += 1
    return e


def gamma_direct(x: GammaArgument, q: QParam, target: int,
                 max_depth: int | None = None, strategy: str = "auto",
                 workers: int = 1) -> IntegralResult:
    """G(x) as the stabilized fermionic sum of the log kernel."""
    x.check_compatible(q)
    spec = IntegrandSpec(GammaKernel(x.engine_constant()))
    return fermionic_integral(spec, q, target, max_depth=max_depth,
                              strategy=strategy, workers=workers)


def gamma_series(x: GammaArgument, q: QParam, target: int,
                 variant: str = DERIVED, term_cap: int = SERIES_TERM_CAP) -> SeriesEvaluation:
    """G(x) from the expansion in inverse bracket powers.

    value = (leading coefficient) * log[x]_q - [x]_q
            + sum_{n>=1} (-q^x)^(n+1) / (n(n+1)) * E_{n+1,q} / [x]_q^n

    Terms shrink by at least |v_p(x)| per order (the q-Euler numbers are
    p-adic integers, asserted per term), so truncation stops once the tail
    bound clears the target with margin.
    """
    x.check_compatible(q)
    if variant not in (DERIVED, AS_PRINTED):
        raise ValueError(f"unknown variant {variant!r}")
    ctx = x.ctx
    p = ctx.prime
    lift = PadicContext(p, ctx.precision + 2 * q.m + 8)
    ql = q_make(q.t, q.m, lift)
    xl = x.value.in_context(lift) if x.exact is None else lift.from_rational(x.exact)
    vx = xl.valuation()
    bx = q_bracket(xl, ql)
    qx = q_pow(ql, xl)
    logb = log_iwasawa(bx)
    one = lift.one()

    e1 = lift.from_rational(q_euler_number_exact(1, q))
    if variant == DERIVED:
        coeff = bx + qx * e1
    else:
        two_q2 = lift.from_rational(Fraction(1 + ql.q_int**2))
        coeff = bx - qx / two_q2
    total = coeff * logb - bx

    stop = max(target, 0) + 4
    n = 0
    neg_qx = lift.zero() - qx
    num_pow = neg_qx * neg_qx  # (-q^x)^(n+1) at n=1
    bx_pow = bx
    while True:
        n += 1
        if n > term_cap:
            raise SeriesBudgetExceeded(
                f"series cap {term_cap} reached before tail bound {stop}"
            )
        e_next = q_euler_number_exact(n + 1, q)
        ev = _frac_val(e_next, p)
        assert ev is None or ev >= 0, "q-Euler numbers must be p-adic integers"
        term = num_pow * lift.from_rational(e_next) / (
            lift.from_int(n * (n + 1)) * bx_pow
        )
        assert term.valuation_lower_bound >= n * (-vx) - _ilog(n * (n + 1), p), \
            "series term below its guaranteed valuation"
        total = total + term
        # bound for every remaining index i > n, increasing in i
        bound = (n + 1) * (-vx) - _ilog((n + 1) * (n + 2), p)
        if bound > stop:
            break
        num_pow = num_pow * neg_qx
        bx_pow = bx_pow * bx
    return SeriesEvaluation(
        value=total.in_context(ctx),
        terms_used=n,
        tail_valuation_bound=bound,
        variant=variant,
    )


def _frac_val(x: Fraction, p: int) -> int | None:
    if x == 0:
        return None
    from .padic import int_valuation

    return int_valuation(x.numerator, p) - int_valuation(x.denominator, p)


def variant_difference(x: GammaArgument, q: QParam) -> PadicNumber:
    """The exact gap derived_coefficient - as_printed:
    q^x (E_{1,q} + 1/[2]_{q^2}) log[x]_q."""
    ctx = x.ctx
    xv = x.value if x.exact is None else ctx.from_rational(x.exact)
    qx = q_pow(q, xv)
    e1 = ctx.from_rational(q_euler_number_exact(1, q) + Fraction(1, 1 + q.q_int**2))
    return qx * e1 * log_iwasawa(q_bracket(xv, q))


def verify_gamma_functional_equation(
    x: GammaArgument, q: QParam, target: int,
    evaluator: str = "direct", variant: str = DERIVED,
    max_depth: int | None = None, strategy: str = "auto", workers: int = 1,
) -> AuditReport:
    """q G(x+1) + G(x) = [2]_q ([x]_q (log[x]_q - 1)).

    The as_printed series variant is quantified, never asserted.
    """
    x.check_compatible(q)
    ctx = x.ctx
    x1 = x.plus_one()
    if evaluator == "direct":
        gx = gamma_direct(x, q, target, max_depth, strategy, workers).value
        gx1 = gamma_direct(x1, q, target, max_depth, strategy, workers).value
    elif evaluator == "series":
        gx = gamma_series(x, q, target, variant).value
        gx1 = gamma_series(x1, q, target, variant).value
    else:
        raise ValueError(f"unknown evaluator {evaluator!r}")
    lhs = q.value * gx1 + gx
    xv = x.value if x.exact is None else ctx.from_rational(x.exact)
    bx = q_bracket(xv, q)
    rhs = ctx.from_rational(q.two_bracket()) * (bx * (log_iwasawa(bx) - ctx.one()))
    dv = (lhs - rhs).valuation_lower_bound
    report_only = evaluator == "series" and variant == AS_PRINTED
    return AuditReport(
        identity="eq12",
        params={
            "p": ctx.prime, "q": f"{q.t},{q.m}", "x": x.params(),
            "evaluator": evaluator, "variant": variant,
        },
        lhs=lhs.render(),
        rhs=rhs.render(),
        diff_valuation=dv,
        target=target,
        verdict=None if report_only else verdict_for(dv, target),
    )


def verify_bracket_log_decomposition(
    x: GammaArgument, q: QParam, z: int, terms: int = 40,
) -> AuditReport:
    """Pointwise kernel decomposition at an integer z:

    [x+z](log[x+z]-1) = q^x[z] + [x] sum_{n=1}^K ((-1)^(n+1)/(n(n+1))) w^(n+1)
                        + ([x]+q^x[z]) log[x] - [x] - q^x[z],
    with w = q^x [z]_q / [x]_q; holds to the truncation-implied precision.
    """
    x.check_compatible(q)
    ctx = x.ctx
    p = ctx.prime
    lift = PadicContext(p, ctx.precision + 2 * q.m + 8)
    ql = q_make(q.t, q.m, lift)
    xl = x.value.in_context(lift) if x.exact is None else lift.from_rational(x.exact)
    one = lift.one()
    bx = q_bracket(xl, ql)
    qx = q_pow(ql, xl)
    bz = lift.from_rational(ql.bracket_int(z))
    bxz = q_bracket(xl + lift.from_int(z), ql)
    lhs = bxz * (log_iwasawa(bxz) - one)

    w = qx * bz / bx
    acc = lift.zero()
    wpow = w * w
    for n in range(1, terms + 1):
        t = wpow / lift.from_int(n * (n + 1))
        acc = (acc + t) if n % 2 == 1 else (acc - t)
        wpow = wpow * w
    rhs = qx * bz + bx * acc + (bx + qx * bz) * log_iwasawa(bx) - bx - qx * bz
    if z == 0:
        implied = lift.precision
    else:
        vw = w.valuation()
        implied = (terms + 2) * vw - _ilog((terms + 1) * (terms + 2), p) - 1
    target = min(implied, ctx.precision)
    dv = (lhs - rhs).valuation_lower_bound
    return AuditReport(
        identity="eq10",
        params={"p": p, "q": f"{q.t},{q.m}", "x": x.params(), "z": z, "terms": terms},
        lhs=lhs.in_context(ctx).render(),
        rhs=rhs.in_context(ctx).render(),
        diff_valuation=dv,
        target=target,
        verdict=verdict_for(dv, target),
    )


# --------------------------------------------------------------------------
# the bosonic-side function T and its conjectured expansion
# --------------------------------------------------------------------------

def t_gamma_direct(x: GammaArgument, q: QParam, target: int,
                   max_depth: int | None = None, strategy: str = "auto",
                   workers: int = 1) -> IntegralResult:
    """T(x): bosonic integral of q^(-y-x) [x+y] (log[x+y] - 1).

    The y-independent unit factor q^(-x) scales every partial sum exactly,
    so it is applied outside the stabilization loop; stability valuations
    are unaffected.
    """
    x.check_compatible(q)
    spec = IntegrandSpec(GammaKernel(x.engine_constant()), weight_q_inverse=True)
    res = bosonic_integral(spec, q, target, max_depth=max_depth,
                           strategy=strategy, workers=workers)
    xv = x.value if x.exact is None else q.ctx.from_rational(x.exact)
    scale = q_pow(q, -xv)
    return IntegralResult(
        value=res.value * scale,
        depth_used=res.depth_used,
        stability_valuation=res.stability_valuation,
        converged=res.converged,
        kind=res.kind,
        target=res.target,
    )


def t_gamma_series_conjecture(
    x: GammaArgument, q: QParam, target: int,
    max_depth: int | None = None, strategy: str = "auto", workers: int = 1,
    term_cap: int = SERIES_TERM_CAP,
) -> AuditReport:
    """Compare T(x) against the conjectured expansion

    (q^(-x)[x] b0 + b1) log[x] - q^(-x)[x] b0
        + sum_{n>=1} (-1)^(n+1) q^(nx) / (n(n+1)) * b_{n+1} / [x]^n

    with b_n the q-Bernoulli numbers from the bosonic oracle.  Both sides are
    stability-certified; the report records the difference valuation and
    carries no verdict (the expansion is a hedged claim, not a theorem).
    """
    x.check_compatible(q)
    ctx = x.ctx
    p = ctx.prime
    direct = t_gamma_direct(x, q, target, max_depth, strategy, workers)
    direct.require_converged()

    beta_target = target + 6
    lift = PadicContext(p, ctx.precision + 2 * q.m + 8)
    ql = q_make(q.t, q.m, lift)
    xl = x.value.in_context(lift) if x.exact is None else lift.from_rational(x.exact)
    vx = xl.valuation()
    bx = q_bracket(xl, ql)
    qx = q_pow(ql, xl)
    qx_inv = q_pow(ql, -xl)
    logb = log_iwasawa(bx)

    def beta(n: int) -> PadicNumber:
        res = q_bernoulli(n, q, beta_target, strategy=strategy, workers=workers)
        res.require_converged()
        return res.value.in_context(lift)

    b0 = beta(0)
    b1 = beta(1)
    head = (qx_inv * bx * b0 + b1) * logb - qx_inv * bx * b0
    total = head
    stop = max(target, 0) + 4
    n = 0
    qx_pow = qx  # q^(n x) at n = 1
    bx_pow = bx
    while True:
        n += 1
        if n > term_cap:
            raise SeriesBudgetExceeded(
                f"series cap {term_cap} reached before tail bound {stop}"
            )
        bn = beta(n + 1)
        sign = 1 if n % 2 == 1 else -1
        term = qx_pow * bn / (lift.from_int(sign * n * (n + 1)) * bx_pow)
        total = total + term
        bound = (n + 1) * (-vx) - _ilog((n + 1) * (n + 2), p) + min(
            0, bn.valuation_lower_bound
        )
        if bound > stop:
            break
        qx_pow = qx_pow * qx
        bx_pow = bx_pow * bx

    series_value = total.in_context(ctx)
    dv = (direct.value - series_value).valuation_lower_bound
    return AuditReport(
        identity="t-conjecture",
        params={
            "p": p, "q": f"{q.t},{q.m}", "x": x.params(),
            "direct_depth": direct.depth_used,
            "direct_stability": direct.stability_valuation,
            "series_terms": n,
        },
        lhs=direct.value.render(),
        rhs=series_value.render(),
        diff_valuation=dv,
        target=target,
        verdict=None,
    )


def gamma_stability_rows(x: GammaArgument, q: QParam, kind: str,
                         depths: range, strategy: str = "auto",
                         workers: int = 1):
    """Depth table for the gamma kernels (fermionic G or bosonic T)."""
    weight = kind == BOSONIC
    spec = IntegrandSpec(GammaKernel(x.engine_constant()), weight_q_inverse=weight)
    return stability_report(spec, q, kind, depths, strategy=strategy, workers=workers)
