"""Exact p-adic arithmetic, q-brackets, fermionic/bosonic integrals,
q-Euler and q-Bernoulli numbers, and q-log-gamma identity audits."""

from .errors import (
    BadPrecision,
    BoundExceeded,
    BudgetExceeded,
    ContextMismatch,
    DepthTooSmall,
    DivisionByZero,
    EvenPrime,
    ExponentOutOfDomain,
    GammaDomainError,
    IntegrandDomainError,
    NonPrime,
    NotAOneUnit,
    NotAUnit,
    NotStabilized,
    OutsideConvergenceDomain,
    PadicQError,
    PadicSyntaxError,
    PrecisionExhausted,
    SeriesBudgetExceeded,
    UnitPartDivisible,
    ZeroArgument,
    ZeroDenominator,
    ZeroHasNoValuation,
)
from .euler import (
    AS_PRINTED,
    DERIVED,
    FormalSeries,
    classical_bernoulli,
    classical_euler,
    q_bernoulli,
    q_euler_number,
    q_euler_number_exact,
    q_euler_polynomial,
    q_euler_polynomial_exact,
    verify_log_series,
    verify_translation_identity,
)
from .integrals import (
    BOSONIC,
    FERMIONIC,
    SIGNED,
    BracketMonomial,
    Constant,
    GammaKernel,
    IntegralResult,
    IntegrandSpec,
    QPower,
    StabilityRow,
    Tabulated,
    bosonic_integral,
    evaluate_integrand,
    fermionic_integral,
    fermionic_integral_signed,
    stability_report,
)
from .loggamma import (
    GammaArgument,
    SeriesEvaluation,
    gamma_direct,
    gamma_series,
    gamma_stability_rows,
    t_gamma_direct,
    t_gamma_series_conjecture,
    variant_difference,
    verify_bracket_log_decomposition,
    verify_gamma_functional_equation,
)
from .padic import (
    PadicContext,
    PadicNumber,
    diff_valuation,
    exp_p,
    is_prime,
    log_classical,
    log_iwasawa,
    teichmuller,
    unit_part,
    valuation,
)
from .qanalog import QParam, q_bracket, q_bracket_neg, q_make, q_pow
from .reporting import AuditReport

__all__ = [name for name in dir() if not name.startswith("_")]
