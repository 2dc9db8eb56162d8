"""Exception hierarchy shared by all modules.

Every error that a caller is expected to catch has its own class; all of
them derive from PadicQError so batch drivers can catch the family.
"""

from __future__ import annotations


class PadicQError(Exception):
    """Base class for all errors raised by this package."""


# --- context construction ---------------------------------------------------

class NonPrime(PadicQError, ValueError):
    """The modulus supplied for a context is not prime."""


class EvenPrime(PadicQError, ValueError):
    """p = 2 is rejected: the convergence bounds used here require p odd."""


class BadPrecision(PadicQError, ValueError):
    """Working precision must be a positive integer."""


# --- element-level arithmetic ------------------------------------------------

class ZeroDenominator(PadicQError, ZeroDivisionError):
    """Rational embedding with denominator zero."""


class DivisionByZero(PadicQError, ZeroDivisionError):
    """Division by a value that is zero at its known precision."""


class ContextMismatch(PadicQError, ValueError):
    """Operands belong to different (prime, precision) contexts."""


class PrecisionExhausted(PadicQError, ArithmeticError):
    """A result would carry no significant digit at the tracked precision."""


class ZeroHasNoValuation(PadicQError, ValueError):
    """Valuation/unit-part of a value indistinguishable from zero."""


class NotAUnit(PadicQError, ValueError):
    """Teichmuller lift requires valuation exactly zero."""


class OutsideConvergenceDomain(PadicQError, ValueError):
    """exp argument outside pZ_p, where the series does not converge."""


class NotAOneUnit(PadicQError, ValueError):
    """log argument is not congruent to 1 mod p."""


class ZeroArgument(PadicQError, ValueError):
    """Iwasawa logarithm of zero."""


class PadicSyntaxError(PadicQError, ValueError):
    """Malformed textual or JSON form of a p-adic number."""


# --- q-deformation -----------------------------------------------------------

class DepthTooSmall(PadicQError, ValueError):
    """q - 1 must be divisible by p (depth m >= 1)."""


class UnitPartDivisible(PadicQError, ValueError):
    """q = 1 + t*p^m needs p not dividing t, so the depth is exactly m."""


class ExponentOutOfDomain(PadicQError, ValueError):
    """q^x needs v_p(x) + m >= 1 so that x*log q lies in the exp domain."""


# --- integration engine ------------------------------------------------------

class IntegrandDomainError(PadicQError, ValueError):
    """Integrand not evaluable on the requested points."""


class NotStabilized(PadicQError, ArithmeticError):
    """Riemann sums did not certify the requested stability target.

    Carries the best-effort result so no partial value is ever lost.
    """

    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result


class BudgetExceeded(PadicQError, ValueError):
    """Requested depth would enumerate more summands than the budget allows."""


class BoundExceeded(PadicQError, ValueError):
    """Index above the configured bound for a number-sequence table."""


class SeriesBudgetExceeded(PadicQError, ArithmeticError):
    """Series truncation cap reached before the tail bound met the target."""


class GammaDomainError(PadicQError, ValueError):
    """Log-gamma argument must have negative valuation (lie outside Z_p)."""
