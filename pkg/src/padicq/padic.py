"""Exact arithmetic in Q_p at capped finite precision.

A nonzero value is stored as p^v * u + O(p^(v+k)) with the unit mantissa u
coprime to p and reduced mod p^k; k is capped by the context precision
(capped-relative model).  Zero is a separate state carrying only an absolute
bound O(p^M), because 0 has no valuation and must not absorb precision.

Precision propagation is worst case throughout: mul/div keep the smaller
relative precision, add/sub keep the smaller absolute precision.  Every digit
a value claims is therefore certified, which is what the identity audits
rely on.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    BadPrecision,
    ContextMismatch,
    DivisionByZero,
    EvenPrime,
    NonPrime,
    NotAOneUnit,
    NotAUnit,
    OutsideConvergenceDomain,
    PadicSyntaxError,
    PrecisionExhausted,
    ZeroArgument,
    ZeroDenominator,
    ZeroHasNoValuation,
)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (exact for n < 3.3e24)."""
    if n < 2:
        return False
    for sp in _SMALL_PRIMES:
        if n % sp == 0:
            return n == sp
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def int_valuation(n: int, p: int) -> int:
    """v_p(n) for a nonzero integer."""
    if n == 0:
        raise ZeroHasNoValuation("v_p(0) is undefined")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class PadicContext:
    """Ambient odd prime and working precision (max significant digits)."""

    prime: int
    precision: int

    def __post_init__(self):
        if not isinstance(self.prime, int) or not is_prime(self.prime):
            raise NonPrime(f"{self.prime} is not prime")
        if self.prime == 2:
            raise EvenPrime("p = 2 is not supported (odd p required)")
        if not isinstance(self.precision, int) or self.precision < 1:
            raise BadPrecision(f"precision must be >= 1, got {self.precision}")

    # --- constructors for elements ------------------------------------------

    def zero(self, bound: int | None = None) -> "PadicNumber":
        """The zero state O(p^bound); bound defaults to the context precision."""
        m = self.precision if bound is None else bound
        return PadicNumber(self, m, 0, 0)

    def one(self) -> "PadicNumber":
        return self.from_int(1)

    def from_int(self, n: int) -> "PadicNumber":
        return self.from_rational(n, 1)

    def from_rational(self, a: int | Fraction, b: int = 1) -> "PadicNumber":
        """Canonical image of a/b with full relative precision."""
        if isinstance(a, Fraction):
            a, b = a.numerator, a.denominator * b
        if b == 0:
            raise ZeroDenominator("denominator must be nonzero")
        if a == 0:
            return self.zero()
        p, k = self.prime, self.precision
        va = int_valuation(a, p)
        vb = int_valuation(b, p)
        ua = a // p**va
        ub = b // p**vb
        unit = ua * pow(ub, -1, p**k) % p**k
        return PadicNumber(self, va - vb, unit, k)

    def from_residue(self, r: int, abs_prec: int) -> "PadicNumber":
        """Value known exactly modulo p^abs_prec (an integer residue)."""
        pk = self.prime**abs_prec if abs_prec > 0 else 1
        r %= pk
        if r == 0 or abs_prec <= 0:
            return self.zero(abs_prec)
        v = int_valuation(r, self.prime)
        k = min(abs_prec - v, self.precision)
        unit = (r // self.prime**v) % self.prime**k
        return PadicNumber(self, v, unit, k)

    # --- parsing --------------------------------------------------------------

    _NUM_RE = re.compile(
        r"^\s*(\d+)\^(-?\d+)\s*\*\s*\[\s*(\d+(?:\s*,\s*\d+)*)\s*\]"
        r"\s*\+\s*O\(\s*(\d+)\^(-?\d+)\s*\)\s*$"
    )
    _ZERO_RE = re.compile(r"^\s*0\s*\+\s*O\(\s*(\d+)\^(-?\d+)\s*\)\s*$")

    def parse(self, text: str) -> "PadicNumber":
        """Inverse of render; also accepts digit lists with trailing zeros elided."""
        m = self._ZERO_RE.match(text)
        if m:
            if int(m.group(1)) != self.prime:
                raise ContextMismatch(f"prime {m.group(1)} != context prime {self.prime}")
            return self.zero(int(m.group(2)))
        m = self._NUM_RE.match(text)
        if not m:
            raise PadicSyntaxError(f"not a p-adic literal: {text!r}")
        base, v, digits_s, obase, oexp = m.groups()
        if int(base) != self.prime or int(obase) != self.prime:
            raise ContextMismatch(f"prime in {text!r} != context prime {self.prime}")
        v = int(v)
        digits = [int(d) for d in digits_s.split(",")]
        k = int(oexp) - v
        if k < len(digits) or k < 1:
            raise PadicSyntaxError(f"precision bound inconsistent with digits: {text!r}")
        if k > self.precision:
            raise PadicSyntaxError(f"claims {k} digits, context caps at {self.precision}")
        if any(d >= self.prime for d in digits) or digits[0] == 0:
            raise PadicSyntaxError(f"bad digit list in {text!r}")
        unit = 0
        for d in reversed(digits):
            unit = unit * self.prime + d
        return PadicNumber(self, v, unit, k)

    def from_json_dict(self, d: dict) -> "PadicNumber":
        if d.get("p") != self.prime:
            raise ContextMismatch(f"prime {d.get('p')} != context prime {self.prime}")
        digits = d.get("digits", [])
        if not digits:
            return self.zero(d["precision"])
        v = d["valuation"]
        k = d["precision"] - v
        if k < len(digits) or any(x >= self.prime for x in digits) or digits[0] == 0:
            raise PadicSyntaxError(f"bad JSON p-adic form: {d!r}")
        unit = 0
        for x in reversed(digits):
            unit = unit * self.prime + x
        return PadicNumber(self, v, unit, min(k, self.precision))


class PadicNumber:
    """Immutable element of Q_p with certified precision.

    Nonzero: value = p^v * unit + O(p^(v+k)), p does not divide unit,
    0 < unit < p^k.  Zero: unit == k == 0 and v holds the bound M of O(p^M).
    """

    __slots__ = ("ctx", "v", "unit", "k")

    def __init__(self, ctx: PadicContext, v: int, unit: int, k: int):
        self.ctx = ctx
        self.v = v
        self.unit = unit
        self.k = k
        if unit != 0:
            if k < 1:
                raise PrecisionExhausted("no significant digit left")
            assert unit % ctx.prime != 0 and 0 < unit < ctx.prime**k

    # --- state ----------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.unit == 0

    @property
    def abs_prec(self) -> int:
        """Exponent A of the error bound O(p^A)."""
        return self.v + self.k

    @property
    def valuation_lower_bound(self) -> int:
        """Exact valuation if nonzero, else the zero bound M."""
        return self.v

    def valuation(self) -> int:
        if self.is_zero:
            raise ZeroHasNoValuation("zero at O(p^%d) has no valuation" % self.v)
        return self.v

    def unit_part(self) -> "PadicNumber":
        if self.is_zero:
            raise ZeroHasNoValuation("zero has no unit part")
        return PadicNumber(self.ctx, 0, self.unit, self.k)

    def is_integral(self) -> bool:
        return self.v >= 0

    # --- precision management ---------------------------------------------------

    def abs_truncate(self, bound: int) -> "PadicNumber":
        """Weaken to absolute precision O(p^bound)."""
        if self.is_zero:
            return PadicNumber(self.ctx, min(self.v, bound), 0, 0)
        if self.v >= bound:
            return self.ctx.zero(bound)
        k = min(self.k, bound - self.v)
        return PadicNumber(self.ctx, self.v, self.unit % self.ctx.prime**k, k)

    def in_context(self, ctx: PadicContext) -> "PadicNumber":
        """Move to a context with the same prime; claimed digits are kept,
        capped by the target context precision."""
        if ctx.prime != self.ctx.prime:
            raise ContextMismatch("cannot change prime")
        if self.is_zero:
            return PadicNumber(ctx, self.v, 0, 0)
        k = min(self.k, ctx.precision)
        return PadicNumber(ctx, self.v, self.unit % ctx.prime**k, k)

    def shifted(self, j: int) -> "PadicNumber":
        """Exact multiplication by p^j."""
        return PadicNumber(self.ctx, self.v + j, self.unit, self.k)

    # --- arithmetic ---------------------------------------------------------------

    def _check(self, other: "PadicNumber") -> None:
        if not isinstance(other, PadicNumber):
            raise TypeError(f"expected PadicNumber, got {type(other).__name__}")
        if other.ctx != self.ctx:
            raise ContextMismatch(f"{self.ctx} != {other.ctx}")

    def __add__(self, other: "PadicNumber") -> "PadicNumber":
        self._check(other)
        p = self.ctx.prime
        if self.is_zero and other.is_zero:
            return self.ctx.zero(min(self.v, other.v))
        if self.is_zero:
            return other.abs_truncate(min(self.v, other.abs_prec))
        if other.is_zero:
            return self.abs_truncate(min(other.v, self.abs_prec))
        t = min(self.abs_prec, other.abs_prec)
        v0 = min(self.v, other.v)
        w = self.unit * p ** (self.v - v0) + other.unit * p ** (other.v - v0)
        w %= p ** (t - v0)
        if w == 0:
            return self.ctx.zero(t)
        dv = int_valuation(w, p)
        k = min(t - v0 - dv, self.ctx.precision)
        return PadicNumber(self.ctx, v0 + dv, (w // p**dv) % p**k, k)

    def __neg__(self) -> "PadicNumber":
        if self.is_zero:
            return self
        pk = self.ctx.prime**self.k
        return PadicNumber(self.ctx, self.v, (-self.unit) % pk, self.k)

    def __sub__(self, other: "PadicNumber") -> "PadicNumber":
        return self + (-other)

    def __mul__(self, other: "PadicNumber") -> "PadicNumber":
        self._check(other)
        if self.is_zero or other.is_zero:
            # O(p^M) * (p^v u + ...) is O(p^(M+v)); O(p^M)*O(p^M') is O(p^(M+M'))
            return self.ctx.zero(self.v + other.v)
        k = min(self.k, other.k)
        pk = self.ctx.prime**k
        return PadicNumber(self.ctx, self.v + other.v, self.unit * other.unit % pk, k)

    def __truediv__(self, other: "PadicNumber") -> "PadicNumber":
        self._check(other)
        if other.is_zero:
            raise DivisionByZero("divisor is zero at its known precision")
        if self.is_zero:
            return self.ctx.zero(self.v - other.v)
        k = min(self.k, other.k)
        pk = self.ctx.prime**k
        unit = self.unit * pow(other.unit, -1, pk) % pk
        return PadicNumber(self.ctx, self.v - other.v, unit, k)

    def __pow__(self, e: int) -> "PadicNumber":
        if not isinstance(e, int):
            raise TypeError("only integer exponents")
        if self.is_zero:
            if e < 0:
                raise DivisionByZero("negative power of zero")
            if e == 0:
                return self.ctx.one()
            return self.ctx.zero(self.v * e)
        pk = self.ctx.prime**self.k
        return PadicNumber(self.ctx, self.v * e, pow(self.unit, e, pk), self.k)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PadicNumber):
            return NotImplemented
        return (
            self.ctx == other.ctx
            and self.v == other.v
            and self.unit == other.unit
            and self.k == other.k
        )

    def __hash__(self):
        return hash((self.ctx, self.v, self.unit, self.k))

    # --- rendering ------------------------------------------------------------------

    def digits(self) -> list[int]:
        """Little-endian base-p digits of the unit mantissa (length k)."""
        out = []
        u = self.unit
        for _ in range(self.k):
            u, d = divmod(u, self.ctx.prime)
            out.append(d)
        return out

    def render(self) -> str:
        p = self.ctx.prime
        if self.is_zero:
            return f"0 + O({p}^{self.v})"
        ds = ",".join(str(d) for d in self.digits())
        return f"{p}^{self.v} * [{ds}] + O({p}^{self.abs_prec})"

    def to_json_dict(self) -> dict:
        if self.is_zero:
            return {"p": self.ctx.prime, "valuation": None, "digits": [], "precision": self.v}
        return {
            "p": self.ctx.prime,
            "valuation": self.v,
            "digits": self.digits(),
            "precision": self.abs_prec,
        }

    def __repr__(self):
        return self.render()


def valuation(a: PadicNumber) -> int:
    """v_p(a); error on zero."""
    return a.valuation()


def unit_part(a: PadicNumber) -> PadicNumber:
    """The unit u in a = p^v * u."""
    return a.unit_part()


def diff_valuation(a: PadicNumber, b: PadicNumber) -> int:
    """Certified lower bound for v_p(a - b) (exact when a - b is nonzero)."""
    return (a - b).valuation_lower_bound


def teichmuller(a: PadicNumber) -> PadicNumber:
    """The (p-1)-th root of unity congruent to a mod p.

    Computed as the stabilizing limit of x -> x^p mod p^N; the result depends
    only on a mod p and is returned at full context precision.
    """
    if a.is_zero or a.v != 0:
        raise NotAUnit("Teichmuller lift needs valuation 0")
    ctx = a.ctx
    pn = ctx.prime**ctx.precision
    x = a.unit % ctx.prime
    while True:
        y = pow(x, ctx.prime, pn)
        if y == x:
            break
        x = y
    return PadicNumber(ctx, 0, x, ctx.precision)


def exp_p(a: PadicNumber) -> PadicNumber:
    """exp(a) = sum a^j/j! for v_p(a) >= 1 (convergent since p is odd)."""
    ctx = a.ctx
    if a.is_zero:
        if a.v < 1:
            raise OutsideConvergenceDomain("exp needs v_p >= 1")
        # exp(0 + O(p^M)) = 1 + O(p^M)
        return ctx.one().abs_truncate(a.v)
    va = a.v
    if va < 1:
        raise OutsideConvergenceDomain(f"exp needs v_p >= 1, got {va}")
    # v_p(a^j/j!) >= j*va - (j-1)/(p-1), strictly increasing in j for va >= 1,
    # so the tail past the first j with the bound > precision cannot touch any
    # tracked digit.
    n, p = ctx.precision, ctx.prime
    acc = ctx.one()
    term = ctx.one()
    j = 0
    while True:
        j += 1
        if j * va * (p - 1) - (j - 1) > n * (p - 1):
            break
        term = term * a / ctx.from_int(j)
        acc = acc + term
    return acc


def log_classical(a: PadicNumber) -> PadicNumber:
    """log(a) = sum (-1)^(j+1) (a-1)^j / j for a = 1 mod p."""
    ctx = a.ctx
    z = a - ctx.one()
    if z.is_zero:
        if z.v < 1:
            raise NotAOneUnit("log needs a = 1 mod p")
        return ctx.zero(z.v)
    vz = z.v
    if vz < 1:
        raise NotAOneUnit(f"log needs v_p(a-1) >= 1, got {vz}")
    # v_p(z^j/j) >= j*vz - log_p(j); the real-valued bound is increasing in j
    # (vz >= 1 beats the log), so stopping once it clears the precision is sound.
    n, p = ctx.precision, ctx.prime
    acc = ctx.zero(ctx.precision + vz)
    zpow = ctx.one()
    j = 0
    while True:
        j += 1
        jl = _ilog(j, p)
        if j * vz - jl > n and j >= p:
            break
        zpow = zpow * z
        term = zpow / ctx.from_int(j)
        acc = (acc + term) if j % 2 == 1 else (acc - term)
    return acc


def _ilog(n: int, p: int) -> int:
    """floor(log_p n)."""
    e = 0
    while n >= p:
        n //= p
        e += 1
    return e


def log_iwasawa(a: PadicNumber) -> PadicNumber:
    """Total logarithm on Q_p^*: log p = 0 and roots of unity map to 0.

    Decomposes a = p^v * omega(u) * <u> and returns log of the 1-unit <u>;
    additive in products by construction.
    """
    if a.is_zero:
        raise ZeroArgument("Iwasawa log of zero")
    u = a.unit_part()
    w = teichmuller(u)
    return log_classical(u / w)
