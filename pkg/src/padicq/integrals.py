"""Fermionic and bosonic p-adic integrals as stabilizing Riemann sums.

The three integrals implemented here are limits of normalized partial sums
over the integer representatives 0..p^N-1:

    fermionic:  S_N = (1/[p^N]_{-q}) * sum f(z) (-q)^z
    bosonic:    S_N = (1/[p^N]_q)    * sum f(z) q^z
    signed:     S_N =                  sum f(z) (-1)^z      (q = 1)

Depth N is raised until two consecutive differences reach the requested
valuation target; failure to stabilize is reported, never silent.

Two evaluation strategies produce the identical partial sums:

* ``enumerate`` walks every summand; cost p^N, capped by the summand budget.
* ``blocks`` (default) evaluates the same sum exactly by splitting z into
  residue classes mod p^J and summing each class in closed geometric form.
  Integrands are polynomials in q^z (brackets, q-powers, weights) up to a
  kernel-local expansion whose dropped tail is provably below the working
  precision, so arbitrary depths cost O(polylog) instead of O(p^N).

The two strategies are cross-checked against each other in the test suite;
``blocks`` is what makes deep stability certificates affordable at p >= 5.
"""

from __future__ import annotations

import functools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    BudgetExceeded,
    ContextMismatch,
    IntegrandDomainError,
    NotStabilized,
)
from .padic import PadicContext, PadicNumber, log_iwasawa
from .qanalog import QParam, q_make, q_pow

FERMIONIC = "fermionic"
BOSONIC = "bosonic"
SIGNED = "signed"

DEFAULT_SUMMAND_BUDGET = 10**6
MAX_SUMMAND_BUDGET = 10**7


# --------------------------------------------------------------------------
# integrand descriptions
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Constant:
    """f(y) = 1."""


@dataclass(frozen=True)
class QPower:
    """f(y) = q^(s*y)."""

    s: int


@dataclass(frozen=True)
class BracketMonomial:
    """f(y) = [c + y]_q ^ exponent."""

    c: int | Fraction | PadicNumber
    exponent: int

    def __post_init__(self):
        if self.exponent < 0:
            raise IntegrandDomainError("bracket monomial exponent must be >= 0")


@dataclass(frozen=True)
class GammaKernel:
    """f(y) = [c + y]_q * (log [c + y]_q - 1), log meaning the Iwasawa branch."""

    c: int | Fraction | PadicNumber


@dataclass(frozen=True)
class Tabulated:
    """f(y) = values[y mod p^level]; must cover all residues."""

    level: int
    values: tuple[PadicNumber, ...]

    def __post_init__(self):
        if self.level < 0:
            raise IntegrandDomainError("tabulation level must be >= 0")


Family = Constant | QPower | BracketMonomial | GammaKernel | Tabulated


@dataclass(frozen=True)
class IntegrandSpec:
    """An integrand: a family member, optionally weighted by q^(-y) and
    translated (shift realizes f_1(y) = f(y + 1))."""

    family: Family
    weight_q_inverse: bool = False
    shift: int = 0

    def translated(self, extra: int = 1) -> "IntegrandSpec":
        return IntegrandSpec(self.family, self.weight_q_inverse, self.shift + extra)


@dataclass(frozen=True)
class IntegralResult:
    """A finite-depth approximation of the limit, with its stability evidence."""

    value: PadicNumber
    depth_used: int
    stability_valuation: int | None
    converged: bool
    kind: str
    target: int

    def require_converged(self) -> "IntegralResult":
        if not self.converged:
            raise NotStabilized(
                f"{self.kind} sum not stable at target {self.target} "
                f"by depth {self.depth_used}",
                result=self,
            )
        return self


@dataclass(frozen=True)
class StabilityRow:
    depth: int
    value: PadicNumber
    diff_valuation: int | None  # vs previous depth; None on the first row


# --------------------------------------------------------------------------
# shared helpers
# --------------------------------------------------------------------------

def _shifted_c(family, shift: int):
    c = family.c
    if isinstance(c, PadicNumber):
        return c + c.ctx.from_int(shift) if shift else c
    return c + shift


def _c_as_padic(c, ctx: PadicContext) -> PadicNumber:
    if isinstance(c, PadicNumber):
        if c.ctx.prime != ctx.prime:
            raise ContextMismatch("integrand constant from a different prime")
        return c.in_context(ctx)
    return ctx.from_rational(Fraction(c))


def _q_power_of(q: QParam, c, ctx: PadicContext) -> PadicNumber:
    """q^c, exact when c is an integer."""
    if isinstance(c, int) or (isinstance(c, Fraction) and c.denominator == 1):
        return ctx.from_rational(q.pow_int(int(c)))
    return q_pow(q, _c_as_padic(c, ctx))


def _ilog(n: int, p: int) -> int:
    e = 0
    while n >= p:
        n //= p
        e += 1
    return e


@functools.lru_cache(maxsize=256)
def _q_in_ctx(t: int, m: int, ctx: PadicContext) -> QParam:
    return q_make(t, m, ctx)


def _fold(parts: list[PadicNumber], zero: PadicNumber) -> PadicNumber:
    if not parts:
        return zero
    acc = parts[0]
    for x in parts[1:]:
        acc = acc + x
    return acc


def _map_ordered(fn, items, workers: int):
    """Deterministic map: order of results == order of items, any worker count."""
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# --------------------------------------------------------------------------
# pointwise evaluation (enumeration path, f(0), and cross-checks)
# --------------------------------------------------------------------------

def evaluate_integrand(
    spec: IntegrandSpec,
    z: int,
    q: QParam | None,
    ctx: PadicContext,
) -> PadicNumber:
    """f(z) at an integer point, weight and translation included.

    q=None evaluates the q->1 specialization used by the signed integral.
    Integer powers of q are taken modulo p^precision, never as full integers,
    so large points cost O(log z).
    """
    zz = z + spec.shift
    fam = spec.family
    if q is not None:
        if q.ctx.prime != ctx.prime:
            raise ContextMismatch("q from a different prime")
        if q.ctx != ctx:
            q = _q_in_ctx(q.t, q.m, ctx)
    mod = ctx.prime**ctx.precision

    if isinstance(fam, Constant):
        val = ctx.one()
    elif isinstance(fam, QPower):
        if q is None:
            val = ctx.one()
        else:
            val = ctx.from_residue(pow(q.q_int, fam.s * zz, mod), ctx.precision)
    elif isinstance(fam, BracketMonomial):
        base = _bracket_at(fam.c, zz, q, ctx)
        val = base ** fam.exponent
    elif isinstance(fam, GammaKernel):
        b = _bracket_at(fam.c, zz, q, ctx)
        if b.is_zero:
            raise IntegrandDomainError("gamma kernel hit a zero bracket")
        val = b * (log_iwasawa(b) - ctx.one())
    elif isinstance(fam, Tabulated):
        pj = ctx.prime**fam.level
        if len(fam.values) != pj:
            raise IntegrandDomainError(
                f"tabulated integrand must cover all {pj} residues"
            )
        val = fam.values[zz % pj].in_context(ctx)
    else:  # pragma: no cover
        raise IntegrandDomainError(f"unknown family {fam!r}")

    if spec.weight_q_inverse and q is not None:
        val = val * ctx.from_residue(pow(q.q_int, -zz, mod), ctx.precision)
    return val


def _bracket_at(c, zz: int, q: QParam | None, ctx: PadicContext) -> PadicNumber:
    """[c + zz]_q (or c + zz itself when q is None, the q->1 limit)."""
    if q is None:
        if isinstance(c, PadicNumber):
            return _c_as_padic(c, ctx) + ctx.from_int(zz)
        return ctx.from_rational(Fraction(c) + zz)
    mod = ctx.prime**ctx.precision
    one = ctx.one()
    den = one - ctx.from_int(q.q_int)
    if isinstance(c, int) or (isinstance(c, Fraction) and c.denominator == 1):
        num = (1 - pow(q.q_int, int(c) + zz, mod)) % mod
        return ctx.from_residue(num, ctx.precision) / den
    qc = _q_power_of(q, c, ctx)
    qz = ctx.from_residue(pow(q.q_int, zz, mod), ctx.precision)
    return (one - qc * qz) / den


# --------------------------------------------------------------------------
# exact blockwise evaluation
# --------------------------------------------------------------------------

class _Compiled:
    """The partial sum compiled to sum_j e_j * Geo(j, N).

    Geo(j, N) = sum_{w < p^(N-J)} sigma^w R^(jw) with R = q^(p^J): the whole
    z-dependence of summand*measure-weight factors through powers of q^z, so
    each depth is a finite combination of closed-form geometric sums.
    trunc_floor, when set, is the certified bound on the (kernel-expansion)
    tail dropped during compilation; exact families leave it None.
    """

    def __init__(self, ctx_int, q_int, sigma, level, coeffs, trunc_floor):
        self.ctx = ctx_int
        self.q_int = q_int
        self.sigma = sigma
        self.level = level
        self.coeffs = coeffs  # dict j -> PadicNumber
        self.trunc_floor = trunc_floor
        self._kint = ctx_int.precision

    def _geo(self, j: int, depth: int) -> PadicNumber:
        p = self.ctx.prime
        mod = p**self._kint
        top = pow(self.q_int, j * p**depth, mod)
        bot = pow(self.q_int, j * p**self.level, mod)
        if self.sigma == -1:
            num = self.ctx.from_residue(1 + top, self._kint)
            den = self.ctx.from_residue(1 + bot, self._kint)
            return num / den
        if j == 0:
            return self.ctx.from_int(p ** (depth - self.level))
        num = self.ctx.from_residue(top - 1, self._kint)
        den = self.ctx.from_residue(bot - 1, self._kint)
        return num / den

    def unnormalized(self, depth: int, workers: int = 1) -> PadicNumber:
        items = sorted(self.coeffs.items())
        parts = _map_ordered(lambda it: it[1] * self._geo(it[0], depth), items, workers)
        acc = _fold(parts, self.ctx.zero(self._kint))
        if self.trunc_floor is not None:
            acc = acc.abs_truncate(self.trunc_floor)
        return acc


def _internal_context(ctx: PadicContext, q: QParam, spec: IntegrandSpec,
                      kind: str, max_depth: int) -> PadicContext:
    """Elevated working precision covering every valuation loss on the way:
    (1-q)^-n cancellation, bosonic normalizers of valuation N, and guard."""
    extra = q.m + 16
    fam = spec.family
    if isinstance(fam, BracketMonomial):
        extra += fam.exponent * q.m
    if isinstance(fam, GammaKernel):
        c = fam.c
        vc = c.valuation_lower_bound if isinstance(c, PadicNumber) else _frac_val(c, ctx.prime)
        extra += 2 * q.m + max(0, -vc) + 8
    if kind == BOSONIC:
        extra += max_depth + q.m + 6
    return PadicContext(ctx.prime, ctx.precision + extra)


def _frac_val(c, p: int) -> int:
    c = Fraction(c)
    if c == 0:
        return 0
    from .padic import int_valuation

    return int_valuation(c.numerator, p) - int_valuation(c.denominator, p)


@functools.lru_cache(maxsize=512)
def _compile(spec: IntegrandSpec, q: QParam, kind: str, ctx_int: PadicContext,
             user_prec: int) -> _Compiled:
    comp = _compile_family(spec, q, kind, ctx_int, user_prec)
    if spec.weight_q_inverse and spec.shift:
        # the weight sees the translated point: q^-(z+shift) = q^-shift * q^-z
        qe = q_make(q.t, q.m, ctx_int)
        factor = ctx_int.from_rational(qe.pow_int(-spec.shift))
        comp.coeffs = {j: c * factor for j, c in comp.coeffs.items()}
    return comp


def _compile_family(spec: IntegrandSpec, q: QParam, kind: str,
                    ctx_int: PadicContext, user_prec: int) -> _Compiled:
    sigma = -1 if kind == FERMIONIC else 1
    qe = q_make(q.t, q.m, ctx_int)
    fam = spec.family
    p = ctx_int.prime
    wshift = -1 if spec.weight_q_inverse else 0

    if isinstance(fam, (Constant, QPower)):
        s = fam.s if isinstance(fam, QPower) else 0
        coeff = ctx_int.one()
        if isinstance(fam, QPower) and spec.shift:
            coeff = ctx_int.from_rational(qe.pow_int(s * spec.shift))
        return _Compiled(ctx_int, qe.q_int, sigma, 0, {s + 1 + wshift: coeff}, None)

    if isinstance(fam, BracketMonomial):
        c = _shifted_c(fam, spec.shift)
        n = fam.exponent
        qc = _q_power_of(qe, c, ctx_int)
        one = ctx_int.one()
        inv1q = one / (one - ctx_int.from_int(qe.q_int))
        coeffs: dict[int, PadicNumber] = {}
        binom = 1
        qci = one
        for i in range(n + 1):
            term = ctx_int.from_int((-1) ** i * binom) * qci * inv1q**n
            coeffs[i + 1 + wshift] = coeffs.get(i + 1 + wshift, ctx_int.zero()) + term
            binom = binom * (n - i) // (i + 1)
            qci = qci * qc
        return _Compiled(ctx_int, qe.q_int, sigma, 0, coeffs, None)

    if isinstance(fam, Tabulated):
        level = fam.level
        pj = p**level
        if len(fam.values) != pj:
            raise IntegrandDomainError(f"tabulated integrand must cover all {pj} residues")
        coeffs = {}
        for a in range(pj):
            fa = fam.values[(a + spec.shift) % pj].in_context(ctx_int)
            kappa = ctx_int.from_rational(qe.pow_int(a) * (sigma**a))
            if spec.weight_q_inverse:
                fa = fa * ctx_int.from_rational(qe.pow_int(-a))
            j = 1 + wshift
            coeffs[j] = coeffs.get(j, ctx_int.zero()) + kappa * fa
        return _Compiled(ctx_int, qe.q_int, sigma, level, coeffs, None)

    if isinstance(fam, GammaKernel):
        return _compile_gamma(spec, qe, sigma, ctx_int, user_prec, wshift)

    raise IntegrandDomainError(f"unknown family {fam!r}")  # pragma: no cover


def _compile_gamma(spec, qe: QParam, sigma: int, ctx_int: PadicContext,
                   user_prec: int, wshift: int) -> _Compiled:
    """Residue-class expansion of the log kernel.

    On the class z = a + p^J w the bracket is B_a - s_a*(R^w - 1), an affine
    function of u = R^w - 1 with v(u) >= m+J, so the kernel expands as a
    polynomial in u whose tail valuations grow by at least J - v(B) per
    order.  The polynomial is then rewritten in the R^(lw) basis, where each
    depth is a geometric sum.  The dropped tail is certified below
    trunc_floor and the partial sum's claimed precision is capped there.
    """
    p = ctx_int.prime
    level = 1
    c = _shifted_c(spec.family, spec.shift)
    qc = _q_power_of(qe, c, ctx_int)
    one = ctx_int.one()
    qval = ctx_int.from_int(qe.q_int)
    inv1q = one / (one - qval)

    # class-independent valuation data
    b_probe = (one - qc) / (one - qval)
    if b_probe.is_zero:
        raise IntegrandDomainError("bracket vanishes on the sampled class")
    v_b = b_probe.v
    if v_b > 0:
        raise IntegrandDomainError("gamma kernel needs the bracket to be a non-integral"
                                   " value or a unit on every class")
    # tail of the u-expansion: term k has valuation >= v_b + k*(J - v_b) - log_p k
    floor = user_prec + max(0, -v_b) + 4
    k_max = 1
    while v_b + (k_max + 1) * (level - v_b) - _ilog(k_max + 1, p) <= floor:
        k_max += 1
    k_max += 2  # slack over the integer log bound

    pj = p**level
    pk = p**ctx_int.precision

    def class_coeffs(a: int) -> list[PadicNumber]:
        zeta = ctx_int.from_residue(pow(qe.q_int, a, pk), ctx_int.precision)
        b_a = (one - qc * zeta) / (one - qval)
        if b_a.is_zero or b_a.v != v_b:
            raise IntegrandDomainError("bracket valuation is not constant across classes")
        lam = log_iwasawa(b_a)
        s_a = qc * zeta * inv1q
        tau = ctx_int.zero() - s_a / b_a  # log argument: B_a*(1 + tau*u)
        # poly(u) = (B_a - s_a u) * ((lam - 1) + log1p(tau*u)), truncated
        log_poly = [ctx_int.zero() for _ in range(k_max + 2)]
        log_poly[0] = lam - one
        tpow = one
        for k in range(1, k_max + 1):
            tpow = tpow * tau
            coeff = tpow / ctx_int.from_int(k)
            log_poly[k] = coeff if k % 2 == 1 else (ctx_int.zero() - coeff)
        out = [ctx_int.zero() for _ in range(k_max + 2)]
        for k in range(k_max + 1):
            out[k] = out[k] + b_a * log_poly[k]
            out[k + 1] = out[k + 1] - s_a * log_poly[k]
        if spec.weight_q_inverse:
            qa_inv = ctx_int.from_residue(pow(qe.q_int, -a, pk), ctx_int.precision)
            out = [x * qa_inv for x in out]
        return out

    per_class = [class_coeffs(a) for a in range(pj)]

    # re-expand u^k = (R^w - 1)^k into the R^(lw) basis and fold in the
    # measure weight sigma^a q^a for each class
    coeffs: dict[int, PadicNumber] = {}
    for a in range(pj):
        kappa = ctx_int.from_residue(pow(qe.q_int, a, pk), ctx_int.precision)
        if sigma == -1 and a % 2 == 1:
            kappa = ctx_int.zero() - kappa
        d = per_class[a]
        for k in range(k_max + 2):
            if d[k].is_zero:
                continue
            binom = 1
            for l in range(k + 1):
                j = l + 1 + wshift
                term = kappa * d[k] * ctx_int.from_int(binom * (-1) ** (k - l))
                coeffs[j] = coeffs.get(j, ctx_int.zero()) + term
                binom = binom * (k - l) // (l + 1)
    return _Compiled(ctx_int, qe.q_int, sigma, level, coeffs, floor)


# --------------------------------------------------------------------------
# partial sums and the stability driver
# --------------------------------------------------------------------------

def _normalizer(kind: str, q_int: int, ctx: PadicContext, depth: int) -> PadicNumber:
    mod = ctx.prime**ctx.precision
    top = pow(q_int, ctx.prime**depth, mod)
    if kind == FERMIONIC:
        return ctx.from_residue(1 + top, ctx.precision) / ctx.from_residue(1 + q_int, ctx.precision)
    if kind == BOSONIC:
        return ctx.from_residue(top - 1, ctx.precision) / ctx.from_residue(q_int - 1, ctx.precision)
    return ctx.one()


def _enumerated_sum(spec, q, kind, ctx_int, depth, workers) -> PadicNumber:
    p = ctx_int.prime
    count = p**depth
    mod = p**ctx_int.precision
    q_int = q.q_int if q is not None else 1

    def chunk_sum(bounds) -> PadicNumber:
        lo, hi = bounds
        acc = ctx_int.zero(ctx_int.precision)
        qz = pow(q_int, lo, mod)
        for z in range(lo, hi):
            fz = evaluate_integrand(spec, z, q, ctx_int)
            w = ctx_int.from_residue(qz, ctx_int.precision)
            if kind in (FERMIONIC, SIGNED) and z % 2 == 1:
                w = ctx_int.zero() - w
            acc = acc + fz * w
            qz = qz * q_int % mod
        return acc

    nchunks = max(1, min(workers, count))
    step = -(-count // nchunks)
    bounds = [(i * step, min((i + 1) * step, count)) for i in range(nchunks)
              if i * step < count]
    parts = _map_ordered(chunk_sum, bounds, workers)
    return _fold(parts, ctx_int.zero(ctx_int.precision))


def _partial_sum(spec, q, kind, ctx_int, depth, strategy, workers, user_prec) -> PadicNumber:
    if kind == SIGNED:
        a = _enumerated_sum(spec, None, kind, ctx_int, depth, workers)
        return a
    if strategy == "enumerate":
        a = _enumerated_sum(spec, q, kind, ctx_int, depth, workers)
    else:
        comp = _compile(spec, q, kind, ctx_int, user_prec)
        if depth < comp.level:
            a = _enumerated_sum(spec, q, kind, ctx_int, depth, workers)
        else:
            a = comp.unnormalized(depth, workers)
    return a / _normalizer(kind, q.q_int, ctx_int, depth)


def _max_enum_depth(p: int, budget: int) -> int:
    n = 0
    while p ** (n + 1) <= budget:
        n += 1
    return n


def _integrate(spec, q, kind, ctx, target, max_depth, strategy, workers,
               summand_budget) -> IntegralResult:
    if strategy not in ("auto", "blocks", "enumerate"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if kind == SIGNED:
        strategy = "enumerate"
    elif strategy == "auto":
        strategy = "blocks"
    if max_depth is None:
        if strategy == "enumerate":
            max_depth = _max_enum_depth(ctx.prime, summand_budget)
        else:
            max_depth = target + 20
    elif strategy == "enumerate" and ctx.prime**max_depth > MAX_SUMMAND_BUDGET:
        raise BudgetExceeded(
            f"{ctx.prime}^{max_depth} summands exceed the budget {MAX_SUMMAND_BUDGET}"
        )

    ctx_int = _internal_context(ctx, q, spec, kind, max_depth) if q is not None \
        else PadicContext(ctx.prime, ctx.precision + 10)

    sums: list[PadicNumber] = []
    bounds: list[int] = []
    for depth in range(0, max_depth + 1):
        s = _partial_sum(spec, q, kind, ctx_int, depth, strategy, workers,
                         ctx.precision)
        sums.append(s)
        if len(sums) >= 2:
            bounds.append((sums[-1] - sums[-2]).valuation_lower_bound)
        if len(bounds) >= 2 and bounds[-1] >= target and bounds[-2] >= target:
            return IntegralResult(
                value=s.in_context(ctx),
                depth_used=depth,
                stability_valuation=min(bounds[-1], bounds[-2]),
                converged=True,
                kind=kind,
                target=target,
            )
    stab = min(bounds[-2:]) if len(bounds) >= 2 else None
    return IntegralResult(
        value=sums[-1].in_context(ctx),
        depth_used=max_depth,
        stability_valuation=stab,
        converged=False,
        kind=kind,
        target=target,
    )


# --------------------------------------------------------------------------
# public entry points
# --------------------------------------------------------------------------

def fermionic_integral(
    spec: IntegrandSpec,
    q: QParam,
    target: int,
    max_depth: int | None = None,
    strategy: str = "auto",
    workers: int = 1,
    summand_budget: int = DEFAULT_SUMMAND_BUDGET,
) -> IntegralResult:
    """I_{-q}(f): alternating-weight sums normalized by [p^N]_{-q}."""
    return _integrate(spec, q, FERMIONIC, q.ctx, target, max_depth, strategy,
                      workers, summand_budget)


def bosonic_integral(
    spec: IntegrandSpec,
    q: QParam,
    target: int,
    max_depth: int | None = None,
    strategy: str = "auto",
    workers: int = 1,
    summand_budget: int = DEFAULT_SUMMAND_BUDGET,
) -> IntegralResult:
    """I_q(f): q^z-weighted sums normalized by [p^N]_q (slower to stabilize)."""
    return _integrate(spec, q, BOSONIC, q.ctx, target, max_depth, strategy,
                      workers, summand_budget)


def fermionic_integral_signed(
    spec: IntegrandSpec,
    ctx: PadicContext,
    target: int,
    max_depth: int | None = None,
    workers: int = 1,
    summand_budget: int = DEFAULT_SUMMAND_BUDGET,
) -> IntegralResult:
    """I_{-1}(f): the q = 1 limit; plain alternating sums, enumerated."""
    return _integrate(spec, None, SIGNED, ctx, target, max_depth, "enumerate",
                      workers, summand_budget)


def stability_report(
    spec: IntegrandSpec,
    q: QParam | None,
    kind: str,
    depths: range,
    ctx: PadicContext | None = None,
    strategy: str = "auto",
    workers: int = 1,
) -> list[StabilityRow]:
    """Partial sums and successive difference valuations over a depth range."""
    if kind not in (FERMIONIC, BOSONIC, SIGNED):
        raise ValueError(f"unknown integral kind {kind!r}")
    if kind == SIGNED:
        if ctx is None:
            raise ValueError("signed reports need an explicit context")
        strategy = "enumerate"
    else:
        ctx = q.ctx
    if strategy == "auto":
        strategy = "enumerate" if kind == SIGNED else "blocks"
    if strategy == "enumerate" and ctx.prime ** max(depths) > MAX_SUMMAND_BUDGET:
        raise BudgetExceeded(
            f"{ctx.prime}^{max(depths)} summands exceed the budget {MAX_SUMMAND_BUDGET}"
        )
    top = max(depths)
    ctx_int = _internal_context(ctx, q, spec, kind, top) if q is not None \
        else PadicContext(ctx.prime, ctx.precision + 10)
    rows: list[StabilityRow] = []
    prev: PadicNumber | None = None
    for depth in depths:
        s = _partial_sum(spec, q, kind, ctx_int, depth, strategy, workers,
                         ctx.precision)
        dv = None if prev is None else (s - prev).valuation_lower_bound
        rows.append(StabilityRow(depth, s.in_context(ctx), dv))
        prev = s
    return rows
