"""Batch front-end: evaluate quantities, run identity-audit suites over
configuration grids, and emit JSON/CSV/text reports and stability tables.

Grid semantics: comma-separated values expand to Cartesian products, so the
audits cover a parameter region rather than a point.  Output is canonical
(sorted configurations, sorted JSON keys, no timestamps), so identical
configurations produce byte-identical output.

Exit codes: 0 all asserted audits pass; 1 an asserted audit failed; 2 bad
configuration; 3 a sum failed to stabilize under --strict; 4 output I/O
failure.  Report-only checks (conjecture comparisons, as-printed variants)
never affect the exit code.
"""

from __future__ import annotations

import argparse
import csv
import io
import random
import sys
from fractions import Fraction

from .errors import NotStabilized, PadicQError
from .euler import (
    classical_bernoulli,
    classical_euler,
    q_bernoulli,
    q_euler_number_exact,
    q_euler_polynomial,
    q_euler_polynomial_exact,
    verify_log_series,
    verify_translation_identity,
)
from .integrals import (
    BOSONIC,
    FERMIONIC,
    BracketMonomial,
    IntegrandSpec,
    MAX_SUMMAND_BUDGET,
    fermionic_integral,
    stability_report,
)
from .loggamma import (
    GammaArgument,
    gamma_direct,
    gamma_series,
    gamma_stability_rows,
    t_gamma_direct,
    t_gamma_series_conjecture,
    variant_difference,
    verify_bracket_log_decomposition,
    verify_gamma_functional_equation,
)
from .padic import PadicContext, PadicNumber
from .qanalog import QParam, q_bracket, q_make, q_pow
from .reporting import AuditReport, canonical_json, verdict_for

EXIT_OK = 0
EXIT_AUDIT_FAIL = 1
EXIT_BAD_CONFIG = 2
EXIT_NOT_STABILIZED = 3
EXIT_IO = 4

SUITES = ("eq3", "eq6", "eq8", "eq9", "eq10", "eq12", "thmA", "limits", "all")
QUANTITIES = ("q-euler", "q-bernoulli", "classical-euler", "classical-bernoulli",
              "gamma", "t-gamma", "bracket")
REPORT_KINDS = ("stability", "discrepancy", "t-conjecture")

EQ9_SEED = 987234091  # fixed: identical runs must be byte-identical


class ConfigError(Exception):
    pass


# --------------------------------------------------------------------------
# configuration
# --------------------------------------------------------------------------

def _parse_fraction(text: str) -> Fraction:
    try:
        if "/" in text:
            a, b = text.split("/", 1)
            return Fraction(int(a), int(b))
        return Fraction(int(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad rational {text!r}: {exc}") from exc


def _parse_qspec(text: str) -> tuple[int, int]:
    try:
        t, m = text.split(",")
        return int(t), int(m)
    except ValueError as exc:
        raise ConfigError(f"bad q spec {text!r}, expected t,m") from exc


def load_config_file(path: str) -> dict[str, str]:
    """Flat key = value lines; '#' starts a comment."""
    out: dict[str, str] = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key = value")
                key, value = line.split("=", 1)
                out[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return out


class RunConfig:
    """Validated grid: primes, q-specs, x-specs, targets and budgets."""

    def __init__(self, args):
        self.precision = args.precision
        if self.precision < 1:
            raise ConfigError("precision must be >= 1")
        self.target = args.target
        self.strict = bool(args.strict)
        self.format = args.format
        self.out = args.out
        self.workers = max(1, args.workers)
        self.strategy = args.sum_strategy
        try:
            self.primes = sorted({int(s) for s in str(args.p).split(",")})
        except ValueError as exc:
            raise ConfigError(f"bad prime list {args.p!r}") from exc
        self.qspecs = sorted(_parse_qspec(s) for s in (args.q or ["1,2", "2,2", "1,3", "2,3"]))
        self.x_raw = [_parse_fraction(s) for s in args.x] if args.x else None
        self.n = args.n
        self.max_sum_exponent = args.max_sum_exponent
        self.depths = args.depths if hasattr(args, "depths") else None
        self.degree = getattr(args, "K", 200)

        self.contexts: dict[int, PadicContext] = {}
        for p in self.primes:
            try:
                self.contexts[p] = PadicContext(p, self.precision)
            except PadicQError as exc:
                raise ConfigError(f"bad prime {p}: {exc}") from exc
            if self.max_sum_exponent is not None:
                if p**self.max_sum_exponent > MAX_SUMMAND_BUDGET:
                    raise ConfigError(
                        f"p^max_sum_exponent = {p}^{self.max_sum_exponent} exceeds "
                        f"the {MAX_SUMMAND_BUDGET} summand budget"
                    )

    def budget_for(self, p: int) -> int:
        if self.max_sum_exponent is None:
            return 10**6
        return p**self.max_sum_exponent

    def q_params(self, ctx: PadicContext) -> list[QParam]:
        try:
            return [q_make(t, m, ctx) for (t, m) in self.qspecs]
        except PadicQError as exc:
            raise ConfigError(f"bad q spec for p={ctx.prime}: {exc}") from exc

    def gamma_points(self, ctx: PadicContext) -> list[GammaArgument]:
        p = ctx.prime
        xs = self.x_raw or [Fraction(1, p), Fraction(2, p), Fraction(p + 1, p)]
        out = []
        for x in sorted(xs):
            try:
                out.append(GammaArgument.from_rational(ctx, x))
            except PadicQError as exc:
                raise ConfigError(f"bad gamma argument {x} for p={p}: {exc}") from exc
        return out


# --------------------------------------------------------------------------
# suite runners (each returns a list of AuditReports in canonical order)
# --------------------------------------------------------------------------

def _integral_kwargs(cfg: RunConfig, p: int) -> dict:
    return {
        "strategy": cfg.strategy,
        "workers": cfg.workers,
        "summand_budget": cfg.budget_for(p),
    }


class _Strictness:
    """Tracks unstabilized sums so --strict can turn them into exit 3."""

    def __init__(self):
        self.unstable: list[str] = []

    def note(self, result, label: str):
        if not result.converged:
            self.unstable.append(label)
        return result


def suite_eq3(cfg: RunConfig, strict: _Strictness) -> list[AuditReport]:
    """Closed-form q-Euler polynomials against the fermionic oracle."""
    reports = []
    for p in cfg.primes:
        ctx = cfg.contexts[p]
        for q in cfg.q_params(ctx):
            for n in range(0, 9):
                for x in (0, 1, 2):
                    spec = IntegrandSpec(BracketMonomial(x, n))
                    res = strict.note(
                        fermionic_integral(spec, q, cfg.target, **_integral_kwargs(cfg, p)),
                        f"eq3 p={p} q={q.t},{q.m} n={n} x={x}",
                    )
                    closed = ctx.from_rational(q_euler_polynomial_exact(n, x, q))
                    dv = (res.value - closed).valuation_lower_bound
                    reports.append(AuditReport(
                        identity="eq3",
                        params={"p": p, "q": f"{q.t},{q.m}", "n": n, "x": x,
                                "oracle_depth": res.depth_used},
                        lhs=closed.render(),
                        rhs=res.value.render(),
                        diff_valuation=dv,
                        target=cfg.target,
                        verdict=verdict_for(dv, cfg.target),
                    ))
    return reports


def suite_eq6(cfg: RunConfig, strict: _Strictness) -> list[AuditReport]:
    return [verify_log_series(cfg.degree)]


def suite_eq8(cfg: RunConfig, strict: _Strictness) -> list[AuditReport]:
    """Translation identity specialized to the q-Euler numbers (exact)."""
    reports = []
    for p in cfg.primes:
        ctx = cfg.contexts[p]
        for q in cfg.q_params(ctx):
            for n in range(0, 11):
                reports.append(verify_translation_identity(n, q, cfg.target))
    return reports


def suite_eq9(cfg: RunConfig, strict: _Strictness) -> list[AuditReport]:
    """Bracket cocycle [x+z] = [x] + q^x [z] on random integral pairs."""
    reports = []
    for p in cfg.primes:
        ctx = cfg.contexts[p]
        for q in cfg.q_params(ctx):
            rng = random.Random(EQ9_SEED + p)
            worst = None
            for _ in range(100):
                x = ctx.from_int(rng.randrange(1, p**8))
                z = ctx.from_int(rng.randrange(1, p**8))
                lhs = q_bracket(x + z, q)
                rhs = q_bracket(x, q) + q_pow(q, x) * q_bracket(z, q)
                dv = (lhs - rhs).valuation_lower_bound
                worst = dv if worst is None else min(worst, dv)
            reports.append(AuditReport(
                identity="eq9",
                params={"p": p, "q": f"{q.t},{q.m}", "pairs": 100},
                lhs="[x+z]_q",
                rhs="[x]_q + q^x [z]_q",
                diff_valuation=worst,
                target=cfg.target,
                verdict=verdict_for(worst, cfg.target),
            ))
    return reports


def suite_eq10(cfg: RunConfig, strict: _Strictness) -> list[AuditReport]:
    reports = []
    for p in cfg.primes:
        ctx = cfg.contexts[p]
        for q in cfg.q_params(ctx):
            for x in cfg.gamma_points(ctx):
                for z in (0, 1, 2, 5):
                    reports.append(verify_bracket_log_decomposition(x, q, z))
    return reports


def suite_eq12(cfg: RunConfig, strict: _Strictness) -> list[AuditReport]:
    reports = []
    for p in cfg.primes:
        ctx = cfg.contexts[p]
        for q in cfg.q_params(ctx):
            for x in cfg.gamma_points(ctx):
                for evaluator in ("direct", "series"):
                    reports.append(verify_gamma_functional_equation(
                        x, q, cfg.target, evaluator=evaluator,
                        strategy=cfg.strategy, workers=cfg.workers,
                    ))
    return reports


def suite_thmA(cfg: RunConfig, strict: _Strictness) -> list[AuditReport]:
    """Inverse-bracket expansion (derived coefficient) vs the direct integral."""
    reports = []
    for p in cfg.primes:
        ctx = cfg.contexts[p]
        for q in cfg.q_params(ctx):
            for x in cfg.gamma_points(ctx):
                direct = strict.note(
                    gamma_direct(x, q, cfg.target, strategy=cfg.strategy,
                                 workers=cfg.workers),
                    f"thmA p={p} q={q.t},{q.m} x={x.params()}",
                )
                series = gamma_series(x, q, cfg.target)
                dv = (direct.value - series.value).valuation_lower_bound
                reports.append(AuditReport(
                    identity="thmA",
                    params={"p": p, "q": f"{q.t},{q.m}", "x": x.params(),
                            "oracle_depth": direct.depth_used,
                            "series_terms": series.terms_used},
                    lhs=direct.value.render(),
                    rhs=series.value.render(),
                    diff_valuation=dv,
                    target=cfg.target,
                    verdict=verdict_for(dv, cfg.target),
                ))
    return reports


def suite_limits(cfg: RunConfig, strict: _Strictness) -> list[AuditReport]:
    """q -> 1 degenerations and the q-Bernoulli anchor values."""
    reports = []
    for p in cfg.primes:
        ctx = cfg.contexts[p]
        # q-Euler numbers against the classical ones, q = 1 + p^M
        for M in range(3, 9):
            qm = q_make(1, M, ctx)
            worst = None
            for n in range(0, 9):
                diff = q_euler_number_exact(n, qm) - classical_euler(n)
                dv = None if diff == 0 else _frac_val(diff, p)
                if dv is not None:
                    worst = dv if worst is None else min(worst, dv)
            reports.append(AuditReport(
                identity="limits",
                params={"p": p, "q": f"1,{M}", "check": "euler-limit", "n_max": 8},
                lhs="E_{n,q}",
                rhs="E_n",
                diff_valuation=worst,
                target=M - 2,
                verdict=verdict_for(worst, M - 2),
            ))
            res1 = strict.note(
                q_bernoulli(1, qm, cfg.target, strategy=cfg.strategy,
                            workers=cfg.workers),
                f"limits beta1 p={p} M={M}",
            )
            dv1 = (res1.value - ctx.from_rational(Fraction(-1, 2))).valuation_lower_bound
            reports.append(AuditReport(
                identity="limits",
                params={"p": p, "q": f"1,{M}", "check": "bernoulli-limit", "n": 1},
                lhs=res1.value.render(),
                rhs="-1/2",
                diff_valuation=dv1,
                target=M - 2,
                verdict=verdict_for(dv1, M - 2),
            ))
        # beta_0 log q = q - 1 on the configured q grid
        for q in cfg.q_params(ctx):
            res0 = strict.note(
                q_bernoulli(0, q, cfg.target, strategy=cfg.strategy,
                            workers=cfg.workers),
                f"limits beta0 p={p} q={q.t},{q.m}",
            )
            lhs = res0.value * q.log_q
            rhs = q.value - ctx.one()
            dv = (lhs - rhs).valuation_lower_bound
            reports.append(AuditReport(
                identity="limits",
                params={"p": p, "q": f"{q.t},{q.m}", "check": "beta0-log"},
                lhs=lhs.render(),
                rhs=rhs.render(),
                diff_valuation=dv,
                target=cfg.target,
                verdict=verdict_for(dv, cfg.target),
            ))
    return reports


def _frac_val(x: Fraction, p: int) -> int:
    from .padic import int_valuation

    return int_valuation(x.numerator, p) - int_valuation(x.denominator, p)


SUITE_RUNNERS = {
    "eq3": suite_eq3,
    "eq6": suite_eq6,
    "eq8": suite_eq8,
    "eq9": suite_eq9,
    "eq10": suite_eq10,
    "eq12": suite_eq12,
    "thmA": suite_thmA,
    "limits": suite_limits,
}


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_verify(cfg: RunConfig, suite: str) -> tuple[str, int]:
    strict = _Strictness()
    names = list(SUITE_RUNNERS) if suite == "all" else [suite]
    reports: list[AuditReport] = []
    for name in names:
        reports.extend(SUITE_RUNNERS[name](cfg, strict))
    if cfg.strict and strict.unstable:
        body = "\n".join(f"NOT STABILIZED: {s}" for s in strict.unstable) + "\n"
        return body, EXIT_NOT_STABILIZED
    failed = [r for r in reports if r.verdict == "FAIL"]
    if cfg.format == "json":
        body = canonical_json([r.to_json_dict() for r in reports])
    elif cfg.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["identity", "params", "diff_valuation", "target", "verdict"])
        for r in reports:
            writer.writerow([
                r.identity,
                " ".join(f"{k}={v}" for k, v in r.params.items()),
                "" if r.diff_valuation is None else r.diff_valuation,
                r.target,
                r.verdict or "REPORT",
            ])
        body = buf.getvalue()
    else:
        lines = [r.text_line() for r in reports]
        lines.append(f"total={len(reports)} failed={len(failed)}")
        body = "\n".join(lines) + "\n"
    return body, EXIT_AUDIT_FAIL if failed else EXIT_OK


def cmd_eval(cfg: RunConfig, quantity: str) -> tuple[str, int]:
    rows: list[tuple[dict, str]] = []
    code = EXIT_OK
    if quantity in ("classical-euler", "classical-bernoulli"):
        if cfg.n is None:
            raise ConfigError(f"--n is required for {quantity}")
        fn = classical_euler if quantity == "classical-euler" else classical_bernoulli
        rows.append(({"n": cfg.n}, str(fn(cfg.n))))
    else:
        for p in cfg.primes:
            ctx = cfg.contexts[p]
            for q in cfg.q_params(ctx):
                base = {"p": p, "q": f"{q.t},{q.m}"}
                if quantity == "q-euler":
                    if cfg.n is None:
                        raise ConfigError("--n is required for q-euler")
                    xs = cfg.x_raw or [Fraction(0)]
                    for x in sorted(xs):
                        if x.denominator == 1:
                            val = ctx.from_rational(
                                q_euler_polynomial_exact(cfg.n, int(x), q))
                        else:
                            val = q_euler_polynomial(cfg.n, ctx.from_rational(x), q)
                        rows.append(({**base, "n": cfg.n, "x": str(x)}, val.render()))
                elif quantity == "q-bernoulli":
                    if cfg.n is None:
                        raise ConfigError("--n is required for q-bernoulli")
                    res = q_bernoulli(cfg.n, q, cfg.target, strategy=cfg.strategy,
                                      workers=cfg.workers)
                    if not res.converged:
                        if cfg.strict:
                            raise NotStabilized(
                                f"q-bernoulli n={cfg.n} p={p}", result=res)
                        code = max(code, EXIT_OK)
                    rows.append((
                        {**base, "n": cfg.n, "depth": res.depth_used,
                         "stability": res.stability_valuation,
                         "converged": res.converged},
                        res.value.render(),
                    ))
                elif quantity in ("gamma", "t-gamma"):
                    for x in cfg.gamma_points(ctx):
                        if quantity == "gamma":
                            res = gamma_direct(x, q, cfg.target,
                                               strategy=cfg.strategy,
                                               workers=cfg.workers)
                        else:
                            res = t_gamma_direct(x, q, cfg.target,
                                                 strategy=cfg.strategy,
                                                 workers=cfg.workers)
                        if cfg.strict and not res.converged:
                            raise NotStabilized(
                                f"{quantity} x={x.params()} p={p}", result=res)
                        rows.append((
                            {**base, "x": x.params(), "depth": res.depth_used,
                             "stability": res.stability_valuation,
                             "converged": res.converged},
                            res.value.render(),
                        ))
                elif quantity == "bracket":
                    if not cfg.x_raw:
                        raise ConfigError("--x is required for bracket")
                    for x in sorted(cfg.x_raw):
                        val = q_bracket(ctx.from_rational(x), q)
                        rows.append(({**base, "x": str(x)}, val.render()))
                else:  # pragma: no cover
                    raise ConfigError(f"unknown quantity {quantity!r}")
    if cfg.format == "json":
        body = canonical_json([{"params": params, "value": value}
                               for params, value in rows])
    else:
        lines = []
        for params, value in rows:
            ps = " ".join(f"{k}={v}" for k, v in params.items())
            lines.append(f"{ps}: {value}" if ps else value)
        body = "\n".join(lines) + "\n"
    return body, code


def cmd_report(cfg: RunConfig, kind: str, quantity: str | None) -> tuple[str, int]:
    if kind == "stability":
        return _report_stability(cfg, quantity or "gamma")
    if kind == "discrepancy":
        return _report_discrepancy(cfg)
    if kind == "t-conjecture":
        return _report_t_conjecture(cfg)
    raise ConfigError(f"unknown report kind {kind!r}")  # pragma: no cover


def _depth_range(cfg: RunConfig) -> range:
    if cfg.depths:
        try:
            lo, hi = cfg.depths.split(":")
            return range(int(lo), int(hi) + 1)
        except ValueError as exc:
            raise ConfigError(f"bad depth range {cfg.depths!r}, expected lo:hi") from exc
    return range(1, cfg.target + 3)


def _report_stability(cfg: RunConfig, quantity: str) -> tuple[str, int]:
    depths = _depth_range(cfg)
    recs = []
    for p in cfg.primes:
        ctx = cfg.contexts[p]
        for q in cfg.q_params(ctx):
            base = {"p": p, "q": f"{q.t},{q.m}"}
            if quantity in ("gamma", "t-gamma"):
                kind = FERMIONIC if quantity == "gamma" else BOSONIC
                for x in cfg.gamma_points(ctx):
                    rows = gamma_stability_rows(x, q, kind, depths,
                                                strategy=cfg.strategy,
                                                workers=cfg.workers)
                    for row in rows:
                        recs.append({**base, "x": x.params(), "N": row.depth,
                                     "partial_sum": row.value.render(),
                                     "diff_valuation": row.diff_valuation})
            elif quantity == "q-euler":
                n = cfg.n if cfg.n is not None else 1
                spec = IntegrandSpec(BracketMonomial(0, n))
                for row in stability_report(spec, q, FERMIONIC, depths,
                                            strategy=cfg.strategy,
                                            workers=cfg.workers):
                    recs.append({**base, "n": n, "N": row.depth,
                                 "partial_sum": row.value.render(),
                                 "diff_valuation": row.diff_valuation})
            elif quantity == "q-bernoulli":
                n = cfg.n if cfg.n is not None else 1
                spec = IntegrandSpec(BracketMonomial(0, n), weight_q_inverse=True)
                for row in stability_report(spec, q, BOSONIC, depths,
                                            strategy=cfg.strategy,
                                            workers=cfg.workers):
                    recs.append({**base, "n": n, "N": row.depth,
                                 "partial_sum": row.value.render(),
                                 "diff_valuation": row.diff_valuation})
            else:
                raise ConfigError(f"stability reports not defined for {quantity!r}")
    if cfg.format == "json":
        return canonical_json(recs), EXIT_OK
    buf = io.StringIO()
    keys = sorted({k for r in recs for k in r})
    writer = csv.DictWriter(buf, fieldnames=keys)
    writer.writeheader()
    for r in recs:
        writer.writerow(r)
    return buf.getvalue(), EXIT_OK


def _report_discrepancy(cfg: RunConfig) -> tuple[str, int]:
    """Quantify printed-vs-derived coefficient variants (never a verdict)."""
    out = []
    for p in cfg.primes:
        ctx = cfg.contexts[p]
        for q in cfg.q_params(ctx):
            for n in range(0, 6):
                for x in (1, 2):
                    derived = q_euler_polynomial_exact(n, x, q)
                    printed = q_euler_polynomial_exact(n, x, q, variant="as_printed")
                    gap = derived - printed
                    out.append({
                        "identity": "eq3-variants",
                        "p": p, "q": f"{q.t},{q.m}", "n": n, "x": x,
                        "derived": str(derived),
                        "as_printed": str(printed),
                        "gap_valuation": None if gap == 0 else _frac_val(gap, p),
                    })
            for x in cfg.gamma_points(ctx):
                der = gamma_series(x, q, cfg.target)
                prn = gamma_series(x, q, cfg.target, variant="as_printed")
                gap = der.value - prn.value
                residual = variant_difference(x, q)
                out.append({
                    "identity": "eq11-variants",
                    "p": p, "q": f"{q.t},{q.m}", "x": x.params(),
                    "derived": der.value.render(),
                    "as_printed": prn.value.render(),
                    "gap_valuation": gap.valuation_lower_bound,
                    "gap_matches_qx_E1_term_valuation":
                        (gap - residual).valuation_lower_bound,
                })
    return canonical_json(out), EXIT_OK


def _report_t_conjecture(cfg: RunConfig) -> tuple[str, int]:
    out = []
    for p in cfg.primes:
        ctx = cfg.contexts[p]
        for q in cfg.q_params(ctx):
            for x in cfg.gamma_points(ctx):
                rep = t_gamma_series_conjecture(
                    x, q, cfg.target, strategy=cfg.strategy, workers=cfg.workers)
                out.append(rep.to_json_dict())
    return canonical_json(out), EXIT_OK


# --------------------------------------------------------------------------
# entry point
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value config file; flags override")
    common.add_argument("--p", default="3,5,7", help="comma-separated odd primes")
    common.add_argument("--precision", type=int, default=30,
                        help="working precision in digits")
    common.add_argument("--q", action="append",
                        help="q spec t,m meaning q = 1 + t*p^m (repeatable)")
    common.add_argument("--x", action="append",
                        help="argument a/b (repeatable); defaults depend on the command")
    common.add_argument("--n", type=int, help="order / index where applicable")
    common.add_argument("--target", type=int, default=12,
                        help="audit target in digits")
    common.add_argument("--max-sum-exponent", type=int, default=None,
                        help="cap depth so p^N stays within the summand budget")
    common.add_argument("--strict", action="store_true",
                        help="exit 3 when any sum fails to stabilize")
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--out", help="write output to this path instead of stdout")
    common.add_argument("--workers", type=int, default=1,
                        help="worker count for grid/sum partitioning")
    common.add_argument("--sum-strategy", choices=("auto", "blocks", "enumerate"),
                        default="auto",
                        help="partial-sum evaluation strategy")

    ap = argparse.ArgumentParser(
        prog="padicq",
        description="p-adic q-analysis toolkit: evaluate, audit, report",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("eval", parents=[common], help="evaluate a quantity")
    pe.add_argument("--quantity", choices=QUANTITIES, required=True)

    pv = sub.add_parser("verify", parents=[common], help="run identity audits")
    pv.add_argument("--suite", choices=SUITES, required=True)
    pv.add_argument("--K", type=int, default=200,
                    help="truncation degree for the formal-series suite")

    pr = sub.add_parser("report", parents=[common], help="emit report artifacts")
    pr.add_argument("--kind", choices=REPORT_KINDS, required=True)
    pr.add_argument("--quantity", choices=QUANTITIES, default=None)
    pr.add_argument("--depths", help="depth range lo:hi for stability tables")

    return ap


def _apply_config_file(argv: list[str], ap: argparse.ArgumentParser) -> list[str]:
    """Splice config-file values in front of the user flags (flags win)."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    if idx + 1 >= len(argv):
        return argv
    data = load_config_file(argv[idx + 1])
    injected: list[str] = []
    for key, value in sorted(data.items()):
        flag = "--" + key.replace("_", "-")
        if flag in argv:
            continue  # explicit flags override the config file
        if key == "strict":
            if value.lower() in ("1", "true", "yes"):
                injected.append(flag)
            continue
        if key in ("q", "x"):
            for item in value.split():
                injected.extend([flag, item])
            continue
        injected.extend([flag, value])
    return argv[:1] + injected + argv[1:]


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    ap = build_parser()
    try:
        if argv and argv[0] not in ("-h", "--help"):
            full = _apply_config_file([argv[0]] + argv[1:], ap)
        else:
            full = argv
        args = ap.parse_args(full)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    try:
        cfg = RunConfig(args)
        if args.command == "eval":
            body, code = cmd_eval(cfg, args.quantity)
        elif args.command == "verify":
            body, code = cmd_verify(cfg, args.suite)
        else:
            body, code = cmd_report(cfg, args.kind, args.quantity)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    except NotStabilized as exc:
        print(f"not stabilized: {exc}", file=sys.stderr)
        return EXIT_NOT_STABILIZED
    except PadicQError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG

    if cfg.out:
        try:
            with open(cfg.out, "w", encoding="utf-8") as fh:
                fh.write(body)
        except OSError as exc:
            print(f"cannot write {cfg.out}: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(body)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
