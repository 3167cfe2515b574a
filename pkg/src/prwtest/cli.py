"""Command-line front end.

Subcommands: ``pvalue`` (one report from losses or an explicit empirical
risk), ``compare`` (rounded p-value table over an empirical-risk grid),
``plotdata`` (dense unrounded curves for external plotting), ``fwer``
(multiple-testing procedures over a p-value file), and ``validate``
(seeded Monte Carlo check of super-uniformity, usable as a CI gate).

Exit codes: 0 success / validation pass, 1 validation fail (``validate``
only), 2 usage or data error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import dataclass
from decimal import Decimal, ROUND_HALF_UP
from typing import Optional, Sequence

from .baselines import bentkus_pvalue, compare, hoeffding_tight_pvalue
from .fwer import FwerOutcome, FwerPlan, bonferroni, fallback, fixed_sequence
from .mc import LossDistribution, canonical_method, simulate_superuniformity
from .prw import TestSpec, gamma_r, prw_pvalue

__all__ = ["LossSample", "read_loss_csv", "main", "entrypoint", "DEFAULT_COMPARE_GRID"]

# Default grid for `compare`: 45 evenly spaced empirical risks from 0.  The
# spacing reproduces the published reference table for (n=100, alpha=0.1); in
# particular the 34th value sits just above the 0.05 step breakpoint, which is
# where that table's generator placed it.  Checked-in literals, not a runtime
# formula: the golden tests pin these exact doubles.
DEFAULT_COMPARE_GRID: tuple[float, ...] = (
    0.0, 0.0015151516, 0.0030303032, 0.004545454799999999, 0.0060606064,
    0.007575758, 0.009090909599999999, 0.0106060612, 0.0121212128, 0.0136363644,
    0.015151516, 0.0166666676, 0.018181819199999998, 0.019696970799999998, 0.0212121224,
    0.022727274, 0.0242424256, 0.0257575772, 0.0272727288, 0.0287878804,
    0.030303032, 0.0318181836, 0.0333333352, 0.0348484868, 0.036363638399999995,
    0.037878789999999996, 0.039393941599999996, 0.040909093199999996, 0.0424242448, 0.0439393964,
    0.045454548, 0.0469696996, 0.0484848512, 0.0500000028, 0.0515151544,
    0.053030306, 0.0545454576, 0.0560606092, 0.0575757608, 0.0590909124,
    0.060606064, 0.062121215599999995, 0.0636363672, 0.0651515188, 0.0666666704,
)

DEFAULT_PLOT_POINTS = 1000
DIGITS_ENV_VAR = "PRWTEST_DIGITS"


class DataError(Exception):
    """Malformed input data or flags; maps to exit code 2."""


@dataclass(frozen=True)
class LossSample:
    """A vector of losses in [0, 1] with its derived size and empirical risk."""

    losses: tuple[float, ...]

    def __post_init__(self) -> None:
        losses = tuple(float(x) for x in self.losses)
        if not losses:
            raise ValueError("a loss sample must contain at least one value")
        for i, x in enumerate(losses):
            if math.isnan(x) or not 0.0 <= x <= 1.0:
                raise ValueError(f"loss at position {i} must lie in [0, 1], got {x!r}")
        object.__setattr__(self, "losses", losses)

    @property
    def n(self) -> int:
        return len(self.losses)

    @property
    def rhat(self) -> float:
        return math.fsum(self.losses) / len(self.losses)


def read_loss_csv(path: str) -> LossSample:
    """Read a loss sample from a single-column CSV with a required `loss` header.

    UTF-8 (BOM tolerated), LF or CRLF line endings.  Any malformed or
    out-of-range value raises DataError naming the offending data row.
    """
    try:
        fh = open(path, "r", encoding="utf-8-sig", newline="")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file; expected a `loss` header") from None
        if [h.strip() for h in header] != ["loss"]:
            raise DataError(f"{path}: expected a single `loss` column header, got {header!r}")
        losses: list[float] = []
        for row_number, row in enumerate(reader, start=1):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 1:
                raise DataError(f"{path}: row {row_number}: expected 1 column, got {len(row)}")
            text = row[0].strip()
            try:
                value = float(text)
            except ValueError:
                raise DataError(f"{path}: row {row_number}: not a number: {text!r}") from None
            if math.isnan(value) or not 0.0 <= value <= 1.0:
                raise DataError(f"{path}: row {row_number}: loss {text} outside [0, 1]")
            losses.append(value)
    if not losses:
        raise DataError(f"{path}: no loss rows found")
    return LossSample(losses=tuple(losses))


def round_half_away(value: float, digits: int) -> Decimal:
    """Round to `digits` decimals with ties going away from zero."""
    quantum = Decimal(1).scaleb(-digits) if digits > 0 else Decimal(1)
    return Decimal(value).quantize(quantum, rounding=ROUND_HALF_UP)


def _resolve_digits(value: Optional[int]) -> int:
    """Explicit --digits, else the env override, else 4."""
    if value is not None:
        if value < 0:
            raise DataError(f"--digits must be non-negative, got {value}")
        return value
    raw = os.environ.get(DIGITS_ENV_VAR)
    if raw is None:
        return 4
    try:
        digits = int(raw)
    except ValueError:
        raise DataError(f"{DIGITS_ENV_VAR} must be an integer, got {raw!r}") from None
    if digits < 0:
        raise DataError(f"{DIGITS_ENV_VAR} must be non-negative, got {raw!r}")
    return digits


def parse_grid(text: str) -> tuple[float, ...]:
    """Parse a start:step:stop grid spec into an inclusive tuple of values."""
    parts = text.split(":")
    if len(parts) != 3:
        raise DataError(f"grid must look like start:step:stop, got {text!r}")
    try:
        start, step, stop = (float(p) for p in parts)
    except ValueError:
        raise DataError(f"grid must contain numbers, got {text!r}") from None
    if math.isnan(start) or math.isnan(step) or math.isnan(stop):
        raise DataError(f"grid values must be numbers, got {text!r}")
    if step <= 0.0:
        raise DataError(f"grid step must be positive, got {step!r}")
    if stop < start:
        raise DataError(f"grid stop must be >= start, got {text!r}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    values = tuple(start + i * step for i in range(count))
    for v in values:
        if not 0.0 <= v <= 1.0:
            raise DataError(f"grid value {v!r} outside [0, 1]")
    return values


def parse_dist(text: str) -> LossDistribution:
    """Parse a distribution spec: bernoulli:P, beta:A:B, or discrete:X1,..:Q1,.."""
    parts = text.split(":")
    kind = parts[0].strip().lower()
    try:
        if kind == "bernoulli" and len(parts) == 2:
            return LossDistribution.bernoulli(float(parts[1]))
        if kind == "beta" and len(parts) == 3:
            return LossDistribution.beta(float(parts[1]), float(parts[2]))
        if kind in ("discrete", "scaled-discrete") and len(parts) == 3:
            support = [float(x) for x in parts[1].split(",")]
            probs = [float(x) for x in parts[2].split(",")]
            return LossDistribution.scaled_discrete(support, probs)
    except ValueError as exc:
        raise DataError(f"invalid distribution spec {text!r}: {exc}") from exc
    raise DataError(
        f"invalid distribution spec {text!r}; expected bernoulli:P, beta:A:B, "
        f"or discrete:X1,..,Xk:Q1,..,Qk"
    )


def _parse_float_list(text: str, name: str) -> tuple[float, ...]:
    try:
        values = tuple(float(x) for x in text.split(",") if x.strip() != "")
    except ValueError:
        raise DataError(f"{name} must be a comma-separated list of numbers, got {text!r}") from None
    if not values:
        raise DataError(f"{name} must contain at least one number, got {text!r}")
    return values


def read_pvalue_csv(path: str) -> tuple[float, ...]:
    """Read ordered p-values from a single-column CSV with a `pvalue` header."""
    try:
        fh = open(path, "r", encoding="utf-8-sig", newline="")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file; expected a `pvalue` header") from None
        if [h.strip() for h in header] != ["pvalue"]:
            raise DataError(f"{path}: expected a single `pvalue` column header, got {header!r}")
        values: list[float] = []
        for row_number, row in enumerate(reader, start=1):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 1:
                raise DataError(f"{path}: row {row_number}: expected 1 column, got {len(row)}")
            text = row[0].strip()
            try:
                value = float(text)
            except ValueError:
                raise DataError(f"{path}: row {row_number}: not a number: {text!r}") from None
            if math.isnan(value) or not 0.0 <= value <= 1.0:
                raise DataError(f"{path}: row {row_number}: p-value {text} outside [0, 1]")
            values.append(value)
    if not values:
        raise DataError(f"{path}: no p-value rows found")
    return tuple(values)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _spec_from_args(n, alpha) -> TestSpec:
    try:
        return TestSpec(n=n, alpha=alpha)
    except ValueError as exc:
        raise DataError(str(exc)) from exc


def cmd_pvalue(args: argparse.Namespace) -> int:
    if args.losses is not None and args.rhat is not None:
        raise DataError("pass either --losses or --rhat, not both")
    if args.losses is not None:
        sample = read_loss_csv(args.losses)
        n = sample.n
        rhat = sample.rhat
    else:
        if args.rhat is None or args.n is None:
            raise DataError("pass --losses FILE, or both --rhat and --n")
        n = args.n
        rhat = args.rhat
    spec = _spec_from_args(n, args.alpha)
    if math.isnan(rhat) or not 0.0 <= rhat <= 1.0:
        raise DataError(f"--rhat must lie in [0, 1], got {rhat!r}")

    methods = PVALUE_CHOICES[:-1] if args.method == "all" else (args.method,)
    values: dict[str, float] = {}
    for method in methods:
        if method == "prw":
            values["prw"] = prw_pvalue(rhat, spec, clamp=not args.unclamped)
        elif method == "bentkus":
            values["bentkus"] = bentkus_pvalue(rhat, spec, clamp=not args.unclamped)
        else:
            values["hoeffding_tight"] = hoeffding_tight_pvalue(rhat, spec)

    digits = _resolve_digits(args.digits)
    if args.format == "json":
        payload = {
            "command": "pvalue",
            "n": spec.n,
            "alpha": spec.alpha,
            "rhat": rhat,
            "digits": digits,
            "unclamped": bool(args.unclamped),
            "pvalues": {k: float(round_half_away(v, digits)) for k, v in values.items()},
        }
        print(json.dumps(payload))
    else:
        columns = ["rhat"] + list(values)
        print(",".join(columns))
        row = [str(round_half_away(rhat, digits))]
        row += [str(round_half_away(values[c], digits)) for c in list(values)]
        print(",".join(row))
    return 0


def _grid_from_args(args: argparse.Namespace, default: Sequence[float]) -> tuple[float, ...]:
    if args.grid is None:
        return tuple(default)
    return parse_grid(args.grid)


def cmd_compare(args: argparse.Namespace) -> int:
    spec = _spec_from_args(args.n, args.alpha)
    grid = _grid_from_args(args, DEFAULT_COMPARE_GRID)
    digits = _resolve_digits(args.digits)
    reports = [compare(r, spec) for r in grid]
    if args.format == "json":
        payload = {
            "command": "compare",
            "n": spec.n,
            "alpha": spec.alpha,
            "digits": digits,
            "rows": [
                {
                    "rhat": float(round_half_away(rep.rhat, digits)),
                    "prw": float(round_half_away(rep.prw, digits)),
                    "hoeffding_tight": float(round_half_away(rep.hoeffding_tight, digits)),
                    "bentkus": float(round_half_away(rep.bentkus, digits)),
                }
                for rep in reports
            ],
        }
        print(json.dumps(payload))
    else:
        print("rhat,prw,hoeffding_tight,bentkus")
        for rep in reports:
            print(
                ",".join(
                    str(round_half_away(v, digits))
                    for v in (rep.rhat, rep.prw, rep.hoeffding_tight, rep.bentkus)
                )
            )
    return 0


def cmd_plotdata(args: argparse.Namespace) -> int:
    spec = _spec_from_args(args.n, args.alpha)
    if args.grid is None:
        grid = tuple(i / (DEFAULT_PLOT_POINTS - 1) for i in range(DEFAULT_PLOT_POINTS))
    else:
        grid = parse_grid(args.grid)
    t_max = (gamma_r(spec.n, spec.alpha) - 1) / spec.n
    rows = []
    for rhat in grid:
        rep = compare(rhat, spec)
        rows.append((rhat, rep.prw, rep.hoeffding_tight, rep.bentkus, rhat > t_max))
    if args.format == "json":
        payload = {
            "command": "plotdata",
            "n": spec.n,
            "alpha": spec.alpha,
            "cap": t_max,
            "rows": [
                {
                    "rhat": r,
                    "prw": p,
                    "hoeffding_tight": h,
                    "bentkus": b,
                    "capped": c,
                }
                for r, p, h, b, c in rows
            ],
        }
        print(json.dumps(payload))
    else:
        print("rhat,prw,hoeffding_tight,bentkus,capped")
        for r, p, h, b, c in rows:
            print(f"{r!r},{p!r},{h!r},{b!r},{int(c)}")
    return 0


_PROCEDURES = {
    "fixed-sequence": fixed_sequence,
    "fallback": fallback,
    "bonferroni": bonferroni,
}


def cmd_fwer(args: argparse.Namespace) -> int:
    pvalues = read_pvalue_csv(args.pvalues)
    weights = None
    if args.weights is not None:
        weights = _parse_float_list(args.weights, "--weights")
    if args.procedure == "fallback" and weights is None:
        raise DataError("fallback requires --weights")
    try:
        plan = FwerPlan(pvalues=pvalues, delta=args.delta, weights=weights)
        outcome: FwerOutcome = _PROCEDURES[args.procedure](plan)
    except ValueError as exc:
        raise DataError(str(exc)) from exc
    if args.format == "json":
        payload = {
            "command": "fwer",
            "procedure": args.procedure,
            "delta": plan.delta,
            "pvalues": list(plan.pvalues),
            "rejected": list(outcome.rejected),
            "local_levels": list(outcome.local_levels),
        }
        print(json.dumps(payload))
    else:
        print("index,pvalue,local_level,rejected")
        for i, (p, level, rej) in enumerate(
            zip(plan.pvalues, outcome.local_levels, outcome.rejected)
        ):
            print(f"{i},{p!r},{level!r},{'true' if rej else 'false'}")
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    dist = parse_dist(args.dist)
    spec = _spec_from_args(args.n, args.alpha)
    deltas = _parse_float_list(args.delta, "--delta")
    try:
        report = simulate_superuniformity(
            dist, spec, args.method, deltas, reps=args.reps, seed=args.seed
        )
    except ValueError as exc:
        raise DataError(str(exc)) from exc
    results = []
    all_ok = True
    for d, e, se in zip(report.delta_grid, report.exceedance, report.stderr):
        ok = e <= d + 3.0 * se
        all_ok = all_ok and ok
        results.append((d, e, se, ok))
    if args.format == "json":
        payload = {
            "command": "validate",
            "dist": args.dist,
            "n": spec.n,
            "alpha": spec.alpha,
            "method": canonical_method(args.method),
            "reps": report.reps,
            "seed": report.seed,
            "results": [
                {"delta": d, "exceedance": e, "stderr": se, "pass": ok}
                for d, e, se, ok in results
            ],
            "pass": all_ok,
        }
        print(json.dumps(payload))
    else:
        print("delta,exceedance,stderr,pass")
        for d, e, se, ok in results:
            print(f"{d!r},{e!r},{se!r},{'true' if ok else 'false'}")
    return 0 if all_ok else 1


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

PVALUE_CHOICES = ("prw", "hoeffding-tight", "bentkus", "all")


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prwtest",
        description="Distribution-free p-values for the mean of [0,1]-bounded losses.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common_output(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("pvalue", help="p-value(s) for one sample or empirical risk")
    p.add_argument("--rhat", type=float, help="observed empirical risk in [0, 1]")
    p.add_argument("--n", type=_positive_int, help="sample size (with --rhat)")
    p.add_argument("--losses", help="CSV file with a single `loss` column")
    p.add_argument("--alpha", type=float, required=True, help="risk threshold in (0, 1)")
    p.add_argument("--method", choices=PVALUE_CHOICES, default="all")
    p.add_argument("--digits", type=int, default=None)
    p.add_argument("--unclamped", action="store_true",
                   help="report raw bound values, which may exceed 1")
    add_common_output(p)
    p.set_defaults(func=cmd_pvalue)

    p = sub.add_parser("compare", help="table of all three p-values over a risk grid")
    p.add_argument("--n", type=_positive_int, default=100)
    p.add_argument("--alpha", type=float, default=0.1)
    p.add_argument("--grid", help="start:step:stop (inclusive); default: built-in 45-point grid")
    p.add_argument("--digits", type=int, default=None)
    add_common_output(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("plotdata", help="dense unrounded p-value curves for plotting")
    p.add_argument("--n", type=_positive_int, default=100)
    p.add_argument("--alpha", type=float, default=0.1)
    p.add_argument("--grid", help="start:step:stop (inclusive); default: 1000 points over [0, 1]")
    add_common_output(p)
    p.set_defaults(func=cmd_plotdata)

    p = sub.add_parser("fwer", help="run an FWER procedure over a p-value file")
    p.add_argument("pvalues", help="CSV file with a single `pvalue` column, in test order")
    p.add_argument("--procedure", choices=tuple(_PROCEDURES), required=True)
    p.add_argument("--delta", type=float, required=True, help="global FWER level in (0, 1)")
    p.add_argument("--weights", help="comma-separated fallback weights summing to 1")
    add_common_output(p)
    p.set_defaults(func=cmd_fwer)

    p = sub.add_parser("validate", help="Monte Carlo super-uniformity check (CI gate)")
    p.add_argument("--dist", required=True,
                   help="bernoulli:P, beta:A:B, or discrete:X1,..:Q1,..")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--method", choices=PVALUE_CHOICES[:-1], default="prw")
    p.add_argument("--reps", type=_positive_int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--delta", default="0.01,0.05,0.1,0.2",
                   help="comma-separated levels to check")
    add_common_output(p)
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DataError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
