"""Command-line front end.

Exit codes: 0 success, 1 verification violations, 2 usage error, 3 domain error
(e.g. a point that isn't interior), 4 optimizer convergence failure.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
from typing import Callable, Sequence

import pydantic

import cevian.adapters.optimizers as optimizers
import cevian.adapters.reports as reports
import cevian.adapters.yaml_settings as yaml_settings
import cevian.domain.simplex.constants as constants
import cevian.domain.simplex.ratios as ratios
import cevian.domain.verification.service as verification
from cevian.domain.errors import CevianError, ConvergenceFailure, NotInterior
from cevian.domain.simplex.core import BarycentricPoint
from cevian.domain.verification.model import Suite, TrialPlan

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_CONVERGENCE = 4

RENORMALIZATION_TOL = 1e-9
AUDIT_FLAG_TOL = 1e-9

RATIO_COLUMNS = (
    "n",
    "lambda",
    "corner_ratios",
    "cevian_ratio",
    "theorem1_bound",
    "theorem2_value",
    "theorem1_slack",
    "theorem2_slack",
    "log_corner_ratios",
    "log_cevian_ratio",
    "log_theorem1_bound",
    "log_theorem2_value",
    "log_theorem1_slack",
)
CONSTANTS_COLUMNS = (
    "n",
    "theta",
    "theta_cf",
    "theta_hyp",
    "f_theta",
    "log_f_theta",
    "paper_eq3_value",
    "metallic",
    "metallic_cf",
    "metallic_hyp",
)
VERIFY_COLUMNS = (
    "suite",
    "n",
    "trials",
    "seed",
    "tol",
    "passed",
    "worst_margin",
    "max_ratio_observed",
    "bound",
    "violations",
)
OPTIMIZE_COLUMNS = (
    "n",
    "theta",
    "theorem2_value",
    "argmax_x",
    "value_1d",
    "deviation_x",
    "argmax_lambda",
    "value_simplex",
    "deviation_lambda",
    "value_deviation",
    "iterations_1d",
    "iterations_simplex",
    "restarts_used",
    "distinct_optima",
)
AUDIT_COLUMNS = (
    "n",
    "direct_f_theta",
    "paper_eq3_value",
    "ratio",
    "direct_times_power",
    "flagged",
)


class UsageError(Exception):
    """Raised when flags are valid for argparse but not for the command."""


def _weights(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(item) for item in text.split(","))
    except ValueError as e:
        raise argparse.ArgumentTypeError(
            f"not a comma-separated list of numbers: {text}"
        ) from e


def _seed(text: str) -> int:
    seed = int(text)
    if not 0 <= seed < 2**64:
        raise argparse.ArgumentTypeError(
            f"seed must be a 64-bit unsigned integer: {text}"
        )
    return seed


def cmd_ratio(args: argparse.Namespace) -> tuple[reports.Report, int]:
    """Every ratio of one point given by its weights."""
    weights = args.weights
    if args.n < 2:
        raise UsageError(f"--n must be >= 2, got {args.n}")
    if len(weights) != args.n + 1:
        raise UsageError(
            f"--lambda needs n+1 = {args.n + 1} weights, got {len(weights)}"
        )
    if not all(math.isfinite(weight) and weight > 0.0 for weight in weights):
        raise NotInterior(f"Weights {weights} are not all positive")
    if abs(math.fsum(weights) - 1.0) > RENORMALIZATION_TOL:
        logger.warning("Weights sum to %r, renormalizing", math.fsum(weights))
    point = BarycentricPoint(weights=weights)
    breakdown = ratios.breakdown(point)
    record = {
        "n": breakdown.n,
        "lambda": list(point.weights),
        "corner_ratios": list(breakdown.corner_ratios),
        "cevian_ratio": breakdown.cevian_ratio,
        "theorem1_bound": breakdown.theorem1_bound,
        "theorem2_value": breakdown.theorem2_value,
        "theorem1_slack": breakdown.theorem1_slack,
        "theorem2_slack": breakdown.theorem2_slack,
        "log_corner_ratios": list(breakdown.log_corner_ratios),
        "log_cevian_ratio": breakdown.log_cevian_ratio,
        "log_theorem1_bound": breakdown.log_theorem1_bound,
        "log_theorem2_value": breakdown.log_theorem2_value,
        "log_theorem1_slack": breakdown.log_theorem1_slack,
    }
    return reports.Report(record, [record], RATIO_COLUMNS), EXIT_OK


def cmd_constants(args: argparse.Namespace) -> tuple[reports.Report, int]:
    """One row of constants per n."""
    if not 2 <= args.n_min <= args.n_max:
        raise UsageError(
            f"Need 2 <= --n-min <= --n-max, got {args.n_min}, {args.n_max}"
        )
    if args.depth < 1:
        raise UsageError(f"--depth must be >= 1, got {args.depth}")
    rows = [
        row.model_dump()
        for row in constants.constants_table(args.n_min, args.n_max, args.depth)
    ]
    return reports.Report(rows, rows, CONSTANTS_COLUMNS), EXIT_OK


def cmd_verify(args: argparse.Namespace) -> tuple[reports.Report, int]:
    """Run a verification suite; exit 1 when it has violations."""
    try:
        plan = TrialPlan(
            suite=args.suite, n=args.n, trials=args.trials, seed=args.seed, tol=args.tol
        )
    except pydantic.ValidationError as e:
        raise UsageError(str(e)) from e
    if args.workers < 1:
        raise UsageError(f"--workers must be >= 1, got {args.workers}")
    report = verification.run_suite(plan, workers=args.workers)
    summary = report.summary()
    row = {**summary, "violations": len(report.violations)}
    return (
        reports.Report(summary, [row], VERIFY_COLUMNS),
        EXIT_OK if report.passed else EXIT_VIOLATIONS,
    )


def cmd_optimize(args: argparse.Namespace) -> tuple[reports.Report, int]:
    """Solve the extremal problem numerically and compare with theta_n."""
    if args.n < 2:
        raise UsageError(f"--n must be >= 2, got {args.n}")
    if args.restarts < 1 or not args.tol > 0.0 or args.workers < 1:
        raise UsageError("--restarts and --workers must be >= 1, --tol > 0")
    theta = constants.theta(args.n)
    line = optimizers.maximize_f_1d(args.n, args.tol)
    simplex = optimizers.maximize_F_simplex(
        args.n, args.restarts, args.tol, args.seed, args.workers
    )
    assert isinstance(line.argmax, float)
    assert isinstance(simplex.argmax, BarycentricPoint)
    expected = (theta,) * args.n + (1.0 - args.n * theta,)
    theorem2_value = ratios.theorem2_value(args.n)
    record = {
        "n": args.n,
        "theta": theta,
        "theorem2_value": theorem2_value,
        "argmax_x": line.argmax,
        "value_1d": line.value,
        "deviation_x": abs(line.argmax - theta),
        "argmax_lambda": list(simplex.argmax.weights),
        "value_simplex": simplex.value,
        "deviation_lambda": max(
            abs(weight - target)
            for weight, target in zip(simplex.argmax.weights, expected)
        ),
        "value_deviation": abs(simplex.value - theorem2_value),
        "iterations_1d": line.iterations,
        "iterations_simplex": simplex.iterations,
        "restarts_used": simplex.restarts_used,
        "distinct_optima": len(simplex.distinct_optima),
    }
    return reports.Report(record, [record], OPTIMIZE_COLUMNS), EXIT_OK


def cmd_audit_bounds(args: argparse.Namespace) -> tuple[reports.Report, int]:
    """Compare the printed extremal constant with f(theta_n) for n = 2..n-max."""
    if args.n_max < 2:
        raise UsageError(f"--n-max must be >= 2, got {args.n_max}")
    rows = []
    for n in range(2, args.n_max + 1):
        audit = ratios.audit_bound(n)
        rows.append(
            {
                "n": n,
                "direct_f_theta": audit.direct_value,
                "paper_eq3_value": audit.paper_value,
                "ratio": audit.ratio,
                "direct_times_power": audit.direct_times_power,
                "flagged": abs(audit.ratio - 1.0) > AUDIT_FLAG_TOL,
            }
        )
    flagged = sum(row["flagged"] for row in rows)
    if flagged:
        logger.warning(
            "%d rows where the printed constant differs from f(theta_n)", flagged
        )
    return reports.Report(rows, rows, AUDIT_COLUMNS), EXIT_OK


Command = Callable[[argparse.Namespace], tuple[reports.Report, int]]

_COMMANDS: dict[str, Command] = {
    "ratio": cmd_ratio,
    "constants": cmd_constants,
    "verify": cmd_verify,
    "optimize": cmd_optimize,
    "audit-bounds": cmd_audit_bounds,
}


def build_parser(defaults: yaml_settings.Defaults) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=reports.FORMATS, default="text")
    common.add_argument(
        "--log-level",
        choices=("DEBUG", "INFO", "WARNING", "ERROR"),
        default="WARNING",
    )
    parser = argparse.ArgumentParser(
        prog="cevian",
        description="Volume ratios of cevian simplices and their extremal points.",
    )
    subparsers = parser.add_subparsers(dest="subcommand", required=True)

    ratio = subparsers.add_parser("ratio", parents=[common], help=cmd_ratio.__doc__)
    ratio.add_argument("--n", type=int, required=True)
    ratio.add_argument("--lambda", dest="weights", type=_weights, required=True)

    table = subparsers.add_parser(
        "constants", parents=[common], help=cmd_constants.__doc__
    )
    table.add_argument("--n-min", type=int, default=2)
    table.add_argument("--n-max", type=int, default=10)
    table.add_argument("--depth", type=int, default=defaults.constants.depth)

    verify = subparsers.add_parser("verify", parents=[common], help=cmd_verify.__doc__)
    verify.add_argument(
        "--suite", choices=[suite.value for suite in Suite], required=True
    )
    verify.add_argument("--n", type=int, required=True)
    verify.add_argument("--trials", type=int, default=defaults.verify.trials)
    verify.add_argument("--seed", type=_seed, default=defaults.verify.seed)
    verify.add_argument("--tol", type=float, default=defaults.verify.tol)
    verify.add_argument("--workers", type=int, default=defaults.verify.workers)

    optimize = subparsers.add_parser(
        "optimize", parents=[common], help=cmd_optimize.__doc__
    )
    optimize.add_argument("--n", type=int, required=True)
    optimize.add_argument("--restarts", type=int, default=defaults.optimize.restarts)
    optimize.add_argument("--tol", type=float, default=defaults.optimize.tol)
    optimize.add_argument("--seed", type=_seed, default=defaults.optimize.seed)
    optimize.add_argument("--workers", type=int, default=defaults.optimize.workers)

    audit = subparsers.add_parser(
        "audit-bounds", parents=[common], help=cmd_audit_bounds.__doc__
    )
    audit.add_argument("--n-max", type=int, default=10)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser(yaml_settings.load_defaults())
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    logging.basicConfig(
        level=args.log_level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        report, exit_code = _COMMANDS[args.subcommand](args)
    except UsageError as e:
        print(f"cevian {args.subcommand}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceFailure as e:
        logger.error("%s", e)
        return EXIT_CONVERGENCE
    except (CevianError, pydantic.ValidationError) as e:
        logger.error("%s", e)
        return EXIT_DOMAIN
    sys.stdout.write(reports.render(report, args.format))
    return exit_code


def console() -> None:
    """Entrypoint for the console."""
    sys.exit(main())


if __name__ == "__main__":
    console()
