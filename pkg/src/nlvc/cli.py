"""Command-line front end.

Exit status: 0 on success, 1 when a checked property fails, 2 for unusable
input (unreadable or invalid config, inconsistent geometry).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import checks, config, harness
from .errors import ConfigError, NlvcError
from .quadrature import QuadratureSpec

EXIT_OK, EXIT_FAILED, EXIT_CONFIG = 0, 1, 2
LINEAR_EXACTNESS_TOL = 1e-10


def _threads(value: Optional[int]) -> int:
    if value is not None:
        return max(1, value)
    env = os.environ.get("NLVC_THREADS")
    if env is None:
        return 1
    try:
        return max(1, int(env))
    except ValueError:
        raise ConfigError(f"NLVC_THREADS must be an integer, got {env!r}") from None


def _write(result: harness.ResultSet, out: Optional[str], formats=("csv", "json")) -> None:
    if out is None:
        return
    directory = Path(out)
    directory.mkdir(parents=True, exist_ok=True)
    if "csv" in formats:
        (directory / f"{result.name}.csv").write_text(result.to_csv())
    if "json" in formats:
        (directory / f"{result.name}.json").write_text(result.to_json() + "\n")


def _print_checks(result: harness.ResultSet) -> None:
    for key, value in result.checks.items():
        if isinstance(value, dict):
            for case, gaps in value.items():
                text = ", ".join(f"{float(e):.4g}: {g:.3e}" for e, g in gaps.items())
                print(f"{key} [{case}] {text}")
        elif isinstance(value, bool):
            print(f"{key}: {'yes' if value else 'no'}")
        else:
            print(f"{key}: {value:.3e}")


def cmd_consistency(args) -> int:
    result = harness.run_consistency(quad=QuadratureSpec(args.quad_points), threads=_threads(args.threads))
    print(result.table())
    _print_checks(result)
    _write(result, args.out)
    linear = [r.record.e_E for r in result.rows if r.case == "consistency-A"]
    return EXIT_OK if max(linear) < LINEAR_EXACTNESS_TOL else EXIT_FAILED


def cmd_convergence(args) -> int:
    mode = args.mode.replace("-", "_")
    result = harness.run_convergence(mode, args.strategy, QuadratureSpec(args.quad_points), _threads(args.threads))
    print(result.table())
    _write(result, args.out)
    return EXIT_OK


def cmd_compare(args) -> int:
    result = harness.run_comparison(args.case, quad=QuadratureSpec(args.quad_points))
    print(result.table())
    _print_checks(result)
    _write(result, args.out)
    ok = result.checks["dirichlet_matches_local"] and result.checks["neumann_departs_from_local"]
    return EXIT_OK if ok else EXIT_FAILED


def cmd_solve(args) -> int:
    cfg = config.load(args.config)
    result = harness.run_custom(cfg, _threads(args.threads))
    print(result.table())
    _write(result, args.out or cfg.output_path, cfg.formats)
    return EXIT_OK


def cmd_check(args) -> int:
    results = checks.run_all()
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nlvc", description="Nonlocal volume constraints from local Neumann data.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=None, help="worker threads (default: $NLVC_THREADS or 1)")
    common.add_argument("--out", default=None, help="directory for CSV and JSON results")
    common.add_argument("--quad-points", type=int, default=4, help="Gauss points per subinterval")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("consistency", parents=[common], help="linear and cubic consistency runs")
    p.set_defaults(func=cmd_consistency)

    p = sub.add_parser("convergence", parents=[common], help="local-limit convergence tables")
    p.add_argument("--mode", choices=("fixed-h", "quadratic", "linear"), required=True)
    p.add_argument("--strategy", choices=("neumann", "dirichlet", "both"), default="both")
    p.set_defaults(func=cmd_convergence)

    p = sub.add_parser("compare", parents=[common], help="both strategies near the Neumann boundary")
    p.add_argument("--case", choices=("A", "B"), required=True)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("solve", parents=[common], help="run a problem described by a YAML config")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", help="property suite")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if getattr(args, "quad_points", 4) < 2 or getattr(args, "quad_points", 4) > 16:
            raise ConfigError("--quad-points must lie in [2, 16]")
        return args.func(args)
    except (ConfigError, NlvcError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
