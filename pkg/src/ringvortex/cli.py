"""Command-line front end: ``ringvortex {minimize,mountainpass,check,sweep}``.

Exit status: 0 converged, 1 usage or configuration error, 2 solver did not
converge, 3 a required bound verdict failed after the solve.
"""

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .config import ConfigError, RunConfig, parse_config, with_value
from .constrained_minimizer import MinimizeOptions, minimize_constrained
from .functionals import evaluate
from .mountain_pass import MountainPassOptions, mountain_pass_solve
from .potentials import summarize
from .radial_core import build_grid
from .report import atomic_write, write_profile, write_report
from .theorem_checks import angular_momentum, check_bounds, check_minimizer, check_mountain_pass

logger = logging.getLogger("ringvortex")

EXIT_OK, EXIT_USAGE, EXIT_NOCONV, EXIT_BOUND = 0, 1, 2, 3


def _header(config: RunConfig, grid) -> dict:
    return {
        "format": "ringvortex-report/1",
        "tool": "ringvortex",
        "version": __version__,
        "mode": config.mode,
        "config": config.to_dict(),
        "potential_summary": summarize(config.potential, grid).to_dict(),
    }


def _status(converged: bool, bounds_ok: bool) -> int:
    if not converged:
        return EXIT_NOCONV
    return EXIT_OK if bounds_ok else EXIT_BOUND


def solve(config: RunConfig) -> tuple[dict, object]:
    """Run one minimize or mountainpass solve; returns (report dict, profile)."""
    grid = build_grid(config.R, config.N)
    report = _header(config, grid)
    if config.solve_mode == "minimize":
        defaults = MinimizeOptions()
        opts = MinimizeOptions(
            max_iters=defaults.max_iters if config.max_iters is None else config.max_iters,
            grad_tol=config.grad_tol or defaults.grad_tol,
            step_init=config.step_init, step_shrink=config.step_shrink,
            enforce_positive=config.enforce_positive)
        res = minimize_constrained(grid, config.potential, config.n, config.P0, config.s, opts)
        bounds = check_minimizer(grid, config.potential, config.n, config.s, config.P0, res)
        values = res.values
        result = {"beta": res.beta, "level": None}
    else:
        defaults = MountainPassOptions()
        opts = MountainPassOptions(
            M=config.M,
            max_iters=defaults.max_iters if config.max_iters is None else config.max_iters,
            grad_tol=config.grad_tol or defaults.grad_tol,
            step=config.step_init, step_shrink=config.step_shrink,
            retension_every=config.retension_every)
        res = mountain_pass_solve(grid, config.potential, config.n, config.beta, opts)
        bounds = check_mountain_pass(grid, config.potential, config.n, config.beta, res)
        values = evaluate(grid, res.profile, config.potential, config.n, 1, config.beta)
        result = {"beta": config.beta, "level": res.level}
    result.update(values.to_dict())
    result.update(
        L_z=angular_momentum(config.n, values.P),
        residual_norm=res.residual_norm,
        converged=res.converged,
        iterations=res.iterations,
        notes=list(config.warnings) + list(res.notes),
    )
    report["result"] = result
    report["bounds"] = bounds.to_list()
    report["exit_status"] = _status(res.converged, bounds.ok)
    return report, res.profile


def _run_point(args):
    config, out_dir, stem = args
    report, profile = solve(config)
    out_dir = Path(out_dir)
    report["profile_file"] = f"{stem}profile.csv"
    write_profile(out_dir / f"{stem}profile.csv", profile)
    write_report(out_dir / f"{stem}report.json", report)
    return report


def run(config: RunConfig, out_dir: str | Path, jobs: int = 1) -> int:
    out_dir = Path(out_dir)
    for w in config.warnings:
        logger.warning(w)
    if config.mode == "check":
        grid = build_grid(config.R, config.N)
        report = _header(config, grid)
        report["bounds"] = check_bounds(grid, config.potential, config.n, config.s,
                                        config.P0, config.beta).to_list()
        report["exit_status"] = EXIT_OK
        write_report(out_dir / "report.json", report)
        return EXIT_OK
    if config.mode in ("minimize", "mountainpass"):
        report = _run_point((config, out_dir, ""))
        _log_result(report)
        return report["exit_status"]

    param = config.sweep.param
    tasks = [(with_value(config, param, v), out_dir, f"{k:03d}_") for k, v in
             enumerate(config.sweep.values)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_run_point, tasks))
    else:
        reports = [_run_point(t) for t in tasks]
    lines = [f"index,{param},beta,level,P,I,residual_norm,converged,exit_status"]
    for k, (v, rep) in enumerate(zip(config.sweep.values, reports)):
        r = rep["result"]
        lines.append(",".join(str(x) for x in (
            k, v, repr(r["beta"]), repr(r["level"]) if r["level"] is not None else "",
            repr(r["P"]), repr(r["I"]), repr(r["residual_norm"]), int(r["converged"]),
            rep["exit_status"])))
        _log_result(rep)
    atomic_write(out_dir / "summary.csv", "\n".join(lines) + "\n")
    return max(rep["exit_status"] for rep in reports)


def _log_result(report):
    r = report["result"]
    logger.info("%s: beta=%.10g P=%.10g I=%.10g residual=%.3e converged=%s exit=%d",
                report["mode"], r["beta"], r["P"], r["I"], r["residual_norm"], r["converged"],
                report["exit_status"])
    for b in report["bounds"]:
        if b["required"] and b["verdict"] == "fail":
            logger.error("bound failed: %s (bound %r, observed %r)", b["name"], b["bound"],
                         b["observed"])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ringvortex", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (("minimize", "power-constrained minimization"),
                            ("mountainpass", "min-max saddle at prescribed beta"),
                            ("check", "evaluate closed-form bounds without solving"),
                            ("sweep", "run a parameter sweep")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", type=Path, help="key = value configuration file")
        p.add_argument("--out", type=Path, default=Path("out"), help="output directory")
        p.add_argument("--grid", type=int, dest="N", help="interior node count N")
        p.add_argument("--R", type=float)
        p.add_argument("--n", type=int)
        p.add_argument("--P0", type=float)
        p.add_argument("--beta", type=float)
        p.add_argument("--s", type=int, choices=(1, -1))
        p.add_argument("-v", "--verbose", action="store_true")
        if name == "sweep":
            p.add_argument("--jobs", type=int, default=1, help="parallel sweep points")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    text, source = "", "command line"
    try:
        if args.config is not None:
            try:
                text = args.config.read_text(encoding="utf-8")
            except OSError as exc:
                raise ConfigError(f"cannot read config {args.config}: {exc.strerror}") from None
            source = str(args.config)
        overrides = {k: getattr(args, k) for k in ("N", "R", "n", "P0", "beta", "s")}
        config = parse_config(text, overrides, mode=args.command, source=source)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return run(config, args.out, getattr(args, "jobs", 1))
    except OSError as exc:
        print(f"error: cannot write output {exc.filename}: {exc.strerror}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
