"""Command line entry point.

Exit codes: 0 success, 1 invalid input, 2 the solver could not decide
(iteration budget, bracket failure, or a chain that never left the hull).

Solver defaults come from ``~/.config/farpoint/config.yaml`` when present;
``FARPOINT_CONFIG`` names a different file.  Precedence, lowest first:
built-in defaults, config file, the instance's ``solver`` block, flags.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

import yaml

from .batch import MAX_DIMENSION, atomic_write, hypercube_batch, summary_csv
from .config import SolverConfig
from .errors import (BracketError, BudgetExceeded, FarpointError, InfeasibleRadius,
                     InstanceError, SolverIndeterminate)
from .instance_io import DEFAULT_RHO_FACTOR, dump_document, load_instance
from .oracle import brute_maxdist, ssp_brute
from .pipeline import DEFAULT_MAX_GENERATIONS, build_chain, solve
from .plot2d import build_figure, figure_csv, figure_svg
from .ssp import FRAMES, build_instance, interpret

CONFIG_ENV = "FARPOINT_CONFIG"
DEFAULT_CONFIG_PATH = Path("~/.config/farpoint/config.yaml")

EXIT_OK, EXIT_INPUT, EXIT_SOLVER = 0, 1, 2

log = logging.getLogger("farpoint")


def config_path() -> Path:
    return Path(os.environ.get(CONFIG_ENV) or DEFAULT_CONFIG_PATH).expanduser()


def load_config(path: Path | None = None) -> SolverConfig:
    """Read solver overrides from ``path``; a missing default file is fine."""
    explicit = path is not None or bool(os.environ.get(CONFIG_ENV))
    path = path or config_path()
    if not path.exists():
        if explicit:
            raise InstanceError(f"config file {path} does not exist")
        return SolverConfig()
    try:
        doc = yaml.safe_load(path.read_text()) or {}
    except yaml.YAMLError as exc:
        raise InstanceError(f"config file {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise InstanceError(f"config file {path} must be a mapping")
    try:
        return SolverConfig().updated(**doc)
    except (TypeError, ValueError) as exc:
        raise InstanceError(f"config file {path}: {exc}") from None


def _merge(base: SolverConfig, overrides: SolverConfig) -> SolverConfig:
    """Keep ``base`` except where ``overrides`` differs from the defaults."""
    defaults = SolverConfig().as_dict()
    changed = {k: v for k, v in overrides.as_dict().items() if v != defaults[k]}
    return base.updated(**changed)


def _apply_flags(config: SolverConfig, args) -> SolverConfig:
    if getattr(args, "tol", None) is not None:
        config = config.updated(tol_obj=args.tol)
    return config


def _bracket(text):
    try:
        lo, hi = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected lo,hi") from None
    return lo, hi


def _int_list(text):
    if text.strip() == "":
        return []
    try:
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma-separated integers") from None


def _generations(text):
    return "all" if text == "all" else _int_list(text)


def _emit(doc: dict, out) -> None:
    text = dump_document(doc)
    if out:
        atomic_write(out, text)
    else:
        sys.stdout.write(text)


def cmd_solve(args) -> int:
    inst = load_instance(args.instance)
    config = _apply_flags(_merge(load_config(), inst.solver), args)
    frame = inst.frame if args.rho is None else inst.frame.with_rho(args.rho)
    max_gen = args.max_generations
    if max_gen is None:
        max_gen = inst.max_generations if inst.max_generations is not None \
            else DEFAULT_MAX_GENERATIONS
    report = solve(inst.P, frame, config, max_gen, args.method, args.bracket,
                   check_residual=args.residual)
    doc = report.to_dict()
    if args.oracle:
        v, dist = brute_maxdist(inst.P, frame.C0)
        doc["oracle"] = {"distance": dist, "vertex": v.tolist()}
    _emit(doc, args.output)
    if report.exit_generation is None:
        log.error("center chain did not leave the hull within %d generations", max_gen)
        return EXIT_SOLVER
    return EXIT_OK


def cmd_hypercube_batch(args) -> int:
    config = _apply_flags(load_config(), args)
    max_gen = DEFAULT_MAX_GENERATIONS if args.max_generations is None else args.max_generations
    results = hypercube_batch(args.n, args.seeds, config, max_gen, args.rho_factor,
                              args.method, args.jobs, args.emit_csv, args.max_dimension)
    if args.emit_csv is None:
        sys.stdout.write(summary_csv(results))
    else:
        sys.stdout.write(f"wrote {len(results)} runs to {args.emit_csv}\n")
    return EXIT_OK


def cmd_ssp(args) -> int:
    config = _apply_flags(load_config(), args)
    inst = build_instance(args.S, args.T, args.beta, args.frame, args.rho_factor, config)
    max_gen = DEFAULT_MAX_GENERATIONS if args.max_generations is None else args.max_generations
    report = solve(inst.P, inst.frame, config, max_gen, args.method, args.bracket,
                   check_frame=False)
    decision = interpret(inst, report)
    doc = {
        "verdict": decision.verdict.value,
        "subset": None if decision.x is None else decision.x.tolist(),
        "threshold_sq": inst.threshold_sq,
        "upper_sq": report.upper_bound ** 2,
        "lower_sq": report.lower_bound ** 2,
        "beta": inst.beta,
        "report": report.to_dict(),
    }
    if args.oracle:
        doc["oracle_solvable"] = ssp_brute(args.S, args.T)
    _emit(doc, args.output)
    return EXIT_OK


def cmd_plot2d(args) -> int:
    if args.emit_csv is None and args.emit_svg is None:
        raise InstanceError("nothing to emit; pass --emit-svg and/or --emit-csv")
    inst = load_instance(args.instance)
    config = _apply_flags(_merge(load_config(), inst.solver), args)
    frame = inst.frame if args.rho is None else inst.frame.with_rho(args.rho)
    max_gen = args.max_generations
    if max_gen is None:
        max_gen = inst.max_generations if inst.max_generations is not None \
            else DEFAULT_MAX_GENERATIONS
    if inst.P.dimension != 2:
        raise InstanceError(f"plot2d needs a 2-d instance, got dimension {inst.P.dimension}",
                            "dimension")
    report = solve(inst.P, frame, config, max_gen, args.method, args.bracket)
    chain = build_chain(inst.P, frame, max_gen, config)
    try:
        fig = build_figure(inst.P, frame, chain, report, args.generations)
    except IndexError as exc:
        raise InstanceError(str(exc)) from None
    if args.emit_csv:
        atomic_write(args.emit_csv, figure_csv(fig))
    if args.emit_svg:
        atomic_write(args.emit_svg, figure_svg(fig))
    return EXIT_OK


def _solver_flags(p, *, instance: bool):
    p.add_argument("--max-generations", type=int, default=None,
                   help=f"center-chain budget (default {DEFAULT_MAX_GENERATIONS})")
    p.add_argument("--tol", type=float, default=None, help="objective tolerance")
    p.add_argument("--method", choices=("joint", "bisect"), default="joint",
                   help="fixed-point solver")
    if instance:
        p.add_argument("--rho", type=float, default=None,
                       help="override the instance's rho")
    p.add_argument("--bracket", type=_bracket, default=None, metavar="LO,HI",
                   help="search interval for the fixed point")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="farpoint",
                                     description="Certified bounds on the farthest "
                                                 "distance from a point to a polytope.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="bound the farthest distance for an instance file")
    p.add_argument("instance")
    _solver_flags(p, instance=True)
    p.add_argument("--oracle", action="store_true",
                   help="also report the vertex-enumeration answer")
    p.add_argument("--residual", action="store_true", help="evaluate |g(R) - R|")
    p.add_argument("-o", "--output", default=None, help="write the report here")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("hypercube-batch", help="random interior points of the unit cube")
    p.add_argument("--n", type=_int_list, default=[2, 5, 10], metavar="N1,N2,...")
    p.add_argument("--seeds", type=_int_list, default=[0], metavar="S1,S2,...")
    p.add_argument("--seed", type=int, dest="seeds_single", default=None,
                   help="shorthand for a single seed")
    _solver_flags(p, instance=False)
    p.add_argument("--rho-factor", type=float, default=DEFAULT_RHO_FACTOR)
    p.add_argument("--max-dimension", type=int, default=MAX_DIMENSION)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--emit-csv", default=None, metavar="DIR",
                   help="directory for per-run CSVs and summary.csv")
    p.set_defaults(func=cmd_hypercube_batch)

    p = sub.add_parser("ssp", help="try to certify a subset-sum instance")
    p.add_argument("--S", type=_int_list, required=True, metavar="S1,S2,...")
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--frame", choices=FRAMES, default="auto")
    p.add_argument("--rho-factor", type=float, default=DEFAULT_RHO_FACTOR)
    _solver_flags(p, instance=False)
    p.add_argument("--oracle", action="store_true", help="also run exhaustive search")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_ssp)

    p = sub.add_parser("plot2d", help="draw a 2-d run as SVG and CSV")
    p.add_argument("instance")
    _solver_flags(p, instance=True)
    p.add_argument("--generations", type=_generations, default=None,
                   metavar="G1,G2,...|all",
                   help="generations to draw (default: first and last)")
    p.add_argument("--emit-svg", default=None, metavar="PATH")
    p.add_argument("--emit-csv", default=None, metavar="PATH")
    p.set_defaults(func=cmd_plot2d)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "seeds_single", None) is not None:
        args.seeds = [args.seeds_single]
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="farpoint: %(message)s")
    try:
        return args.func(args)
    except InstanceError as exc:
        log.error("invalid input: %s", exc)
        return EXIT_INPUT
    except (SolverIndeterminate, BracketError, BudgetExceeded, InfeasibleRadius) as exc:
        log.error("solver could not decide: %s", exc)
        return EXIT_SOLVER
    except (FarpointError, ValueError) as exc:
        log.error("invalid input: %s", exc)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
