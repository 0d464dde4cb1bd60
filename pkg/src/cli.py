"""
Command Line Interface
======================

Subcommands:
    construct   Build an instance of a family and write its instance file.
    recipe      Instance files of the application recipes (cotangent, mk,
                null-correlation, ag-embed).
    analyze     Analyze one instance file and print its report.
    verify      Analyze instance files or a seeded battery grid; the exit
                status is 1 when any claim fails.

Global flags --seed, --max-degree and --char override the BRLOCI_*
environment variables, which override ENGINE_SETTINGS.

Functions:
    build_parser: The argparse parser.
    parse_grid: Battery grid syntax such as "n<=4,r<=4,t<r".
    main: Entry point returning the exit status.
"""

# Standard library imports
import argparse
import logging
import operator
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

# Local imports
from src.applications import ag_embed, lift_through_quotient, random_points_ideal
from src.buchsbaum_rim import (
    BRInstance,
    battery_instance,
    complete_intersection_instance,
    cotangent_instance,
    mk_instance,
    null_correlation_recipe,
)
from src.config import BATTERY_SETTINGS, INSTANCES, RECIPES, REPORTS
from src.instance_io import build_instance, format_instance, load_instance, spec_from_section, write_instance
from src.modules import GradedFreeModule, ModuleMap
from src.report import claims_frame, dumps, failed, instance_report, locus_report, validate_report, write_report
from src.sections import SectionInstance, analyze, build_section
from src.utils.env_utils import apply_engine_settings, engine_settings
from src.utils.error_utils import AppError, ExceptionContext, InstanceParseError, ParameterError, handle_exception
from src.utils.logging_utils import LogContext, setup_structured_logging, with_log_context
from src.utils.math_utils import check_characteristic
from src.utils.path_utils import default_report_path, resolve_input_path

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_ERROR = 2

_OPS = {"<=": operator.le, ">=": operator.ge, "<": operator.lt, ">": operator.gt, "=": operator.eq}
_CONSTRAINT = re.compile(r"^\s*([nrt])\s*(<=|>=|<|>|=)\s*([nrt]|\d+)\s*$")


def parse_grid(text: str) -> List[Tuple[int, int, int]]:
    """
    (n, r, t) triples satisfying every constraint, with 2 <= r <= n and
    1 <= t < r always imposed. n needs an upper bound.

    Raises:
        ParameterError: On malformed constraints or an unbounded n
    """
    constraints = []
    for token in text.split(","):
        if not token.strip():
            continue
        match = _CONSTRAINT.match(token)
        if not match:
            raise ParameterError(f"bad grid constraint '{token.strip()}'")
        constraints.append(match.groups())
    bounds = [int(v) for var, op, v in constraints if var == "n" and op in ("<=", "<", "=") and v.isdigit()]
    if not bounds:
        raise ParameterError("the battery grid needs an upper bound on n")
    top = max(bounds)

    def value(symbol: str, point: Dict[str, int]) -> int:
        return point[symbol] if symbol in point else int(symbol)

    grid = []
    for n in range(2, top + 1):
        for r in range(2, n + 1):
            for t in range(1, r):
                point = {"n": n, "r": r, "t": t}
                if all(_OPS[op](point[var], value(v, point)) for var, op, v in constraints):
                    grid.append((n, r, t))
    return grid


def default_section_module(br: BRInstance, t: int) -> GradedFreeModule:
    """P = R(b-1)^t, b the largest twist of the generators of B_phi: degree one coefficients."""
    return GradedFreeModule((max(br.generators.twists) - 1,) * t)


def minimal_generator_section(br: BRInstance) -> SectionInstance:
    """t = 1 section equal to the first minimal generator of B_phi."""
    B0 = br.generators
    P = GradedFreeModule((B0.twists[0],))
    ring = br.ring
    entries = [[ring.one() if b == 0 else ring.zero()] for b in range(B0.rank)]
    return build_section(br, P, coefficients=ModuleMap(ring, P, B0, entries, check=False))


@with_log_context(module="cli", operation="construct")
def construct(args) -> Tuple[BRInstance, Optional[SectionInstance]]:
    family = args.family
    if family == "cotangent":
        br = cotangent_instance(args.n, twist=args.twist)
    elif family == "mk":
        br = mk_instance(args.n, args.k, seed=args.seed)
    elif family == "ci":
        if not args.degrees:
            raise ParameterError("--degrees is required for the ci family")
        br = complete_intersection_instance(args.n, args.degrees, seed=args.seed)
    else:
        if args.r is None:
            raise ParameterError("--r is required for the battery family")
        br = battery_instance(args.n, args.r, args.seed, args.twist)
    if args.t is None:
        return br, None
    if args.minimal_generator:
        if args.t != 1:
            raise ParameterError("--minimal-generator needs t = 1")
        return br, minimal_generator_section(br)
    return br, build_section(br, default_section_module(br, args.t), seed=args.seed)


@with_log_context(module="cli", operation="recipe")
def recipe(args) -> Tuple[BRInstance, SectionInstance]:
    name = args.name
    for param, (_, required) in RECIPES[name]["params"].items():
        if required and getattr(args, param, None) is None:
            raise ParameterError(f"recipe {name} needs --{param}")
    t = args.t or 1
    if name == "cotangent":
        br = cotangent_instance(args.n, twist=3 if args.twist is None else args.twist)
        return br, build_section(br, default_section_module(br, t), seed=args.seed)
    if name == "mk":
        br = mk_instance(args.n, args.k, seed=args.seed)
        return br, build_section(br, default_section_module(br, t), seed=args.seed)
    if name == "null-correlation":
        br, extra = null_correlation_recipe(args.n, args.degrees, seed=args.seed)
        first = build_section(br, default_section_module(br, 1), seed=args.seed)
        return br, lift_through_quotient(first, extra)
    br = cotangent_instance(args.n, twist=3 if args.twist is None else args.twist)
    points = random_points_ideal(br.ring, args.points, seed=args.seed)
    return br, ag_embed(br, points, seed=args.seed).section


def _emit_instance(br: BRInstance, section: Optional[SectionInstance], seed: int, out: Optional[str]):
    spec = spec_from_section(br, section)
    spec.metadata["seed"] = str(seed)
    if out:
        write_instance(spec, out)
    else:
        sys.stdout.write(format_instance(spec))


def analyze_file(path: str, seed: int, quick: bool = False) -> Dict:
    with LogContext(instance=Path(path).name, seed=seed):
        with ExceptionContext("Locating the instance file", InstanceParseError):
            located = resolve_input_path(path, INSTANCES)
        br, section = build_instance(load_instance(located), seed)
        if section is None:
            return validate_report(instance_report(br, seed))
        return validate_report(locus_report(analyze(section, full=not quick), seed))


def analyze_battery_point(point: Tuple[int, int, int], seed: int, quick: bool) -> Dict:
    n, r, t = point
    with LogContext(instance=f"n{n}-r{r}-t{t}", seed=seed):
        br = battery_instance(n, r, seed, BATTERY_SETTINGS["section_twist"])
        section = build_section(br, GradedFreeModule((0,) * t), seed=seed)
        return validate_report(locus_report(analyze(section, full=not quick), seed))


def _run_ordered(jobs, workers: int) -> List:
    """Results in submission order; an exception becomes an error entry."""
    @handle_exception
    def run_job(fn, fn_args):
        return fn(*fn_args)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(run_job, fn, fn_args) for fn, fn_args in jobs]
        results = []
        for future in futures:
            try:
                results.append(future.result())
            except AppError as e:
                results.append({"error": f"{e.__class__.__name__}: {e}"})
        return results


def _log_summary(report: Dict):
    summary = report["summary"]
    label = report["instance"]["label"]
    logging.info(f"{label}: {summary}")
    if failed(report):
        logging.warning("\n" + claims_frame(report).query("status == 'FAIL'").to_string(index=False))


def cmd_construct(args) -> int:
    br, section = construct(args)
    _emit_instance(br, section, args.seed, args.out)
    return EXIT_OK


def cmd_recipe(args) -> int:
    br, section = recipe(args)
    _emit_instance(br, section, args.seed, args.out)
    return EXIT_OK


def cmd_analyze(args) -> int:
    report = analyze_file(args.file, args.seed, args.quick)
    _log_summary(report)
    if args.save:
        write_report(report, default_report_path(args.file, REPORTS))
    if args.json:
        write_report(report, args.json)
    else:
        sys.stdout.write(dumps(report))
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.battery:
        grid = parse_grid(args.battery)
        seeds = range(args.seed, args.seed + args.seeds)
        jobs = [(analyze_battery_point, (point, s, args.quick)) for point in grid for s in seeds]
    elif args.files:
        jobs = [(analyze_file, (path, args.seed, args.quick)) for path in args.files]
    else:
        raise ParameterError("verify needs instance files or --battery")
    logging.info(f"Verifying {len(jobs)} instances with {args.workers} workers")

    reports = _run_ordered(jobs, args.workers)
    status = EXIT_OK
    lines = []
    for report in reports:
        if "error" in report or failed(report):
            status = EXIT_FAIL
        if "summary" in report:
            _log_summary(report)
        lines.append(dumps(report, compact=args.jsonl))
    output = "".join(lines)
    if args.json:
        Path(args.json).parent.mkdir(parents=True, exist_ok=True)
        Path(args.json).write_text(output, encoding="utf-8")
    else:
        sys.stdout.write(output)
    logging.info(f"verify finished with exit status {status}")
    return status


def _degrees(text: str) -> List[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="brloci",
        description="Buchsbaum-Rim modules, multiple sections and their degeneracy loci",
    )
    parser.add_argument("--seed", type=int, default=None, help="Seed of every random choice")
    parser.add_argument("--max-degree", type=int, default=None, help="Degree cap of the Groebner engine")
    parser.add_argument("--char", type=int, default=None, help="Characteristic of the coefficient field")
    parser.add_argument("--json", default=None, help="Write the output to this path instead of stdout")
    parser.add_argument("--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    parser.add_argument("--log-file", default=None, help="Also log to logs/<name>")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="Build an instance of a family")
    p.add_argument("--family", choices=["cotangent", "mk", "ci", "battery"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--t", type=int, default=None, help="Rank of P; no section when omitted")
    p.add_argument("--twist", type=int, default=BATTERY_SETTINGS["section_twist"])
    p.add_argument("--degrees", type=_degrees, default=None)
    p.add_argument("--minimal-generator", action="store_true", help="Use a minimal generator as the section")
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_construct)

    p = sub.add_parser("recipe", help="Instance file of an application recipe")
    p.add_argument("name", choices=sorted(RECIPES))
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--twist", type=int, default=None)
    p.add_argument("--degrees", type=_degrees, default=None)
    p.add_argument("--points", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(handler=cmd_recipe)

    p = sub.add_parser("analyze", help="Analyze one instance file")
    p.add_argument("file")
    p.add_argument("--quick", action="store_true", help="Skip the complex, Tor and module-level checks")
    p.add_argument("--save", action="store_true", help="Also write the report under data/reports")
    p.set_defaults(handler=cmd_analyze)

    p = sub.add_parser("verify", help="Verify instance files or a battery grid")
    p.add_argument("files", nargs="*")
    p.add_argument("--battery", default=None, help=f"Grid such as '{BATTERY_SETTINGS['grid']}'")
    p.add_argument("--seeds", type=int, default=BATTERY_SETTINGS["seeds"])
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--quick", action="store_true")
    p.add_argument("--jsonl", action="store_true", help="One report per line")
    p.set_defaults(handler=cmd_verify)
    return parser


def _configure(args) -> None:
    settings = engine_settings()
    if args.char is not None:
        settings["characteristic"] = check_characteristic(args.char)
    if args.max_degree is not None:
        settings["max_degree"] = args.max_degree
    if args.seed is None:
        args.seed = settings["default_seed"]
    if getattr(args, "workers", None) is None and args.command == "verify":
        args.workers = settings["workers"]
    apply_engine_settings(settings)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_structured_logging(log_file=args.log_file, level=getattr(logging, args.log_level))
    try:
        _configure(args)
        with LogContext(command=args.command, seed=args.seed):
            return args.handler(args)
    except AppError as e:
        logging.error(f"{e.__class__.__name__}: {e}")
        return EXIT_ERROR
