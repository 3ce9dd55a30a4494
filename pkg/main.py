"""
Command line entry point.

    python main.py check --property alpha --fixture ex3_1 --cone Rplus
    python main.py verify --theorem cor41_i --fixture ex4_2
    python main.py suite --format markdown

Exit status: 0 when the run passes, 1 when a check is refuted or not confirmed
(or a theorem run is not consistent), 2 on usage errors and rejected input.
"""
import argparse
import json
import logging
import sys
import time
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from checkers import check_implications, run_check
from config import ToleranceConfig, load_config
from helper import load_cone, load_fixture, setup_logging
from minimax import find_diagonal_witness, run_theorem_suite, verify_minimax
from paper_examples import REGRESSION_MATRIX, RegressionCase, build_fixture, fixture_catalog
from report import (
    FORMATS,
    CheckEntry,
    RunReport,
    entry_from_conclusion,
    entry_from_diagonal,
    entry_from_implication,
    entry_from_theorem,
    entry_from_verdict,
    markdown_table,
    render,
)
from tools import VerificationTools
from verdicts import to_jsonable

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


def _coords(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got '{text}'") from None


def _json_object(text: str) -> Dict:
    try:
        value = json.loads(text)
    except json.JSONDecodeError as exc:
        raise argparse.ArgumentTypeError(f"invalid JSON: {exc}") from None
    if not isinstance(value, dict):
        raise argparse.ArgumentTypeError("expected a JSON object")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with ToleranceConfig fields")
    common.add_argument("--resolution", type=int, dest="grid_resolution", help="domain grid resolution")
    common.add_argument("--n-max", type=int, dest="n_max", help="largest tuple size for n-point conditions")
    common.add_argument("--lambda-steps", type=int, dest="lambda_steps", help="steps of the convex weight grid")
    common.add_argument("--eps", type=float, dest="eps_cone", help="cone membership tolerance")
    common.add_argument("--seed", type=int, help="seed for sampled sweeps")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=FORMATS, default="json")
    common.add_argument("--stable", action="store_true", help="leave out the timestamp and wall times")
    common.add_argument("--log-level", default="WARNING")
    common.add_argument("--log-file")

    target = argparse.ArgumentParser(add_help=False)
    target.add_argument("--fixture", help="built-in fixture name")
    target.add_argument("--fixture-file", help="JSON fixture document")
    target.add_argument("--cone", help="Rplus, R2plus, minusR2plus or normals like '1,0;0,1'")

    parser = argparse.ArgumentParser(prog="cone-minimax", description="Cone-ordered set-valued minimax checks")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list-fixtures", parents=[common], help="list the built-in fixtures")
    p.add_argument("--all", action="store_true", help="include the auxiliary fixtures")

    p = sub.add_parser("eval", parents=[common, target], help="print the value set at one point")
    p.add_argument("--x", type=_coords, required=True)
    p.add_argument("--y", type=_coords, required=True)

    p = sub.add_parser("check", parents=[common, target], help="run one property check")
    p.add_argument("--property", required=True)
    p.add_argument("--arg", default="first", choices=("first", "second"))
    p.add_argument("--polarity", default="convex", choices=("convex", "concave"))
    p.add_argument("--options", type=_json_object, default={},
                   help="checker options as JSON, e.g. '{\"tuples\": [[1, 3]]}'")

    p = sub.add_parser("verify", parents=[common, target], help="check a theorem's hypotheses and conclusion")
    p.add_argument("--theorem", required=True)

    p = sub.add_parser("suite", parents=[common], help="run the regression matrix of the worked examples")
    p.add_argument("--fixture", action="append", help="restrict to these fixtures (repeatable)")

    p = sub.add_parser("implications", parents=[common, target], help="cross-check one-way implications")
    p.add_argument("--polarity", default="convex", choices=("convex", "concave"))

    p = sub.add_parser("call", parents=[common], help="invoke a JSON tool")
    p.add_argument("--name", required=True)
    p.add_argument("--input", default="{}", help="JSON action input")
    return parser


def _config(args: argparse.Namespace) -> ToleranceConfig:
    return load_config(
        args.config,
        grid_resolution=args.grid_resolution,
        n_max=args.n_max,
        lambda_steps=args.lambda_steps,
        eps_cone=args.eps_cone,
        seed=args.seed,
    )


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text + "\n")
        logger.info("report written to %s", out)
    else:
        sys.stdout.write(text + "\n")


def _finish(report: RunReport, args: argparse.Namespace, stable: bool = False) -> int:
    _emit(render(report, args.format, stable or args.stable), args.out)
    return EXIT_OK if report.overall == "pass" else EXIT_FAILED


def cmd_list_fixtures(args, cfg: ToleranceConfig) -> int:
    catalog = fixture_catalog(args.all, cfg.grid_resolution)
    if args.format == "markdown":
        text = markdown_table(catalog)
    else:
        text = json.dumps(to_jsonable(catalog.to_dict(orient="records")), indent=2)
    _emit(text, args.out)
    return EXIT_OK


def cmd_eval(args, cfg: ToleranceConfig) -> int:
    fx = load_fixture(args.fixture, args.fixture_file, cfg)
    value = fx.value_set(args.x, args.y)
    cloud = fx.evaluate(args.x, args.y)
    doc = {"fixture": fx.name, "x": args.x, "y": args.y, "value": value.describe(), "points": cloud.to_list()}
    _emit(json.dumps(doc, indent=2), args.out)
    return EXIT_OK


def cmd_check(args, cfg: ToleranceConfig) -> int:
    fx = load_fixture(args.fixture, args.fixture_file, cfg)
    cone = load_cone(args.cone, fx, cfg)
    start = time.perf_counter()
    verdict = run_check(fx, cone, args.property, cfg, args.arg, args.polarity, **args.options)
    report = RunReport(fixture=fx.name, cone=cone.name, config=cfg.snapshot())
    report.add(entry_from_verdict(verdict, time.perf_counter() - start))
    return _finish(report, args)


def cmd_verify(args, cfg: ToleranceConfig) -> int:
    fx = load_fixture(args.fixture, args.fixture_file, cfg)
    cone = load_cone(args.cone, fx, cfg)
    start = time.perf_counter()
    result = run_theorem_suite(fx, cone, args.theorem, cfg)
    report = RunReport(fixture=fx.name, cone=cone.name, config=cfg.snapshot())
    report.add(entry_from_theorem(result, time.perf_counter() - start))
    return _finish(report, args)


def cmd_implications(args, cfg: ToleranceConfig) -> int:
    fx = load_fixture(args.fixture, args.fixture_file, cfg)
    cone = load_cone(args.cone, fx, cfg)
    report = RunReport(fixture=fx.name, cone=cone.name, config=cfg.snapshot())
    for result in check_implications(fx, cone, cfg, args.polarity):
        report.add(entry_from_implication(result))
    return _finish(report, args)


def suite_resolution(resolution: int) -> int:
    """Breakpoints at quarters of the domain sit on the grid only for multiples of 4."""
    return resolution + (-resolution) % 4


def run_case(case: RegressionCase, cfg: ToleranceConfig, cache: Optional[Dict] = None) -> CheckEntry:
    cache = {} if cache is None else cache
    if case.fixture not in cache:
        cache[case.fixture] = build_fixture(case.fixture, cfg.grid_resolution, cfg.sampling())
    fx = cache[case.fixture]
    cone = load_cone(case.cone or None, fx, cfg)
    start = time.perf_counter()
    if case.action == "check":
        verdict = run_check(fx, cone, case.target, cfg, case.arg, case.polarity, **case.options_dict())
        entry = entry_from_verdict(verdict, expected=case.expected)
    elif case.action == "verify":
        entry = entry_from_theorem(run_theorem_suite(fx, cone, case.target, cfg), expected=case.expected)
    elif case.action == "conclusion":
        entry = entry_from_conclusion(verify_minimax(fx, cone, case.target, cfg), expected=case.expected)
    elif case.action == "diagonal":
        witness = find_diagonal_witness(fx, cone, case.target, cfg)
        entry = entry_from_diagonal(case.target, witness, expected=case.expected)
    else:
        raise ValueError(f"unknown regression action '{case.action}'")
    entry.id = case.case_id
    entry.wall_time = time.perf_counter() - start
    if not entry.matches:
        logger.warning("%s: expected %s, got %s", case.case_id, case.expected, entry.status)
    return entry


def cmd_suite(args, cfg: ToleranceConfig) -> int:
    cfg = cfg.with_overrides(grid_resolution=suite_resolution(cfg.grid_resolution))
    cases = [c for c in REGRESSION_MATRIX if not args.fixture or c.fixture in args.fixture]
    if not cases:
        raise ValueError(f"no regression cases for fixtures {args.fixture}")
    report = RunReport(fixture="regression-matrix", cone="per-case", config=cfg.snapshot())
    cache: Dict = {}
    for case in cases:
        report.add(run_case(case, cfg, cache))
    return _finish(report, args, stable=True)


def cmd_call(args, cfg: ToleranceConfig) -> int:
    output = VerificationTools(cfg).call(args.name, args.input)
    _emit(output, args.out)
    return EXIT_USAGE if "error" in json.loads(output) else EXIT_OK


COMMANDS = {
    "list-fixtures": cmd_list_fixtures,
    "eval": cmd_eval,
    "check": cmd_check,
    "verify": cmd_verify,
    "suite": cmd_suite,
    "implications": cmd_implications,
    "call": cmd_call,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    setup_logging(args.log_level, args.log_file)
    try:
        cfg = _config(args)
        return COMMANDS[args.command](args, cfg)
    except ValueError as exc:
        logger.debug("rejected input", exc_info=True)
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
