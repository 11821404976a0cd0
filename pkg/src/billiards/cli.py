import argparse
import random
import sys
from enum import IntEnum
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from billiards.core.billiard import Table
from billiards.core.blocking import (
    BlockingSet,
    EvasionResult,
    build_blocking_set,
    evade,
    random_blocking_set,
)
from billiards.core.config import RunConfig
from billiards.core.errors import BilliardError, CornerHitError, InvalidConfig
from billiards.core.family import (
    FamilyParams,
    approximants,
    approximation_report,
    build_polygon,
    gamma,
    verify_family,
)
from billiards.core.models import (
    ApproximationReportModel,
    BlockingSetModel,
    CornerHitModel,
    EvasionResultModel,
    FamilyReportModel,
    NotFoundModel,
    TableModel,
    dumps,
)
from billiards.core.render import render_table, render_trajectory, render_unfolded
from billiards.core.unfolding import unfold
from billiards.core.utils.logging import configure_logging, get_logger
from billiards.version import __version__

logger = get_logger("billiards.cli")


class ExitCode(IntEnum):
    OK = 0
    VERIFICATION_FAILED = 1
    INVALID_INPUT = 2
    BUDGET_EXHAUSTED = 3


# --- HELPERS ---
def _run_config(args) -> RunConfig:
    overrides = {
        "alpha_u": args.alpha_u,
        "alpha_v": args.alpha_v,
        "l1": args.l1,
        "l2": args.l2,
        "n": getattr(args, "n", None),
        "decimal_digits": args.digits,
        "seed": args.seed,
        "max_bounces": args.max_bounces,
        "jobs": args.jobs,
        "output": args.output,
        "table_path": getattr(args, "table", None),
        "blockers_path": getattr(args, "blockers", None),
        "random_blockers": getattr(args, "random", None),
        "what": getattr(args, "what", None),
        "index": getattr(args, "index", None),
    }
    return RunConfig.load(args.config, overrides)


def _read_text(path: str, what: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise InvalidConfig(f"cannot read {what} file {path}: {e}") from e


def _load_table(cfg: RunConfig) -> Table:
    if not cfg.table_path:
        return build_polygon(cfg.family_params())
    try:
        model = TableModel.model_validate_json(_read_text(cfg.table_path, "table"))
    except ValidationError as e:
        raise InvalidConfig(f"malformed table file {cfg.table_path}", hint=str(e)) from e
    return model.to_domain()


def _params_for(cfg: RunConfig, table: Table) -> FamilyParams:
    """A loaded table carries its own alpha; chamber heights come from the config."""
    return FamilyParams(table.spec, cfg.l1, cfg.l2)


def _load_blockers(cfg: RunConfig, table: Table) -> BlockingSet:
    if cfg.random_blockers:
        return random_blocking_set(table, cfg.random_blockers, random.Random(cfg.seed))
    if not cfg.blockers_path:
        return BlockingSet()
    try:
        model = BlockingSetModel.model_validate_json(_read_text(cfg.blockers_path, "blocking set"))
    except ValidationError as e:
        raise InvalidConfig(f"malformed blocking set file {cfg.blockers_path}", hint=str(e)) from e
    return build_blocking_set(table, model.to_points(table.spec))


def _emit(text: str, output: Optional[str]) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if output:
        Path(output).write_text(text, encoding="utf-8")
        logger.info("output_written", path=output, chars=len(text))
    else:
        sys.stdout.write(text)


# --- COMMAND HANDLERS ---
def cmd_build(args) -> int:
    cfg = _run_config(args)
    table = _load_table(cfg)
    _emit(dumps(TableModel.from_domain(table, cfg.decimal_digits)), cfg.output)
    return ExitCode.OK


def cmd_verify(args) -> int:
    cfg = _run_config(args)
    table = _load_table(cfg)
    indices = approximants(_params_for(cfg, table), cfg.n)
    reports = verify_family(table, indices, jobs=cfg.jobs, max_bounces=cfg.max_bounces)
    model = FamilyReportModel.from_domain(reports, cfg.decimal_digits)
    _emit(dumps(model), cfg.output)
    return ExitCode.OK if model.ok else ExitCode.VERIFICATION_FAILED


def cmd_evade(args) -> int:
    cfg = _run_config(args)
    table = _load_table(cfg)
    blockers = _load_blockers(cfg, table)
    family = approximants(_params_for(cfg, table), cfg.n)
    result = evade(table, family, blockers, jobs=cfg.jobs)
    if isinstance(result, EvasionResult):
        _emit(dumps(EvasionResultModel.from_domain(result, cfg.decimal_digits)), cfg.output)
        return ExitCode.OK
    _emit(dumps(NotFoundModel.from_domain(result)), cfg.output)
    return ExitCode.BUDGET_EXHAUSTED


def cmd_render(args) -> int:
    cfg = _run_config(args)
    table = _load_table(cfg)
    if cfg.what == "table":
        svg = render_table(table, cfg.decimal_digits)
    else:
        idx = approximants(_params_for(cfg, table), cfg.index)[cfg.index]
        traj = gamma(table, idx, cfg.max_bounces)
        if cfg.what == "gamma":
            svg = render_trajectory(table, traj, cfg.decimal_digits)
        else:
            svg = render_unfolded(table, unfold(traj), cfg.decimal_digits)
    _emit(svg, cfg.output)
    return ExitCode.OK


def cmd_report(args) -> int:
    cfg = _run_config(args)
    table = _load_table(cfg)
    rows = approximation_report(approximants(_params_for(cfg, table), cfg.n))
    model = ApproximationReportModel.from_domain(rows, cfg.decimal_digits)
    _emit(dumps(model), cfg.output)
    return ExitCode.OK if model.ok else ExitCode.VERIFICATION_FAILED


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="JSON run config (flags override it)")
    common.add_argument("--alpha-u", dest="alpha_u", default=None, help="alpha = (v + sqrt(v^2 + 4u)) / 2")
    common.add_argument("--alpha-v", dest="alpha_v", default=None)
    common.add_argument("--l1", default=None, help="lower chamber height")
    common.add_argument("--l2", default=None, help="upper chamber height")
    common.add_argument("--digits", type=int, default=None, help="decimal digits for display fields and SVG")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--jobs", type=int, default=None)
    common.add_argument("--max-bounces", dest="max_bounces", type=int, default=None)
    common.add_argument("-o", "--output", default=None)
    return common


def _build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="billiards", description="Exact billiards in the P_alpha family")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command")

    subparsers.add_parser("build", parents=[common], help="emit the exact table").set_defaults(func=cmd_build)

    verify_p = subparsers.add_parser("verify", parents=[common], help="verify gamma_0..gamma_N")
    verify_p.add_argument("--n", type=int, default=None)
    verify_p.add_argument("--table", default=None, help="table JSON (a build output) instead of the params")
    verify_p.set_defaults(func=cmd_verify)

    evade_p = subparsers.add_parser("evade", parents=[common], help="find a gamma_n missing every blocker")
    evade_p.add_argument("--blockers", default=None, help='blocking set JSON {"points": [...]}')
    evade_p.add_argument("--random", type=int, default=None, metavar="K", help="K seeded random blockers")
    evade_p.add_argument("--n-max", dest="n", type=int, default=None)
    evade_p.set_defaults(func=cmd_evade)

    render_p = subparsers.add_parser("render", parents=[common], help="SVG figure")
    render_p.add_argument("--what", choices=["table", "gamma", "unfolded"], default=None)
    render_p.add_argument("--index", type=int, default=None)
    render_p.add_argument("--table", default=None, help="table JSON (a build output) instead of the params")
    render_p.set_defaults(func=cmd_render)

    report_p = subparsers.add_parser("report", parents=[common], help="rational approximation bounds")
    report_p.add_argument("--n", type=int, default=None)
    report_p.set_defaults(func=cmd_report)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    configure_logging()
    parser = _build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "func"):
        parser.print_help()
        return ExitCode.INVALID_INPUT
    try:
        return int(args.func(args))
    except CornerHitError as e:
        # A family member ran into a vertex and cannot verify.
        logger.warning("command_corner_hit", command=args.command, after_bounces=e.corner.after_bounces)
        sys.stdout.write(dumps(CornerHitModel.from_domain(e.corner)) + "\n")
        return ExitCode.VERIFICATION_FAILED
    except BilliardError as e:
        logger.error("command_failed", command=args.command, code=e.code.value, message=e.message)
        sys.stdout.write(dumps(e.to_dict()) + "\n")
        return ExitCode.INVALID_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
