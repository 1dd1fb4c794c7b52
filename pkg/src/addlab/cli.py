import argparse
import logging
import sys
import time
import uuid
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any

from . import __version__
from .bounds import ScanFamily, region_scan, subspace_census
from .channels import witness_report
from .core.config import OracleConfig, WorkbenchConfig, reload_config
from .core.error_handler import UsageError, get_error_handler
from .core.logging import setup_logging
from .core.validation import ConstructionSpec, Family
from .logging_utils import log_command_accept, log_command_result, log_progress
from .oracle import OracleEstimate, estimate_Md, max_product_overlap, max_schmidt_in_subspace
from .reporting import PayloadType, construction_summary, dumps, make_envelope
from .subspaces import antisym_subspace, antisymmetric_projector_from_swap, build_subspace, parthasarathy_spaces

EXIT_BREAK = 0
EXIT_NO_BREAK = 3

ORACLE_TARGETS = ("antisym-sup", "subspace-sup", "md")

logger = logging.getLogger("addlab.cli")


def parse_int_grid(text: str) -> list[int]:
    """'4-12' or '4,6,8' (ranges inclusive, may be mixed)."""
    values: list[int] = []
    for part in (p.strip() for p in text.split(",")):
        if not part:
            continue
        if "-" in part:
            low, high = part.split("-", 1)
            values.extend(range(int(low), int(high) + 1))
        else:
            values.append(int(part))
    return values


def parse_float_grid(text: str) -> list[float]:
    """'3' or '2.5,3,4'."""
    return [float(part) for part in (p.strip() for p in text.split(",")) if part]


def parse_complex_list(text: str) -> list[tuple[float, float]]:
    """Comma separated Python complex literals, e.g. '0,0.5,1+1j'."""
    values = [complex(part.strip().replace(" ", "")) for part in text.split(",") if part.strip()]
    return [(z.real, z.imag) for z in values]


def _grid_type(parser: Callable[[str], list[Any]]) -> Callable[[str], list[Any]]:
    def parse(text: str) -> list[Any]:
        try:
            return parser(text)
        except ValueError as e:
            raise argparse.ArgumentTypeError(f"invalid grid {text!r}: {e}") from e

    return parse


def _complex_type(text: str) -> list[tuple[float, float]]:
    try:
        return parse_complex_list(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"invalid node list {text!r}: {e}") from e


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="Log level (stderr)")
    common.add_argument("--log-json", action="store_true", default=None, help="Emit logs as JSON lines")
    common.add_argument(
        "--output", type=Path, help="Write the payload to this file instead of stdout (relative to the output dir)"
    )

    oracle = argparse.ArgumentParser(add_help=False)
    oracle.add_argument("--restarts", type=int, help="Oracle restarts (default 64)")
    oracle.add_argument("--max-iters", type=int, help="Iterations per restart (default 500)")
    oracle.add_argument("--tol", type=float, help="Relative change stop (default 1e-10)")
    oracle.add_argument("--seed", type=int, help="Random seed (default ADDLAB_SEED or 0)")
    oracle.add_argument("--workers", type=int, help="Threads running restarts concurrently")

    construction = argparse.ArgumentParser(add_help=False)
    construction.add_argument("--family", required=True, choices=[f.value for f in Family])
    construction.add_argument("--d", type=int, required=True, help="Local dimension")
    construction.add_argument("--n", type=int, help="Subspace dimension / number of Bell states")
    construction.add_argument("--lambdas", type=_complex_type, help="Parthasarathy nodes G (2d-1 complex values)")
    construction.add_argument("--phases", type=_grid_type(parse_float_grid), help="Bell-state phases (d values)")

    parser = argparse.ArgumentParser(prog="addlab", description="Additivity-breaking verification workbench")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True, help="Available commands")

    subparsers.add_parser(
        "construct", parents=[common, oracle, construction], help="Build a subspace and summarize it"
    )

    verify = subparsers.add_parser(
        "verify", parents=[common, oracle, construction], help="Full witness report for one construction"
    )
    verify.add_argument("--p", type=float, required=True, help="Rényi order p > 1")
    verify.add_argument("--m", type=float, help="Assumed lower bound on M_d (parthasarathy)")

    scan = subparsers.add_parser("scan", parents=[common], help="Breaking-region scan over a (p, d) grid")
    scan.add_argument("--family", required=True, help="extension | subspace | parthasarathy | antisym")
    scan.add_argument("--p-grid", type=_grid_type(parse_float_grid), required=True, help="e.g. 3 or 2.5,3,4")
    scan.add_argument("--d-grid", type=_grid_type(parse_int_grid), required=True, help="e.g. 4-12 or 4,6,8")
    scan.add_argument("--m", type=float, default=0.5, help="M_d lower bound for parthasarathy (default 0.5)")
    scan.add_argument("--format", choices=["csv", "json"], default="csv")

    oracle_cmd = subparsers.add_parser("oracle", parents=[common, oracle], help="Run one numerical oracle")
    oracle_cmd.add_argument("--target", required=True, choices=ORACLE_TARGETS)
    oracle_cmd.add_argument("--d", type=int, required=True)
    oracle_cmd.add_argument("--n", type=int, help="Subspace dimension for subspace-sup")

    census = subparsers.add_parser("census", parents=[common], help="Count breaking antisymmetric subspaces")
    census.add_argument("--p", type=float, required=True)
    census.add_argument("--d", type=int, required=True)

    return parser


def _oracle_config(args: argparse.Namespace, config: WorkbenchConfig) -> OracleConfig:
    return config.oracle.with_overrides(
        restarts=getattr(args, "restarts", None),
        max_iterations=getattr(args, "max_iters", None),
        tolerance=getattr(args, "tol", None),
        seed=getattr(args, "seed", None),
        workers=getattr(args, "workers", None),
    )


def _spec(args: argparse.Namespace) -> ConstructionSpec:
    return ConstructionSpec.build(family=args.family, d=args.d, n=args.n, lambdas=args.lambdas, phases=args.phases)


def cmd_construct(args: argparse.Namespace, cfg: OracleConfig) -> tuple[bytes, int]:
    spec = _spec(args)
    basis = build_subspace(spec)
    extra: dict[str, Any] = {}
    if spec.family is Family.PARTHASARATHY:
        big, _ = parthasarathy_spaces(spec.d, spec.nodes)
        extra["dimension_L"] = big.dim
    estimate = max_schmidt_in_subspace(basis, cfg)
    payload = construction_summary(spec, basis, estimate, **extra)
    return dumps(make_envelope("construct", cfg.seed, PayloadType.CONSTRUCTION, payload)), 0


def cmd_verify(args: argparse.Namespace, cfg: OracleConfig) -> tuple[bytes, int]:
    spec = _spec(args)
    if args.m is not None and spec.family is not Family.PARTHASARATHY:
        raise UsageError("--m only applies to --family parthasarathy", flag="--m")
    report = witness_report(spec, args.p, cfg, args.m)
    code = EXIT_BREAK if report.breaks else EXIT_NO_BREAK
    return dumps(make_envelope("verify", cfg.seed, PayloadType.WITNESS_REPORT, report.to_dict())), code


def cmd_scan(args: argparse.Namespace, cfg: OracleConfig) -> tuple[bytes, int]:
    if not args.p_grid or not args.d_grid:
        raise UsageError("--p-grid and --d-grid must be nonempty", flag="--p-grid/--d-grid")
    try:
        family = ScanFamily(args.family)
    except ValueError as e:
        raise UsageError(f"unknown scan family {args.family!r}", flag="--family") from e
    scan = region_scan(family, args.p_grid, args.d_grid, m=args.m)
    if args.format == "csv":
        return scan.to_csv().encode(), 0
    return dumps(make_envelope("scan", cfg.seed, PayloadType.REGION_SCAN, scan.to_dict())), 0


def cmd_oracle(args: argparse.Namespace, cfg: OracleConfig) -> tuple[bytes, int]:
    estimate: OracleEstimate
    if args.target == "antisym-sup":
        estimate = max_product_overlap(antisymmetric_projector_from_swap(args.d), cfg, (args.d, args.d))
    elif args.target == "subspace-sup":
        if args.n is None:
            raise UsageError("--target subspace-sup needs --n", flag="--n")
        estimate = max_schmidt_in_subspace(antisym_subspace(args.d, args.n), cfg)
    elif args.target == "md":
        estimate = estimate_Md(args.d, cfg)
    else:
        raise UsageError(f"unknown oracle target {args.target!r}", flag="--target")
    payload = {"target": args.target, "d": args.d, "n": args.n, **estimate.to_dict()}
    return dumps(make_envelope("oracle", cfg.seed, PayloadType.ORACLE_ESTIMATE, payload)), 0


def cmd_census(args: argparse.Namespace, cfg: OracleConfig) -> tuple[bytes, int]:
    record = subspace_census(args.p, args.d)
    return dumps(make_envelope("census", cfg.seed, PayloadType.CENSUS, record.to_dict())), 0


COMMANDS: dict[str, Callable[[argparse.Namespace, OracleConfig], tuple[bytes, int]]] = {
    "construct": cmd_construct,
    "verify": cmd_verify,
    "scan": cmd_scan,
    "oracle": cmd_oracle,
    "census": cmd_census,
}


def _emit(data: bytes, output: Path | None) -> None:
    if output is not None:
        output.parent.mkdir(parents=True, exist_ok=True)
        output.write_bytes(data)
        return
    sys.stdout.write(data.decode())
    sys.stdout.flush()


def run(argv: Sequence[str] | None = None) -> int:
    """Parse ``argv``, run one command and return the process exit code."""
    args = build_parser().parse_args(argv)
    run_id = str(uuid.uuid4())
    started = time.perf_counter()
    seed = 0
    try:
        config = reload_config()
        setup_logging(
            level=args.log_level or config.logging.level,
            json_format=bool(args.log_json) or config.logging.json_format,
        )
        cfg = _oracle_config(args, config)
        seed = cfg.seed
        log_command_accept(logger, command=args.command, run_id=run_id, arguments=_loggable(args))
        data, code = COMMANDS[args.command](args, cfg)
        log_progress(logger, command=args.command, run_id=run_id, step="write_output", progress_percent=100.0)
        _emit(data, config.output_dir / args.output if args.output is not None else None)
    except Exception as e:
        error = get_error_handler().create_error_payload(e, context={"command": args.command, "run_id": run_id})
        _emit(dumps(make_envelope(args.command, seed, PayloadType.ERROR, error["error"])), None)
        code = error["exit_code"]

    log_command_result(
        logger,
        command=args.command,
        run_id=run_id,
        exit_code=code,
        duration_ms=(time.perf_counter() - started) * 1000,
    )
    return code


def _loggable(args: argparse.Namespace) -> dict[str, Any]:
    return {k: (str(v) if isinstance(v, Path) else v) for k, v in vars(args).items() if v is not None}


def main() -> None:
    sys.exit(run())
