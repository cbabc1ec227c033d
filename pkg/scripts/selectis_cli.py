import argparse
import asyncio
import json
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

import yaml

from app.core.config import default_guards, settings
from app.core.errors import EXIT_INPUT
from app.core.handlers_registry import TANPA_INPUT, get_handler, peta_handler_job
from app.core.models import RunConfig, RunResult
from app.core.observability import logger, metrics_collector, summarize_metrics
from app.core.runner import JobContext, execute_job_handler


def _parse_document(content: str) -> Dict[str, Any]:
    try:
        data = json.loads(content)
    except json.JSONDecodeError:
        data = yaml.safe_load(content)

    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ValueError("input document must be a JSON/YAML object")
    return data


def _read_input(path: Optional[str]) -> Dict[str, Any]:
    if path is None or path == "-":
        return _parse_document(sys.stdin.read())
    sumber = Path(path)
    if not sumber.exists():
        raise FileNotFoundError(path)
    return _parse_document(sumber.read_text(encoding="utf-8"))


def _render(payload: Dict[str, Any], indent: int) -> str:
    return json.dumps(payload, indent=indent, ensure_ascii=False) + "\n"


def _write_output(text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    Path(path).write_text(text, encoding="utf-8")


def build_parser() -> argparse.ArgumentParser:
    umum = argparse.ArgumentParser(add_help=False)
    umum.add_argument("--input", "-i", help="JSON or YAML input document (default: stdin)")
    umum.add_argument("--output", "-o", help="Report path (default: stdout)")
    umum.add_argument("--seed", type=int, default=None, help="Seed for randomized suites (env SELECTIS_SEED)")
    umum.add_argument("--max-q", type=int, default=None, help="Largest residue characteristic for sweeps")
    umum.add_argument("--max-n", type=int, default=None, help="Largest matrix dimension for sweeps")
    umum.add_argument("--max-k", type=int, default=None, help="Largest precision for sweeps")
    umum.add_argument("--max-group-order", type=int, default=None, help="Largest class-group order")
    umum.add_argument("--json-indent", type=int, default=None, help="Indentation of the JSON report")

    parser = argparse.ArgumentParser(prog="selectis", description="Optimal embeddings and selectivity engine")
    subparsers = parser.add_subparsers(dest="command")
    subparsers.add_parser("optimal", parents=[umum], help="Decide optimality of an embedding")
    subparsers.add_parser("regrep", parents=[umum], help="Emit the regular representation of an order")
    subparsers.add_parser("count", parents=[umum], help="Count conjugacy orbits of optimal embeddings")
    subparsers.add_parser("classify", parents=[umum], help="Classify the residue algebra of an order")

    local_cmd = subparsers.add_parser("local", parents=[umum], help="Local embedding number of an order")
    local_cmd.add_argument("--division", action="store_true", help="Target the local division algebra")
    local_cmd.add_argument("--integrally-closed", action="store_true", help="The order is the maximal order of K_p")

    subparsers.add_parser("decide", parents=[umum], help="Decide selectivity of a global instance")
    subparsers.add_parser("sandwich", parents=[umum], help="Report the three norm-group inclusions")
    subparsers.add_parser("types", parents=[umum], help="List types and whether each admits the order")

    verify_cmd = subparsers.add_parser("verify", parents=[umum], help="Run the seeded cross-check suite")
    verify_cmd.add_argument("--inject-mutant", action="store_true", help="Flip one structure constant (test mode)")
    return parser


def build_config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        input_path=args.input,
        output_path=args.output,
        seed=args.seed if args.seed is not None else settings.SEED,
        max_q=args.max_q if args.max_q is not None else default_guards.max_q,
        max_n=args.max_n if args.max_n is not None else default_guards.max_n,
        max_k=args.max_k if args.max_k is not None else default_guards.max_k,
        max_group_order=args.max_group_order if args.max_group_order is not None else default_guards.max_group_order,
        json_indent=args.json_indent if args.json_indent is not None else settings.JSON_INDENT,
        inject_mutant=getattr(args, "inject_mutant", False),
        division=getattr(args, "division", False),
        integrally_closed=getattr(args, "integrally_closed", False),
    )


def run_command(config: RunConfig, document: Dict[str, Any]) -> RunResult:
    guards = default_guards.override(
        max_q=config.max_q,
        max_n=config.max_n,
        max_k=config.max_k,
        max_group_order=config.max_group_order,
    )
    ctx = JobContext(
        config=config,
        guards=guards,
        logger=logger,
        metrics=metrics_collector,
        timeout_ms=settings.RUN_TIMEOUT_SEC * 1000,
    )
    handler = get_handler(config.command.value)
    return asyncio.run(execute_job_handler(handler, ctx, document))


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command or args.command not in peta_handler_job:
        parser.print_help()
        return EXIT_INPUT

    config = build_config(args)
    try:
        document = {} if config.command.value in TANPA_INPUT and args.input is None else _read_input(args.input)
    except (OSError, ValueError, yaml.YAMLError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc), "detail": {}}), file=sys.stderr)
        return EXIT_INPUT

    hasil = run_command(config, document)
    if hasil.output is not None:
        _write_output(_render(hasil.output, config.json_indent), config.output_path)
    if hasil.error is not None:
        print(_render(hasil.error, config.json_indent), end="", file=sys.stderr)

    for baris in summarize_metrics("command_runs_total"):
        logger.debug(baris)
    return hasil.exit_code


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
