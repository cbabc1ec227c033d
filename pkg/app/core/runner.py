import asyncio
import time
import traceback
from typing import Any, Callable, Dict

from pydantic import ValidationError

from .config import SizeGuards
from .errors import EXIT_GUARD, EXIT_INPUT, EXIT_OK, SelectisError
from .models import SCHEMA_VERSION, RunConfig, RunResult


class JobContext:
    def __init__(
        self,
        config: RunConfig,
        guards: SizeGuards,
        logger,
        metrics,
        timeout_ms: int,
    ):
        self.config = config
        self.command = config.command.value
        self.seed = config.seed
        self.guards = guards
        self.logger = logger
        self.metrics = metrics
        self.timeout_ms = timeout_ms


def with_schema(payload: Dict[str, Any], exit_code: int = EXIT_OK) -> Dict[str, Any]:
    """Attach schema_version and exit_code to a handler payload."""
    return {"schema_version": SCHEMA_VERSION, **payload, "exit_code": exit_code}


def _catat(ctx: JobContext, exit_code: int, waktu_mulai: float) -> int:
    durasi_ms = int((time.time() - waktu_mulai) * 1000)
    if ctx.metrics:
        ctx.metrics.increment("command_runs_total", {"command": ctx.command, "exit_code": str(exit_code)})
        ctx.metrics.observe("command_duration_ms", durasi_ms, {"command": ctx.command})
    return durasi_ms


async def execute_job_handler(handler: Callable, ctx: JobContext, inputs: Dict) -> RunResult:
    """Execute a command handler with timeout and error handling"""
    waktu_mulai = time.time()

    try:
        hasil_handler = await asyncio.wait_for(handler(ctx, inputs), timeout=ctx.timeout_ms / 1000.0)
        exit_code = int(hasil_handler.get("exit_code", EXIT_OK))
        durasi_ms = _catat(ctx, exit_code, waktu_mulai)
        return RunResult(success=exit_code == EXIT_OK, output=hasil_handler, exit_code=exit_code, duration_ms=durasi_ms)

    except SelectisError as exc:
        ctx.logger.warning(
            "Command rejected",
            extra={"command": ctx.command, "error": type(exc).__name__, "detail": exc.message},
        )
        durasi_ms = _catat(ctx, exc.exit_code, waktu_mulai)
        return RunResult(success=False, error=exc.to_payload(), exit_code=exc.exit_code, duration_ms=durasi_ms)

    except ValidationError as exc:
        ctx.logger.warning("Input document failed validation", extra={"command": ctx.command})
        durasi_ms = _catat(ctx, EXIT_INPUT, waktu_mulai)
        return RunResult(
            success=False,
            error={
                "error": "ValidationError",
                "message": str(exc),
                "detail": {"errors": exc.errors(include_url=False, include_context=False)},
            },
            exit_code=EXIT_INPUT,
            duration_ms=durasi_ms,
        )

    except asyncio.TimeoutError:
        pesan_error = f"Command timed out after {ctx.timeout_ms}ms"
        ctx.logger.error(pesan_error, extra={"command": ctx.command})
        durasi_ms = _catat(ctx, EXIT_GUARD, waktu_mulai)
        return RunResult(
            success=False,
            error={"error": "Timeout", "message": pesan_error, "detail": {"timeout_ms": ctx.timeout_ms}},
            exit_code=EXIT_GUARD,
            duration_ms=durasi_ms,
        )

    except Exception as e:
        pesan_error = f"Command failed with exception: {str(e)}\n{traceback.format_exc()}"
        ctx.logger.error(pesan_error, extra={"command": ctx.command})
        durasi_ms = _catat(ctx, EXIT_INPUT, waktu_mulai)
        return RunResult(
            success=False,
            error={"error": type(e).__name__, "message": str(e), "detail": {}},
            exit_code=EXIT_INPUT,
            duration_ms=durasi_ms,
        )
