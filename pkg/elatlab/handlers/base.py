import logging
import time
from dataclasses import dataclass
from typing import Any, Callable, Dict, Optional, Tuple

import typer

from elatlab.core.exceptions import ELatLabError, OrderBoundError
from elatlab.models.reports import Report
from elatlab.services.messages import messages

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_BOUND = 3


@dataclass(frozen=True)
class CommandOptions:
    json_output: bool = False
    max_order: Optional[int] = None
    enum_threshold: Optional[int] = None
    timing: bool = False


def yes_no(flag: bool) -> str:
    return messages.get_text("yes" if flag else "no")


def verdict_label(verdict: str) -> str:
    return messages.get_text(f"verdict_{verdict}")


def execute(
    command: str,
    inputs: Dict[str, Any],
    options: CommandOptions,
    build: Callable[[], Tuple[Dict[str, Any], int]],
    render: Callable[[Report], str],
) -> int:
    """Run one command: build the result, print the report, return the exit code.

    Bound errors exit with 3, every other input error with 2.
    """
    started = time.perf_counter()
    try:
        result, code = build()
    except OrderBoundError as e:
        logger.error(f"{command}: {e}")
        typer.echo(messages.get_text("error_bound", error=e), err=True)
        return EXIT_BOUND
    except (ELatLabError, ValueError, OSError) as e:
        logger.error(f"{command}: {e}")
        typer.echo(messages.get_text("error_usage", error=e), err=True)
        return EXIT_USAGE

    timing_ms = round((time.perf_counter() - started) * 1000, 3) if options.timing else None
    report = Report(command=command, inputs=inputs, result=result, timing_ms=timing_ms)
    typer.echo(report.to_json() if options.json_output else render(report))
    return code
