"""Options, output helpers and error handling shared by every verb.

Exit statuses depend on the verdict only: 0 for a positive answer, 1 for a
negative one, 2 for malformed input or misuse and 3 for an exhausted budget.
"""
import functools
import logging
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Type, TypeVar

import click

from app.core.exceptions import FormatError, ReasoningError
from app.models.proof import FrProof, LrProof
from app.schemas.common import CommandResponse, ErrorCode
from app.services.formats import read_instance, render_tree, render_tree_json

logger = logging.getLogger(__name__)

EXIT_POSITIVE = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2

Payload = Dict[str, Any]
InstanceT = TypeVar("InstanceT")

format_option = click.option(
    "--format", "output_format",
    type=click.Choice(["text", "json"]), default="text", show_default=True,
    help="Plain verdict lines or a JSON envelope.",
)

input_path = click.Path(exists=True, dir_okay=False, path_type=Path)
output_path = click.Path(dir_okay=False, writable=True, path_type=Path)


def emit(output_format: str, text: str, data: Payload) -> None:
    if output_format == "json":
        click.echo(CommandResponse[Payload].success_response(data).model_dump_json())
    else:
        click.echo(text)


def finish(positive: bool) -> None:
    click.get_current_context().exit(EXIT_POSITIVE if positive else EXIT_NEGATIVE)


def _fail(output_format: str, code: ErrorCode, message: str, details: Optional[Payload], status: int) -> None:
    if output_format == "json":
        click.echo(CommandResponse[Payload].error_response(code, message, details).model_dump_json())
    click.echo(f"error: {message}", err=True)
    click.get_current_context().exit(status)


def handles_errors(command: Callable) -> Callable:
    """Turn library errors into a one-line diagnostic and their exit status."""
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        output_format = kwargs.get("output_format", "text")
        try:
            return command(*args, **kwargs)
        except ReasoningError as e:
            logger.info(f"{command.__name__} failed with {e.code.value}: {e.message}")
            _fail(output_format, e.code, e.message, e.details, e.exit_status)
        except OSError as e:
            message = f"{e.filename}: {e.strerror}" if e.filename else str(e)
            logger.info(f"{command.__name__} failed on I/O: {message}")
            _fail(output_format, ErrorCode.IO_ERROR, message, None, EXIT_USAGE)

    return wrapper


def load_instance(path: Path, expected: Type[InstanceT], role: str) -> InstanceT:
    inst = read_instance(path)
    if not isinstance(inst, expected):
        raise FormatError(f"{path} does not hold {role}")
    return inst


def write_tree(path: Path, tree) -> None:
    """Write a proof or witness, as JSON when the file name ends in ``.json``."""
    path = Path(path)
    text = render_tree_json(tree) + "\n" if path.suffix == ".json" else render_tree(tree)
    path.write_text(text, encoding="utf-8")
    kind = "proof" if isinstance(tree, (LrProof, FrProof)) else "witness"
    logger.info(f"Wrote {kind} with {tree.size()} nodes to {path}")
