"""``solve``: cap-bounded coverability and reachability."""
import logging

import click

from app.cli.common import emit, finish, format_option, handles_errors, input_path, output_path, write_tree
from app.core.config import settings
from app.core.exceptions import FormatError
from app.models.enums import Mode
from app.schemas.bvass import BvasInstance
from app.services.formats import read_instance
from app.services.solvers import solve_bvas_coverability, solve_coverability, solve_reachability

logger = logging.getLogger(__name__)


@click.command("solve")
@click.argument("problem", type=click.Choice(["cover", "reach"]))
@click.argument("source", type=input_path)
@click.option("--cap", type=click.IntRange(min=0), default=None,
              help="Largest counter value explored (default from settings).")
@click.option("--mode", type=click.Choice([m.value for m in Mode]), default=None,
              help="Override the semantics declared in the instance file.")
@click.option("--emit-witness", type=output_path, help="Write the witness tree here when one is found.")
@click.option("--budget", type=click.IntRange(min=1), default=None, help="Memory budget in bytes.")
@format_option
@handles_errors
def solve(problem, source, cap, mode, emit_witness, budget, output_format):
    """Search for a witness of PROBLEM on the instance in SOURCE."""
    cap = settings.DEFAULT_CAP if cap is None else cap
    inst = read_instance(source)
    if isinstance(inst, BvasInstance):
        if problem != "cover":
            raise FormatError("BVAS instances support coverability only")
        result = solve_bvas_coverability(inst, cap, budget)
    else:
        if mode is not None:
            inst = inst.model_copy(update={"mode": Mode(mode)})
        if problem == "cover":
            if inst.mode != Mode.PLAIN:
                logger.warning(f"coverability is solved under plain semantics; ignoring mode {inst.mode.value}")
            result = solve_coverability(inst, cap, budget)
        else:
            result = solve_reachability(inst, cap, budget)

    if result.witness is not None and emit_witness is not None:
        write_tree(emit_witness, result.witness)
    emit(output_format, result.verdict.value, {
        "problem": problem,
        "cap": cap,
        "verdict": result.verdict.value,
        "explored": result.explored,
        "witness_nodes": None if result.witness is None else result.witness.size(),
    })
    finish(result.verdict.positive)
