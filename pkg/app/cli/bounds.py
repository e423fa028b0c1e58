"""``bounds``: completeness thresholds for cap-bounded coverability."""
import logging

import click

from app.cli.common import emit, format_option, handles_errors, input_path
from app.schemas.bvass import BvasInstance
from app.services.formats import read_instance
from app.services.solvers import bvas_bounds, coverability_bounds

logger = logging.getLogger(__name__)


@click.command("bounds")
@click.argument("source", type=input_path)
@click.option("--cap", type=click.IntRange(min=0), default=None, help="Report whether this cap reaches the value bound.")
@format_option
@handles_errors
def bounds(source, cap, output_format):
    """Print the norm, height and value bounds of the instance in SOURCE.

    A BVASS instance is measured through its BVAS translation.
    """
    inst = read_instance(source)
    if isinstance(inst, BvasInstance):
        triple = bvas_bounds(inst.system, inst.root_vector)
    else:
        triple = coverability_bounds(inst)
    logger.info(f"bounds of {source}: dimension {triple.dimension}, base {triple.base}")

    text = f"L={triple.base} H={triple.height_text} B={triple.value_text}"
    data = triple.model_dump()
    if cap is not None:
        data["cap"] = cap
        data["meets"] = triple.meets(cap)
        text += f"\ncap {cap} {'meets' if triple.meets(cap) else 'is below'} B"
    emit(output_format, text, data)
