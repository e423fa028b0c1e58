"""``roundtrip``: solve an instance directly and through its formula, and compare.

An expansive instance is first turned into a coverability instance; the
coverability verdict is then checked against provability of the formula
built from the comprehensive translation. A witness found within the cap
and an unprovable formula contradict each other; a provable formula
without a witness only means the cap was too small.
"""
import logging
import random
from typing import Optional

import click

from app.cli.common import emit, finish, format_option, handles_errors, input_path, load_instance
from app.core.config import settings
from app.core.exceptions import FormatError, ResourceLimitError
from app.models.enums import Agreement, Mode
from app.models.formula import size
from app.models.sequent import FocusSequent
from app.schemas.bvass import CoverInstance, ReachInstance
from app.services.corpus import random_cover_instance
from app.services.fr_prover import fr_prove
from app.services.reductions import comprehensive_to_formula, coverability_to_comprehensive, expansive_to_coverability
from app.services.solvers import solve_coverability

logger = logging.getLogger(__name__)

UNKNOWN = "UNKNOWN"


def as_coverability(inst: CoverInstance) -> CoverInstance:
    if isinstance(inst, ReachInstance) and inst.mode == Mode.EXPANSIVE:
        return expansive_to_coverability(inst)
    if isinstance(inst, ReachInstance) and inst.mode == Mode.COMPREHENSIVE:
        raise FormatError("roundtrip starts from a plain or expansive instance")
    return inst


def compare(cover: bool, provable: Optional[bool]) -> Agreement:
    if provable is None:
        return Agreement.UNDECIDED
    if cover:
        return Agreement.AGREE if provable else Agreement.DISAGREE
    return Agreement.UNDECIDED if provable else Agreement.AGREE


def roundtrip_instance(inst: CoverInstance, cap: int, budget: Optional[int] = None,
                       tolerate_budget: bool = False) -> dict:
    """Coverability at ``cap`` next to the provability of the translated formula.

    With ``tolerate_budget`` an exhausted formula search is reported as
    UNDECIDED instead of raised.
    """
    cover_inst = as_coverability(inst)
    solved = solve_coverability(cover_inst, cap)
    formula = comprehensive_to_formula(coverability_to_comprehensive(cover_inst))
    try:
        verdict = fr_prove(FocusSequent((), None, formula), budget).verdict
    except ResourceLimitError as e:
        if not tolerate_budget:
            raise
        logger.info(f"formula of size {size(formula)} left undecided: {e.message}")
        verdict = None
    cover = solved.verdict.positive
    outcome = compare(cover, None if verdict is None else verdict.positive)
    if outcome == Agreement.DISAGREE:
        logger.warning(f"verdicts disagree at cap {cap}: {solved.verdict.value} against {verdict.value}")
    return {
        "outcome": outcome.value,
        "cover": cover,
        "formula_verdict": UNKNOWN if verdict is None else verdict.value,
        "formula_size": size(formula),
    }


def _line(outcome: dict) -> str:
    return f"{outcome['outcome']} cover={'YES' if outcome['cover'] else 'NO'} formula={outcome['formula_verdict']}"


@click.command("roundtrip")
@click.argument("source", type=input_path, required=False)
@click.option("--cap", type=click.IntRange(min=0), default=None, help="Cap for the coverability solver.")
@click.option("--budget", type=click.IntRange(min=1), default=None, help="Node budget for each formula search.")
@click.option("--random", "count", type=click.IntRange(min=1), default=None,
              help="Run on this many seeded random instances instead of SOURCE.")
@click.option("--seed", type=int, default=None, help="Seed for --random (default from settings).")
@format_option
@handles_errors
def roundtrip(source, cap, budget, count, seed, output_format):
    """Compare the verdicts of an instance and of its formula translation.

    Exits 1 only when a witness contradicts an unprovable formula.
    """
    cap = settings.DEFAULT_CAP if cap is None else cap
    if count is None:
        if source is None:
            raise click.UsageError("give SOURCE or --random N")
        outcome = roundtrip_instance(load_instance(source, CoverInstance, "a BVASS instance"), cap, budget)
        emit(output_format, _line(outcome), outcome)
        finish(outcome["outcome"] != Agreement.DISAGREE.value)
        return

    seed = settings.DEFAULT_SEED if seed is None else seed
    rng = random.Random(seed)
    outcomes = [
        roundtrip_instance(random_cover_instance(rng), cap, budget, tolerate_budget=True)
        for _ in range(count)
    ]
    tally = {a: sum(o["outcome"] == a.value for o in outcomes) for a in Agreement}
    logger.info(f"roundtrip on {count} random instances (seed {seed}): "
                + ", ".join(f"{n} {a.value.lower()}" for a, n in tally.items()))
    summary = (
        f"agree {tally[Agreement.AGREE]}/{count} undecided {tally[Agreement.UNDECIDED]} "
        f"disagree {tally[Agreement.DISAGREE]}"
    )
    text = "\n".join([_line(o) for o in outcomes] + [summary])
    data = {"seed": seed, "cap": cap, "tally": {a.value: n for a, n in tally.items()}, "results": outcomes}
    emit(output_format, text, data)
    finish(tally[Agreement.DISAGREE] == 0)
