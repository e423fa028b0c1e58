"""``prove``: decide a formula or sequent, or every formula of a corpus file."""
import logging
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional, Tuple

import click

from app.cli.common import emit, finish, format_option, handles_errors, input_path, output_path, write_tree
from app.core.config import settings
from app.core.exceptions import ReasoningError
from app.models.enums import Calculus
from app.models.formula import Formula
from app.models.results import ProofResult
from app.models.sequent import FocusSequent, Sequent
from app.services.fr_prover import fr_prove
from app.services.lr_prover import lr_prove, lr_prove_bounded
from app.services.syntax import parse_formula, parse_sequent, read_corpus, render_formula, render_sequent

logger = logging.getLogger(__name__)


def parse_goal(text: str) -> Sequent:
    """A sequent when the text contains a turnstile, otherwise a theorem to prove."""
    if "|-" in text:
        return parse_sequent(text)
    return Sequent((), parse_formula(text))


def run_prover(goal: Sequent, calculus: Calculus, budget: Optional[int] = None, depth: Optional[int] = None) -> ProofResult:
    if depth is not None:
        return lr_prove_bounded(goal, depth)
    if calculus == Calculus.FR:
        return fr_prove(FocusSequent(goal.antecedent, None, goal.succedent), budget)
    return lr_prove(goal, budget)


def _prove_corpus_entry(job: Tuple[Formula, str, Optional[int], Optional[int]]) -> Tuple[str, Optional[str], int]:
    # runs in worker processes; errors travel back as plain values
    formula, calculus, budget, depth = job
    try:
        result = run_prover(Sequent((), formula), Calculus(calculus), budget, depth)
        return result.verdict.value, None, 0
    except ReasoningError as e:
        return "ERROR", e.message, e.exit_status


def _prove_corpus(path: Path, calculus: Calculus, budget, depth, jobs: int, output_format: str) -> None:
    formulas = read_corpus(path)
    work = [(f, calculus.value, budget, depth) for f in formulas]
    if jobs > 1 and len(work) > 1:
        logger.info(f"Proving {len(work)} formulas with {jobs} worker processes")
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_prove_corpus_entry, work, chunksize=8))
    else:
        outcomes = [_prove_corpus_entry(job) for job in work]

    rows = []
    status = 0
    for formula, (verdict, error, exit_status) in zip(formulas, outcomes):
        rows.append({"formula": render_formula(formula), "verdict": verdict, "error": error})
        status = max(status, exit_status)
    text = "\n".join(
        f"{r['verdict']}\t{r['formula']}" + (f"\t{r['error']}" if r["error"] else "") for r in rows
    )
    emit(output_format, text, {"calculus": calculus.value, "results": rows})
    click.get_current_context().exit(status)


@click.command("prove")
@click.argument("goal", required=False)
@click.option("--calculus", type=click.Choice([c.value for c in Calculus]), default=Calculus.LR.value,
              show_default=True, help="Sequent calculus or focusing calculus.")
@click.option("--emit-proof", type=output_path, help="Write the proof tree here when one is found.")
@click.option("--corpus", type=input_path, help="Prove every formula of a corpus file instead.")
@click.option("--jobs", type=click.IntRange(min=1), default=None, help="Worker processes for --corpus.")
@click.option("--budget", type=click.IntRange(min=1), default=None, help="Search node budget.")
@click.option("--depth", type=click.IntRange(min=0), default=None,
              help="Use the unpruned bounded search up to this proof height.")
@format_option
@handles_errors
def prove(goal, calculus, emit_proof, corpus, jobs, budget, depth, output_format):
    """Decide GOAL, a formula such as "a->a" or a sequent "a, a->b |- b"."""
    calculus = Calculus(calculus)
    if depth is not None and calculus != Calculus.LR:
        raise click.UsageError("--depth applies to the lr calculus only")
    if corpus is not None:
        if goal is not None:
            raise click.UsageError("give either GOAL or --corpus, not both")
        _prove_corpus(corpus, calculus, budget, depth, jobs or settings.JOBS, output_format)
        return
    if goal is None:
        raise click.UsageError("missing GOAL")

    sequent = parse_goal(goal)
    result = run_prover(sequent, calculus, budget, depth)
    logger.info(f"{render_sequent(sequent)}: {result.verdict.value}")
    if result.proof is not None and emit_proof is not None:
        write_tree(emit_proof, result.proof)
    emit(output_format, result.verdict.value, {
        "goal": render_sequent(sequent),
        "calculus": calculus.value,
        "verdict": result.verdict.value,
        "height": result.height,
        "proof_nodes": None if result.proof is None else result.proof.size(),
    })
    finish(result.verdict.positive)
