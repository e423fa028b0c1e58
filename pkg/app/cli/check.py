"""``check``: validate proof and witness files independently of the solvers."""
import logging
from pathlib import Path
from typing import Optional

import click

from app.cli.common import emit, finish, format_option, handles_errors, input_path
from app.core.exceptions import FormatError
from app.models.derivation import VectorTree
from app.models.enums import Calculus, FrRule, Mode
from app.schemas.bvass import BvasInstance, ReachInstance, zero_vector
from app.schemas.common import CheckReport
from app.services.deduction import check_bvas_tree, check_deduction_tree
from app.services.formats import parse_proof_text, parse_tree_spec, parse_witness_text, read_instance
from app.services.fr_prover import check_fr_proof
from app.services.lr_prover import check_lr_proof

logger = logging.getLogger(__name__)

_FOCUS_RULES = {r.value for r in FrRule}


def detect_calculus(text: str) -> Calculus:
    """Focusing proofs are recognised by the rule at their root."""
    step = str(parse_tree_spec(text)[0]).split("{", 1)[0]
    return Calculus.FR if step in _FOCUS_RULES else Calculus.LR


def check_proof_text(text: str, calculus: Optional[Calculus] = None) -> CheckReport:
    calculus = calculus or detect_calculus(text)
    proof = parse_proof_text(text, calculus)
    return check_lr_proof(proof) if calculus == Calculus.LR else check_fr_proof(proof)


def check_witness_text(text: str, inst, goal: str) -> CheckReport:
    """Check a witness against an instance and its root requirement.

    ``goal`` is ``cover`` (root in the root state, or covering the root
    vector) or ``reach`` (root exactly at the root state with the zero vector).
    Comprehensive instances also need every rule to occur.
    """
    tree = parse_witness_text(text)
    if isinstance(inst, BvasInstance):
        if not isinstance(tree, VectorTree):
            raise FormatError("a BVAS instance needs a vector tree witness")
        if goal != "cover":
            raise FormatError("BVAS instances support coverability only")
        report = check_bvas_tree(inst.system, tree, inst.leaf_vector)
        if report and not all(a >= b for a, b in zip(tree.node, inst.root_vector)):
            return CheckReport.fail([], f"root {tree.node} does not cover {tuple(inst.root_vector)}")
        return report

    if isinstance(tree, VectorTree):
        raise FormatError("a BVASS instance needs a deduction tree witness")
    report = check_deduction_tree(inst.system, tree, inst.leaf_state, inst.expansive)
    if not report:
        return report
    root = tree.node
    if root.state != inst.root_state:
        return CheckReport.fail([], f"root is in state {root.state}, not {inst.root_state}")
    if goal == "reach" and root.vector != zero_vector(inst.system.dimension):
        return CheckReport.fail([], f"root vector {root.vector} is not zero")
    if goal == "reach" and inst.mode == Mode.COMPREHENSIVE:
        missing = sorted(set(range(inst.system.rule_count)) - set(report.used_rules))
        if missing:
            return CheckReport.fail([], f"rules {missing} are never used")
    return report


@click.command("check")
@click.argument("artifact", type=click.Choice(["proof", "witness"]))
@click.argument("source", type=input_path)
@click.option("--system", "system_path", type=input_path, help="Instance file a witness refers to.")
@click.option("--calculus", type=click.Choice([c.value for c in Calculus]), default=None,
              help="Calculus of a proof (detected from its root rule by default).")
@click.option("--goal", type=click.Choice(["cover", "reach"]), default="cover", show_default=True,
              help="Root requirement of a witness.")
@click.option("--mode", type=click.Choice([m.value for m in Mode]), default=None,
              help="Override the semantics declared in the instance file.")
@format_option
@handles_errors
def check(artifact, source: Path, system_path, calculus, goal, mode, output_format):
    """Validate the proof or witness in SOURCE."""
    text = source.read_text(encoding="utf-8")
    if artifact == "proof":
        report = check_proof_text(text, Calculus(calculus) if calculus else None)
    else:
        if system_path is None:
            raise click.UsageError("checking a witness needs --system")
        inst = read_instance(system_path)
        if mode is not None:
            if not isinstance(inst, ReachInstance):
                raise FormatError("--mode applies to BVASS instances only")
            inst = inst.model_copy(update={"mode": Mode(mode)})
        report = check_witness_text(text, inst, goal)

    logger.info(f"{artifact} {source}: valid={report.valid}")
    line = "VALID" if report else f"INVALID at {report.path}: {report.message}"
    emit(output_format, line, {"artifact": artifact, **report.model_dump()})
    finish(report.valid)
