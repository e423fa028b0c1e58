"""``translate``: apply one reduction to a file and write the result.

Every translation writes a JSON sidecar next to its output mapping the new
names back to the objects they stand for.
"""
import json
import logging
from pathlib import Path
from typing import Callable, Dict

import click

from app.cli.common import Payload, emit, format_option, handles_errors, input_path, load_instance, output_path
from app.core.exceptions import FormatError
from app.models.enums import TranslationKind
from app.schemas.bvass import BvasInstance, CoverInstance, ReachInstance
from app.services.formats import labels_path, render_vector, write_instance
from app.services.reductions import (
    atom_names,
    bvas_to_bvass,
    bvass_to_bvas,
    comprehensive_to_formula,
    coverability_to_comprehensive,
    expansive_to_coverability,
    formula_to_bvass,
    state_code,
    to_ordinary,
)
from app.services.syntax import read_corpus, render_formula, write_corpus

logger = logging.getLogger(__name__)


def _write_labels(target: Path, labels: Dict[str, str]) -> None:
    labels_path(target).write_text(json.dumps(labels, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _summary(inst) -> Payload:
    if isinstance(inst, BvasInstance):
        return {
            "dimension": inst.system.dimension,
            "rules": inst.system.rule_count,
            "root": render_vector(inst.root_vector),
            "leaf": render_vector(inst.leaf_vector),
        }
    return {
        "dimension": inst.system.dimension,
        "states": len(inst.system.states),
        "rules": inst.system.rule_count,
        "root": inst.root_state,
        "leaf": inst.leaf_state,
    }


def _write_system(target: Path, inst) -> Payload:
    write_instance(target, inst)
    if isinstance(inst, CoverInstance) and not inst.labels:
        _write_labels(target, {q: q for q in inst.system.states})
    return _summary(inst)


def _formula_to_bvass(source: Path, target: Path) -> Payload:
    formulas = read_corpus(source)
    if len(formulas) != 1:
        raise FormatError(f"{source} must hold exactly one formula, found {len(formulas)}")
    return _write_system(target, formula_to_bvass(formulas[0]))


def _exp_to_cov(source: Path, target: Path) -> Payload:
    return _write_system(target, expansive_to_coverability(load_instance(source, ReachInstance, "a BVASS instance")))


def _cov_to_compr(source: Path, target: Path) -> Payload:
    return _write_system(target, coverability_to_comprehensive(load_instance(source, CoverInstance, "a BVASS instance")))


def _compr_to_formula(source: Path, target: Path) -> Payload:
    inst = load_instance(source, ReachInstance, "a BVASS instance")
    formula = comprehensive_to_formula(inst)
    write_corpus(target, [formula])
    atoms = {atom: q for q, atom in atom_names(inst.system).items()}
    atoms.update({f"e{i}": f"coordinate {i}" for i in range(1, inst.system.dimension + 1)})
    _write_labels(target, atoms)
    return {"formula": render_formula(formula), "atoms": len(atoms)}


def _bvass_to_bvas(source: Path, target: Path) -> Payload:
    inst = load_instance(source, CoverInstance, "a BVASS instance")
    result = bvass_to_bvas(inst)
    write_instance(target, result)
    n, d = len(inst.system.states), inst.system.dimension
    _write_labels(target, {q: render_vector(state_code(i, n, 0, d)) for i, q in enumerate(inst.system.states)})
    return _summary(result)


def _bvas_to_bvass(source: Path, target: Path) -> Payload:
    return _write_system(target, bvas_to_bvass(load_instance(source, BvasInstance, "a BVAS instance")))


def _to_ordinary(source: Path, target: Path) -> Payload:
    inst = load_instance(source, ReachInstance, "a BVASS instance")
    return _write_system(target, inst.model_copy(update={"system": to_ordinary(inst.system)}))


TRANSLATIONS: Dict[TranslationKind, Callable[[Path, Path], Payload]] = {
    TranslationKind.FORMULA_TO_BVASS: _formula_to_bvass,
    TranslationKind.EXP_TO_COV: _exp_to_cov,
    TranslationKind.COV_TO_COMPR: _cov_to_compr,
    TranslationKind.COMPR_TO_FORMULA: _compr_to_formula,
    TranslationKind.BVASS_TO_BVAS: _bvass_to_bvas,
    TranslationKind.BVAS_TO_BVASS: _bvas_to_bvass,
    TranslationKind.TO_ORDINARY: _to_ordinary,
}


@click.command("translate")
@click.argument("kind", type=click.Choice([k.value for k in TranslationKind]))
@click.argument("source", type=input_path)
@click.argument("target", type=output_path)
@format_option
@handles_errors
def translate(kind, source, target, output_format):
    """Translate SOURCE into TARGET along the reduction KIND."""
    kind = TranslationKind(kind)
    summary = TRANSLATIONS[kind](source, target)
    logger.info(f"{kind.value}: {source} -> {target}")
    text = " ".join(f"{k}={v}" for k, v in summary.items())
    emit(output_format, f"{kind.value} {text}", {"kind": kind.value, "output": str(target), **summary})
