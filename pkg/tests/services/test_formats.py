import json
from pathlib import Path

import pytest

from app.core.exceptions import FormatError
from app.models.enums import Calculus, Mode
from app.models.sequent import FocusSequent, Sequent
from app.schemas.bvass import Bvas, BvasInstance
from app.services.formats import (
    labels_path,
    parse_bvass_text,
    parse_instance_text,
    parse_proof_text,
    parse_tree_spec,
    parse_vector,
    parse_witness_text,
    read_instance,
    render_bvas,
    render_bvass,
    render_rule_vector,
    render_tree,
    render_tree_json,
    write_instance,
)
from app.services.fr_prover import fr_prove
from app.services.lr_prover import lr_prove
from app.services.reductions import formula_to_bvass
from app.services.solvers import solve_bvas_coverability, solve_reachability
from app.services.syntax import parse_formula, parse_sequent

DATA = Path(__file__).resolve().parent.parent / "data"

COUNTING_BVAS = """\
dim 1
root (2)
leaf (0)
unary (3)
split (-2)
"""


def test_vectors():
    assert parse_vector("+2", 3) == (0, 1, 0)
    assert parse_vector("-1", 2) == (-1, 0)
    assert parse_vector("(2,-3)", 2) == (2, -3)
    assert parse_vector("()", 0) == ()
    assert render_rule_vector((0, -1)) == "-2"
    assert render_rule_vector((2, 0)) == "(2,0)"
    with pytest.raises(FormatError):
        parse_vector("+3", 2)
    with pytest.raises(FormatError):
        parse_vector("(1,x)", 2)
    with pytest.raises(FormatError) as info:
        parse_vector("(1)", 2, line=7)
    assert info.value.line == 7


def test_parse_tiny_instance_file(tiny_instance):
    inst = read_instance(DATA / "tiny.bvass")
    assert inst == tiny_instance
    assert inst.system.ordinary
    assert inst.mode == Mode.PLAIN


def test_render_and_parse_bvass(duplication_instance):
    text = render_bvass(duplication_instance)
    assert text.splitlines()[:3] == ["dim 1", "mode expansive", "ordinary yes"]
    assert "split p s s" in text
    assert parse_bvass_text(text) == duplication_instance


def test_general_vectors_turn_ordinary_off():
    inst = parse_bvass_text("dim 2\nroot q\nleaf p\nunary q (2,-1) p\n")
    assert not inst.system.ordinary
    assert inst.system.unary_rules[0].vector == (2, -1)


@pytest.mark.parametrize("text, line", [
    ("root r\nleaf leaf\n", None),
    ("dim x\n", 1),
    ("dim 1\nroot r\nleaf leaf\nunary r -2 leaf\n", 4),
    ("dim 1\nroot r\nleaf leaf\nfrob r\n", 4),
    ("dim 1\n# comment\nmode lazy\nroot r\nleaf leaf\n", 3),
    ("dim 1\nroot r\n", None),
    ("dim 1\nordinary yes\nroot r\nleaf l\nunary r (2) l\n", None),
])
def test_instance_errors(text, line):
    with pytest.raises(FormatError) as info:
        parse_bvass_text(text)
    assert info.value.line == line
    assert info.value.exit_status == 2


def test_bvas_files():
    inst = parse_instance_text(COUNTING_BVAS)
    assert isinstance(inst, BvasInstance)
    assert inst.system == Bvas(dimension=1, unary_rules=((3,),), split_rules=((-2,),))
    assert inst.root_vector == (2,)
    assert parse_instance_text(render_bvas(inst)) == inst
    with pytest.raises(FormatError):
        parse_instance_text("dim 1\nroot (1)\nunary (1)\n")
    with pytest.raises(FormatError):
        parse_instance_text("dim 1\nroot (-1)\nleaf (0)\n")


def test_instance_files_keep_labels(tmp_path):
    inst = formula_to_bvass(parse_formula("a->a"))
    path = tmp_path / "identity.bvass"
    write_instance(path, inst)
    sidecar = labels_path(path)
    assert sidecar.name == "identity.bvass.labels.json"
    assert json.loads(sidecar.read_text(encoding="utf-8"))["f2"] == "a->a"
    assert read_instance(path) == inst


def test_broken_label_sidecar(tmp_path):
    path = tmp_path / "tiny.bvass"
    path.write_text((DATA / "tiny.bvass").read_text(encoding="utf-8"), encoding="utf-8")
    labels_path(path).write_text("{not json", encoding="utf-8")
    with pytest.raises(FormatError):
        read_instance(path)


def test_witness_trees_round_trip(duplication_instance):
    witness = solve_reachability(duplication_instance, 2).witness
    text = render_tree(witness)
    assert text.splitlines()[0] == "Unary#0 r (0)"
    assert parse_witness_text(text) == witness
    assert parse_witness_text(render_tree_json(witness)) == witness


def test_vector_trees_round_trip():
    inst = parse_instance_text(COUNTING_BVAS)
    witness = solve_bvas_coverability(inst, 3).witness
    assert render_tree(witness) == "Unary#0 (3)\n  Leaf (0)\n"
    assert parse_witness_text(render_tree(witness)) == witness


def test_proof_trees_round_trip():
    lr = lr_prove(Sequent((), parse_formula("(a->a->b)->a->b"))).proof
    assert parse_proof_text(render_tree(lr)) == lr
    assert parse_proof_text(render_tree_json(lr)) == lr
    fused = lr_prove(parse_sequent("a o b |- b o a")).proof
    assert parse_proof_text(render_tree(fused)) == fused

    fr = fr_prove(FocusSequent((), None, parse_formula("(a->b)->(b->a)->a->a"))).proof
    assert parse_proof_text(render_tree(fr), Calculus.FR) == fr


def test_tree_json_form():
    spec = json.loads(render_tree_json(lr_prove(parse_sequent("a |- a")).proof))
    assert spec[1] == "a |- a"
    assert spec[2] == []
    assert parse_tree_spec(json.dumps(spec)) == spec


@pytest.mark.parametrize("text, line", [
    ("ImpR |- a->a\n   Id a |- a\n", 2),
    ("ImpR |- a->a\n    Id a |- a\n", 2),
    ("Id a |- a\nId a |- a\n", 2),
    ("Nope |- a\n", 1),
    ("ImpR |- a->\n", 1),
])
def test_proof_text_errors(text, line):
    with pytest.raises(FormatError) as info:
        parse_proof_text(text)
    assert info.value.line == line


def test_witness_text_errors():
    with pytest.raises(FormatError):
        parse_witness_text("\n# nothing here\n")
    with pytest.raises(FormatError) as info:
        parse_witness_text("Frob r (0)\n")
    assert info.value.line == 1
    with pytest.raises(FormatError) as info:
        parse_witness_text("Unary#0 r (1)\n  Leaf leaf (x)\n")
    assert info.value.line == 2
    with pytest.raises(FormatError):
        parse_witness_text("[\"Leaf\", \"leaf (0)\"")
