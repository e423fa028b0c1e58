import pytest
from pydantic import ValidationError

from app.models.derivation import Configuration, DeductionTree, materialize
from app.models.enums import Mode, StepKind
from app.schemas.bvass import (
    Bvas,
    BvasInstance,
    Bvass,
    BoundTriple,
    CoordinateMask,
    CoverInstance,
    ReachInstance,
    SplitRule,
    UnaryRule,
    unit_coordinate,
    unit_vector,
)


def test_unit_vectors():
    assert unit_vector(3, 2) == (0, 1, 0)
    assert unit_vector(2, 1, -1) == (-1, 0)
    assert unit_coordinate((0, -1)) == (2, -1)
    assert unit_coordinate((0, 2)) is None
    assert unit_coordinate((1, 1)) is None
    assert unit_coordinate(()) is None


def test_rule_indices_number_unary_rules_first(duplication_instance):
    sys = duplication_instance.system
    assert sys.rule_count == 3
    assert isinstance(sys.rule(2), SplitRule)
    assert sys.is_split(2) and not sys.is_split(1)
    assert sys.outgoing("p") == [2]
    assert sys.outgoing("r") == [0]


@pytest.mark.parametrize("kwargs", [
    dict(states=("q", "q"), dimension=1),
    dict(states=("a b",), dimension=1),
    dict(states=("q",), dimension=1, unary_rules=(UnaryRule(source="q", vector=(1,), target="x"),)),
    dict(states=("q",), dimension=2, unary_rules=(UnaryRule(source="q", vector=(1,), target="q"),)),
    dict(states=("q",), dimension=1, unary_rules=(UnaryRule(source="q", vector=(2,), target="q"),)),
    dict(states=("q",), dimension=1, split_rules=(SplitRule(source="q", left="q", right="x"),)),
    dict(states=("q",), dimension=-1),
])
def test_invalid_systems(kwargs):
    with pytest.raises(ValidationError):
        Bvass(**kwargs)


def test_general_systems_allow_any_vector():
    sys = Bvass(
        states=("q",), dimension=2, ordinary=False,
        unary_rules=(UnaryRule(source="q", vector=(2, -3), target="q"),),
    )
    assert sys.rule(0).vector == (2, -3)


def test_instances_check_their_states(tiny_system):
    with pytest.raises(ValidationError):
        CoverInstance(system=tiny_system, root_state="nowhere", leaf_state="leaf")
    inst = ReachInstance(system=tiny_system, root_state="r", leaf_state="leaf")
    assert inst.mode == Mode.PLAIN and not inst.expansive
    assert inst.model_copy(update={"mode": Mode.COMPREHENSIVE}).expansive


def test_bvas_instances_are_natural():
    sys = Bvas(dimension=2, unary_rules=((1, -1),))
    with pytest.raises(ValidationError):
        BvasInstance(system=sys, root_vector=(1,), leaf_vector=(0, 0))
    with pytest.raises(ValidationError):
        BvasInstance(system=sys, root_vector=(-1, 0), leaf_vector=(0, 0))
    with pytest.raises(ValidationError):
        Bvas(dimension=1, split_rules=((1, 1),))


def test_coordinate_mask():
    mask = CoordinateMask(dimension=3, coordinates=frozenset({1, 3}))
    assert mask.apply((4, 5, 6)) == (4, 0, 6)
    assert mask.label() == "1,3"
    assert not mask.full
    assert mask.including(2).full
    assert [m.label() for m in CoordinateMask.every(2)] == ["", "1", "2", "1,2"]
    with pytest.raises(ValidationError):
        CoordinateMask(dimension=2, coordinates=frozenset({3}))


def test_bound_triple_small_dimension():
    triple = BoundTriple.compute(1, 7)
    assert triple.exponent == 6
    assert triple.height == 117649
    assert triple.value == 13841287201
    assert triple.exact
    assert not triple.meets(6)
    assert triple.meets(13841287201)


def test_bound_triple_symbolic_when_huge():
    triple = BoundTriple.compute(3, 5)
    assert triple.exponent == 362880
    assert not triple.exact
    assert triple.height_text == "5^362880"
    assert triple.value_text == "5^725760"
    assert not triple.meets(10 ** 9)


def test_materialize_and_tree_measures():
    provenance = {
        ("leaf", (0,)): (StepKind.LEAF, None, ()),
        ("r", (1,)): (StepKind.UNARY, 0, (("leaf", (0,)),)),
    }
    tree = materialize(provenance, ("r", (1,)))
    assert tree == DeductionTree(
        Configuration("r", (1,)), StepKind.UNARY, 0,
        (DeductionTree(Configuration("leaf", (0,)), StepKind.LEAF),),
    )
    assert tree.size() == 2
    assert tree.height() == 1
    assert tree.used_rules() == frozenset({0})
