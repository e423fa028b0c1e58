import pytest

from app.core.config import settings
from app.models.derivation import Configuration, DeductionTree, VectorTree
from app.models.enums import StepKind
from app.schemas.bvass import Bvas
from app.services.corpus import random_reach_instance
from app.services.deduction import (
    check_bvas_tree,
    check_deduction_tree,
    enumerate_trees,
    enumerate_witnesses,
)
from app.services.solvers import saturate


def leaf(state="leaf", vector=(0,)):
    return DeductionTree(Configuration(state, vector), StepKind.LEAF)


def test_valid_tree_reports_used_rules(tiny_system):
    tree = DeductionTree(Configuration("r", (1,)), StepKind.UNARY, 0, (leaf(),))
    report = check_deduction_tree(tiny_system, tree, "leaf", expansive=False)
    assert report
    assert report.used_rules == [0]


def test_leaf_must_be_the_leaf_configuration(tiny_system):
    report = check_deduction_tree(tiny_system, leaf("r"), "leaf", expansive=False)
    assert not report
    assert report.path == []
    assert "leaf must be" in report.message


def test_expansion_needs_expansive_mode(duplication_instance):
    sys = duplication_instance.system
    tree = DeductionTree(
        Configuration("p", (1,)), StepKind.EXPANSION, 1,
        (DeductionTree(Configuration("p", (2,)), StepKind.SPLIT, 2, (
            DeductionTree(Configuration("s", (1,)), StepKind.UNARY, 1, (leaf(),)),
            DeductionTree(Configuration("s", (1,)), StepKind.UNARY, 1, (leaf(),)),
        )),),
    )
    assert check_deduction_tree(sys, tree, "leaf", expansive=True)
    report = check_deduction_tree(sys, tree, "leaf", expansive=False)
    assert not report
    assert report.message == "Expansion: expansion outside expansive mode"


def test_first_bad_node_is_reported_by_path(duplication_instance):
    sys = duplication_instance.system
    bad_split = DeductionTree(Configuration("p", (2,)), StepKind.SPLIT, 2, (
        DeductionTree(Configuration("s", (1,)), StepKind.UNARY, 1, (leaf(),)),
        leaf("s"),
    ))
    tree = DeductionTree(Configuration("r", (1,)), StepKind.UNARY, 0, (bad_split,))
    report = check_deduction_tree(sys, tree, "leaf", expansive=False)
    assert not report
    assert report.path == [0]
    assert report.message.startswith("Split:")


@pytest.mark.parametrize("tree, fragment", [
    (DeductionTree(Configuration("r", (1,)), StepKind.SPLIT, 0, (leaf(),)), "is a unary rule"),
    (DeductionTree(Configuration("r", (1,)), StepKind.UNARY, 5, (leaf(),)), "no rule with index 5"),
    (DeductionTree(Configuration("r", (-1,)), StepKind.UNARY, 0, (leaf(),)), "negative coordinate"),
    (DeductionTree(Configuration("x", (1,)), StepKind.UNARY, 0, (leaf(),)), "unknown state"),
])
def test_malformed_steps(tiny_system, tree, fragment):
    report = check_deduction_tree(tiny_system, tree, "leaf", expansive=True)
    assert not report
    assert fragment in report.message


def test_bvas_tree_checks():
    sys = Bvas(dimension=1, unary_rules=((1,),), split_rules=((-1,),))
    one = VectorTree((1,), StepKind.UNARY, 0, (VectorTree((0,), StepKind.LEAF),))
    assert check_bvas_tree(sys, one, (0,)).used_rules == [0]
    joined = VectorTree((1,), StepKind.SPLIT, 1, (one, one))
    assert check_bvas_tree(sys, joined, (0,))

    report = check_bvas_tree(sys, VectorTree((2,), StepKind.SPLIT, 1, (one, one)), (0,))
    assert not report and report.path == []
    report = check_bvas_tree(sys, one, (1,))
    assert not report and report.path == [0]


def test_enumeration_agrees_with_saturation(duplication_instance):
    sys = duplication_instance.system
    for expansive in (False, True):
        derived = saturate(sys, "leaf", 3, expansive)
        for q in sys.states:
            enumerated = enumerate_trees(sys, q, "leaf", expansive, 20, 3, track_usage=False)
            assert sorted(v for v, _ in enumerated) == derived.vectors(q), (q, expansive)


def test_enumeration_tracks_rule_usage(duplication_instance):
    sys = duplication_instance.system
    found = enumerate_trees(sys, "r", "leaf", True, 8, 2)
    assert ((0,), frozenset({0, 1, 2})) in found
    assert ((0,), frozenset()) not in found


def test_enumerated_witnesses_check(duplication_instance):
    sys = duplication_instance.system
    witnesses = enumerate_witnesses(sys, "r", "leaf", True, 8, 2)
    assert witnesses
    for (vector, used), tree in witnesses.items():
        report = check_deduction_tree(sys, tree, "leaf", expansive=True)
        assert report
        assert tree.node == Configuration("r", vector)
        assert frozenset(report.used_rules) == used


def test_enumeration_height_cap_limits_trees(duplication_instance):
    sys = duplication_instance.system
    # the shortest tree for (r, 0) has height 4
    assert ((0,), frozenset({0, 1, 2})) not in enumerate_trees(sys, "r", "leaf", True, 3, 2)
    with pytest.raises(ValueError):
        enumerate_trees(sys, "r", "leaf", True, -1, 2)


@pytest.mark.parametrize("count", [20, pytest.param(100, marks=pytest.mark.slow)])
def test_enumeration_agrees_with_saturation_on_random_systems(rng, count):
    for _ in range(count):
        sys = random_reach_instance(rng).system
        leaf = sys.states[-1]
        expansive = rng.random() < 0.5
        derived = saturate(sys, leaf, 3, expansive)
        for q in sys.states:
            # no height limit in practice: the enumeration stops at its fixpoint
            enumerated = enumerate_trees(sys, q, leaf, expansive, 10_000, 3, track_usage=False)
            assert sorted(v for v, _ in enumerated) == derived.vectors(q), (sys, q, expansive)


def test_height_cap_defaults_to_settings(tiny_system, monkeypatch):
    monkeypatch.setattr(settings, "HEIGHT_CAP", 0)
    assert enumerate_trees(tiny_system, "r", "leaf", False) == set()
    monkeypatch.setattr(settings, "HEIGHT_CAP", 1)
    assert ((1,), frozenset({0})) in enumerate_trees(tiny_system, "r", "leaf", False)
