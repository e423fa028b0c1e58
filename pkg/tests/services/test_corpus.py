import random

import pytest

from app.models.enums import Mode
from app.models.formula import Fusion, Imp, is_implicational, size
from app.schemas.bvass import unit_coordinate
from app.services.corpus import (
    enumerate_formulas,
    random_bvas_instance,
    random_bvass,
    random_cover_instance,
    random_formula,
    random_reach_instance,
)


@pytest.mark.parametrize("max_size, count", [(1, 2), (3, 6), (5, 22), (7, 102), (9, 550)])
def test_enumeration_counts(max_size, count):
    formulas = list(enumerate_formulas(max_size=max_size))
    assert len(formulas) == count
    assert len(set(formulas)) == count


def test_enumeration_is_smallest_first():
    sizes = [size(f) for f in enumerate_formulas(max_size=7)]
    assert sizes == sorted(sizes)
    assert all(is_implicational(f) for f in enumerate_formulas(max_size=7))


def test_random_formulas_are_reproducible():
    first = [random_formula(random.Random(7), 15) for _ in range(3)]
    second = [random_formula(random.Random(7), 15) for _ in range(3)]
    assert first == second


def test_random_formula_size(rng):
    for _ in range(200):
        f = random_formula(rng, 11)
        assert size(f) <= 11
        assert is_implicational(f)


def test_random_formula_connectives(rng):
    seen = set()
    for _ in range(200):
        f = random_formula(rng, 9, connectives=True)
        seen.add(type(f))
    assert {Imp, Fusion} <= seen


def test_random_systems(rng):
    for _ in range(50):
        sys = random_bvass(rng, 2, 3, 6)
        assert sys.ordinary
        assert all(unit_coordinate(r.vector) for r in sys.unary_rules)
    general = random_bvass(rng, 2, 3, 6, ordinary=False, split_ratio=0.0)
    assert not general.split_rules
    assert all(max(abs(x) for x in r.vector) <= 2 for r in general.unary_rules)


def test_random_instances(rng):
    for _ in range(30):
        reach = random_reach_instance(rng)
        assert reach.mode == Mode.EXPANSIVE
        assert reach.root_state == "q0"
        cover = random_cover_instance(rng)
        assert cover.leaf_state in cover.system.states
        bvas = random_bvas_instance(rng)
        assert len(bvas.root_vector) == bvas.system.dimension
        assert all(x >= 0 for x in bvas.leaf_vector)
