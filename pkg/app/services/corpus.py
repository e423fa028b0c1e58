"""Formula corpora and seeded random instances for batch runs and tests."""
import random
from typing import Dict, Iterator, List, Sequence

from app.models.enums import Mode
from app.models.formula import TRUTH, Atom, Formula, Fusion, Imp
from app.schemas.bvass import (
    Bvas,
    BvasInstance,
    Bvass,
    CoverInstance,
    ReachInstance,
    SplitRule,
    UnaryRule,
    Vector,
    unit_vector,
)

DEFAULT_ATOMS = ("a", "b")


def enumerate_formulas(atoms: Sequence[str] = DEFAULT_ATOMS, max_size: int = 9) -> Iterator[Formula]:
    """Every implicational formula over ``atoms`` up to ``max_size``, smallest first."""
    by_size: Dict[int, List[Formula]] = {1: [Atom(a) for a in atoms]}
    for s in range(3, max_size + 1, 2):
        by_size[s] = [
            Imp(left, right)
            for ls in range(1, s - 1, 2)
            for left in by_size[ls]
            for right in by_size[s - 1 - ls]
        ]
    for s in sorted(by_size):
        if s <= max_size:
            yield from by_size[s]


def random_formula(
    rng: random.Random,
    size: int,
    atoms: Sequence[str] = DEFAULT_ATOMS,
    connectives: bool = False,
) -> Formula:
    """Random formula of at most ``size``; ``connectives`` mixes in fusion and the constant."""
    if size < 3:
        if connectives and rng.random() < 0.15:
            return TRUTH
        return Atom(rng.choice(list(atoms)))
    left = rng.randint(1, size - 2)
    a = random_formula(rng, left, atoms, connectives)
    b = random_formula(rng, size - 1 - left, atoms, connectives)
    if connectives and rng.random() < 0.25:
        return Fusion(a, b)
    return Imp(a, b)


def _random_vector(rng: random.Random, dimension: int, ordinary: bool, max_norm: int) -> Vector:
    if ordinary:
        return unit_vector(dimension, rng.randint(1, dimension), rng.choice((1, -1)))
    return tuple(rng.randint(-max_norm, max_norm) for _ in range(dimension))


def random_bvass(
    rng: random.Random,
    dimension: int,
    state_count: int,
    rule_count: int,
    ordinary: bool = True,
    split_ratio: float = 0.3,
    max_norm: int = 2,
) -> Bvass:
    states = tuple(f"q{i}" for i in range(state_count))
    unary: List[UnaryRule] = []
    splits: List[SplitRule] = []
    for _ in range(rule_count):
        if rng.random() < split_ratio:
            splits.append(SplitRule(source=rng.choice(states), left=rng.choice(states), right=rng.choice(states)))
        else:
            unary.append(UnaryRule(
                source=rng.choice(states),
                vector=_random_vector(rng, dimension, ordinary, max_norm),
                target=rng.choice(states),
            ))
    return Bvass(
        states=states, dimension=dimension, ordinary=ordinary,
        unary_rules=tuple(unary), split_rules=tuple(splits),
    )


def random_reach_instance(
    rng: random.Random,
    max_dimension: int = 3,
    max_states: int = 4,
    max_rules: int = 8,
    mode: Mode = Mode.EXPANSIVE,
    ordinary: bool = True,
) -> ReachInstance:
    n = rng.randint(2, max_states)
    system = random_bvass(rng, rng.randint(1, max_dimension), n, rng.randint(1, max_rules), ordinary=ordinary)
    return ReachInstance(system=system, root_state="q0", leaf_state=f"q{n - 1}", mode=mode)


def random_cover_instance(
    rng: random.Random,
    max_dimension: int = 2,
    max_states: int = 3,
    max_rules: int = 5,
) -> CoverInstance:
    n = rng.randint(2, max_states)
    system = random_bvass(rng, rng.randint(1, max_dimension), n, rng.randint(1, max_rules))
    return CoverInstance(system=system, root_state="q0", leaf_state=f"q{n - 1}")


def random_bvas_instance(
    rng: random.Random,
    max_dimension: int = 2,
    max_rules: int = 3,
    max_norm: int = 2,
) -> BvasInstance:
    d = rng.randint(1, max_dimension)
    unary = tuple(_random_vector(rng, d, False, max_norm) for _ in range(rng.randint(1, max_rules)))
    splits = tuple(_random_vector(rng, d, False, max_norm) for _ in range(rng.randint(0, 1)))
    root = tuple(rng.randint(0, max_norm) for _ in range(d))
    leaf = tuple(rng.randint(0, 1) for _ in range(d))
    return BvasInstance(system=Bvas(dimension=d, unary_rules=unary, split_rules=splits), root_vector=root, leaf_vector=leaf)
