import math
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, validator

from app.models.enums import Mode

Vector = Tuple[int, ...]

# exact powers are only materialized below this many bits
EXACT_BITS_LIMIT = 6000


def unit_coordinate(vector: Vector) -> Optional[Tuple[int, int]]:
    """``(i, sign)`` when ``vector`` is ``sign * e_i`` (1-based ``i``), else None."""
    nonzero = [(i, x) for i, x in enumerate(vector, start=1) if x]
    if len(nonzero) != 1 or abs(nonzero[0][1]) != 1:
        return None
    return nonzero[0]


def unit_vector(dimension: int, coordinate: int, sign: int = 1) -> Vector:
    return tuple(sign if i == coordinate else 0 for i in range(1, dimension + 1))


def zero_vector(dimension: int) -> Vector:
    return (0,) * dimension


class UnaryRule(BaseModel):
    source: str
    vector: Vector
    target: str

    model_config = ConfigDict(frozen=True)


class SplitRule(BaseModel):
    source: str
    left: str
    right: str

    model_config = ConfigDict(frozen=True)


Rule = Union[UnaryRule, SplitRule]


class Bvass(BaseModel):
    """Branching VASS. Rule indices number unary rules first, then splits."""
    states: Tuple[str, ...]
    dimension: int = Field(..., ge=0)
    ordinary: bool = True
    unary_rules: Tuple[UnaryRule, ...] = ()
    split_rules: Tuple[SplitRule, ...] = ()

    model_config = ConfigDict(frozen=True)

    @validator('states')
    def validate_states(cls, v):
        if len(set(v)) != len(v):
            raise ValueError('Duplicate state names')
        for name in v:
            if not name or any(ch.isspace() for ch in name):
                raise ValueError(f"Invalid state name '{name}'")
        return v

    @validator('unary_rules')
    def validate_unary_rules(cls, v, values):
        states = set(values.get('states') or ())
        dimension = values.get('dimension')
        for rule in v:
            if rule.source not in states or rule.target not in states:
                raise ValueError(f'Unary rule {rule.source} -> {rule.target} uses an undeclared state')
            if dimension is not None and len(rule.vector) != dimension:
                raise ValueError(f'Unary rule vector {rule.vector} is not of dimension {dimension}')
            if values.get('ordinary') and unit_coordinate(rule.vector) is None:
                raise ValueError(f'Ordinary systems only allow unit vectors, got {rule.vector}')
        return v

    @validator('split_rules')
    def validate_split_rules(cls, v, values):
        states = set(values.get('states') or ())
        for rule in v:
            if not {rule.source, rule.left, rule.right} <= states:
                raise ValueError(f'Split rule {rule.source} -> {rule.left} + {rule.right} uses an undeclared state')
        return v

    @property
    def rule_count(self) -> int:
        return len(self.unary_rules) + len(self.split_rules)

    def rule(self, index: int) -> Rule:
        if index < len(self.unary_rules):
            return self.unary_rules[index]
        return self.split_rules[index - len(self.unary_rules)]

    def is_split(self, index: int) -> bool:
        return index >= len(self.unary_rules)

    def rules(self) -> List[Tuple[int, Rule]]:
        return list(enumerate(self.unary_rules + self.split_rules))

    def outgoing(self, state: str) -> List[int]:
        return [i for i, rule in self.rules() if rule.source == state]


class Bvas(BaseModel):
    """Stateless branching VAS; a unary or split rule ``u`` adds ``u`` to its children's sum."""
    dimension: int = Field(..., ge=0)
    unary_rules: Tuple[Vector, ...] = ()
    split_rules: Tuple[Vector, ...] = ()

    model_config = ConfigDict(frozen=True)

    @validator('unary_rules', 'split_rules')
    def validate_vectors(cls, v, values):
        dimension = values.get('dimension')
        for vector in v:
            if dimension is not None and len(vector) != dimension:
                raise ValueError(f'Rule vector {vector} is not of dimension {dimension}')
        return v

    @property
    def rule_count(self) -> int:
        return len(self.unary_rules) + len(self.split_rules)

    def rule(self, index: int) -> Vector:
        if index < len(self.unary_rules):
            return self.unary_rules[index]
        return self.split_rules[index - len(self.unary_rules)]


class CoverInstance(BaseModel):
    system: Bvass
    root_state: str
    leaf_state: str
    labels: Dict[str, str] = Field(default_factory=dict)

    model_config = ConfigDict(frozen=True)

    @validator('root_state', 'leaf_state')
    def validate_state(cls, v, values):
        system = values.get('system')
        if system is not None and v not in system.states:
            raise ValueError(f"State '{v}' is not declared")
        return v


class ReachInstance(CoverInstance):
    mode: Mode = Mode.PLAIN

    @property
    def expansive(self) -> bool:
        return self.mode != Mode.PLAIN


class BvasInstance(BaseModel):
    system: Bvas
    root_vector: Vector
    leaf_vector: Vector

    model_config = ConfigDict(frozen=True)

    @validator('root_vector', 'leaf_vector')
    def validate_vector(cls, v, values):
        system = values.get('system')
        if system is not None and len(v) != system.dimension:
            raise ValueError(f'Vector {v} is not of dimension {system.dimension}')
        if any(x < 0 for x in v):
            raise ValueError(f'Vector {v} has a negative coordinate')
        return v


class CoordinateMask(BaseModel):
    """Set of 1-based coordinates; ``apply`` zeroes every other coordinate."""
    dimension: int = Field(..., ge=0)
    coordinates: FrozenSet[int] = frozenset()

    model_config = ConfigDict(frozen=True)

    @validator('coordinates')
    def validate_coordinates(cls, v, values):
        dimension = values.get("dimension")
        if dimension is not None and not all(1 <= i <= dimension for i in v):
            raise ValueError(f'Coordinates {sorted(v)} exceed dimension {dimension}')
        return v

    def apply(self, vector: Vector) -> Vector:
        if len(vector) != self.dimension:
            raise ValueError(f'Vector {vector} is not of dimension {self.dimension}')
        return tuple(x if i in self.coordinates else 0 for i, x in enumerate(vector, start=1))

    def label(self) -> str:
        return ",".join(str(i) for i in sorted(self.coordinates))

    def including(self, coordinate: int) -> 'CoordinateMask':
        return CoordinateMask(dimension=self.dimension, coordinates=self.coordinates | {coordinate})

    @property
    def full(self) -> bool:
        return len(self.coordinates) == self.dimension

    @classmethod
    def every(cls, dimension: int) -> List['CoordinateMask']:
        """All masks of ``dimension``, by size and then lexicographically."""
        return [
            cls(dimension=dimension, coordinates=frozenset(c))
            for k in range(dimension + 1)
            for c in combinations(range(1, dimension + 1), k)
        ]


class BoundTriple(BaseModel):
    """Completeness thresholds for BVAS coverability.

    ``base`` is the norm bound L, ``height`` is L to the power (3d)! and
    ``value`` its square. The two large numbers are None when they are too
    big to hold exactly; ``height_text`` and ``value_text`` always describe them.
    """
    dimension: int
    base: int
    exponent: int
    height: Optional[int] = None
    value: Optional[int] = None
    height_text: str
    value_text: str

    model_config = ConfigDict(frozen=True)

    @classmethod
    def compute(cls, dimension: int, base: int) -> 'BoundTriple':
        exponent = math.factorial(3 * dimension)
        if exponent * math.log2(max(base, 2)) <= EXACT_BITS_LIMIT:
            height = base ** exponent
            value = height * height
            return cls(
                dimension=dimension, base=base, exponent=exponent,
                height=height, value=value, height_text=str(height), value_text=str(value),
            )
        return cls(
            dimension=dimension, base=base, exponent=exponent,
            height_text=f"{base}^{exponent}", value_text=f"{base}^{2 * exponent}",
        )

    @property
    def exact(self) -> bool:
        return self.value is not None

    def meets(self, cap: int) -> bool:
        # an inexact bound is far beyond any cap a solver can run with
        return self.value is not None and cap >= self.value
