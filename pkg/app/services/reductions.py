"""
Translations between formulas, BVASS and BVAS problems
------------------------------------------------------
Every construction is deterministic: states, rules and fresh names come out
in the same order for the same input, so translated files are reproducible
byte for byte.
"""
import logging
from typing import Dict, Iterable, List, Optional, Set, Tuple

from app.core.exceptions import AtomCollisionError, NotOrdinaryError
from app.models.enums import Mode
from app.models.formula import (
    ATOM_PATTERN,
    RESERVED_NAMES,
    TRUTH,
    Atom,
    Formula,
    Fusion,
    Imp,
    SubformulaTable,
    imp_chain,
)
from app.schemas.bvass import (
    Bvas,
    BvasInstance,
    Bvass,
    CoordinateMask,
    CoverInstance,
    ReachInstance,
    SplitRule,
    UnaryRule,
    Vector,
    unit_coordinate,
    unit_vector,
)
from app.services.syntax import render_formula

logger = logging.getLogger(__name__)

LEAF_STATE = "leaf"


def _fresh(name: str, taken: Set[str]) -> str:
    while name in taken:
        name += "'"
    taken.add(name)
    return name


def _pad(vector: Vector, dimension: int) -> Vector:
    return tuple(vector) + (0,) * (dimension - len(vector))


def _require_ordinary(sys: Bvass) -> None:
    if not sys.ordinary or any(unit_coordinate(r.vector) is None for r in sys.unary_rules):
        raise NotOrdinaryError("construction needs an ordinary system with unit vectors only")


def _padded_rules(sys: Bvass, dimension: int) -> List[UnaryRule]:
    return [UnaryRule(source=r.source, vector=_pad(r.vector, dimension), target=r.target) for r in sys.unary_rules]


def formula_to_bvass(f: Formula) -> ReachInstance:
    """Expansive BVASS whose root judgement at ``f`` mirrors backward proof search for ``|- f``.

    Coordinates and non-leaf states follow the subformula table. Contraction
    has no rule of its own; expansions play its part.
    """
    table = SubformulaTable.of(f)
    n = len(table)
    name: Dict[Formula, str] = {a: f"f{table.coordinate(a)}" for a in table.entries}

    def e(a: Formula, sign: int = 1) -> Vector:
        return unit_vector(n, table.coordinate(a), sign)

    states = [name[a] for a in table.entries]
    has_truth = TRUTH in table
    leaf = name[TRUTH] if has_truth else LEAF_STATE
    if not has_truth:
        states.append(leaf)
    implications = [a for a in table.entries if isinstance(a, Imp)]
    fusions = [a for a in table.entries if isinstance(a, Fusion)]
    unary: List[UnaryRule] = []
    splits: List[SplitRule] = []

    # identity; the truth state is the leaf, where its left rule already consumes it
    for a in table.entries:
        if not (has_truth and a == TRUTH):
            unary.append(UnaryRule(source=name[a], vector=e(a, -1), target=leaf))
    # right implication
    for ab in implications:
        unary.append(UnaryRule(source=name[ab], vector=e(ab.left), target=name[ab.right]))
    # left implication, one pair of intermediates per (goal, implication)
    for c in table.entries:
        for ab in implications:
            tag = f"{table.coordinate(c)}@{table.coordinate(ab)}"
            m1, m2 = f"m1@{tag}", f"m2@{tag}"
            states += [m1, m2]
            unary.append(UnaryRule(source=name[c], vector=e(ab, -1), target=m1))
            splits.append(SplitRule(source=m1, left=name[ab.left], right=m2))
            unary.append(UnaryRule(source=m2, vector=e(ab.right), target=name[c]))
    # left fusion as two unit increments
    for c in table.entries:
        for ab in fusions:
            tag = f"{table.coordinate(c)}@{table.coordinate(ab)}"
            p1, p2 = f"p1@{tag}", f"p2@{tag}"
            states += [p1, p2]
            unary.append(UnaryRule(source=name[c], vector=e(ab, -1), target=p1))
            unary.append(UnaryRule(source=p1, vector=e(ab.left), target=p2))
            unary.append(UnaryRule(source=p2, vector=e(ab.right), target=name[c]))
    for ab in fusions:
        splits.append(SplitRule(source=name[ab], left=name[ab.left], right=name[ab.right]))
    if has_truth:
        for a in table.entries:
            unary.append(UnaryRule(source=name[a], vector=e(TRUTH, -1), target=name[a]))

    system = Bvass(states=tuple(states), dimension=n, ordinary=True, unary_rules=tuple(unary), split_rules=tuple(splits))
    labels = {name[a]: render_formula(a) for a in table.entries}
    logger.debug(f"formula of size {n} gives {len(states)} states and {system.rule_count} rules")
    return ReachInstance(system=system, root_state=name[f], leaf_state=leaf, labels=labels, mode=Mode.EXPANSIVE)


def _masked(q: str, mask: CoordinateMask) -> str:
    return f"{q}|{mask.label()}"


def expansive_to_coverability(inst: ReachInstance) -> CoverInstance:
    """Coverability instance positive iff ``inst`` is expansive-reachable.

    States are paired with the set of coordinates already incremented on
    the way down from the root; decrements are only allowed on such
    coordinates, and the leaf must be reached with every coordinate marked.
    """
    sys = inst.system
    _require_ordinary(sys)
    d = max(1, sys.dimension)
    states = list(sys.states)
    taken = set(states)
    unary = _padded_rules(sys, d)
    leaf = inst.leaf_state

    if sys.outgoing(leaf):
        bounce = _fresh(f"{leaf}^bounce", taken)
        fresh_leaf = _fresh(f"{leaf}^", taken)
        states += [bounce, fresh_leaf]
        unary.append(UnaryRule(source=leaf, vector=unit_vector(d, 1), target=bounce))
        unary.append(UnaryRule(source=bounce, vector=unit_vector(d, 1, -1), target=fresh_leaf))
        leaf = fresh_leaf
    for i in range(1, d + 1):
        top = _fresh(f"{leaf}^{i}", taken)
        states.append(top)
        unary.append(UnaryRule(source=leaf, vector=unit_vector(d, i), target=top))
        unary.append(UnaryRule(source=top, vector=unit_vector(d, i, -1), target=leaf))

    masks = CoordinateMask.every(d)
    product = [_masked(q, s) for q in states for s in masks]
    masked_unary: List[UnaryRule] = []
    for rule in unary:
        i, sign = unit_coordinate(rule.vector)
        for s in masks:
            if sign > 0:
                masked_unary.append(UnaryRule(source=_masked(rule.source, s), vector=rule.vector, target=_masked(rule.target, s.including(i))))
            elif any(s.apply(rule.vector)):
                masked_unary.append(UnaryRule(source=_masked(rule.source, s), vector=rule.vector, target=_masked(rule.target, s)))
    masked_splits = [
        SplitRule(source=_masked(r.source, s), left=_masked(r.left, s), right=_masked(r.right, s))
        for r in sys.split_rules
        for s in masks
    ]
    system = Bvass(
        states=tuple(product), dimension=d, ordinary=True,
        unary_rules=tuple(masked_unary), split_rules=tuple(masked_splits),
    )
    labels = {_masked(q, s): f"{inst.labels.get(q, q)}|{s.label()}" for q in states for s in masks}
    logger.info(f"masked product: {len(product)} states, {system.rule_count} rules")
    return CoverInstance(
        system=system,
        root_state=_masked(inst.root_state, masks[0]),
        leaf_state=_masked(leaf, next(s for s in masks if s.full)),
        labels=labels,
    )


def increase_closure(sys: Bvass) -> Bvass:
    """Add the increment loop ``q -(+e_i)-> q`` for every state and coordinate."""
    loops = [
        UnaryRule(source=q, vector=unit_vector(sys.dimension, i), target=q)
        for q in sys.states
        for i in range(1, sys.dimension + 1)
    ]
    return Bvass(
        states=sys.states, dimension=sys.dimension, ordinary=sys.ordinary,
        unary_rules=sys.unary_rules + tuple(loops), split_rules=sys.split_rules,
    )


def expansion_gadgets(sys: Bvass) -> Bvass:
    """Simulate expansion with a decrement followed by two increments through fresh states."""
    states = list(sys.states)
    taken = set(states)
    unary = list(sys.unary_rules)
    d = sys.dimension
    for q in sys.states:
        for i in range(1, d + 1):
            x = _fresh(f"{q}^x{i}", taken)
            y = _fresh(f"{q}^y{i}", taken)
            states += [x, y]
            unary.append(UnaryRule(source=q, vector=unit_vector(d, i, -1), target=x))
            unary.append(UnaryRule(source=x, vector=unit_vector(d, i), target=y))
            unary.append(UnaryRule(source=y, vector=unit_vector(d, i), target=q))
    return Bvass(
        states=tuple(states), dimension=d, ordinary=sys.ordinary,
        unary_rules=tuple(unary), split_rules=sys.split_rules,
    )


def coverability_to_comprehensive(inst: CoverInstance) -> ReachInstance:
    """Comprehensive expansive reachability instance positive iff ``inst`` is coverable.

    One extra coordinate guards the entry into the original root and one per
    rule lets a hub state fire that rule once on the side, so every rule can
    be used whether or not the real witness needs it.
    """
    _require_ordinary(inst.system)
    sys = increase_closure(inst.system)
    d = sys.dimension
    rules = sys.rules()
    dim = d + 1 + len(rules)
    taken = set(sys.states)
    hub = _fresh("hub", taken)
    start = _fresh("start", taken)
    via = [_fresh(f"via{k}", taken) for k in range(len(rules))]

    def e(i: int, sign: int = 1) -> Vector:
        return unit_vector(dim, i, sign)

    unary = _padded_rules(sys, dim)
    unary.append(UnaryRule(source=start, vector=e(d + 1), target=hub))
    unary.append(UnaryRule(source=hub, vector=e(d + 1, -1), target=inst.root_state))
    for k, rule in rules:
        c = d + 2 + k
        if isinstance(rule, SplitRule):
            unary += [
                UnaryRule(source=hub, vector=e(c), target=via[k]),
                UnaryRule(source=via[k], vector=e(c), target=rule.source),
                UnaryRule(source=rule.left, vector=e(c, -1), target=hub),
                UnaryRule(source=rule.right, vector=e(c, -1), target=hub),
            ]
            continue
        i, sign = unit_coordinate(rule.vector)
        if sign > 0:
            unary += [
                UnaryRule(source=hub, vector=e(c), target=rule.source),
                UnaryRule(source=rule.target, vector=e(i, -1), target=via[k]),
                UnaryRule(source=via[k], vector=e(c, -1), target=hub),
            ]
        else:
            unary += [
                UnaryRule(source=hub, vector=e(c), target=via[k]),
                UnaryRule(source=via[k], vector=e(i), target=rule.source),
                UnaryRule(source=rule.target, vector=e(c, -1), target=hub),
            ]
    system = Bvass(
        states=sys.states + (hub, start) + tuple(via), dimension=dim, ordinary=True,
        unary_rules=tuple(unary), split_rules=sys.split_rules,
    )
    logger.info(f"comprehensive instance: dimension {dim}, {system.rule_count} rules")
    return ReachInstance(
        system=system, root_state=start, leaf_state=inst.leaf_state,
        labels=dict(inst.labels), mode=Mode.COMPREHENSIVE,
    )


def atom_names(sys: Bvass) -> Dict[str, str]:
    """Atom for each state: its own name when usable, ``q<index>`` otherwise."""
    names = {}
    for index, q in enumerate(sys.states):
        usable = ATOM_PATTERN.fullmatch(q) is not None and q not in RESERVED_NAMES
        names[q] = q if usable else f"q{index}"
    coordinates = [f"e{i}" for i in range(1, sys.dimension + 1)]
    everything = list(names.values()) + coordinates
    clashes = sorted({a for a in everything if everything.count(a) > 1})
    if clashes:
        raise AtomCollisionError(f"atom names clash: {', '.join(clashes)}", details={"atoms": clashes})
    return names


def encode_rule(rule, atoms: Dict[str, str]) -> Formula:
    q = Atom(atoms[rule.source])
    if isinstance(rule, SplitRule):
        return Imp(Atom(atoms[rule.left]), Imp(Atom(atoms[rule.right]), q))
    i, sign = unit_coordinate(rule.vector)
    q1, ei = Atom(atoms[rule.target]), Atom(f"e{i}")
    if sign > 0:
        return Imp(Imp(ei, q1), q)
    return Imp(q1, Imp(ei, q))


def comprehensive_to_formula(inst: ReachInstance, order: Optional[Iterable[int]] = None) -> Formula:
    """``leaf -> <t1> -> ... -> <tk> -> root`` over the rules in index order (or ``order``)."""
    sys = inst.system
    _require_ordinary(sys)
    atoms = atom_names(sys)
    indices = list(range(sys.rule_count)) if order is None else list(order)
    if sorted(indices) != list(range(sys.rule_count)):
        raise ValueError("order must be a permutation of the rule indices")
    encoded = [encode_rule(sys.rule(i), atoms) for i in indices]
    return imp_chain([Atom(atoms[inst.leaf_state])] + encoded, Atom(atoms[inst.root_state]))


def state_code(index: int, count: int, slot: int, dimension: int) -> Vector:
    """Pair ``(index, count - index)`` placed in slot 0, 1 or 2 of the six state coordinates."""
    return (0,) * (2 * slot) + (index, count - index) + (0,) * (2 * (2 - slot) + dimension)


def bvass_to_bvas(inst: CoverInstance) -> BvasInstance:
    """BVAS coverability instance with six extra coordinates encoding states."""
    sys = inst.system
    n, d = len(sys.states), sys.dimension
    index = {q: i for i, q in enumerate(sys.states)}

    def code(q: str, slot: int) -> Vector:
        return state_code(index[q], n, slot, d)

    def combine(*parts: Tuple[int, Vector]) -> Vector:
        return tuple(sum(sign * v[j] for sign, v in parts) for j in range(6 + d))

    unary: List[Vector] = []
    for r in sys.unary_rules:
        unary.append(combine((1, code(r.source, 0)), (-1, code(r.target, 1)), (-1, (0,) * 6 + tuple(r.vector))))
    for q in sys.states:
        unary.append(combine((1, code(q, 1)), (-1, code(q, 0))))
        unary.append(combine((1, code(q, 2)), (-1, code(q, 0))))
    splits = [
        combine((1, code(r.source, 0)), (-1, code(r.left, 1)), (-1, code(r.right, 2)))
        for r in sys.split_rules
    ]
    bvas = Bvas(dimension=6 + d, unary_rules=tuple(unary), split_rules=tuple(splits))
    return BvasInstance(system=bvas, root_vector=code(inst.root_state, 0), leaf_vector=code(inst.leaf_state, 0))


def bvas_to_bvass(inst: BvasInstance) -> CoverInstance:
    """General BVASS over a single working state, with gadgets for splits and the boundary."""
    sys = inst.system
    d = sys.dimension
    work, root, leaf = "q", "q_r", "q_l"
    gates = [f"q_u{j}" for j in range(len(sys.split_rules))]

    def neg(v: Vector) -> Vector:
        return tuple(-x for x in v)

    unary = [UnaryRule(source=work, vector=neg(u), target=work) for u in sys.unary_rules]
    unary += [UnaryRule(source=work, vector=neg(u), target=g) for u, g in zip(sys.split_rules, gates)]
    unary.append(UnaryRule(source=root, vector=tuple(inst.root_vector), target=work))
    unary.append(UnaryRule(source=work, vector=neg(inst.leaf_vector), target=leaf))
    splits = [SplitRule(source=g, left=work, right=work) for g in gates]
    system = Bvass(
        states=(work, *gates, root, leaf), dimension=d, ordinary=False,
        unary_rules=tuple(unary), split_rules=tuple(splits),
    )
    return CoverInstance(system=system, root_state=root, leaf_state=leaf)


def to_ordinary(sys: Bvass) -> Bvass:
    """Replace every non-unit unary rule by a chain of unit rules, decrements first.

    A zero vector becomes an increment-decrement bounce on coordinate 1,
    adding that coordinate when the system has none.
    """
    needs_bounce = any(not any(r.vector) for r in sys.unary_rules)
    d = max(1, sys.dimension) if needs_bounce else sys.dimension
    states = list(sys.states)
    taken = set(states)
    unary: List[UnaryRule] = []
    for idx, rule in enumerate(sys.unary_rules):
        vector = _pad(rule.vector, d)
        if unit_coordinate(vector) is not None:
            unary.append(UnaryRule(source=rule.source, vector=vector, target=rule.target))
            continue
        if any(vector):
            steps = [unit_vector(d, i, -1) for i, x in enumerate(vector, start=1) for _ in range(max(0, -x))]
            steps += [unit_vector(d, i) for i, x in enumerate(vector, start=1) for _ in range(max(0, x))]
        else:
            steps = [unit_vector(d, 1), unit_vector(d, 1, -1)]
        hops = [_fresh(f"{rule.source}~{idx}~{k}", taken) for k in range(1, len(steps))]
        states += hops
        path = [rule.source] + hops + [rule.target]
        unary += [UnaryRule(source=a, vector=u, target=b) for a, u, b in zip(path, steps, path[1:])]
    return Bvass(
        states=tuple(states), dimension=d, ordinary=True,
        unary_rules=tuple(unary), split_rules=sys.split_rules,
    )
