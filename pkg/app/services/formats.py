"""
Text and JSON file formats
--------------------------
BVASS and BVAS instance files, JSON label sidecars, and the tree format
shared by proofs and witnesses. Trees are written one node per line, two
spaces of indentation per level, ``<STEP> <label>``; the JSON form is the
nested list ``[step, label, [children...]]``.
"""
import json
import logging
import re
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

from pydantic import ValidationError

from app.core.exceptions import FormatError, FormulaSyntaxError
from app.models.derivation import Configuration, DeductionTree, VectorTree
from app.models.enums import Calculus, FrRule, LrRule, Mode, StepKind
from app.models.proof import FrProof, LrProof
from app.schemas.bvass import (
    Bvas,
    BvasInstance,
    Bvass,
    CoverInstance,
    ReachInstance,
    SplitRule,
    UnaryRule,
    Vector,
    unit_coordinate,
)
from app.services.syntax import (
    parse_focus_sequent,
    parse_formula,
    parse_sequent,
    render_focus_sequent,
    render_formula,
    render_sequent,
)

logger = logging.getLogger(__name__)

Tree = Union[LrProof, FrProof, DeductionTree, VectorTree]
Instance = Union[ReachInstance, BvasInstance]
# [step, label, children]
TreeSpec = List[Any]

_SHORTHAND = re.compile(r"[+-]\d+")
_STEP = re.compile(r"(Leaf|Unary|Split|Expansion)(?:#(\d+))?")
_TREE_LINE = re.compile(r"([^\s{]+(?:\{[^}]*\})?)\s*(.*)")


def _validation_message(e: ValidationError) -> str:
    first = e.errors()[0]
    return str(first.get("msg", e))


# Vectors

def render_vector(v: Vector) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def render_rule_vector(v: Vector) -> str:
    unit = unit_coordinate(v)
    if unit is None:
        return render_vector(v)
    i, sign = unit
    return f"{'+' if sign > 0 else '-'}{i}"


def parse_vector(token: str, dimension: int, line: Optional[int] = None) -> Vector:
    """``+i``/``-i`` for a signed unit vector, otherwise comma-separated integers."""
    if _SHORTHAND.fullmatch(token):
        i = abs(int(token))
        if not 1 <= i <= dimension:
            raise FormatError(f"coordinate {i} outside dimension {dimension}", line)
        return tuple((1 if token[0] == "+" else -1) if j == i else 0 for j in range(1, dimension + 1))
    body = token[1:-1] if token.startswith("(") and token.endswith(")") else token
    try:
        values = tuple(int(x) for x in body.split(",")) if body.strip() else ()
    except ValueError:
        raise FormatError(f"malformed vector '{token}'", line) from None
    if len(values) != dimension:
        raise FormatError(f"vector '{token}' is not of dimension {dimension}", line)
    return values


# Instance files

def _lines(text: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        words = raw.split("#", 1)[0].split()
        if words:
            yield number, words


def _is_bvas(text: str) -> bool:
    for _, words in _lines(text):
        if words[0] in ("unary", "split") and len(words) == 2:
            return True
        if words[0] in ("root", "leaf") and len(words) == 2 and words[1].startswith("("):
            return True
    return False


def _dimension(text: str) -> int:
    for number, words in _lines(text):
        if words[0] == "dim":
            if len(words) != 2 or not words[1].isdigit():
                raise FormatError("expected 'dim <natural>'", number)
            return int(words[1])
    raise FormatError("missing 'dim' declaration")


def parse_bvass_text(text: str, labels: Optional[Dict[str, str]] = None) -> ReachInstance:
    d = _dimension(text)
    states: Dict[str, None] = {}
    unary: List[UnaryRule] = []
    splits: List[SplitRule] = []
    root = leaf = None
    mode, ordinary = Mode.PLAIN, None
    for number, words in _lines(text):
        keyword, args = words[0], words[1:]
        if keyword == "dim":
            continue
        if keyword == "state":
            states.update(dict.fromkeys(args))
        elif keyword in ("root", "leaf") and len(args) == 1:
            states.setdefault(args[0])
            if keyword == "root":
                root = args[0]
            else:
                leaf = args[0]
        elif keyword == "mode" and len(args) == 1:
            try:
                mode = Mode(args[0])
            except ValueError:
                raise FormatError(f"unknown mode '{args[0]}'", number) from None
        elif keyword == "ordinary" and len(args) == 1 and args[0] in ("yes", "no"):
            ordinary = args[0] == "yes"
        elif keyword == "unary" and len(args) == 3:
            states.update(dict.fromkeys((args[0], args[2])))
            unary.append(UnaryRule(source=args[0], vector=parse_vector(args[1], d, number), target=args[2]))
        elif keyword == "split" and len(args) == 3:
            states.update(dict.fromkeys(args))
            splits.append(SplitRule(source=args[0], left=args[1], right=args[2]))
        else:
            raise FormatError(f"unrecognized declaration '{' '.join(words)}'", number)
    if root is None or leaf is None:
        raise FormatError("instance needs both 'root' and 'leaf'")
    if ordinary is None:
        ordinary = all(unit_coordinate(r.vector) is not None for r in unary)
    try:
        system = Bvass(
            states=tuple(states), dimension=d, ordinary=ordinary,
            unary_rules=tuple(unary), split_rules=tuple(splits),
        )
        return ReachInstance(system=system, root_state=root, leaf_state=leaf, labels=labels or {}, mode=mode)
    except ValidationError as e:
        raise FormatError(_validation_message(e)) from None


def parse_bvas_text(text: str) -> BvasInstance:
    d = _dimension(text)
    unary: List[Vector] = []
    splits: List[Vector] = []
    vectors: Dict[str, Vector] = {}
    for number, words in _lines(text):
        keyword, args = words[0], words[1:]
        if keyword == "dim":
            continue
        if keyword in ("root", "leaf", "unary", "split") and len(args) == 1:
            v = parse_vector(args[0], d, number)
            if keyword == "unary":
                unary.append(v)
            elif keyword == "split":
                splits.append(v)
            else:
                vectors[keyword] = v
        else:
            raise FormatError(f"unrecognized declaration '{' '.join(words)}'", number)
    if set(vectors) != {"root", "leaf"}:
        raise FormatError("instance needs both 'root' and 'leaf' vectors")
    try:
        system = Bvas(dimension=d, unary_rules=tuple(unary), split_rules=tuple(splits))
        return BvasInstance(system=system, root_vector=vectors["root"], leaf_vector=vectors["leaf"])
    except ValidationError as e:
        raise FormatError(_validation_message(e)) from None


def parse_instance_text(text: str, labels: Optional[Dict[str, str]] = None) -> Instance:
    return parse_bvas_text(text) if _is_bvas(text) else parse_bvass_text(text, labels)


def render_bvass(inst: CoverInstance) -> str:
    sys = inst.system
    lines = [f"dim {sys.dimension}"]
    if isinstance(inst, ReachInstance):
        lines.append(f"mode {inst.mode.value}")
    lines.append(f"ordinary {'yes' if sys.ordinary else 'no'}")
    lines.extend(f"state {q}" for q in sys.states)
    lines.append(f"root {inst.root_state}")
    lines.append(f"leaf {inst.leaf_state}")
    lines.extend(f"unary {r.source} {render_rule_vector(r.vector)} {r.target}" for r in sys.unary_rules)
    lines.extend(f"split {r.source} {r.left} {r.right}" for r in sys.split_rules)
    return "\n".join(lines) + "\n"


def render_bvas(inst: BvasInstance) -> str:
    sys = inst.system
    lines = [f"dim {sys.dimension}", f"root {render_vector(inst.root_vector)}", f"leaf {render_vector(inst.leaf_vector)}"]
    lines.extend(f"unary {render_vector(u)}" for u in sys.unary_rules)
    lines.extend(f"split {render_vector(u)}" for u in sys.split_rules)
    return "\n".join(lines) + "\n"


def render_instance(inst) -> str:
    return render_bvas(inst) if isinstance(inst, BvasInstance) else render_bvass(inst)


def labels_path(path: Path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".labels.json")


def read_instance(path: Path) -> Instance:
    """Read an instance file, picking up its label sidecar when one exists."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    sidecar = labels_path(path)
    labels = None
    if sidecar.exists():
        try:
            labels = json.loads(sidecar.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise FormatError(f"label map {sidecar} is not valid JSON: {e.msg}") from None
    inst = parse_instance_text(text, labels)
    logger.info(f"Read {'BVAS' if isinstance(inst, BvasInstance) else 'BVASS'} instance from {path}")
    return inst


def write_instance(path: Path, inst) -> None:
    path = Path(path)
    path.write_text(render_instance(inst), encoding="utf-8")
    if isinstance(inst, CoverInstance) and inst.labels:
        labels_path(path).write_text(json.dumps(inst.labels, indent=2, sort_keys=True) + "\n", encoding="utf-8")


# Trees

def _step_label(node: Tree) -> Tuple[str, str]:
    if isinstance(node, LrProof):
        step = node.rule.value if node.principal is None else f"{node.rule.value}{{{render_formula(node.principal)}}}"
        return step, render_sequent(node.conclusion)
    if isinstance(node, FrProof):
        step = node.rule.value if node.principal is None else f"{node.rule.value}{{{render_formula(node.principal)}}}"
        return step, render_focus_sequent(node.conclusion)
    step = node.step.value if node.index is None else f"{node.step.value}#{node.index}"
    if isinstance(node, VectorTree):
        return step, render_vector(node.node)
    return step, f"{node.node.state} {render_vector(node.node.vector)}"


def _children(node: Tree) -> tuple:
    return node.premises if isinstance(node, (LrProof, FrProof)) else node.children


def render_tree(tree: Tree) -> str:
    lines = []
    stack = [(tree, 0)]
    while stack:
        node, depth = stack.pop()
        step, label = _step_label(node)
        lines.append(f"{'  ' * depth}{step} {label}")
        stack.extend((c, depth + 1) for c in reversed(_children(node)))
    return "\n".join(lines) + "\n"


def tree_spec(tree: Tree) -> TreeSpec:
    """Nested-list form of a tree, built without recursion."""
    specs: Dict[int, TreeSpec] = {}
    order = []
    stack = [tree]
    while stack:
        node = stack.pop()
        order.append(node)
        stack.extend(_children(node))
    for node in reversed(order):
        step, label = _step_label(node)
        specs[id(node)] = [step, label, [specs[id(c)] for c in _children(node)]]
    return specs[id(tree)]


def render_tree_json(tree: Tree) -> str:
    return json.dumps(tree_spec(tree))


def _parse_tree_lines(text: str) -> TreeSpec:
    roots: List[TreeSpec] = []
    stack: List[Tuple[int, TreeSpec]] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        indent = len(raw) - len(raw.lstrip(" "))
        if indent % 2:
            raise FormatError("indentation must be a multiple of two spaces", number)
        depth = indent // 2
        content = raw.strip()
        # a principal formula in braces may contain spaces
        m = _TREE_LINE.fullmatch(content)
        if m is None:
            raise FormatError(f"malformed tree line '{content}'", number)
        spec: TreeSpec = [m.group(1), m.group(2), [], number]
        while stack and stack[-1][0] >= depth:
            stack.pop()
        if not stack:
            if depth != 0 or roots:
                raise FormatError("a tree file holds exactly one root at indentation 0", number)
            roots.append(spec)
        else:
            if depth != stack[-1][0] + 1:
                raise FormatError("indentation jumps more than one level", number)
            stack[-1][1][2].append(spec)
        stack.append((depth, spec))
    if not roots:
        raise FormatError("empty tree")
    return roots[0]


def parse_tree_spec(text: str) -> TreeSpec:
    """Nested-list spec from either the indented text form or its JSON form."""
    if text.lstrip().startswith("["):
        try:
            spec = json.loads(text)
        except json.JSONDecodeError as e:
            raise FormatError(f"invalid JSON tree: {e.msg}", e.lineno) from None
        return spec
    return _parse_tree_lines(text)


def _build(spec: TreeSpec, make: Callable[[str, str, tuple, Optional[int]], Tree]) -> Tree:
    order = []
    stack = [spec]
    while stack:
        node = stack.pop()
        if not isinstance(node, list) or len(node) < 3 or not isinstance(node[2], list):
            raise FormatError("tree nodes must be [step, label, [children...]]")
        order.append(node)
        stack.extend(node[2])
    built: Dict[int, Tree] = {}
    for node in reversed(order):
        line = node[3] if len(node) > 3 else None
        built[id(node)] = make(str(node[0]), str(node[1]), tuple(built[id(c)] for c in node[2]), line)
    return built[id(spec)]


def _split_step(step: str, line: Optional[int]) -> Tuple[str, Optional[str]]:
    m = re.fullmatch(r"(\w+)(?:\{([^}]*)\})?", step)
    if m is None:
        raise FormatError(f"malformed proof step '{step}'", line)
    return m.group(1), m.group(2)


def parse_proof_text(text: str, calculus: Calculus = Calculus.LR) -> Union[LrProof, FrProof]:
    def make(step, label, premises, line):
        name, principal = _split_step(step, line)
        try:
            formula = parse_formula(principal) if principal else None
            if calculus == Calculus.LR:
                return LrProof(LrRule(name), parse_sequent(label), premises, formula)
            return FrProof(FrRule(name), parse_focus_sequent(label), premises, formula)
        except ValueError:
            raise FormatError(f"unknown rule '{name}'", line) from None
        except FormulaSyntaxError as e:
            raise FormatError(e.message, line) from None
        except FormatError as e:
            raise FormatError(e.message, line) from None

    return _build(parse_tree_spec(text), make)


def parse_witness_text(text: str) -> Union[DeductionTree, VectorTree]:
    """Deduction tree (``STEP state (v)`` labels) or BVAS vector tree (``STEP (v)``)."""
    spec = parse_tree_spec(text)
    vector_only = str(spec[1]).strip().startswith("(")

    def make(step, label, children, line):
        m = _STEP.fullmatch(step)
        if m is None:
            raise FormatError(f"malformed witness step '{step}'", line)
        kind, index = StepKind(m.group(1)), (int(m.group(2)) if m.group(2) else None)
        parts = label.split(None, 1)
        try:
            if vector_only:
                return VectorTree(_label_vector(label), kind, index, children)
            if len(parts) != 2:
                raise FormatError(f"expected '<state> (<vector>)', got '{label}'", line)
            return DeductionTree(Configuration(parts[0], _label_vector(parts[1])), kind, index, children)
        except ValueError:
            raise FormatError(f"malformed vector in '{label}'", line) from None

    return _build(spec, make)


def _label_vector(text: str) -> Vector:
    text = text.strip()
    if not (text.startswith("(") and text.endswith(")")):
        raise ValueError(text)
    body = text[1:-1].strip()
    return tuple(int(x) for x in body.split(",")) if body else ()