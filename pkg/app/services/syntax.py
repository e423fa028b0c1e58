"""Surface syntax for formulas, sequents and formula corpora.

Grammar (whitespace ignored)::

    imp  := fus ('->' imp)?
    fus  := prim ('o' prim)*
    prim := IDENT | 'T' | '(' imp ')'
"""
import logging
import re
from pathlib import Path
from typing import Iterable, List, Optional, Tuple

from app.core.exceptions import FormatError, FormulaSyntaxError
from app.models.formula import (
    FUSION_TOKEN, TRUTH, TRUTH_TOKEN, Atom, Formula, Fusion, Imp, Truth,
)
from app.models.sequent import FocusSequent, Sequent

logger = logging.getLogger(__name__)

_TOKEN = re.compile(r"\s*(?:(->)|(\()|(\))|([A-Za-z0-9_]+)|(\S))")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # trailing whitespace
            break
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("ARROW", "->", start))
        elif m.group(2):
            tokens.append(("LPAREN", "(", start))
        elif m.group(3):
            tokens.append(("RPAREN", ")", start))
        elif m.group(4):
            word = m.group(4)
            kind = "FUSION" if word == FUSION_TOKEN else "IDENT"
            tokens.append((kind, word, start))
        else:
            raise FormulaSyntaxError(start, "'->', 'o', '(', ')' or an identifier", text)
        pos = m.end()
    tokens.append(("END", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> Tuple[str, str, int]:
        return self.tokens[self.pos]

    def expect(self, kind: str, description: str) -> Tuple[str, str, int]:
        token = self.peek()
        if token[0] != kind:
            raise FormulaSyntaxError(token[2], description, self.text)
        self.pos += 1
        return token

    def implication(self) -> Formula:
        left = self.fusion()
        if self.peek()[0] == "ARROW":
            self.pos += 1
            return Imp(left, self.implication())
        return left

    def fusion(self) -> Formula:
        left = self.primary()
        while self.peek()[0] == "FUSION":
            self.pos += 1
            left = Fusion(left, self.primary())
        return left

    def primary(self) -> Formula:
        kind, value, position = self.peek()
        if kind == "IDENT":
            self.pos += 1
            return TRUTH if value == TRUTH_TOKEN else Atom(value)
        if kind == "LPAREN":
            self.pos += 1
            inner = self.implication()
            self.expect("RPAREN", "')'")
            return inner
        raise FormulaSyntaxError(position, "an atom, 'T' or '('", self.text)


def parse_formula(text: str) -> Formula:
    parser = _Parser(text)
    formula = parser.implication()
    parser.expect("END", "end of input")
    return formula


def render_formula(f: Formula) -> str:
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Truth):
        return TRUTH_TOKEN
    if isinstance(f, Imp):
        left = render_formula(f.left)
        if isinstance(f.left, Imp):
            left = f"({left})"
        return f"{left}->{render_formula(f.right)}"
    left = render_formula(f.left)
    right = render_formula(f.right)
    if isinstance(f.left, Imp):
        left = f"({left})"
    if isinstance(f.right, (Imp, Fusion)):
        right = f"({right})"
    return f"{left} {FUSION_TOKEN} {right}"


def _split_antecedent(text: str) -> List[str]:
    items, depth, current = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            items.append("".join(current))
            current = []
        else:
            current.append(ch)
    items.append("".join(current))
    return [item.strip() for item in items if item.strip()]


def parse_focus_sequent(text: str) -> FocusSequent:
    """Parse ``G1, [F], G2 |- A``; at most one bracketed focus."""
    if text.count("|-") != 1:
        raise FormatError(f"expected exactly one '|-' in sequent '{text}'")
    left, right = text.split("|-")
    antecedent, focus = [], None
    for item in _split_antecedent(left):
        if item.startswith("[") and item.endswith("]"):
            if focus is not None:
                raise FormatError(f"more than one focused formula in '{text}'")
            focus = parse_formula(item[1:-1])
        else:
            antecedent.append(parse_formula(item))
    return FocusSequent(tuple(antecedent), focus, parse_formula(right))


def parse_sequent(text: str) -> Sequent:
    parsed = parse_focus_sequent(text)
    if parsed.focus is not None:
        raise FormatError(f"unexpected focus in sequent '{text}'")
    return Sequent(parsed.antecedent, parsed.succedent)


def render_sequent(s: Sequent) -> str:
    context = ", ".join(render_formula(f) for f in s.antecedent)
    return f"{context} |- {render_formula(s.succedent)}" if context else f"|- {render_formula(s.succedent)}"


def render_focus_sequent(s: FocusSequent) -> str:
    parts = [render_formula(f) for f in s.antecedent]
    if s.focus is not None:
        parts.append(f"[{render_formula(s.focus)}]")
    context = ", ".join(parts)
    return f"{context} |- {render_formula(s.succedent)}" if context else f"|- {render_formula(s.succedent)}"


def parse_corpus(text: str) -> List[Formula]:
    formulas = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            formulas.append(parse_formula(line))
        except FormulaSyntaxError as e:
            raise FormatError(e.message, line=number) from e
    return formulas


def read_corpus(path: Path) -> List[Formula]:
    formulas = parse_corpus(Path(path).read_text(encoding="utf-8"))
    logger.info(f"Read {len(formulas)} formulas from {path}")
    return formulas


def write_corpus(path: Path, formulas: Iterable[Formula], header: Optional[str] = None) -> None:
    lines = [f"# {header}"] if header else []
    lines.extend(render_formula(f) for f in formulas)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
