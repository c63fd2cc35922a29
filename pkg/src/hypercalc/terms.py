"""Bracket-notation number terms: parsing, rendering, traversal.

A term is the constant `1` or a bracketed binary operation `[a OP b]` where
OP is a maximal run of one operator symbol (`+`, `-` or `/`).  The run length
is the operator's rank: `+` is addition, `++` multiplication, `+++`
exponentiation, `++++` tetration, and so on; `-`/`/` runs are the matching
inverse families.

The parser also accepts two layers of sugar for human input: decimal integer
literals (`3` desugars to `[[1+1]+1]`) and decimal fraction literals (`1.5`
desugars to `[15--10]`).  Canonical rendering never emits sugar, so
parse/render round-trips are exact.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

from .errors import ParseError

DEFAULT_MAX_DEPTH = 10_000

Path = tuple[str, ...]


class OpKind(enum.Enum):
    PLUS = "+"
    MINUS = "-"
    SLASH = "/"

    @property
    def symbol(self) -> str:
        return self.value


@dataclass(frozen=True)
class Operator:
    kind: OpKind
    rank: int

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError(f"operator rank must be >= 1, got {self.rank}")

    def text(self) -> str:
        return self.kind.symbol * self.rank


@dataclass(frozen=True)
class Leaf:
    """The constant `1`."""


@dataclass(frozen=True)
class Node:
    op: Operator
    left: "Term"
    right: "Term"


Term = Union[Leaf, Node]

ONE = Leaf()


class RenderStyle(enum.Enum):
    CANONICAL = "canonical"
    SUGARED = "sugared"


@dataclass(frozen=True)
class TraceEvent:
    """One reduction step: the subterm at `path` was replaced by its value."""

    step: int
    path: Path
    before: str
    after: str


# ---------------------------------------------------------------------------
# tokenizer

_ONE = "one"
_OPEN = "open"
_CLOSE = "close"
_RUN = "run"
_INT = "int"
_DEC = "dec"


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    """Split into (type, lexeme, offset) triples.

    Whitespace is insignificant; `#` starts a comment running to end of line.
    Operator runs are maximal: `+++` is one token, never `+` then `++`.
    """
    tokens = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c == "[" or c == "]":
            tokens.append((_OPEN if c == "[" else _CLOSE, c, i))
            i += 1
            continue
        if c in "+-/":
            j = i
            while j < n and text[j] == c:
                j += 1
            tokens.append((_RUN, text[i:j], i))
            i = j
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == "." and j + 1 < n and text[j + 1].isdigit():
                k = j + 1
                while k < n and text[k].isdigit():
                    k += 1
                tokens.append((_DEC, text[i:k], i))
                i = k
            elif text[i:j] == "1":
                tokens.append((_ONE, "1", i))
                i = j
            else:
                tokens.append((_INT, text[i:j], i))
                i = j
            continue
        raise ParseError(f"stray character {c!r}", i)
    return tokens


def desugar_integer(value: int) -> Term:
    """Left-nested `[..[1+1]..+1]` chain; 0 becomes `[1-1]`."""
    if value < 0:
        raise ValueError("only non-negative integer literals desugar")
    if value == 0:
        return Node(Operator(OpKind.MINUS, 1), ONE, ONE)
    plus = Operator(OpKind.PLUS, 1)
    term: Term = ONE
    for _ in range(value - 1):
        term = Node(plus, term, ONE)
    return term


def _desugar_decimal(lexeme: str) -> Term:
    whole, frac = lexeme.split(".")
    return Node(
        Operator(OpKind.MINUS, 2),
        desugar_integer(int(whole + frac)),
        desugar_integer(10 ** len(frac)),
    )


# ---------------------------------------------------------------------------
# parser (iterative, so deeply nested input cannot overflow the call stack)


def parse(text: str, *, max_depth: int = DEFAULT_MAX_DEPTH) -> Term:
    """Parse bracket notation (plus literal sugar) into a Term.

    Raises ParseError with the character offset of the first problem:
    unbalanced brackets, a missing operand, stray characters, or nesting
    deeper than `max_depth`.  A mixed run such as `+-` tokenizes as two
    adjacent runs and is rejected where the second one appears.
    """
    tokens = _tokenize(text)
    pos = 0
    end = len(text)
    # Each frame is a half-built bracket: [left, operator].
    stack: list[list] = []

    while True:
        # --- parse one operand ---
        if pos >= len(tokens):
            raise ParseError("expected an operand", end)
        kind, lexeme, offset = tokens[pos]
        pos += 1
        if kind == _OPEN:
            stack.append([None, None])
            if len(stack) > max_depth:
                raise ParseError(f"nesting deeper than {max_depth}", offset)
            continue
        if kind == _ONE:
            current: Term = ONE
        elif kind == _INT:
            current = desugar_integer(int(lexeme))
        elif kind == _DEC:
            current = _desugar_decimal(lexeme)
        else:
            raise ParseError(f"expected an operand, got {lexeme!r}", offset)

        # --- settle the operand into enclosing frames ---
        while True:
            if not stack:
                if pos < len(tokens):
                    raise ParseError(f"trailing {tokens[pos][1]!r}", tokens[pos][2])
                return current
            frame = stack[-1]
            if frame[0] is None:
                frame[0] = current
                if pos >= len(tokens):
                    raise ParseError("expected an operator", end)
                kind, lexeme, offset = tokens[pos]
                if kind != _RUN:
                    raise ParseError(f"expected an operator, got {lexeme!r}", offset)
                frame[1] = Operator(OpKind(lexeme[0]), len(lexeme))
                pos += 1
                break  # go parse the right operand
            if pos >= len(tokens):
                raise ParseError("expected ']'", end)
            kind, lexeme, offset = tokens[pos]
            if kind != _CLOSE:
                raise ParseError(f"expected ']', got {lexeme!r}", offset)
            pos += 1
            current = Node(frame[1], frame[0], current)
            stack.pop()


# ---------------------------------------------------------------------------
# rendering


def _sugar_value(term: Term) -> int | None:
    """Integer value of a literal-sugar subtree, or None.

    Recognizes exactly the shapes `desugar_integer` produces: `1`,
    `[1-1]`, and left-nested `[..[1+1]..+1]` chains.
    """
    if isinstance(term, Leaf):
        return 1
    count = 0
    node = term
    while isinstance(node, Node):
        if (
            count == 0
            and node.op == Operator(OpKind.MINUS, 1)
            and isinstance(node.left, Leaf)
        ):
            if isinstance(node.right, Leaf):
                return 0
            return None
        if node.op != Operator(OpKind.PLUS, 1) or not isinstance(node.right, Leaf):
            return None
        count += 1
        node = node.left
    return count + 1 if isinstance(node, Leaf) else None


def render(term: Term, style: RenderStyle = RenderStyle.CANONICAL) -> str:
    """Render a Term as text.

    CANONICAL emits pure bracket notation and is the exact inverse of
    `parse`.  SUGARED additionally collapses the parser's own integer and
    decimal desugarings back into literals.
    """
    sugared = style is RenderStyle.SUGARED

    def piece(t: Term) -> str | None:
        # Literal text for t under the active style, or None to recurse.
        if isinstance(t, Leaf):
            return "1"
        if not sugared:
            return None
        v = _sugar_value(t)
        if v is not None:
            return str(v)
        if (
            isinstance(t, Node)
            and t.op == Operator(OpKind.MINUS, 2)
            and (num := _sugar_value(t.left)) is not None
            and (den := _sugar_value(t.right)) is not None
            and den >= 10
            and den == 10 ** (len(str(den)) - 1)
        ):
            places = len(str(den)) - 1
            digits = str(num).rjust(places, "0")
            split = len(digits) - places
            whole = digits[:split] if split > 0 else "0"
            return f"{whole}.{digits[split:]}"
        return None

    out: list[str] = []
    work: list = [term]  # terms to render, or literal strings to emit
    while work:
        item = work.pop()
        if isinstance(item, str):
            out.append(item)
            continue
        text = piece(item)
        if text is not None:
            out.append(text)
            continue
        assert isinstance(item, Node)
        work.extend(["]", item.right, item.op.text(), item.left, "["])
    return "".join(out)


# ---------------------------------------------------------------------------
# structure helpers


def internal_nodes(term: Term) -> int:
    count = 0
    work = [term]
    while work:
        t = work.pop()
        if isinstance(t, Node):
            count += 1
            work.append(t.left)
            work.append(t.right)
    return count


def depth(term: Term) -> int:
    best = 0
    work = [(term, 0)]
    while work:
        t, d = work.pop()
        best = max(best, d)
        if isinstance(t, Node):
            work.append((t.left, d + 1))
            work.append((t.right, d + 1))
    return best


def subterm_at(term: Term, path: Path) -> Term:
    t = term
    for step in path:
        if not isinstance(t, Node):
            raise KeyError(f"no node at path {path}")
        t = t.left if step == "L" else t.right
    return t


def traversal_order(term: Term) -> list[Path]:
    """Inorder (left, node, right) visit sequence of internal-node paths.

    This is the declared operation order for a term; it has one entry per
    internal node.  The printable reduction chain substitutes each node's
    innermost-resolved operands as the node is reached (see
    `engine.trace_reduce`).
    """
    order: list[Path] = []
    # (term, path, visited_left)
    work: list[tuple[Term, Path, bool]] = [(term, (), False)]
    while work:
        t, path, visited = work.pop()
        if not isinstance(t, Node):
            continue
        if visited:
            order.append(path)
            work.append((t.right, path + ("R",), False))
        else:
            work.append((t, path, True))
            work.append((t.left, path + ("L",), False))
    return order


def reduction_order(term: Term) -> list[Path]:
    """Paths of internal nodes in leftmost-innermost (operands-first) order.

    This is the order in which binary operations actually fire when each
    node's value is substituted into the chain as soon as both operands are
    literal: exactly the worked reduction sequence a term prints.
    """
    order: list[Path] = []
    work: list[tuple[Term, Path, bool]] = [(term, (), False)]
    while work:
        t, path, expanded = work.pop()
        if not isinstance(t, Node):
            continue
        if expanded:
            order.append(path)
        else:
            work.append((t, path, True))
            work.append((t.right, path + ("R",), False))
            work.append((t.left, path + ("L",), False))
    return order
