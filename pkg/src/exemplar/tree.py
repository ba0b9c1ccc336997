"""Ordered labeled syntax tree: the unit of transformation and differencing.

The node-kind vocabulary is closed and documented in docs/tree-model.md.
Trees are treated as immutable after construction; rewriters build new nodes.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Iterator, Optional

# Closed node-kind vocabulary.  Anything a parse can produce is listed here;
# the parser rejects source that would need a kind outside this set.
KINDS = frozenset(
    {
        # statements
        "module",
        "function_def",
        "class_def",
        "return",
        "assign",
        "aug_assign",
        "for",
        "while",
        "if",
        "expr_stmt",
        "pass",
        "break",
        "continue",
        "import",
        "import_from",
        "comment",
        # structure
        "block",
        "params",
        "param",
        "alias",
        # expressions
        "name",
        "literal",
        "fstring",
        "binary_op",
        "unary_op",
        "bool_op",
        "compare",
        "call",
        "kwarg",
        "star",
        "attribute",
        "subscript",
        "slice",
        "lambda",
        "if_exp",
        "list",
        "tuple",
        "set",
        "dict",
        "dict_item",
        "list_comp",
        "set_comp",
        "dict_comp",
        "gen_exp",
        "comp_for",
    }
)

# Kinds whose label participates in program meaning (identifier text, literal
# lexeme, operator symbol, attribute name, ...).  All other kinds carry label None.
LABELED_KINDS = frozenset(
    {
        "function_def",
        "class_def",
        "aug_assign",
        "import_from",
        "name",
        "literal",
        "fstring",
        "binary_op",
        "unary_op",
        "bool_op",
        "compare",
        "kwarg",
        "attribute",
        "slice",
        "param",
        "alias",
    }
)


@dataclass
class Node:
    kind: str
    label: Optional[str] = None
    children: tuple["Node", ...] = ()
    _hash: Optional[str] = field(default=None, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown node kind: {self.kind!r}")
        if not isinstance(self.children, tuple):
            object.__setattr__(self, "children", tuple(self.children))

    def replace(self, children: tuple["Node", ...] | list["Node"] | None = None,
                label: Optional[str] = "__keep__") -> "Node":
        return Node(
            self.kind,
            self.label if label == "__keep__" else label,
            tuple(children) if children is not None else self.children,
        )

    def __repr__(self) -> str:  # compact, debugging only
        head = self.kind if self.label is None else f"{self.kind}({self.label})"
        if not self.children:
            return head
        return f"{head}[{', '.join(repr(c) for c in self.children)}]"


@dataclass
class SyntaxTree:
    root: Node
    source_id: Optional[str] = None


def node(kind: str, *children: Node, label: Optional[str] = None) -> Node:
    return Node(kind, label, tuple(children))


def preorder(n: Node) -> Iterator[Node]:
    stack = [n]
    while stack:
        cur = stack.pop()
        yield cur
        stack.extend(reversed(cur.children))


def postorder(n: Node) -> Iterator[Node]:
    for c in n.children:
        yield from postorder(c)
    yield n


def node_count(n: Node | SyntaxTree) -> int:
    if isinstance(n, SyntaxTree):
        n = n.root
    return 1 + sum(node_count(c) for c in n.children)


def height(n: Node) -> int:
    if not n.children:
        return 1
    return 1 + max(height(c) for c in n.children)


def structurally_equal(a: Node, b: Node) -> bool:
    if a.kind != b.kind or a.label != b.label or len(a.children) != len(b.children):
        return False
    return all(structurally_equal(x, y) for x, y in zip(a.children, b.children))


def structural_hash(n: Node) -> str:
    """Merkle-style digest: equal for structurally identical subtrees.

    256-bit SHA-256, stable across runs and processes.  Cached on the node;
    callers must not mutate nodes after hashing.
    """
    if n._hash is not None:
        return n._hash
    h = hashlib.sha256()
    h.update(n.kind.encode("utf-8"))
    h.update(b"\x00")
    if n.label is not None:
        h.update(n.label.encode("utf-8"))
    h.update(b"\x01")
    for c in n.children:
        h.update(structural_hash(c).encode("ascii"))
    digest = h.hexdigest()
    n._hash = digest
    return digest
