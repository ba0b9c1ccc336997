"""Standardization: rewrite solutions so algorithmically-same ones become
byte-identical, then merge them into a solution graph.

Twelve behavior-preserving transformations run in a fixed order, full passes
repeated until the tree's structural hash stops changing.  Each
transformation is idempotent and individually toggleable.
"""

from __future__ import annotations

import ast as _pyast
import builtins as _builtins
import hashlib
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Optional

from .corpus import TaskCorpus
from .parser import string_lexeme
from .printer import print_canonical
from .tree import Node, SyntaxTree, structural_hash


class Transformation(str, Enum):
    REMOVE_COMMENTS = "remove-comments"
    REMOVE_EMPTY_LINES = "remove-empty-lines"
    SPLIT_CHAINED_ASSIGNMENT = "split-chained-assignment"
    EXPAND_AUGMENTED_ASSIGNMENT = "expand-augmented-assignment"
    ELIMINATE_DOUBLE_NEGATION = "eliminate-double-negation"
    FOLD_CONSTANTS = "fold-constants"
    PRUNE_CONSTANT_BRANCHES = "prune-constant-branches"
    REMOVE_DEAD_CODE = "remove-dead-code"
    COLLAPSE_IF_RETURN_BOOL = "collapse-if-return-bool"
    ORIENT_COMPARISONS = "orient-comparisons"
    CANONICALIZE_LITERALS = "canonicalize-literals"
    ANONYMIZE_IDENTIFIERS = "anonymize-identifiers"


# One full pass applies these in order.  Folding runs before pruning so that
# constant conditions are exposed; anonymization runs last so name generation
# sees the final structure.
PIPELINE_ORDER: tuple[Transformation, ...] = (
    Transformation.REMOVE_COMMENTS,
    Transformation.REMOVE_EMPTY_LINES,
    Transformation.SPLIT_CHAINED_ASSIGNMENT,
    Transformation.EXPAND_AUGMENTED_ASSIGNMENT,
    Transformation.ELIMINATE_DOUBLE_NEGATION,
    Transformation.FOLD_CONSTANTS,
    Transformation.PRUNE_CONSTANT_BRANCHES,
    Transformation.REMOVE_DEAD_CODE,
    Transformation.COLLAPSE_IF_RETURN_BOOL,
    Transformation.ORIENT_COMPARISONS,
    Transformation.CANONICALIZE_LITERALS,
    Transformation.ANONYMIZE_IDENTIFIERS,
)


class NormalizationError(Exception):
    pass


# --------------------------------------------------------------------------
# traversal helpers

def _map_blocks(n: Node, fn: Callable[[list[Node]], list[Node]]) -> Node:
    """Rebuild bottom-up, applying `fn` to every statement list."""
    children = tuple(_map_blocks(c, fn) for c in n.children)
    if n.kind in ("module", "block"):
        new = fn(list(children))
        if n.kind == "block" and not new:
            new = [Node("pass")]
        children = tuple(new)
    return Node(n.kind, n.label, children)


def _map_nodes(n: Node, fn: Callable[[Node], Node]) -> Node:
    """Rebuild bottom-up, applying `fn` to every node."""
    children = tuple(_map_nodes(c, fn) for c in n.children)
    return fn(Node(n.kind, n.label, children))


def _copy(n: Node) -> Node:
    return Node(n.kind, n.label, tuple(_copy(c) for c in n.children))


# --------------------------------------------------------------------------
# literal helpers

def _literal_value(label: str):
    return _pyast.literal_eval(label)


def _label_for_value(v) -> Optional[str]:
    if v is True:
        return "True"
    if v is False:
        return "False"
    if v is None:
        return "None"
    if isinstance(v, str):
        if len(v) > 1000:
            return None
        return string_lexeme(v)
    if isinstance(v, int):
        if abs(v) > 10**15:
            return None
        return str(v)
    if isinstance(v, float):
        if math.isinf(v) or math.isnan(v):
            return None
        return repr(v)
    return None


def _truthiness(n: Node) -> Optional[bool]:
    """Statically known truth value of an expression, or None.

    Only side-effect-free cases are decided: scalar literals and empty
    displays.  Non-empty displays are truthy but their elements may have
    effects, so they are left alone.
    """
    if n.kind == "literal":
        try:
            return bool(_literal_value(n.label))
        except (ValueError, SyntaxError):
            return None
    if n.kind in ("list", "tuple", "set", "dict") and not n.children:
        return False
    return None


def _is_definitely_bool(n: Node) -> bool:
    if n.kind == "compare":
        return True
    if n.kind == "unary_op" and n.label == "not":
        return True
    if n.kind == "literal" and n.label in ("True", "False"):
        return True
    if n.kind == "call" and n.children and n.children[0].kind == "name" and n.children[0].label == "bool":
        return True
    return False


# --------------------------------------------------------------------------
# the twelve transformations

def _remove_comments(root: Node) -> Node:
    def is_comment_like(s: Node) -> bool:
        if s.kind == "comment":
            return True
        # bare string-literal statements (docstrings) are comments in spirit
        if s.kind == "expr_stmt" and s.children[0].kind == "literal" and s.children[0].label.startswith('"'):
            return True
        return False

    return _map_blocks(root, lambda stmts: [s for s in stmts if not is_comment_like(s)])


def _remove_empty_lines(root: Node) -> Node:
    # blank lines never become tree nodes and the canonical printer emits
    # none, so this rewrite is the identity on trees
    return root


def _split_chained_assignment(root: Node) -> Node:
    def fix(stmts: list[Node]) -> list[Node]:
        out = []
        for s in stmts:
            if (
                s.kind == "assign"
                and len(s.children) > 2
                and all(t.kind == "name" for t in s.children[:-1])
            ):
                targets, value = s.children[:-1], s.children[-1]
                out.append(Node("assign", None, (targets[0], value)))
                for prev, t in zip(targets, targets[1:]):
                    out.append(Node("assign", None, (t, Node("name", prev.label))))
            else:
                out.append(s)
        return out

    return _map_blocks(root, fix)


def _is_effect_free_target(n: Node) -> bool:
    if n.kind == "name":
        return True
    if n.kind == "attribute":
        return _is_effect_free_target(n.children[0])
    if n.kind == "subscript":
        return all(_is_effect_free_target(c) or c.kind in ("literal", "slice") for c in n.children)
    if n.kind == "literal":
        return True
    if n.kind == "slice":
        return all(_is_effect_free_target(c) or c.kind == "literal" for c in n.children)
    return False


def _expand_augmented_assignment(root: Node) -> Node:
    def fix(stmts: list[Node]) -> list[Node]:
        out = []
        for s in stmts:
            if s.kind == "aug_assign" and _is_effect_free_target(s.children[0]):
                op = s.label[:-1]
                target, value = s.children
                expanded = Node("binary_op", op, (_copy(target), value))
                out.append(Node("assign", None, (target, expanded)))
            else:
                out.append(s)
        return out

    return _map_blocks(root, fix)


_BOOL_CTX_SLOTS = {
    "if": lambda i, ctx: i == 0,
    "while": lambda i, ctx: i == 0,
    "if_exp": lambda i, ctx: True if i == 1 else ctx,
    "comp_for": lambda i, ctx: i >= 2,
    "bool_op": lambda i, ctx: ctx,
}


def _eliminate_double_negation(root: Node) -> Node:
    def walk(n: Node, bool_ctx: bool) -> Node:
        slot = _BOOL_CTX_SLOTS.get(n.kind)
        if n.kind == "unary_op" and n.label == "not":
            children = tuple(walk(c, True) for c in n.children)
        elif slot is not None:
            children = tuple(walk(c, slot(i, bool_ctx)) for i, c in enumerate(n.children))
        else:
            children = tuple(walk(c, False) for c in n.children)
        n = Node(n.kind, n.label, children)
        if n.kind == "unary_op" and n.label == "not":
            inner = n.children[0]
            if inner.kind == "unary_op" and inner.label == "not":
                operand = inner.children[0]
                if bool_ctx or _is_definitely_bool(operand):
                    return operand
                return Node("call", None, (Node("name", "bool"), operand))
        if n.kind == "unary_op" and n.label == "-":
            inner = n.children[0]
            if inner.kind == "unary_op" and inner.label == "-":
                return inner.children[0]
        return n

    return walk(root, False)


_FOLD_BINOPS = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": lambda a, b: a / b,
    "//": lambda a, b: a // b,
    "%": lambda a, b: a % b,
    "**": lambda a, b: a**b,
    "<<": lambda a, b: a << b,
    ">>": lambda a, b: a >> b,
    "|": lambda a, b: a | b,
    "^": lambda a, b: a ^ b,
    "&": lambda a, b: a & b,
}
_FOLD_CMPOPS = {
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
    "==": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
}


def _fold_constants(root: Node) -> Node:
    def value_of(n: Node):
        if n.kind != "literal":
            raise ValueError("not a literal")
        return _literal_value(n.label)

    def fold(n: Node) -> Node:
        k = n.kind
        try:
            if k == "binary_op" and all(c.kind == "literal" for c in n.children):
                a, b = (value_of(c) for c in n.children)
                if n.label == "**" and isinstance(b, int) and abs(b) > 128:
                    return n
                if n.label in ("<<", ">>") and isinstance(b, int) and abs(b) > 256:
                    return n
                label = _label_for_value(_FOLD_BINOPS[n.label](a, b))
                return Node("literal", label) if label is not None else n
            if k == "unary_op" and n.children[0].kind == "literal":
                v = value_of(n.children[0])
                result = {"-": lambda x: -x, "+": lambda x: +x, "~": lambda x: ~x, "not": lambda x: not x}[n.label](v)
                label = _label_for_value(result)
                return Node("literal", label) if label is not None else n
            if k == "compare" and all(c.kind == "literal" for c in n.children):
                ops = n.label.split(",")
                if not all(op in _FOLD_CMPOPS for op in ops):
                    return n
                values = [value_of(c) for c in n.children]
                result = all(_FOLD_CMPOPS[op](x, y) for op, x, y in zip(ops, values, values[1:]))
                return Node("literal", "True" if result else "False")
            if k == "bool_op":
                return _fold_bool_op(n)
        except (ValueError, TypeError, ZeroDivisionError, OverflowError, SyntaxError, MemoryError):
            return n
        return n

    return _map_nodes(root, fold)


def _fold_bool_op(n: Node) -> Node:
    # `and` returns the first falsy operand or the last one; `or` dually.
    # A known-truthiness operand before the end either truncates the chain
    # (chain stops there) or can be dropped (it can never be the result).
    stops_chain = False if n.label == "and" else True
    kept: list[Node] = []
    for i, operand in enumerate(n.children):
        t = _truthiness(operand)
        last = i == len(n.children) - 1
        if t is None or last:
            kept.append(operand)
            continue
        if t == stops_chain:
            kept.append(operand)
            break
        # operand can never be the result and has no side effects: drop it
    if len(kept) == 1:
        return kept[0]
    if len(kept) == len(n.children):
        return n
    return Node("bool_op", n.label, tuple(kept))


def _prune_constant_branches(root: Node) -> Node:
    def fix(stmts: list[Node]) -> list[Node]:
        out: list[Node] = []
        for s in stmts:
            if s.kind == "if":
                t = _truthiness(s.children[0])
                if t is True:
                    out.extend(s.children[1].children)
                    continue
                if t is False:
                    if len(s.children) == 3:
                        out.extend(s.children[2].children)
                    continue
            if s.kind == "while":
                t = _truthiness(s.children[0])
                if t is False:
                    if len(s.children) == 3:  # loop never runs; else-clause does
                        out.extend(s.children[2].children)
                    continue
                if t is True and len(s.children) == 3:
                    # the condition never becomes false, so else never runs
                    out.append(Node("while", None, s.children[:2]))
                    continue
            out.append(s)
        return out

    def fix_ifexp(n: Node) -> Node:
        if n.kind == "if_exp":
            t = _truthiness(n.children[1])
            if t is True:
                return n.children[0]
            if t is False:
                return n.children[2]
        return n

    pruned = _map_nodes(root, fix_ifexp)
    return _map_blocks(pruned, fix)


def _remove_dead_code(root: Node) -> Node:
    # statements after return/break/continue in the same block are unreachable
    def fix(stmts: list[Node]) -> list[Node]:
        for i, s in enumerate(stmts):
            if s.kind in ("return", "break", "continue"):
                return stmts[: i + 1]
        return stmts

    return _map_blocks(root, fix)


def _collapse_if_return_bool(root: Node) -> Node:
    def sole_bool_return(block: Node) -> Optional[bool]:
        if block.kind != "block" or len(block.children) != 1:
            return None
        return bool_return(block.children[0])

    def bool_return(s: Node) -> Optional[bool]:
        if s.kind == "return" and s.children and s.children[0].kind == "literal":
            if s.children[0].label == "True":
                return True
            if s.children[0].label == "False":
                return False
        return None

    def make_return(test: Node, positive: bool) -> Node:
        if not positive:
            expr = Node("unary_op", "not", (test,))
        elif _is_definitely_bool(test):
            expr = test
        else:
            expr = Node("call", None, (Node("name", "bool"), test))
        return Node("return", None, (expr,))

    def fix(stmts: list[Node]) -> list[Node]:
        out: list[Node] = []
        i = 0
        while i < len(stmts):
            s = stmts[i]
            if s.kind == "if":
                body_val = sole_bool_return(s.children[1])
                if body_val is not None:
                    if len(s.children) == 3:
                        else_val = sole_bool_return(s.children[2])
                        if else_val is not None and else_val != body_val:
                            out.append(make_return(s.children[0], body_val))
                            i += 1
                            continue
                    elif i + 1 < len(stmts):
                        follow_val = bool_return(stmts[i + 1])
                        if follow_val is not None and follow_val != body_val:
                            out.append(make_return(s.children[0], body_val))
                            i += 2
                            continue
            out.append(s)
            i += 1
        return out

    return _map_blocks(root, fix)


_ORIENT = {"<": ">", "<=": ">="}


def _orient_comparisons(root: Node) -> Node:
    def fix(n: Node) -> Node:
        if n.kind == "compare":
            ops = n.label.split(",")
            if all(op in _ORIENT for op in ops):
                flipped = ",".join(_ORIENT[op] for op in reversed(ops))
                return Node("compare", flipped, tuple(reversed(n.children)))
        return n

    return _map_nodes(root, fix)


def _canonicalize_literals(root: Node) -> Node:
    def fix(n: Node) -> Node:
        if n.kind == "literal":
            try:
                label = _label_for_value(_literal_value(n.label))
            except (ValueError, SyntaxError):
                return n
            if label is not None and label != n.label:
                return Node("literal", label)
        return n

    return _map_nodes(root, fix)


# --------------------------------------------------------------------------
# identifier anonymization

_BUILTIN_NAMES = frozenset(dir(_builtins))

_CATEGORY_PREFIX = {"variable": "v", "function": "f", "parameter": "p", "class": "c"}


class _Binding:
    __slots__ = ("category", "new_name", "scope", "def_node")

    def __init__(self, category: str, scope: "_Scope", def_node: Optional[Node] = None):
        self.category = category
        self.new_name: Optional[str] = None
        self.scope = scope
        self.def_node = def_node


class _Scope:
    __slots__ = ("kind", "parent", "bindings")

    def __init__(self, kind: str, parent: Optional["_Scope"]):
        self.kind = kind
        self.parent = parent
        self.bindings: dict[str, _Binding] = {}

    def bind(self, name: str, category: str, def_node: Optional[Node] = None) -> _Binding:
        existing = self.bindings.get(name)
        if existing is not None:
            return existing
        binding = _Binding(category, self, def_node)
        self.bindings[name] = binding
        return binding

    def lookup(self, name: str) -> Optional[_Binding]:
        scope: Optional[_Scope] = self
        first = True
        while scope is not None:
            # class-body names are invisible to nested scopes
            if name in scope.bindings and (scope.kind != "class" or first):
                return scope.bindings[name]
            first = False
            scope = scope.parent
        return None


class _Anonymizer:
    """Scope-aware consistent renaming.

    Counters are global per category so fresh names can never capture a
    different binding; within that constraint names are assigned in order of
    first occurrence in a preorder walk.
    """

    def __init__(self) -> None:
        self.counters = {prefix: 0 for prefix in _CATEGORY_PREFIX.values()}
        # (node, attr) pairs to relabel once bindings have names
        self.occurrences: list[tuple[Node, _Binding]] = []
        self.kwarg_fixes: list[tuple[Node, _Scope]] = []

    # -- binding collection ------------------------------------------------

    def collect_targets(self, n: Node, scope: _Scope) -> None:
        if n.kind == "name":
            scope.bind(n.label, "variable")
        elif n.kind in ("tuple", "list", "star"):
            for c in n.children:
                self.collect_targets(c, scope)
        # attribute/subscript targets bind nothing

    def collect_block_bindings(self, stmts: Iterable[Node], scope: _Scope) -> None:
        """Register names bound anywhere in this scope (Python scoping rule)."""
        for s in stmts:
            k = s.kind
            if k == "assign":
                for t in s.children[:-1]:
                    self.collect_targets(t, scope)
            elif k == "aug_assign":
                self.collect_targets(s.children[0], scope)
            elif k == "for":
                self.collect_targets(s.children[0], scope)
                for blk in s.children[2:]:
                    self.collect_block_bindings(blk.children, scope)
            elif k in ("while", "if"):
                for blk in s.children[1:]:
                    if blk.kind == "block":
                        self.collect_block_bindings(blk.children, scope)
            elif k == "function_def":
                scope.bind(s.label, "function", s)
            elif k == "class_def":
                scope.bind(s.label, "class", s)
            elif k == "import":
                for a in s.children:
                    name = a.label.split(" as ")[-1] if " as " in a.label else a.label.split(".")[0]
                    scope.bind(name, "import")
            elif k == "import_from":
                for a in s.children:
                    name = a.label.split(" as ")[-1] if " as " in a.label else a.label
                    if name != "*":
                        scope.bind(name, "import")

    # -- occurrence walk -----------------------------------------------------

    def walk_expr(self, n: Node, scope: _Scope) -> None:
        k = n.kind
        if k == "name":
            binding = scope.lookup(n.label)
            if binding is not None:
                self.occurrences.append((n, binding))
            return
        if k == "lambda":
            fn_scope = _Scope("function", scope)
            params, body = n.children
            for p in params.children:
                fn_scope.bind(p.label, "parameter")
                if p.children:  # defaults evaluate in the enclosing scope
                    self.walk_expr(p.children[0], scope)
            self._bind_params(params, fn_scope)
            self.walk_expr(body, fn_scope)
            return
        if k in ("list_comp", "set_comp", "dict_comp", "gen_exp"):
            comp_scope = _Scope("comprehension", scope)
            gens = n.children[1:]
            for g in gens:
                self.collect_targets(g.children[0], comp_scope)
            for i, g in enumerate(gens):
                # the first iterable evaluates in the enclosing scope
                self.walk_expr(g.children[1], scope if i == 0 else comp_scope)
            for g in gens:
                self.walk_expr(g.children[0], comp_scope)
                for cond in g.children[2:]:
                    self.walk_expr(cond, comp_scope)
            self.walk_expr(n.children[0], comp_scope)
            return
        if k == "call":
            for c in n.children:
                if c.kind == "kwarg":
                    self.walk_expr(c.children[0], scope)
                else:
                    self.walk_expr(c, scope)
            if any(c.kind == "kwarg" for c in n.children[1:]) and n.children[0].kind == "name":
                self.kwarg_fixes.append((n, scope))
            return
        if k == "attribute":
            self.walk_expr(n.children[0], scope)
            return
        for c in n.children:
            self.walk_expr(c, scope)

    def _bind_params(self, params: Node, fn_scope: _Scope) -> None:
        for p in params.children:
            binding = fn_scope.bindings[p.label]
            self.occurrences.append((p, binding))

    def walk_stmts(self, stmts: Iterable[Node], scope: _Scope) -> None:
        for s in stmts:
            k = s.kind
            if k == "function_def":
                binding = scope.bindings[s.label]
                self.occurrences.append((s, binding))
                params, body = s.children
                fn_scope = _Scope("function", scope)
                for p in params.children:
                    fn_scope.bind(p.label, "parameter")
                    if p.children:
                        self.walk_expr(p.children[0], scope)
                binding.def_node = s
                self._fn_scopes[id(s)] = fn_scope
                self._bind_params(params, fn_scope)
                self.collect_block_bindings(body.children, fn_scope)
                self.walk_stmts(body.children, fn_scope)
            elif k == "class_def":
                binding = scope.bindings[s.label]
                self.occurrences.append((s, binding))
                for base in s.children[:-1]:
                    self.walk_expr(base, scope)
                cls_scope = _Scope("class", scope)
                body = s.children[-1]
                self.collect_block_bindings(body.children, cls_scope)
                self.walk_stmts(body.children, cls_scope)
            elif k in ("if", "while"):
                self.walk_expr(s.children[0], scope)
                for blk in s.children[1:]:
                    self.walk_stmts(blk.children, scope)
            elif k == "for":
                self.walk_expr(s.children[0], scope)
                self.walk_expr(s.children[1], scope)
                for blk in s.children[2:]:
                    self.walk_stmts(blk.children, scope)
            elif k in ("assign", "aug_assign", "expr_stmt", "return"):
                for c in s.children:
                    self.walk_expr(c, scope)
            # pass/break/continue/import/comment: no renameable occurrences

    # -- driver ---------------------------------------------------------------

    def run(self, root: Node) -> Node:
        root = _copy(root)  # occurrences are identified by node object
        self._fn_scopes: dict[int, _Scope] = {}
        module_scope = _Scope("module", None)
        self.collect_block_bindings(root.children, module_scope)
        self.walk_stmts(root.children, module_scope)

        relabels: dict[int, str] = {}
        for node, binding in self.occurrences:
            if binding.category not in _CATEGORY_PREFIX:
                continue  # imports stay as written
            if binding.new_name is None:
                prefix = _CATEGORY_PREFIX[binding.category]
                binding.new_name = f"{prefix}{self.counters[prefix]}"
                self.counters[prefix] += 1
            relabels[id(node)] = binding.new_name

        # keyword arguments at call sites of lexically-resolvable functions
        # follow the callee's parameter renaming
        kwarg_relabels: dict[int, str] = {}
        for call, scope in self.kwarg_fixes:
            callee = scope.lookup(call.children[0].label)
            if callee is None or callee.category != "function" or callee.def_node is None:
                continue
            fn_scope = self._fn_scopes.get(id(callee.def_node))
            if fn_scope is None:
                continue
            for kw in call.children[1:]:
                if kw.kind != "kwarg":
                    continue
                param = fn_scope.bindings.get(kw.label)
                if param is not None and param.new_name is not None:
                    kwarg_relabels[id(kw)] = param.new_name

        def apply(n: Node) -> Node:
            label = relabels.get(id(n), kwarg_relabels.get(id(n), n.label))
            return Node(n.kind, label, tuple(apply(c) for c in n.children))

        return apply(root)


def _anonymize_identifiers(root: Node) -> Node:
    return _Anonymizer().run(root)


_TRANSFORMS: dict[Transformation, Callable[[Node], Node]] = {
    Transformation.REMOVE_COMMENTS: _remove_comments,
    Transformation.REMOVE_EMPTY_LINES: _remove_empty_lines,
    Transformation.SPLIT_CHAINED_ASSIGNMENT: _split_chained_assignment,
    Transformation.EXPAND_AUGMENTED_ASSIGNMENT: _expand_augmented_assignment,
    Transformation.ELIMINATE_DOUBLE_NEGATION: _eliminate_double_negation,
    Transformation.FOLD_CONSTANTS: _fold_constants,
    Transformation.PRUNE_CONSTANT_BRANCHES: _prune_constant_branches,
    Transformation.REMOVE_DEAD_CODE: _remove_dead_code,
    Transformation.COLLAPSE_IF_RETURN_BOOL: _collapse_if_return_bool,
    Transformation.ORIENT_COMPARISONS: _orient_comparisons,
    Transformation.CANONICALIZE_LITERALS: _canonicalize_literals,
    Transformation.ANONYMIZE_IDENTIFIERS: _anonymize_identifiers,
}


def apply_transformation(tree: SyntaxTree, kind: Transformation) -> SyntaxTree:
    """Apply one transformation exhaustively; inapplicable sites are left as-is."""
    return SyntaxTree(_TRANSFORMS[kind](tree.root), tree.source_id)


def normalize(
    tree: SyntaxTree,
    enabled: Optional[Iterable[Transformation]] = None,
    max_passes: int = 50,
) -> SyntaxTree:
    """Run full pipeline passes until the structural hash reaches a fixpoint."""
    active = tuple(t for t in PIPELINE_ORDER if enabled is None or t in set(enabled))
    current = tree
    seen = structural_hash(current.root)
    for _ in range(max_passes):
        for kind in active:
            current = apply_transformation(current, kind)
        digest = structural_hash(current.root)
        if digest == seen:
            return current
        seen = digest
    raise NormalizationError(f"no fixpoint after {max_passes} passes")


# --------------------------------------------------------------------------
# solution graph

@dataclass
class NormalizedForm:
    form_id: str
    tree: SyntaxTree
    text: str
    member_ids: list[str]


@dataclass
class SolutionGraph:
    task_id: str
    forms: list[NormalizedForm] = field(default_factory=list)


def _form_id(member_ids: list[str]) -> str:
    digest = hashlib.sha256("\n".join(sorted(member_ids)).encode("utf-8")).hexdigest()
    return "f" + digest[:10]


def build_solution_graph(
    task: TaskCorpus,
    parsed: dict[str, SyntaxTree],
    enabled: Optional[Iterable[Transformation]] = None,
    max_passes: int = 50,
) -> tuple[SolutionGraph, dict[str, str]]:
    """Normalize each parsed solution and merge byte-equal canonical texts.

    Returns the graph plus a map of solution id to error message for
    solutions whose normalization did not converge (pass-budget valve).
    Forms are ordered by descending member count, then form_id.
    """
    by_text: dict[str, list[str]] = {}
    trees: dict[str, SyntaxTree] = {}
    failures: dict[str, str] = {}
    for solution in task.solutions:
        if solution.id not in parsed:
            continue
        try:
            normalized = normalize(parsed[solution.id], enabled, max_passes)
        except NormalizationError as exc:
            failures[solution.id] = str(exc)
            continue
        text = print_canonical(normalized)
        if text not in by_text:
            by_text[text] = []
            trees[text] = normalized
        by_text[text].append(solution.id)

    forms = [
        NormalizedForm(_form_id(members), SyntaxTree(trees[text].root, None), text, members)
        for text, members in by_text.items()
    ]
    forms.sort(key=lambda f: (-len(f.member_ids), f.form_id))
    for form in forms:
        form.tree.source_id = form.form_id
    return SolutionGraph(task.task_id, forms), failures
