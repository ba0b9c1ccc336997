"""Canonical source renderer for the neutral syntax tree.

One statement per line, four-space indents, single spacing, minimal
parentheses.  Printing is deterministic and injective on comment-free trees:
parse(print_canonical(t)) is structurally equal to t.
"""

from __future__ import annotations

from .tree import Node, SyntaxTree

# binding strength; higher binds tighter
_PREC = {
    "lambda": 1,
    "if_exp": 2,
    "or": 3,
    "and": 4,
    "not": 5,
    "compare": 6,
    "|": 7,
    "^": 8,
    "&": 9,
    "<<": 10, ">>": 10,
    "+": 11, "-": 11,
    "*": 12, "/": 12, "//": 12, "%": 12,
    "unary": 13,
    "**": 14,
}
_ATOM = 16


def _prec(n: Node) -> int:
    if n.kind == "binary_op":
        return _PREC[n.label]
    if n.kind == "bool_op":
        return _PREC[n.label]
    if n.kind == "unary_op":
        return _PREC["not"] if n.label == "not" else _PREC["unary"]
    if n.kind == "compare":
        return _PREC["compare"]
    if n.kind in ("lambda", "if_exp"):
        return _PREC[n.kind]
    if n.kind == "literal" and n.label.startswith("-"):
        return _PREC["unary"]  # negative literal prints like a unary minus
    return _ATOM


def _expr(n: Node, ctx: int = 0) -> str:
    text = _expr_inner(n)
    if _prec(n) < ctx:
        return f"({text})"
    return text


def _params(n: Node) -> str:
    parts = []
    for p in n.children:
        if p.children:
            parts.append(f"{p.label}={_expr(p.children[0], 1)}")
        else:
            parts.append(p.label)
    return ", ".join(parts)


def _expr_inner(n: Node) -> str:
    k = n.kind
    if k == "name" or k == "literal" or k == "fstring":
        return n.label
    if k == "binary_op":
        p = _PREC[n.label]
        left, right = n.children
        if n.label == "**":  # right-associative
            return f"{_expr(left, p + 1)} ** {_expr(right, p)}"
        return f"{_expr(left, p)} {n.label} {_expr(right, p + 1)}"
    if k == "unary_op":
        p = _prec(n)
        if n.label == "not":
            return f"not {_expr(n.children[0], p)}"
        return f"{n.label}{_expr(n.children[0], p)}"
    if k == "bool_op":
        p = _PREC[n.label]
        return f" {n.label} ".join(_expr(c, p + 1) for c in n.children)
    if k == "compare":
        p = _PREC["compare"]
        ops = n.label.split(",")
        out = [_expr(n.children[0], p + 1)]
        for op, operand in zip(ops, n.children[1:]):
            out.append(f" {op} {_expr(operand, p + 1)}")
        return "".join(out)
    if k == "call":
        args = ", ".join(_expr(a, 0) if a.kind != "kwarg" else _kwarg(a) for a in n.children[1:])
        return f"{_expr(n.children[0], _ATOM)}({args})"
    if k == "star":
        return f"*{_expr(n.children[0], _ATOM)}"
    if k == "attribute":
        obj = n.children[0]
        text = _expr(obj, _ATOM)
        if obj.kind == "literal" and (obj.label[0].isdigit() or obj.label[0] in "-."):
            text = f"({text})"  # 1.real would lex as a float
        return f"{text}.{n.label}"
    if k == "subscript":
        return f"{_expr(n.children[0], _ATOM)}[{_subscript_index(n.children[1])}]"
    if k == "slice":
        # slices only appear in subscript position
        return _slice(n)
    if k == "lambda":
        params = _params(n.children[0])
        head = f"lambda {params}: " if params else "lambda: "
        return head + _expr(n.children[1], 1)
    if k == "if_exp":
        body, test, orelse = n.children
        return f"{_expr(body, 3)} if {_expr(test, 3)} else {_expr(orelse, 2)}"
    if k == "list":
        return "[" + ", ".join(_expr(c, 0) for c in n.children) + "]"
    if k == "tuple":
        if not n.children:
            return "()"
        if len(n.children) == 1:
            return f"({_expr(n.children[0], 0)},)"
        return "(" + ", ".join(_expr(c, 0) for c in n.children) + ")"
    if k == "set":
        return "{" + ", ".join(_expr(c, 0) for c in n.children) + "}"
    if k == "dict":
        return "{" + ", ".join(_dict_item(c) for c in n.children) + "}"
    if k in ("list_comp", "set_comp", "gen_exp", "dict_comp"):
        head = _dict_item(n.children[0], 3) if k == "dict_comp" else _expr(n.children[0], 3)
        clauses = " ".join(_comp_for(c) for c in n.children[1:])
        brackets = {"list_comp": "[]", "set_comp": "{}", "dict_comp": "{}", "gen_exp": "()"}[k]
        return f"{brackets[0]}{head} {clauses}{brackets[1]}"
    raise ValueError(f"not an expression node: {n.kind}")


def _kwarg(n: Node) -> str:
    return f"{n.label}={_expr(n.children[0], 0)}"


def _dict_item(n: Node, value_ctx: int = 0) -> str:
    # keys never print bare lambdas/conditionals: the colon would be ambiguous
    return f"{_expr(n.children[0], 3)}: {_expr(n.children[1], value_ctx)}"


def _comp_for(n: Node) -> str:
    target, source = n.children[0], n.children[1]
    text = f"for {_expr(target, 0)} in {_expr(source, 3)}"
    for cond in n.children[2:]:
        text += f" if {_expr(cond, 3)}"
    return text


def _subscript_index(n: Node) -> str:
    if n.kind == "slice":
        return _slice(n)
    return _expr(n, 0)


def _slice(n: Node) -> str:
    present = iter(n.children)
    parts = [(_expr(next(present), 2) if flag == "1" else "") for flag in n.label]
    if n.label[2] == "0":
        return f"{parts[0]}:{parts[1]}"
    return f"{parts[0]}:{parts[1]}:{parts[2]}"


def _stmt(n: Node, indent: int, lines: list[str]) -> None:
    pad = "    " * indent
    k = n.kind
    if k == "comment":
        lines.append(pad + n.label)
    elif k == "expr_stmt":
        lines.append(pad + _expr(n.children[0], 0))
    elif k == "assign":
        parts = [_expr(c, 0) for c in n.children]
        lines.append(pad + " = ".join(parts))
    elif k == "aug_assign":
        lines.append(f"{pad}{_expr(n.children[0], 0)} {n.label} {_expr(n.children[1], 0)}")
    elif k == "return":
        lines.append(pad + ("return" if not n.children else f"return {_expr(n.children[0], 0)}"))
    elif k in ("pass", "break", "continue"):
        lines.append(pad + k)
    elif k == "import":
        lines.append(pad + "import " + ", ".join(a.label for a in n.children))
    elif k == "import_from":
        lines.append(f"{pad}from {n.label} import " + ", ".join(a.label for a in n.children))
    elif k == "function_def":
        lines.append(f"{pad}def {n.label}({_params(n.children[0])}):")
        _block(n.children[1], indent + 1, lines)
    elif k == "class_def":
        bases = n.children[:-1]
        head = f"{pad}class {n.label}"
        if bases:
            head += "(" + ", ".join(_expr(b, 0) for b in bases) + ")"
        lines.append(head + ":")
        _block(n.children[-1], indent + 1, lines)
    elif k == "if":
        _if_chain(n, indent, lines, "if")
    elif k == "while":
        lines.append(f"{pad}while {_expr(n.children[0], 0)}:")
        _block(n.children[1], indent + 1, lines)
        if len(n.children) == 3:
            lines.append(pad + "else:")
            _block(n.children[2], indent + 1, lines)
    elif k == "for":
        lines.append(f"{pad}for {_expr(n.children[0], 0)} in {_expr(n.children[1], 0)}:")
        _block(n.children[2], indent + 1, lines)
        if len(n.children) == 4:
            lines.append(pad + "else:")
            _block(n.children[3], indent + 1, lines)
    else:
        raise ValueError(f"not a statement node: {n.kind}")


def _if_chain(n: Node, indent: int, lines: list[str], keyword: str) -> None:
    pad = "    " * indent
    lines.append(f"{pad}{keyword} {_expr(n.children[0], 0)}:")
    _block(n.children[1], indent + 1, lines)
    if len(n.children) == 2:
        return
    orelse = n.children[2]
    if len(orelse.children) == 1 and orelse.children[0].kind == "if":
        _if_chain(orelse.children[0], indent, lines, "elif")
    else:
        lines.append(pad + "else:")
        _block(orelse, indent + 1, lines)


def _block(n: Node, indent: int, lines: list[str]) -> None:
    for stmt in n.children:
        _stmt(stmt, indent, lines)


def print_canonical(tree: SyntaxTree | Node) -> str:
    root = tree.root if isinstance(tree, SyntaxTree) else tree
    if root.kind != "module":
        raise ValueError("print_canonical expects a module root")
    lines: list[str] = []
    for stmt in root.children:
        _stmt(stmt, 0, lines)
    if not lines:
        return ""
    return "\n".join(lines) + "\n"
