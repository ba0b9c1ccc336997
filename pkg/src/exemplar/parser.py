"""Parse source text into the neutral syntax tree.

The accepted grammar is a documented subset of Python sufficient for MOOC
exercises (see docs/tree-model.md).  Constructs outside the subset raise
ParseError rather than producing a lossy tree, so callers can report the
solution as unprocessable by the tree pipeline.

Standalone comments become statement-level `comment` nodes so that the
comment-removal transformation is expressible on the tree itself.
"""

from __future__ import annotations

import ast
import io
import tokenize as _tokenize
from typing import Optional

from .tree import Node, SyntaxTree


class ParseError(Exception):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


_BINOPS = {
    ast.Add: "+", ast.Sub: "-", ast.Mult: "*", ast.Div: "/",
    ast.FloorDiv: "//", ast.Mod: "%", ast.Pow: "**",
    ast.LShift: "<<", ast.RShift: ">>",
    ast.BitOr: "|", ast.BitXor: "^", ast.BitAnd: "&",
}
_UNARYOPS = {ast.USub: "-", ast.UAdd: "+", ast.Not: "not", ast.Invert: "~"}
_CMPOPS = {
    ast.Lt: "<", ast.LtE: "<=", ast.Gt: ">", ast.GtE: ">=",
    ast.Eq: "==", ast.NotEq: "!=", ast.In: "in", ast.NotIn: "not in",
    ast.Is: "is", ast.IsNot: "is not",
}


def string_lexeme(value: str) -> str:
    """Canonical double-quoted lexeme for a string value."""
    out = ['"']
    for ch in value:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\t":
            out.append("\\t")
        elif ch == "\r":
            out.append("\\r")
        elif ord(ch) < 32 or ord(ch) == 127:
            out.append(f"\\x{ord(ch):02x}")
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def _collect_comments(source: str) -> list[tuple[int, int, str]]:
    comments = []
    try:
        for tok in _tokenize.generate_tokens(io.StringIO(source).readline):
            if tok.type == _tokenize.COMMENT:
                comments.append((tok.start[0], tok.start[1], tok.string))
    except (_tokenize.TokenError, IndentationError, SyntaxError):
        # ast accepted the source, so this is a tokenize quirk; comments are
        # cosmetic and normalization drops them anyway.
        return []
    return comments


class _Converter:
    def __init__(self, source: str, comments: list[tuple[int, int, str]]):
        self.source = source
        self.comments = comments
        self.ci = 0

    def fail(self, what: str, node: ast.AST) -> ParseError:
        line = getattr(node, "lineno", 0)
        col = getattr(node, "col_offset", 0)
        return ParseError(f"unsupported syntax: {what}", line, col)

    def _segment(self, node: ast.AST) -> Optional[str]:
        return ast.get_source_segment(self.source, node)

    # ---- comment interleaving -------------------------------------------

    def _take_comments(self, before_line: float) -> list[Node]:
        taken = []
        while self.ci < len(self.comments) and self.comments[self.ci][0] < before_line:
            taken.append(Node("comment", self.comments[self.ci][2]))
            self.ci += 1
        return taken

    def stmt_list(self, stmts: list[ast.stmt], end_line: float) -> list[Node]:
        out: list[Node] = []
        for s in stmts:
            out.extend(self._take_comments(s.lineno))
            out.append(self.stmt(s))
        out.extend(self._take_comments(end_line + 1))
        return out

    def block(self, stmts: list[ast.stmt]) -> Node:
        end = max(s.end_lineno or s.lineno for s in stmts)
        return Node("block", None, tuple(self.stmt_list(stmts, end)))

    # ---- statements ------------------------------------------------------

    def module(self, mod: ast.Module) -> Node:
        children = self.stmt_list(mod.body, float("inf")) if mod.body else self._take_comments(float("inf"))
        return Node("module", None, tuple(children))

    def stmt(self, s: ast.stmt) -> Node:
        method = getattr(self, "_stmt_" + type(s).__name__, None)
        if method is None:
            raise self.fail(type(s).__name__, s)
        return method(s)

    def _params(self, args: ast.arguments, owner: ast.AST) -> Node:
        if args.posonlyargs or args.kwonlyargs or args.vararg or args.kwarg:
            raise self.fail("parameter kinds beyond plain positional", owner)
        params = []
        ndefault = len(args.defaults)
        for i, a in enumerate(args.args):
            if a.annotation is not None:
                raise self.fail("parameter annotation", a)
            di = i - (len(args.args) - ndefault)
            default = (self.expr(args.defaults[di]),) if di >= 0 else ()
            params.append(Node("param", a.arg, default))
        return Node("params", None, tuple(params))

    def _stmt_FunctionDef(self, s: ast.FunctionDef) -> Node:
        if s.decorator_list:
            raise self.fail("decorator", s)
        if s.returns is not None:
            raise self.fail("return annotation", s)
        return Node("function_def", s.name, (self._params(s.args, s), self.block(s.body)))

    def _stmt_ClassDef(self, s: ast.ClassDef) -> Node:
        if s.decorator_list:
            raise self.fail("decorator", s)
        if s.keywords:
            raise self.fail("class keyword arguments", s)
        bases = tuple(self.expr(b) for b in s.bases)
        return Node("class_def", s.name, bases + (self.block(s.body),))

    def _stmt_Return(self, s: ast.Return) -> Node:
        return Node("return", None, (self.expr(s.value),) if s.value is not None else ())

    def _stmt_Assign(self, s: ast.Assign) -> Node:
        children = tuple(self.expr(t) for t in s.targets) + (self.expr(s.value),)
        return Node("assign", None, children)

    def _stmt_AugAssign(self, s: ast.AugAssign) -> Node:
        op = _BINOPS.get(type(s.op))
        if op is None:
            raise self.fail(f"augmented operator {type(s.op).__name__}", s)
        return Node("aug_assign", op + "=", (self.expr(s.target), self.expr(s.value)))

    def _stmt_For(self, s: ast.For) -> Node:
        children = [self.expr(s.target), self.expr(s.iter), self.block(s.body)]
        if s.orelse:
            children.append(self.block(s.orelse))
        return Node("for", None, tuple(children))

    def _stmt_While(self, s: ast.While) -> Node:
        children = [self.expr(s.test), self.block(s.body)]
        if s.orelse:
            children.append(self.block(s.orelse))
        return Node("while", None, tuple(children))

    def _stmt_If(self, s: ast.If) -> Node:
        children = [self.expr(s.test), self.block(s.body)]
        if s.orelse:
            children.append(self.block(s.orelse))
        return Node("if", None, tuple(children))

    def _stmt_Expr(self, s: ast.Expr) -> Node:
        return Node("expr_stmt", None, (self.expr(s.value),))

    def _stmt_Pass(self, s: ast.Pass) -> Node:
        return Node("pass")

    def _stmt_Break(self, s: ast.Break) -> Node:
        return Node("break")

    def _stmt_Continue(self, s: ast.Continue) -> Node:
        return Node("continue")

    def _alias(self, a: ast.alias) -> Node:
        label = a.name if a.asname is None else f"{a.name} as {a.asname}"
        return Node("alias", label)

    def _stmt_Import(self, s: ast.Import) -> Node:
        return Node("import", None, tuple(self._alias(a) for a in s.names))

    def _stmt_ImportFrom(self, s: ast.ImportFrom) -> Node:
        if s.level:
            raise self.fail("relative import", s)
        return Node("import_from", s.module or "", tuple(self._alias(a) for a in s.names))

    # ---- expressions -----------------------------------------------------

    def expr(self, e: ast.expr) -> Node:
        method = getattr(self, "_expr_" + type(e).__name__, None)
        if method is None:
            raise self.fail(type(e).__name__, e)
        return method(e)

    def _expr_Constant(self, e: ast.Constant) -> Node:
        v = e.value
        if v is True:
            return Node("literal", "True")
        if v is False:
            return Node("literal", "False")
        if v is None:
            return Node("literal", "None")
        if isinstance(v, str):
            return Node("literal", string_lexeme(v))
        if isinstance(v, (int, float)):
            lexeme = self._segment(e)
            if lexeme is None or "\n" in lexeme or "(" in lexeme:
                lexeme = repr(v)
            return Node("literal", lexeme)
        raise self.fail(f"literal of type {type(v).__name__}", e)

    def _expr_Name(self, e: ast.Name) -> Node:
        return Node("name", e.id)

    def _expr_BinOp(self, e: ast.BinOp) -> Node:
        op = _BINOPS.get(type(e.op))
        if op is None:
            raise self.fail(f"operator {type(e.op).__name__}", e)
        return Node("binary_op", op, (self.expr(e.left), self.expr(e.right)))

    def _expr_UnaryOp(self, e: ast.UnaryOp) -> Node:
        op = _UNARYOPS[type(e.op)]
        if (
            op == "-"
            and isinstance(e.operand, ast.Constant)
            and isinstance(e.operand.value, (int, float))
            and not isinstance(e.operand.value, bool)
        ):
            # fold the sign into the literal so folded trees stay printable
            inner = self._expr_Constant(e.operand)
            return Node("literal", "-" + inner.label)
        return Node("unary_op", op, (self.expr(e.operand),))

    def _expr_BoolOp(self, e: ast.BoolOp) -> Node:
        label = "and" if isinstance(e.op, ast.And) else "or"
        return Node("bool_op", label, tuple(self.expr(v) for v in e.values))

    def _expr_Compare(self, e: ast.Compare) -> Node:
        ops = ",".join(_CMPOPS[type(o)] for o in e.ops)
        children = (self.expr(e.left),) + tuple(self.expr(c) for c in e.comparators)
        return Node("compare", ops, children)

    def _expr_Call(self, e: ast.Call) -> Node:
        children = [self.expr(e.func)]
        for a in e.args:
            children.append(self.expr(a))
        for kw in e.keywords:
            if kw.arg is None:
                raise self.fail("** argument unpacking", e)
            children.append(Node("kwarg", kw.arg, (self.expr(kw.value),)))
        return Node("call", None, tuple(children))

    def _expr_Starred(self, e: ast.Starred) -> Node:
        return Node("star", None, (self.expr(e.value),))

    def _expr_Attribute(self, e: ast.Attribute) -> Node:
        return Node("attribute", e.attr, (self.expr(e.value),))

    def _expr_Subscript(self, e: ast.Subscript) -> Node:
        return Node("subscript", None, (self.expr(e.value), self.expr(e.slice)))

    def _expr_Slice(self, e: ast.Slice) -> Node:
        mask = "".join("1" if part is not None else "0" for part in (e.lower, e.upper, e.step))
        parts = tuple(self.expr(p) for p in (e.lower, e.upper, e.step) if p is not None)
        return Node("slice", mask, parts)

    def _expr_Lambda(self, e: ast.Lambda) -> Node:
        return Node("lambda", None, (self._params(e.args, e), self.expr(e.body)))

    def _expr_IfExp(self, e: ast.IfExp) -> Node:
        return Node("if_exp", None, (self.expr(e.body), self.expr(e.test), self.expr(e.orelse)))

    def _expr_List(self, e: ast.List) -> Node:
        return Node("list", None, tuple(self.expr(x) for x in e.elts))

    def _expr_Tuple(self, e: ast.Tuple) -> Node:
        return Node("tuple", None, tuple(self.expr(x) for x in e.elts))

    def _expr_Set(self, e: ast.Set) -> Node:
        return Node("set", None, tuple(self.expr(x) for x in e.elts))

    def _expr_Dict(self, e: ast.Dict) -> Node:
        items = []
        for k, v in zip(e.keys, e.values):
            if k is None:
                raise self.fail("** dict unpacking", e)
            items.append(Node("dict_item", None, (self.expr(k), self.expr(v))))
        return Node("dict", None, tuple(items))

    def _comprehension(self, gen: ast.comprehension, owner: ast.AST) -> Node:
        if gen.is_async:
            raise self.fail("async comprehension", owner)
        children = (self.expr(gen.target), self.expr(gen.iter)) + tuple(
            self.expr(c) for c in gen.ifs
        )
        return Node("comp_for", None, children)

    def _comp(self, kind: str, head: Node, e) -> Node:
        gens = tuple(self._comprehension(g, e) for g in e.generators)
        return Node(kind, None, (head,) + gens)

    def _expr_ListComp(self, e: ast.ListComp) -> Node:
        return self._comp("list_comp", self.expr(e.elt), e)

    def _expr_SetComp(self, e: ast.SetComp) -> Node:
        return self._comp("set_comp", self.expr(e.elt), e)

    def _expr_GeneratorExp(self, e: ast.GeneratorExp) -> Node:
        return self._comp("gen_exp", self.expr(e.elt), e)

    def _expr_DictComp(self, e: ast.DictComp) -> Node:
        head = Node("dict_item", None, (self.expr(e.key), self.expr(e.value)))
        return self._comp("dict_comp", head, e)

    def _expr_JoinedStr(self, e: ast.JoinedStr) -> Node:
        raw = self._segment(e)
        if raw is None or "\n" in raw:
            raise self.fail("multi-line f-string", e)
        return Node("fstring", raw)


def parse(source: str, source_id: Optional[str] = None) -> SyntaxTree:
    """Parse UTF-8 source into a SyntaxTree; ParseError carries line/column."""
    try:
        mod = ast.parse(source)
    except SyntaxError as exc:
        raise ParseError(exc.msg or "syntax error", exc.lineno or 0, (exc.offset or 1) - 1) from None
    conv = _Converter(source, _collect_comments(source))
    root = conv.module(mod)
    return SyntaxTree(root, source_id)
