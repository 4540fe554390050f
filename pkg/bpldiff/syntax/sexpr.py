"""
Parenthesized prefix form of BPL0 programs.

    (main L B)
    L ::= () | (let (v = l : t) L)
    B ::= () | (do s B)
    s ::= (:= v e) | (assert e) | (if e B B) | (while e B)
    e ::= l | v | (u e) | (b e e)
"""
from pathlib import Path
from typing import Union

from bpldiff.ast import (
    Assert,
    Assign,
    Binary,
    BinOp,
    Body,
    BoolLit,
    Expr,
    If,
    IntLit,
    LocalDecl,
    Program,
    Stmt,
    TypeTag,
    Unary,
    UnOp,
    Var,
    While,
    InvalidIdentifierError,
)
from bpldiff.syntax.utils import (
    INT_PATTERN,
    Atom,
    Node,
    SexprSyntaxError,
    SList,
    read_tree,
)

EMPTY = '()'

UNOP_TOKENS: dict[UnOp, str] = {
    UnOp.NOT: '!',
    UnOp.NEG: '-',
}

BINOP_TOKENS: dict[BinOp, str] = {
    BinOp.ADD: '+',
    BinOp.SUB: '-',
    BinOp.MUL: '*',
    BinOp.DIV: '/',
    BinOp.AND: '&&',
    BinOp.OR: '||',
    BinOp.IMPLIES: '==>',
    BinOp.IFF_EQ_BOOL: '<=>',
    BinOp.LT: '<',
    BinOp.GT: '>',
    BinOp.LE: '<=',
    BinOp.GE: '>=',
    BinOp.EQ_INT: '=',
}

_UNOPS = {token: op for op, token in UNOP_TOKENS.items()}
_BINOPS = {token: op for op, token in BINOP_TOKENS.items()}
_TYPES = {t.value: t for t in TypeTag}


# Emission ---------------------------------------------------------------------

def _literal(lit: IntLit | BoolLit) -> str:
    if isinstance(lit, BoolLit):
        return 'true' if lit.value else 'false'
    return str(lit.value)

def _expr(e: Expr) -> str:
    if isinstance(e, (IntLit, BoolLit)):
        return _literal(e)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Unary):
        return f'({UNOP_TOKENS[e.op]} {_expr(e.operand)})'
    return f'({BINOP_TOKENS[e.op]} {_expr(e.left)} {_expr(e.right)})'

def _stmt(s: Stmt) -> str:
    if isinstance(s, Assign):
        return f'(:= {s.target} {_expr(s.expr)})'
    if isinstance(s, Assert):
        return f'(assert {_expr(s.expr)})'
    if isinstance(s, If):
        return f'(if {_expr(s.cond)} {_body(s.then_body)} {_body(s.else_body)})'
    return f'(while {_expr(s.cond)} {_body(s.body)})'

def _body(b: Body) -> str:
    if not b:
        return EMPTY
    return ''.join(f'(do {_stmt(s)} ' for s in b) + EMPTY + ')' * len(b)

def _locals(decls: tuple[LocalDecl, ...]) -> str:
    if not decls:
        return EMPTY
    opened = ''.join(
        f'(let ({d.name} = {_literal(d.init)} : {d.declared_type.value}) '
        for d in decls
    )
    return opened + EMPTY + ')' * len(decls)

def emit_sexpr(p: Program) -> str:
    """
    Renders a program in parenthesized prefix form.

    Parameters
    ----------
    p : Program
        The program to render.

    Returns
    -------
    str
        A single line; the empty program renders as `(main () ())`.
    """
    return f'(main {_locals(p.locals)} {_body(p.body)})'

def sexpr_of(node: Union[Program, Stmt, Expr, Body]) -> str:
    """Renders any program fragment: a program, a body, a statement or an expression."""
    if isinstance(node, Program):
        return emit_sexpr(node)
    if isinstance(node, tuple):
        return _body(node)
    if isinstance(node, (Assign, Assert, If, While)):
        return _stmt(node)
    return _expr(node)


# Parsing ----------------------------------------------------------------------

def _fail(node: Node, message: str) -> SexprSyntaxError:
    return SexprSyntaxError(message, node.line, node.column)

def _head(node: Node) -> str | None:
    if isinstance(node, SList) and node.items and isinstance(node.items[0], Atom):
        return node.items[0].text
    return None

def _expect_arity(node: SList, arity: int, form: str) -> None:
    if len(node.items) != arity + 1:
        raise _fail(
            node,
            f"'{form}' expects {arity} argument(s) but got {len(node.items) - 1}."
        )

def _is_empty(node: Node) -> bool:
    return isinstance(node, SList) and not node.items

def _name(node: Node) -> str:
    if not isinstance(node, Atom):
        raise _fail(node, 'I expected a variable name here.')
    return node.text

def _parse_literal(node: Node) -> IntLit | BoolLit | None:
    if not isinstance(node, Atom):
        return None
    if node.text == 'true':
        return BoolLit(True)
    if node.text == 'false':
        return BoolLit(False)
    if INT_PATTERN.fullmatch(node.text):
        return IntLit(int(node.text))
    return None

def _parse_expr(node: Node) -> Expr:
    lit = _parse_literal(node)
    if lit is not None:
        return lit
    if isinstance(node, Atom):
        try:
            return Var(node.text)
        except InvalidIdentifierError:
            raise _fail(node, f"'{node.text}' is neither a literal nor a legal variable name.")
    head = _head(node)
    if head is None or not isinstance(node, SList):
        raise _fail(node, "I expected an expression here.")
    if len(node.items) == 2 and head in _UNOPS:
        return Unary(_UNOPS[head], _parse_expr(node.items[1]))
    if len(node.items) == 3 and head in _BINOPS:
        return Binary(_BINOPS[head], _parse_expr(node.items[1]), _parse_expr(node.items[2]))
    if head in _UNOPS or head in _BINOPS:
        raise _fail(node, f"The operator '{head}' is applied to {len(node.items) - 1} operand(s).")
    raise _fail(node, f"'{head}' is not an operator.")

def _parse_stmt(node: Node) -> Stmt:
    head = _head(node)
    if head is None or not isinstance(node, SList):
        raise _fail(node, "I expected a statement here.")
    if head == ':=':
        _expect_arity(node, 2, ':=')
        target = _name(node.items[1])
        try:
            return Assign(target, _parse_expr(node.items[2]))
        except InvalidIdentifierError:
            raise _fail(node.items[1], f"'{target}' is not a legal variable name.")
    if head == 'assert':
        _expect_arity(node, 1, 'assert')
        return Assert(_parse_expr(node.items[1]))
    if head == 'if':
        _expect_arity(node, 3, 'if')
        return If(
            _parse_expr(node.items[1]),
            _parse_body(node.items[2]),
            _parse_body(node.items[3])
        )
    if head == 'while':
        _expect_arity(node, 2, 'while')
        return While(_parse_expr(node.items[1]), _parse_body(node.items[2]))
    raise _fail(node, 'I expected a statement: (:= v e), (assert e), (if e B B) or (while e B).')

def _parse_body(node: Node) -> Body:
    stmts: list[Stmt] = []
    while not _is_empty(node):
        if _head(node) != 'do':
            raise _fail(node, "I expected a body: '()' or (do s B).")
        assert isinstance(node, SList)
        _expect_arity(node, 2, 'do')
        stmts.append(_parse_stmt(node.items[1]))
        node = node.items[2]
    return tuple(stmts)

def _parse_decl(node: Node) -> LocalDecl:
    if not isinstance(node, SList) or len(node.items) != 5:
        raise _fail(node, 'I expected a declaration of the form (v = l : t).')
    name, eq, init, colon, type_name = node.items
    if not (isinstance(eq, Atom) and eq.text == '=' and isinstance(colon, Atom) and colon.text == ':'):
        raise _fail(node, 'I expected a declaration of the form (v = l : t).')
    lit = _parse_literal(init)
    if lit is None:
        raise _fail(init, 'A declaration must be initialised with a literal.')
    if not isinstance(type_name, Atom) or type_name.text not in _TYPES:
        raise _fail(type_name, "The declared type must be 'int' or 'bool'.")
    try:
        return LocalDecl(_name(name), _TYPES[type_name.text], lit)
    except InvalidIdentifierError:
        raise _fail(name, f"'{_name(name)}' is not a legal variable name.")

def _parse_locals(node: Node) -> tuple[LocalDecl, ...]:
    decls: list[LocalDecl] = []
    while not _is_empty(node):
        if _head(node) != 'let':
            raise _fail(node, "I expected locals: '()' or (let (v = l : t) L).")
        assert isinstance(node, SList)
        _expect_arity(node, 2, 'let')
        decls.append(_parse_decl(node.items[1]))
        node = node.items[2]
    return tuple(decls)

def parse_sexpr(text: str) -> Program:
    """
    Parses a program written in parenthesized prefix form.

    Declarations are taken as written: a literal whose type differs from the
    declared type is kept, so the type checker can report it.

    Parameters
    ----------
    text : str
        The program text, as produced by `emit_sexpr` or written by hand.
        Text after a `;` on a line is a comment.

    Returns
    -------
    Program
        The parsed program.

    Raises
    ------
    SexprSyntaxError
        If the text is not a well-formed program.
    """
    root = read_tree(text)
    if _head(root) != 'main':
        raise _fail(root, "A program must start with '(main'.")
    assert isinstance(root, SList)
    _expect_arity(root, 2, 'main')
    return Program(_parse_locals(root.items[1]), _parse_body(root.items[2]))

def read_program(path: str | Path) -> Program:
    return parse_sexpr(Path(path).read_text(encoding='utf-8'))
