from enum import Enum
from pathlib import Path

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
    Unary,
    UnOp,
    Var,
)
from bpldiff.syntax.sexpr import emit_sexpr
from bpldiff.syntax.utils import indent


class EmitStyle(Enum):
    DECL_WITH_INIT = 'with-init'
    DECL_THEN_ASSIGN = 'then-assign'


UNOP_TOKENS: dict[UnOp, str] = {
    UnOp.NOT: '!',
    UnOp.NEG: '-',
}

# Boogie's `/` is real division; `div` is the integer (Euclidean) one.
BINOP_TOKENS: dict[BinOp, str] = {
    BinOp.ADD: '+',
    BinOp.SUB: '-',
    BinOp.MUL: '*',
    BinOp.DIV: 'div',
    BinOp.AND: '&&',
    BinOp.OR: '||',
    BinOp.IMPLIES: '==>',
    BinOp.IFF_EQ_BOOL: '==',
    BinOp.LT: '<',
    BinOp.GT: '>',
    BinOp.LE: '<=',
    BinOp.GE: '>=',
    BinOp.EQ_INT: '==',
}


def _literal(lit: IntLit | BoolLit) -> str:
    if isinstance(lit, BoolLit):
        return 'true' if lit.value else 'false'
    return str(lit.value)

def _expr(e: Expr, nested: bool = False) -> str:
    if isinstance(e, BoolLit):
        return _literal(e)
    if isinstance(e, IntLit):
        text = _literal(e)
        return f'({text})' if nested and e.value < 0 else text
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Unary):
        text = f'{UNOP_TOKENS[e.op]}{_expr(e.operand, nested=True)}'
    else:
        text = f'{_expr(e.left, nested=True)} {BINOP_TOKENS[e.op]} {_expr(e.right, nested=True)}'
    return f'({text})' if nested else text

def expr_to_boogie(e: Expr) -> str:
    """Renders an expression in Boogie syntax, parenthesizing every nested operator."""
    return _expr(e)

def _block(b: Body) -> list[str]:
    lines: list[str] = []
    for s in b:
        lines.extend(_stmt(s))
    return indent(lines)

def _stmt(s: Stmt) -> list[str]:
    if isinstance(s, Assign):
        return [f'{s.target} := {_expr(s.expr)};']
    if isinstance(s, Assert):
        return [f'assert {_expr(s.expr)};']
    if isinstance(s, If):
        return (
            [f'if ({_expr(s.cond)}) {{']
            + _block(s.then_body)
            + ['} else {']
            + _block(s.else_body)
            + ['}']
        )
    return [f'while ({_expr(s.cond)}) {{'] + _block(s.body) + ['}']

def _declarations(decls: tuple[LocalDecl, ...], style: EmitStyle) -> list[str]:
    if style is EmitStyle.DECL_WITH_INIT:
        return [
            f'var {d.name}: {d.declared_type.value} := {_literal(d.init)};'
            for d in decls
        ]
    return (
        [f'var {d.name}: {d.declared_type.value};' for d in decls]
        + [f'{d.name} := {_literal(d.init)};' for d in decls]
    )

def emit_boogie(
    p: Program,
    style: EmitStyle = EmitStyle.DECL_WITH_INIT,
    proc_name: str = 'main'
) -> str:
    """
    Renders a program as a Boogie file holding one parameterless procedure.

    Top-level expressions of a statement are written bare and every nested
    operator is parenthesized, so no precedence rule is ever relied on.

    Parameters
    ----------
    p : Program
        The program to render.
    style : EmitStyle, optional
        How initialised locals are written, defaults to `var v: t := l;`.
    proc_name : str, optional
        The procedure name, defaults to 'main'.

    Returns
    -------
    str
        The Boogie source, LF-terminated, indented by two spaces.
    """
    header = f'procedure {proc_name}() returns () {{'
    if not p.locals and not p.body:
        return header + ' }\n'
    lines = indent(_declarations(p.locals, style))
    for s in p.body:
        lines.extend(indent(_stmt(s)))
    return '\n'.join([header] + lines + ['}']) + '\n'

def write_program(
    p: Program,
    directory: str | Path,
    stem: str,
    style: EmitStyle = EmitStyle.DECL_WITH_INIT
) -> tuple[Path, Path]:
    """
    Writes the paired `.sexpr` and `.bpl` files of a program.

    Parameters
    ----------
    p : Program
        The program to write.
    directory : str | Path
        The target directory; it is created when missing.
    stem : str
        The file name without extension.
    style : EmitStyle, optional
        The Boogie declaration style.

    Returns
    -------
    tuple[Path, Path]
        The paths of the `.sexpr` and the `.bpl` file.
    """
    target = Path(directory)
    target.mkdir(parents=True, exist_ok=True)
    sexpr_path = target / f'{stem}.sexpr'
    bpl_path = target / f'{stem}.bpl'
    sexpr_path.write_text(emit_sexpr(p) + '\n', encoding='utf-8', newline='\n')
    bpl_path.write_text(emit_boogie(p, style), encoding='utf-8', newline='\n')
    return sexpr_path, bpl_path
