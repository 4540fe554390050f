"""
Abstract syntax of BPL0, the deterministic Boogie subset the tool generates,
executes and verifies.

A program is a list of initialised local declarations followed by a body, a flat
sequence of statements. Every node is a frozen dataclass, so programs compare and
hash structurally and can be shipped to worker processes as they are.
"""
from dataclasses import dataclass, fields
from enum import Enum
import hashlib
import re
from textwrap import dedent
from typing import Iterator, Union

IDENTIFIER_PATTERN = re.compile(r'[A-Za-z][A-Za-z0-9_]*')

# Boogie keywords plus the name of the emitted procedure.
RESERVED_NAMES = frozenset({
    'assert', 'assume', 'async', 'axiom', 'bool', 'break', 'call', 'complete',
    'const', 'div', 'else', 'ensures', 'exists', 'extends', 'false', 'finite',
    'forall', 'free', 'function', 'goto', 'havoc', 'if', 'implementation', 'int',
    'invariant', 'lambda', 'main', 'mod', 'modifies', 'old', 'par', 'procedure',
    'real', 'requires', 'return', 'returns', 'then', 'true', 'type', 'unique',
    'var', 'where', 'while', 'yield',
    # built-in type names and rounding modes
    'rmode', 'RNA', 'RNE', 'RTN', 'RTP', 'RTZ',
})
# Bit-vector and floating-point type names such as bv32 and float24e8.
RESERVED_TYPE_PATTERN = re.compile(r'bv[0-9]+|float[0-9]+e[0-9]+')


class InvalidIdentifierError(Exception):
    def __init__(self, name: str):
        self.name = name
        message = dedent(f"""
            I'm trying to use '{name}' as a variable name, but it isn't a legal Boogie identifier.
            Names must match [A-Za-z][A-Za-z0-9_]* and can't be a Boogie keyword or built-in type name.
        """)
        super().__init__(message)


def is_valid_identifier(name: str) -> bool:
    return (
        IDENTIFIER_PATTERN.fullmatch(name) is not None
        and name not in RESERVED_NAMES
        and RESERVED_TYPE_PATTERN.fullmatch(name) is None
    )

def _validate_name(name: str) -> None:
    if not isinstance(name, str) or not is_valid_identifier(name):
        raise InvalidIdentifierError(str(name))


class TypeTag(Enum):
    INT = 'int'
    BOOL = 'bool'


class UnOp(Enum):
    NOT = 'not'
    NEG = 'neg'


class BinOp(Enum):
    ADD = 'add'
    SUB = 'sub'
    MUL = 'mul'
    DIV = 'div'
    AND = 'and'
    OR = 'or'
    IMPLIES = 'implies'
    IFF_EQ_BOOL = 'iff'
    LT = 'lt'
    GT = 'gt'
    LE = 'le'
    GE = 'ge'
    EQ_INT = 'eq'


ARITH_OPS = frozenset({BinOp.ADD, BinOp.SUB, BinOp.MUL, BinOp.DIV})
BOOL_OPS = frozenset({BinOp.AND, BinOp.OR, BinOp.IMPLIES, BinOp.IFF_EQ_BOOL})
COMP_OPS = frozenset({BinOp.LT, BinOp.GT, BinOp.LE, BinOp.GE, BinOp.EQ_INT})


# Expressions ------------------------------------------------------------------

@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class Var:
    name: str

    def __post_init__(self) -> None:
        _validate_name(self.name)


@dataclass(frozen=True)
class Unary:
    op: UnOp
    operand: 'Expr'


@dataclass(frozen=True)
class Binary:
    op: BinOp
    left: 'Expr'
    right: 'Expr'


Literal = Union[IntLit, BoolLit]
Expr = Union[IntLit, BoolLit, Var, Unary, Binary]

TRUE = BoolLit(True)
FALSE = BoolLit(False)


# Statements -------------------------------------------------------------------

@dataclass(frozen=True)
class Assign:
    target: str
    expr: Expr

    def __post_init__(self) -> None:
        _validate_name(self.target)


@dataclass(frozen=True)
class Assert:
    expr: Expr


@dataclass(frozen=True)
class If:
    cond: Expr
    then_body: 'Body'
    else_body: 'Body'


@dataclass(frozen=True)
class While:
    cond: Expr
    body: 'Body'


Stmt = Union[Assign, Assert, If, While]
Body = tuple[Stmt, ...]
EMPTY_BODY: Body = ()


# Programs ---------------------------------------------------------------------

@dataclass(frozen=True)
class LocalDecl:
    name: str
    declared_type: TypeTag
    init: Literal

    def __post_init__(self) -> None:
        _validate_name(self.name)


@dataclass(frozen=True)
class Program:
    locals: tuple[LocalDecl, ...] = ()
    body: Body = ()


def is_literal(e: object) -> bool:
    return isinstance(e, (IntLit, BoolLit))

def literal_type(lit: Literal) -> TypeTag:
    """
    Returns the type of a literal.

    Parameters
    ----------
    lit : Literal
        An integer or boolean literal.

    Returns
    -------
    TypeTag
        INT for integer literals and BOOL for boolean literals.
    """
    if isinstance(lit, BoolLit):
        return TypeTag.BOOL
    return TypeTag.INT

def concat(b1: Body, b2: Body) -> Body:
    return tuple(b1) + tuple(b2)

def structural_hash(p: Program) -> int:
    """
    Computes a 128-bit structural digest of a program.

    Two programs built independently with the same structure get the same digest.
    The digest is meant for bucketing; callers confirm equality with `==`.

    Parameters
    ----------
    p : Program
        The program to hash.

    Returns
    -------
    int
        The digest as a nonnegative integer.
    """
    h = hashlib.blake2b(repr(p).encode('utf-8'), digest_size=16)
    return int.from_bytes(h.digest(), byteorder='big', signed=False)


# Term statistics --------------------------------------------------------------

@dataclass(frozen=True)
class TermStats:
    n_locals: int = 0
    n_statements: int = 0
    n_arith_exprs: int = 0
    n_bool_exprs: int = 0
    n_comp_exprs: int = 0
    n_literals: int = 0

    def __add__(self, other: 'TermStats') -> 'TermStats':
        if not isinstance(other, TermStats):
            return NotImplemented
        return TermStats(**{
            f.name: getattr(self, f.name) + getattr(other, f.name)
            for f in fields(self)
        })

    def as_dict(self) -> dict[str, int]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


STAT_FIELDS = tuple(f.name for f in fields(TermStats))


def expr_stats(e: Expr) -> TermStats:
    if isinstance(e, (IntLit, BoolLit)):
        return TermStats(n_literals=1)
    if isinstance(e, Var):
        return TermStats()
    if isinstance(e, Unary):
        own = (
            TermStats(n_bool_exprs=1) if e.op is UnOp.NOT
            else TermStats(n_arith_exprs=1)
        )
        return own + expr_stats(e.operand)
    if e.op in ARITH_OPS:
        own = TermStats(n_arith_exprs=1)
    elif e.op in BOOL_OPS:
        own = TermStats(n_bool_exprs=1)
    else:
        own = TermStats(n_comp_exprs=1)
    return own + expr_stats(e.left) + expr_stats(e.right)

def stmt_stats(s: Stmt) -> TermStats:
    own = TermStats(n_statements=1)
    if isinstance(s, Assign):
        return own + expr_stats(s.expr)
    if isinstance(s, Assert):
        return own + expr_stats(s.expr)
    if isinstance(s, If):
        return own + expr_stats(s.cond) + body_stats(s.then_body) + body_stats(s.else_body)
    return own + expr_stats(s.cond) + body_stats(s.body)

def body_stats(b: Body) -> TermStats:
    total = TermStats()
    for s in b:
        total = total + stmt_stats(s)
    return total

def term_stats(p: Program) -> TermStats:
    """
    Counts the terms of each kind in a program.

    Declarations count as locals and their initial literal counts as a literal.
    Unary negation is arithmetic, unary `not` is boolean.

    Parameters
    ----------
    p : Program
        The program to measure.

    Returns
    -------
    TermStats
        The counts.
    """
    decls = TermStats(n_locals=len(p.locals), n_literals=len(p.locals))
    return decls + body_stats(p.body)


# Depth ------------------------------------------------------------------------
# Each `(do s B)` cell, statement and operator node adds 1; leaves add 0.

def expr_depth(e: Expr) -> int:
    if isinstance(e, Unary):
        return 1 + expr_depth(e.operand)
    if isinstance(e, Binary):
        return 1 + max(expr_depth(e.left), expr_depth(e.right))
    return 0

def stmt_depth(s: Stmt) -> int:
    if isinstance(s, (Assign, Assert)):
        return 1 + expr_depth(s.expr)
    if isinstance(s, If):
        return 1 + max(expr_depth(s.cond), body_depth(s.then_body), body_depth(s.else_body))
    return 1 + max(expr_depth(s.cond), body_depth(s.body))

def body_depth(b: Body) -> int:
    depth = 0
    for s in reversed(b):
        depth = 1 + max(stmt_depth(s), depth)
    return depth

def depth(p: Program) -> int:
    """
    Returns the nesting depth of a program.

    The locals chain contributes one level per declaration and the body one level
    per `(do s B)` cell, so `depth(p) = max(len(p.locals), body_depth(p.body))`.

    Parameters
    ----------
    p : Program
        The program to measure.

    Returns
    -------
    int
        The depth, 0 for the empty program.
    """
    return max(len(p.locals), body_depth(p.body))


# Traversal --------------------------------------------------------------------

def iter_exprs(e: Expr) -> Iterator[Expr]:
    """Yields `e` and all its subexpressions in pre-order."""
    yield e
    if isinstance(e, Unary):
        yield from iter_exprs(e.operand)
    elif isinstance(e, Binary):
        yield from iter_exprs(e.left)
        yield from iter_exprs(e.right)

def iter_stmts(b: Body) -> Iterator[Stmt]:
    """Yields every statement of a body, nested ones included, in pre-order."""
    for s in b:
        yield s
        if isinstance(s, If):
            yield from iter_stmts(s.then_body)
            yield from iter_stmts(s.else_body)
        elif isinstance(s, While):
            yield from iter_stmts(s.body)

def assigned_names(b: Body) -> frozenset[str]:
    return frozenset(s.target for s in iter_stmts(b) if isinstance(s, Assign))

def expr_vars(e: Expr) -> frozenset[str]:
    return frozenset(x.name for x in iter_exprs(e) if isinstance(x, Var))
