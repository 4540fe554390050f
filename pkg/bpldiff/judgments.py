"""
Well-namedness and well-typedness of BPL0 programs.

Both checks return an error value instead of raising, so the generator and the
executor can use them as ordinary predicates.
"""
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Mapping, Optional

from bpldiff.ast import (
    ARITH_OPS,
    BOOL_OPS,
    Assert,
    Assign,
    Binary,
    Body,
    BoolLit,
    Expr,
    If,
    IntLit,
    LocalDecl,
    Program,
    TypeTag,
    Unary,
    UnOp,
    Var,
    literal_type,
)

Location = tuple[object, ...]


class ErrorKind(Enum):
    NAME_ERROR = 'name-error'
    TYPE_ERROR = 'type-error'


@dataclass(frozen=True)
class JudgmentError:
    kind: ErrorKind
    location: Location
    detail: str


@dataclass(frozen=True)
class TypingContext:
    types: Mapping[str, TypeTag] = field(default_factory=lambda: MappingProxyType({}))

    @classmethod
    def from_locals(cls, decls: tuple[LocalDecl, ...]) -> 'TypingContext':
        types: dict[str, TypeTag] = {}
        for d in decls:
            if d.name in types:
                raise ValueError(f"'{d.name}' is declared twice")
            types[d.name] = d.declared_type
        return cls(MappingProxyType(types))

    def lookup(self, name: str) -> Optional[TypeTag]:
        return self.types.get(name)


def _name_error(location: Location, name: str) -> JudgmentError:
    return JudgmentError(
        ErrorKind.NAME_ERROR, location, f"undeclared identifier '{name}'"
    )

def _type_error(location: Location, detail: str) -> JudgmentError:
    return JudgmentError(ErrorKind.TYPE_ERROR, location, detail)


# Names ------------------------------------------------------------------------

def _duplicate_decl(decls: tuple[LocalDecl, ...]) -> Optional[JudgmentError]:
    seen: set[str] = set()
    for i, d in enumerate(decls):
        if d.name in seen:
            return JudgmentError(
                ErrorKind.NAME_ERROR, ('locals', i), f"'{d.name}' is declared twice"
            )
        seen.add(d.name)
    return None

def _expr_names(e: Expr, declared: frozenset[str], location: Location) -> Optional[JudgmentError]:
    if isinstance(e, Var):
        return None if e.name in declared else _name_error(location, e.name)
    if isinstance(e, Unary):
        return _expr_names(e.operand, declared, location + ('operand',))
    if isinstance(e, Binary):
        return (
            _expr_names(e.left, declared, location + ('left',))
            or _expr_names(e.right, declared, location + ('right',))
        )
    return None

def _body_names(b: Body, declared: frozenset[str], location: Location) -> Optional[JudgmentError]:
    for i, s in enumerate(b):
        here = location + (i,)
        if isinstance(s, Assign):
            if s.target not in declared:
                return _name_error(here + ('target',), s.target)
            error = _expr_names(s.expr, declared, here + ('expr',))
        elif isinstance(s, Assert):
            error = _expr_names(s.expr, declared, here + ('arg',))
        elif isinstance(s, If):
            error = (
                _expr_names(s.cond, declared, here + ('cond',))
                or _body_names(s.then_body, declared, here + ('then',))
                or _body_names(s.else_body, declared, here + ('else',))
            )
        else:
            error = (
                _expr_names(s.cond, declared, here + ('cond',))
                or _body_names(s.body, declared, here + ('body',))
            )
        if error is not None:
            return error
    return None

def check_names(p: Program) -> Optional[JudgmentError]:
    """
    Checks that a program is well-named.

    Every name is declared once, and every variable read or assigned is declared.
    The first error in program order is reported, declarations first.

    Parameters
    ----------
    p : Program
        The program to check.

    Returns
    -------
    Optional[JudgmentError]
        None when the program is well-named, otherwise a NAME_ERROR.
    """
    error = _duplicate_decl(p.locals)
    if error is not None:
        return error
    declared = frozenset(d.name for d in p.locals)
    return _body_names(p.body, declared, ('body',))


# Types ------------------------------------------------------------------------

def type_of(e: Expr, ctx: TypingContext, location: Location = ()) -> TypeTag | JudgmentError:
    """
    Derives the type of an expression.

    Parameters
    ----------
    e : Expr
        The expression.
    ctx : TypingContext
        The declared types of the locals.
    location : Location, optional
        The path of `e` inside its program, used in error values.

    Returns
    -------
    TypeTag | JudgmentError
        The type, or the first error found left to right.
    """
    if isinstance(e, (IntLit, BoolLit)):
        return literal_type(e)
    if isinstance(e, Var):
        found = ctx.lookup(e.name)
        return found if found is not None else _name_error(location, e.name)
    if isinstance(e, Unary):
        operand = type_of(e.operand, ctx, location + ('operand',))
        if isinstance(operand, JudgmentError):
            return operand
        expected = TypeTag.BOOL if e.op is UnOp.NOT else TypeTag.INT
        if operand is not expected:
            return _type_error(
                location,
                f"'{e.op.value}' expects {expected.value} but got {operand.value}"
            )
        return expected
    left = type_of(e.left, ctx, location + ('left',))
    if isinstance(left, JudgmentError):
        return left
    right = type_of(e.right, ctx, location + ('right',))
    if isinstance(right, JudgmentError):
        return right
    operand_type = TypeTag.BOOL if e.op in BOOL_OPS else TypeTag.INT
    if left is not operand_type or right is not operand_type:
        return _type_error(
            location,
            f"'{e.op.value}' expects {operand_type.value} operands "
            f"but got {left.value} and {right.value}"
        )
    return TypeTag.INT if e.op in ARITH_OPS else TypeTag.BOOL

def _expect(
    e: Expr,
    expected: TypeTag,
    ctx: TypingContext,
    location: Location,
    what: str
) -> Optional[JudgmentError]:
    found = type_of(e, ctx, location)
    if isinstance(found, JudgmentError):
        return found
    if found is not expected:
        return _type_error(location, f'{what} expects {expected.value} but got {found.value}')
    return None

def _body_types(b: Body, ctx: TypingContext, location: Location) -> Optional[JudgmentError]:
    for i, s in enumerate(b):
        here = location + (i,)
        if isinstance(s, Assign):
            target = ctx.lookup(s.target)
            if target is None:
                return _name_error(here + ('target',), s.target)
            error = _expect(s.expr, target, ctx, here + ('expr',), f"assignment to '{s.target}'")
        elif isinstance(s, Assert):
            error = _expect(s.expr, TypeTag.BOOL, ctx, here + ('arg',), 'assert')
        elif isinstance(s, If):
            error = (
                _expect(s.cond, TypeTag.BOOL, ctx, here + ('cond',), 'if condition')
                or _body_types(s.then_body, ctx, here + ('then',))
                or _body_types(s.else_body, ctx, here + ('else',))
            )
        else:
            error = (
                _expect(s.cond, TypeTag.BOOL, ctx, here + ('cond',), 'while condition')
                or _body_types(s.body, ctx, here + ('body',))
            )
        if error is not None:
            return error
    return None

def check_types(p: Program) -> Optional[JudgmentError]:
    """
    Checks that a program is well-typed, which includes being well-named.

    Name errors are looked for first, so a program with both kinds of error
    reports its NAME_ERROR. Then each declaration's literal must match its type,
    and the body is checked statement by statement.

    Parameters
    ----------
    p : Program
        The program to check.

    Returns
    -------
    Optional[JudgmentError]
        None when the program is well-typed, otherwise the first error.
    """
    error = check_names(p)
    if error is not None:
        return error
    for i, d in enumerate(p.locals):
        if literal_type(d.init) is not d.declared_type:
            return _type_error(
                ('locals', i),
                f"'{d.name}' is declared {d.declared_type.value} "
                f"but initialised with a {literal_type(d.init).value}"
            )
    ctx = TypingContext.from_locals(p.locals)
    return _body_types(p.body, ctx, ('body',))

def is_well_typed(p: Program) -> bool:
    return check_types(p) is None
