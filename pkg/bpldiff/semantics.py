"""
Small-step reduction of BPL0 programs.

A running program is a pair of the current local values and the residual body.
Each step decomposes the term into an evaluation context and a redex, rewrites
the redex with exactly one rule, and plugs the result back into the context.

Contexts only reach into the first statement of the body and, inside its
expression, into the leftmost operand that is not yet a literal. A `while` is
never reduced in place: it unrolls into an `if` whose then-branch is the loop
body followed by the loop again.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

from bpldiff.ast import (
    BOOL_OPS,
    Assert,
    Assign,
    Binary,
    BinOp,
    BoolLit,
    Body,
    Expr,
    If,
    IntLit,
    Literal,
    LocalDecl,
    Program,
    Stmt,
    Unary,
    UnOp,
    Var,
    While,
    is_literal,
    literal_type,
)

Env = tuple[tuple[str, Literal], ...]


class Signal(Enum):
    TERMINAL = 'terminal'
    STUCK = 'stuck'
    DIV_BY_ZERO = 'div-by-zero'


class Terminal(Enum):
    SUCCESS = 'success'
    FAILURE = 'failure'


class Rule(Enum):
    SUCCESS = 'success'
    FAILURE = 'failure'
    ASSERT_TRUE = 'assert-true'
    IF_THEN = 'if-then'
    IF_ELSE = 'if-else'
    LOOP = 'loop'
    LOCAL_ASSIGNMENT = 'local-assignment'
    LOCAL_SUBSTITUTION = 'local-substitution'
    UNARY_OP = 'unary-op'
    BINARY_OP = 'binary-op'


class Frame(Enum):
    MAIN_BODY = 'main-body'
    DO_HEAD = 'do-head'
    ASSIGN_RHS = 'assign-rhs'
    ASSERT_ARG = 'assert-arg'
    IF_CONDITION = 'if-condition'
    UNARY_OPERAND = 'unary-operand'
    BINOP_LEFT = 'binop-left'
    BINOP_RIGHT = 'binop-right'


@dataclass(frozen=True)
class Running:
    env: Env
    body: Body

    def lookup(self, name: str) -> Optional[Literal]:
        for key, value in self.env:
            if key == name:
                return value
        return None


MachineTerm = Union[Running, Terminal]


@dataclass(frozen=True)
class EvalContext:
    frames: tuple[Frame, ...] = ()


@dataclass(frozen=True)
class Redex:
    rule: Rule
    term: Union[Running, Stmt, Expr]


@dataclass(frozen=True)
class Decomposition:
    context: EvalContext
    redex: Redex


StepResult = Union[Running, Terminal, Signal]

_STMT_FRAMES = {
    Assign: Frame.ASSIGN_RHS,
    Assert: Frame.ASSERT_ARG,
    If: Frame.IF_CONDITION,
}
_HEAD = (Frame.MAIN_BODY, Frame.DO_HEAD)


def initial_term(p: Program) -> Running:
    return Running(tuple((d.name, d.init) for d in p.locals), p.body)

def residual_program(term: Running, p: Program) -> Program:
    """
    Rebuilds a program from a running term.

    Locals keep their declared types from `p` and are initialised with their
    current values, so type-checking the result checks the stored values too.

    Parameters
    ----------
    term : Running
        A term reached while executing `p`.
    p : Program
        The program being executed.

    Returns
    -------
    Program
        The residual program.
    """
    values = dict(term.env)
    decls = tuple(
        LocalDecl(d.name, d.declared_type, values.get(d.name, d.init))
        for d in p.locals
    )
    return Program(decls, term.body)


# Operators --------------------------------------------------------------------

def euclidean_div(a: int, b: int) -> int:
    """Integer division whose remainder always lies in [0, |b|)."""
    r = a % abs(b)
    return (a - r) // b

def eval_unop(op: UnOp, lit: Literal) -> Literal:
    if op is UnOp.NOT:
        return BoolLit(not lit.value)
    return IntLit(-lit.value)

def eval_binop(op: BinOp, l1: Literal, l2: Literal) -> Literal | Signal:
    """
    Applies a binary operator to two literals.

    Parameters
    ----------
    op : BinOp
        The operator.
    l1, l2 : Literal
        The operands, already of the operator's operand type.

    Returns
    -------
    Literal | Signal
        The result, or `Signal.DIV_BY_ZERO` for a division by zero.
    """
    a, b = l1.value, l2.value
    match op:
        case BinOp.ADD:
            return IntLit(a + b)
        case BinOp.SUB:
            return IntLit(a - b)
        case BinOp.MUL:
            return IntLit(a * b)
        case BinOp.DIV:
            if b == 0:
                return Signal.DIV_BY_ZERO
            return IntLit(euclidean_div(a, b))
        case BinOp.AND:
            return BoolLit(a and b)
        case BinOp.OR:
            return BoolLit(a or b)
        case BinOp.IMPLIES:
            return BoolLit((not a) or b)
        case BinOp.IFF_EQ_BOOL:
            return BoolLit(a == b)
        case BinOp.LT:
            return BoolLit(a < b)
        case BinOp.GT:
            return BoolLit(a > b)
        case BinOp.LE:
            return BoolLit(a <= b)
        case BinOp.GE:
            return BoolLit(a >= b)
        case BinOp.EQ_INT:
            return BoolLit(a == b)
    raise ValueError(f'unknown operator {op}')

def _unop_applies(op: UnOp, lit: Literal) -> bool:
    expected = BoolLit if op is UnOp.NOT else IntLit
    return isinstance(lit, expected)

def _binop_applies(op: BinOp, l1: Literal, l2: Literal) -> bool:
    expected = BoolLit if op in BOOL_OPS else IntLit
    return isinstance(l1, expected) and isinstance(l2, expected)


# Decomposition ----------------------------------------------------------------

def _decompose_expr(
    e: Expr,
    term: Running,
    frames: tuple[Frame, ...]
) -> Decomposition | Signal:
    while True:
        if isinstance(e, Var):
            if term.lookup(e.name) is None:
                return Signal.STUCK
            return Decomposition(EvalContext(frames), Redex(Rule.LOCAL_SUBSTITUTION, e))
        if isinstance(e, Unary):
            if is_literal(e.operand):
                if not _unop_applies(e.op, e.operand):
                    return Signal.STUCK
                return Decomposition(EvalContext(frames), Redex(Rule.UNARY_OP, e))
            frames, e = frames + (Frame.UNARY_OPERAND,), e.operand
            continue
        if isinstance(e, Binary):
            if not is_literal(e.left):
                frames, e = frames + (Frame.BINOP_LEFT,), e.left
                continue
            if not is_literal(e.right):
                frames, e = frames + (Frame.BINOP_RIGHT,), e.right
                continue
            if not _binop_applies(e.op, e.left, e.right):
                return Signal.STUCK
            return Decomposition(EvalContext(frames), Redex(Rule.BINARY_OP, e))
        # literals are values, the enclosing statement decides
        return Signal.STUCK

def decompose(t: MachineTerm) -> Decomposition | Signal:
    """
    Splits a term into its unique evaluation context and redex.

    Parameters
    ----------
    t : MachineTerm
        The term.

    Returns
    -------
    Decomposition | Signal
        The decomposition; `Signal.TERMINAL` for SUCCESS or FAILURE; `Signal.STUCK`
        when no rule applies, which only happens to ill-typed or ill-named terms.
    """
    if isinstance(t, Terminal):
        return Signal.TERMINAL
    if not t.body:
        return Decomposition(EvalContext(), Redex(Rule.SUCCESS, t))
    s = t.body[0]
    if isinstance(s, While):
        return Decomposition(EvalContext(_HEAD), Redex(Rule.LOOP, s))
    if isinstance(s, Assign):
        if is_literal(s.expr):
            current = t.lookup(s.target)
            if current is None or literal_type(current) is not literal_type(s.expr):
                return Signal.STUCK
            return Decomposition(EvalContext(_HEAD), Redex(Rule.LOCAL_ASSIGNMENT, s))
        return _decompose_expr(s.expr, t, _HEAD + (Frame.ASSIGN_RHS,))
    cond = s.expr if isinstance(s, Assert) else s.cond
    if isinstance(cond, IntLit):
        return Signal.STUCK
    if isinstance(cond, BoolLit):
        if isinstance(s, Assert):
            rule = Rule.ASSERT_TRUE if cond.value else Rule.FAILURE
        else:
            rule = Rule.IF_THEN if cond.value else Rule.IF_ELSE
        return Decomposition(EvalContext(_HEAD), Redex(rule, s))
    return _decompose_expr(cond, t, _HEAD + (_STMT_FRAMES[type(s)],))

def enumerate_decompositions(t: MachineTerm) -> list[Decomposition]:
    """
    Lists every context and redex pair allowed by the context grammar.

    Unlike `decompose`, this explores every production that could place the hole,
    matching each rule's left-hand side wherever the hole lands. It exists to check
    that at most one decomposition is ever possible.

    Parameters
    ----------
    t : MachineTerm
        The term.

    Returns
    -------
    list[Decomposition]
        All decompositions found, empty for terminal or stuck terms.
    """
    if isinstance(t, Terminal):
        return []
    if not t.body:
        return [Decomposition(EvalContext(), Redex(Rule.SUCCESS, t))]
    found: list[Decomposition] = []
    s = t.body[0]
    head = EvalContext(_HEAD)
    if isinstance(s, While):
        found.append(Decomposition(head, Redex(Rule.LOOP, s)))
    elif isinstance(s, Assign):
        if is_literal(s.expr):
            current = t.lookup(s.target)
            if current is not None and literal_type(current) is literal_type(s.expr):
                found.append(Decomposition(head, Redex(Rule.LOCAL_ASSIGNMENT, s)))
        _enumerate_expr(s.expr, t, _HEAD + (Frame.ASSIGN_RHS,), found)
    else:
        cond = s.expr if isinstance(s, Assert) else s.cond
        if isinstance(cond, BoolLit):
            if isinstance(s, Assert):
                rule = Rule.ASSERT_TRUE if cond.value else Rule.FAILURE
            else:
                rule = Rule.IF_THEN if cond.value else Rule.IF_ELSE
            found.append(Decomposition(head, Redex(rule, s)))
        _enumerate_expr(cond, t, _HEAD + (_STMT_FRAMES[type(s)],), found)
    return found

def _enumerate_expr(
    e: Expr,
    term: Running,
    frames: tuple[Frame, ...],
    found: list[Decomposition]
) -> None:
    if isinstance(e, Var):
        if term.lookup(e.name) is not None:
            found.append(Decomposition(EvalContext(frames), Redex(Rule.LOCAL_SUBSTITUTION, e)))
    elif isinstance(e, Unary):
        if is_literal(e.operand) and _unop_applies(e.op, e.operand):
            found.append(Decomposition(EvalContext(frames), Redex(Rule.UNARY_OP, e)))
        _enumerate_expr(e.operand, term, frames + (Frame.UNARY_OPERAND,), found)
    elif isinstance(e, Binary):
        if is_literal(e.left) and is_literal(e.right) and _binop_applies(e.op, e.left, e.right):
            found.append(Decomposition(EvalContext(frames), Redex(Rule.BINARY_OP, e)))
        _enumerate_expr(e.left, term, frames + (Frame.BINOP_LEFT,), found)
        if is_literal(e.left):
            _enumerate_expr(e.right, term, frames + (Frame.BINOP_RIGHT,), found)


# Recomposition ----------------------------------------------------------------

def _plug_expr(e: Expr, frames: tuple[Frame, ...], replacement: Expr) -> Expr:
    if not frames:
        return replacement
    frame, rest = frames[0], frames[1:]
    if frame is Frame.UNARY_OPERAND:
        assert isinstance(e, Unary)
        return Unary(e.op, _plug_expr(e.operand, rest, replacement))
    assert isinstance(e, Binary)
    if frame is Frame.BINOP_LEFT:
        return Binary(e.op, _plug_expr(e.left, rest, replacement), e.right)
    return Binary(e.op, e.left, _plug_expr(e.right, rest, replacement))

def plug(term: Running, context: EvalContext, replacement: Expr) -> Running:
    """
    Puts an expression into the hole of an expression-level context.

    Parameters
    ----------
    term : Running
        The term the context was taken from.
    context : EvalContext
        A context whose hole sits inside the first statement's expression.
    replacement : Expr
        The expression to plug in.

    Returns
    -------
    Running
        The recomposed term; only nodes on the hole's path are rebuilt.
    """
    frames = context.frames
    assert frames[:2] == _HEAD and len(frames) >= 3
    s, inner = term.body[0], frames[3:]
    if frames[2] is Frame.ASSIGN_RHS:
        assert isinstance(s, Assign)
        head: Stmt = Assign(s.target, _plug_expr(s.expr, inner, replacement))
    elif frames[2] is Frame.ASSERT_ARG:
        assert isinstance(s, Assert)
        head = Assert(_plug_expr(s.expr, inner, replacement))
    else:
        assert isinstance(s, If)
        head = If(_plug_expr(s.cond, inner, replacement), s.then_body, s.else_body)
    return Running(term.env, (head,) + term.body[1:])


# Reduction --------------------------------------------------------------------

def apply(t: Running, d: Decomposition) -> StepResult:
    """
    Rewrites the redex of a decomposition and recomposes the term.

    Parameters
    ----------
    t : Running
        The term that was decomposed.
    d : Decomposition
        Its decomposition.

    Returns
    -------
    StepResult
        The next term, SUCCESS or FAILURE, or `Signal.DIV_BY_ZERO`.
    """
    rule, redex = d.redex.rule, d.redex.term
    rest = t.body[1:]
    match rule:
        case Rule.SUCCESS:
            return Terminal.SUCCESS
        case Rule.FAILURE:
            return Terminal.FAILURE
        case Rule.ASSERT_TRUE:
            return Running(t.env, rest)
        case Rule.IF_THEN:
            assert isinstance(redex, If)
            return Running(t.env, redex.then_body + rest)
        case Rule.IF_ELSE:
            assert isinstance(redex, If)
            return Running(t.env, redex.else_body + rest)
        case Rule.LOOP:
            assert isinstance(redex, While)
            unrolled = If(redex.cond, redex.body + (redex,), ())
            return Running(t.env, (unrolled,) + rest)
        case Rule.LOCAL_ASSIGNMENT:
            assert isinstance(redex, Assign) and is_literal(redex.expr)
            env = tuple(
                (name, redex.expr if name == redex.target else value)
                for name, value in t.env
            )
            return Running(env, rest)
        case Rule.LOCAL_SUBSTITUTION:
            assert isinstance(redex, Var)
            value = t.lookup(redex.name)
            assert value is not None
            return plug(t, d.context, value)
        case Rule.UNARY_OP:
            assert isinstance(redex, Unary)
            return plug(t, d.context, eval_unop(redex.op, redex.operand))
        case Rule.BINARY_OP:
            assert isinstance(redex, Binary)
            result = eval_binop(redex.op, redex.left, redex.right)
            if isinstance(result, Signal):
                return result
            return plug(t, d.context, result)
    raise ValueError(f'unknown rule {rule}')

def step(t: MachineTerm) -> StepResult:
    """
    Performs one reduction step.

    Parameters
    ----------
    t : MachineTerm
        The term.

    Returns
    -------
    StepResult
        The next term. SUCCESS and FAILURE step to themselves. `Signal.STUCK` when
        no rule applies and `Signal.DIV_BY_ZERO` for a division by zero.
    """
    if isinstance(t, Terminal):
        return t
    d = decompose(t)
    if isinstance(d, Signal):
        return d
    return apply(t, d)
