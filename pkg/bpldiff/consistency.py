"""
Compares execution outcomes with verifier outcomes and sorts completeness
mismatches by what could cure them.
"""
from dataclasses import dataclass
from enum import Enum
import logging
from typing import Callable, Optional

from bpldiff.ast import (
    Assert,
    Assign,
    Binary,
    Body,
    BoolLit,
    Expr,
    If,
    IntLit,
    Literal,
    Program,
    Unary,
    Var,
    While,
    expr_vars,
    is_literal,
)
from bpldiff.boogie import (
    INFER_FLAG,
    BoogieConfig,
    BoogieKind,
    BoogieResult,
    verify_program,
)
from bpldiff.executor import ExecKind, ExecOutcome
from bpldiff.semantics import Signal, eval_binop, eval_unop

logger = logging.getLogger(__name__)


class VerdictKind(Enum):
    CONSISTENT = 'consistent'
    MISMATCH = 'mismatch'
    UNKNOWN = 'unknown'


class MismatchKind(Enum):
    SOUNDNESS = 'soundness'
    COMPLETENESS = 'completeness'
    FRONTEND = 'frontend'


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    mismatch: Optional[MismatchKind] = None
    flagged: bool = False

    @property
    def label(self) -> str:
        if self.mismatch is not None:
            return f'{self.kind.value}:{self.mismatch.value}'
        if self.flagged:
            return f'{self.kind.value}:crash'
        return self.kind.value

    @classmethod
    def from_label(cls, label: str) -> 'Verdict':
        kind, _, extra = label.partition(':')
        if extra == 'crash':
            return cls(VerdictKind(kind), flagged=True)
        return cls(VerdictKind(kind), MismatchKind(extra) if extra else None)


CONSISTENT = Verdict(VerdictKind.CONSISTENT)
UNKNOWN = Verdict(VerdictKind.UNKNOWN)
UNKNOWN_CRASH = Verdict(VerdictKind.UNKNOWN, flagged=True)
SOUNDNESS = Verdict(VerdictKind.MISMATCH, MismatchKind.SOUNDNESS)
COMPLETENESS = Verdict(VerdictKind.MISMATCH, MismatchKind.COMPLETENESS)
FRONTEND = Verdict(VerdictKind.MISMATCH, MismatchKind.FRONTEND)

_EXEC_FRONTEND = {ExecKind.NAME_ERROR, ExecKind.TYPE_ERROR}
_BOOGIE_FRONTEND = {BoogieKind.NAME_ERROR, BoogieKind.TYPE_ERROR}


def check(
    exec_outcome: ExecKind | ExecOutcome,
    boogie_outcome: BoogieKind | BoogieResult
) -> Verdict:
    """
    Decides whether an execution outcome and a verifier outcome agree.

    The rules are tried in order:

    1. a verifier crash is UNKNOWN, flagged for triage;
    2. a division by zero during execution is UNKNOWN;
    3. a verifier parse error on emitted code is a FRONTEND mismatch;
    4. when either side reports a name or type error, both must report the same
       one, otherwise it is a FRONTEND mismatch;
    5. a timeout on either side is UNKNOWN;
    6. a failing program that verifies is a SOUNDNESS mismatch, a successful or
       looping program that fails verification is a COMPLETENESS mismatch, and
       the remaining pairs are CONSISTENT.

    Parameters
    ----------
    exec_outcome : ExecKind | ExecOutcome
        What executing the program gave.
    boogie_outcome : BoogieKind | BoogieResult
        What verifying it gave.

    Returns
    -------
    Verdict
        The verdict.
    """
    p = exec_outcome.kind if isinstance(exec_outcome, ExecOutcome) else exec_outcome
    b = boogie_outcome.kind if isinstance(boogie_outcome, BoogieResult) else boogie_outcome
    if b is BoogieKind.CRASH:
        return UNKNOWN_CRASH
    if p is ExecKind.DIV_ERROR:
        return UNKNOWN
    if b is BoogieKind.PARSE_ERROR:
        return FRONTEND
    if p in _EXEC_FRONTEND or b in _BOOGIE_FRONTEND:
        return CONSISTENT if p.value == b.value else FRONTEND
    if p is ExecKind.TIMEOUT or b is BoogieKind.TIMEOUT:
        return UNKNOWN
    if p is ExecKind.FAILURE:
        return CONSISTENT if b is BoogieKind.FAILURE else SOUNDNESS
    return CONSISTENT if b is BoogieKind.SUCCESS else COMPLETENESS


# Constant loop guards ---------------------------------------------------------

Location = tuple[object, ...]
ConstEnv = dict[str, Optional[Literal]]


@dataclass(frozen=True)
class ConstantGuard:
    location: Location
    value: bool
    stable: bool


def fold(e: Expr, env: ConstEnv) -> Optional[Literal]:
    """Evaluates an expression over the known constants, None when unknown."""
    if isinstance(e, (IntLit, BoolLit)):
        return e
    if isinstance(e, Var):
        return env.get(e.name)
    if isinstance(e, Unary):
        operand = fold(e.operand, env)
        return None if operand is None else eval_unop(e.op, operand)
    left, right = fold(e.left, env), fold(e.right, env)
    if left is None or right is None:
        return None
    result = eval_binop(e.op, left, right)
    return None if isinstance(result, Signal) else result

def _loop_invariant_vars(body: Body, env: ConstEnv) -> set[str]:
    """
    Names whose known value survives any number of loop iterations: every
    assignment to them in the loop stores their current constant or copies them.
    """
    kept = {name for name, value in env.items() if value is not None}
    for s in _walk(body):
        if isinstance(s, Assign) and s.target in kept:
            same_literal = is_literal(s.expr) and s.expr == env[s.target]
            self_copy = isinstance(s.expr, Var) and s.expr.name == s.target
            if not (same_literal or self_copy):
                kept.discard(s.target)
    return kept

def _walk(body: Body):
    for s in body:
        yield s
        if isinstance(s, If):
            yield from _walk(s.then_body)
            yield from _walk(s.else_body)
        elif isinstance(s, While):
            yield from _walk(s.body)

def _assigned(body: Body) -> set[str]:
    return {s.target for s in _walk(body) if isinstance(s, Assign)}

def _analyse(body: Body, env: ConstEnv, location: Location, found: list[ConstantGuard]) -> ConstEnv:
    for i, s in enumerate(body):
        here = location + (i,)
        if isinstance(s, Assign):
            env[s.target] = fold(s.expr, env)
        elif isinstance(s, Assert):
            continue
        elif isinstance(s, If):
            cond = fold(s.cond, env)
            if isinstance(cond, BoolLit):
                branch = s.then_body if cond.value else s.else_body
                env = _analyse(branch, env, here + ('then' if cond.value else 'else',), found)
                continue
            _analyse(s.then_body, dict(env), here + ('then',), found)
            _analyse(s.else_body, dict(env), here + ('else',), found)
            for name in _assigned(s.then_body) | _assigned(s.else_body):
                env[name] = None
        else:
            guard = fold(s.cond, env)
            kept = _loop_invariant_vars(s.body, env)
            if isinstance(guard, BoolLit):
                stable = expr_vars(s.cond) <= kept
                found.append(ConstantGuard(here, guard.value, stable))
                if not guard.value:
                    continue
            inside = {
                name: (value if name in kept else None)
                for name, value in env.items()
            }
            for name in _assigned(s.body) - set(inside):
                inside[name] = None
            _analyse(s.body, dict(inside), here + ('body',), found)
            env = inside
    return env

def detect_constant_guard(p: Program) -> list[ConstantGuard]:
    """
    Finds loops whose guard has a known constant value when they are reached.

    Constants are propagated from the initial values through assignments. An
    `if` with an unknown condition forgets every variable either branch assigns,
    and a loop forgets every variable it may change.

    Parameters
    ----------
    p : Program
        A well-typed program.

    Returns
    -------
    list[ConstantGuard]
        One entry per loop whose guard folds to a constant, in program order.
        `stable` is set when the guard keeps that value on every re-evaluation.
    """
    found: list[ConstantGuard] = []
    env: ConstEnv = {d.name: d.init for d in p.locals}
    _analyse(p.body, env, ('body',), found)
    return found


# Incompleteness ---------------------------------------------------------------

class IncompletenessClass(Enum):
    ANNOTATION_PROXY = 'annotation-proxy'
    REASONING_PROXY = 'reasoning-proxy'
    REASONING_STATIC = 'reasoning-static'


@dataclass(frozen=True)
class IncompletenessReport:
    proxy: Optional[IncompletenessClass]
    guards: tuple[ConstantGuard, ...]
    final: Optional[IncompletenessClass]
    rerun: BoogieKind


Verifier = Callable[[Program, BoogieConfig], BoogieResult]


def classify_incompleteness(
    p: Program,
    cfg: BoogieConfig,
    run: Verifier = verify_program
) -> IncompletenessReport:
    """
    Tells apart spurious failures that loop invariants could cure from those
    they can't.

    Boogie is run again with invariant inference. Verifying now suggests the
    failure was for lack of an annotation; failing again suggests a reasoning
    gap. Independently, a loop whose guard is constant false on entry never runs,
    so no invariant can matter and the class becomes REASONING_STATIC.

    Parameters
    ----------
    p : Program
        A program whose check gave a COMPLETENESS mismatch.
    cfg : BoogieConfig
        The verifier settings of the original run.
    run : Verifier, optional
        How to verify a program, defaults to `verify_program`.

    Returns
    -------
    IncompletenessReport
        The proxy class (None when the rerun timed out or crashed), the constant
        guards and the final class.
    """
    rerun = run(p, cfg.with_flags(INFER_FLAG))
    proxy: Optional[IncompletenessClass]
    if rerun.kind is BoogieKind.SUCCESS:
        proxy = IncompletenessClass.ANNOTATION_PROXY
    elif rerun.kind is BoogieKind.FAILURE:
        proxy = IncompletenessClass.REASONING_PROXY
    else:
        logger.warning('Rerun with %s gave %s, class left undetermined.', INFER_FLAG, rerun.kind.value)
        proxy = None
    guards = tuple(detect_constant_guard(p))
    final = (
        IncompletenessClass.REASONING_STATIC
        if any(not g.value for g in guards) else proxy
    )
    return IncompletenessReport(proxy, guards, final, rerun.kind)
