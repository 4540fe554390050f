"""
Runs a BPL0 program to one of its execution outcomes.
"""
from dataclasses import dataclass
from enum import Enum
import logging
from textwrap import dedent
from typing import Optional, TextIO

from bpldiff.ast import LocalDecl, Program, literal_type
from bpldiff.judgments import ErrorKind, check_names, check_types
from bpldiff.semantics import (
    MachineTerm,
    Running,
    Signal,
    Terminal,
    apply,
    decompose,
    initial_term,
)
from bpldiff.syntax.sexpr import sexpr_of

logger = logging.getLogger(__name__)


class ExecKind(Enum):
    SUCCESS = 'success'
    FAILURE = 'failure'
    LOOP = 'loop'
    TIMEOUT = 'timeout'
    NAME_ERROR = 'name-error'
    TYPE_ERROR = 'type-error'
    DIV_ERROR = 'div-error'


EXIT_CODES: dict[ExecKind, int] = {
    ExecKind.SUCCESS: 0,
    ExecKind.FAILURE: 1,
    ExecKind.LOOP: 2,
    ExecKind.TIMEOUT: 3,
    ExecKind.NAME_ERROR: 4,
    ExecKind.TYPE_ERROR: 5,
    ExecKind.DIV_ERROR: 6,
}


@dataclass(frozen=True)
class ExecOutcome:
    kind: ExecKind
    steps_taken: int = 0
    loop_first: Optional[int] = None
    loop_recurrence: Optional[int] = None
    detail: str = ''


@dataclass(frozen=True)
class ExecConfig:
    step_budget: int = 100000
    loop_detection: bool = True
    detection_memory_cap: int = 1000000

    def __post_init__(self) -> None:
        if self.step_budget < 1:
            raise ValueError('step_budget must be at least 1')
        if self.detection_memory_cap < 0:
            raise ValueError('detection_memory_cap must be nonnegative')


class ProgressViolationError(Exception):
    def __init__(self, program: Program, step: int):
        self.program = program
        self.step = step
        message = dedent(f"""
            I'm trying to execute a program that passed the type checker, but it got stuck at step {step}.
            Well-typed programs should never get stuck, so this is a bug in bpldiff.
            The program is: {sexpr_of(program)}
        """)
        super().__init__(message)


def _trace_line(trace: TextIO, index: int, rule: str, redex: object) -> None:
    if isinstance(redex, Running):
        decls = tuple(LocalDecl(name, literal_type(value), value) for name, value in redex.env)
        text = sexpr_of(Program(decls, redex.body))
    else:
        text = sexpr_of(redex)  # type: ignore[arg-type]
    trace.write(f'{index}\t{rule}\t{text}\n')

def execute(
    p: Program,
    cfg: ExecConfig = ExecConfig(),
    trace: Optional[TextIO] = None
) -> ExecOutcome:
    """
    Executes a program after checking it is well-named and well-typed.

    Every step's term is remembered, so the run stops with LOOP as soon as a term
    repeats. Memory for this is bounded by `cfg.detection_memory_cap`; past it,
    detection stops and the run can only end by itself or by TIMEOUT.

    Parameters
    ----------
    p : Program
        The program to execute.
    cfg : ExecConfig, optional
        Step budget and loop detection settings.
    trace : TextIO, optional
        When given, one line per applied rule is written to it:
        `index<TAB>rule<TAB>redex`.

    Returns
    -------
    ExecOutcome
        The outcome. `steps_taken` counts applied rules.

    Raises
    ------
    ProgressViolationError
        If a well-typed program gets stuck.
    """
    for judge in (check_names, check_types):
        error = judge(p)
        if error is not None:
            kind = (
                ExecKind.NAME_ERROR if error.kind is ErrorKind.NAME_ERROR
                else ExecKind.TYPE_ERROR
            )
            return ExecOutcome(kind, 0, detail=error.detail)

    term: MachineTerm = initial_term(p)
    seen: dict[MachineTerm, int] = {}
    detecting = cfg.loop_detection
    steps = 0
    while True:
        if isinstance(term, Terminal):
            kind = ExecKind.SUCCESS if term is Terminal.SUCCESS else ExecKind.FAILURE
            return ExecOutcome(kind, steps)
        if detecting:
            first = seen.get(term)
            if first is not None:
                return ExecOutcome(ExecKind.LOOP, steps, loop_first=first, loop_recurrence=steps)
            if len(seen) >= cfg.detection_memory_cap:
                logger.warning(
                    'Loop detection memory cap of %d terms reached, detection stops.',
                    cfg.detection_memory_cap
                )
                detecting = False
                seen.clear()
            else:
                seen[term] = steps
        if steps >= cfg.step_budget:
            return ExecOutcome(ExecKind.TIMEOUT, steps)
        d = decompose(term)
        if isinstance(d, Signal):
            raise ProgressViolationError(p, steps)
        result = apply(term, d)
        if trace is not None:
            _trace_line(trace, steps, d.redex.rule.value, d.redex.term)
        steps += 1
        if isinstance(result, Signal):
            return ExecOutcome(ExecKind.DIV_ERROR, steps)
        term = result
