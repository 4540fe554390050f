"""
Runs the Boogie verifier on emitted programs and classifies what it printed.

Boogie's exit codes don't tell its outcomes apart, so classification reads the
output through a version-keyed table of regular expressions shipped in
`bpldiff/patterns/boogie-<version>.json`.
"""
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from importlib import resources
import json
import logging
import os
from pathlib import Path
import re
import shutil
import subprocess
import tempfile
from textwrap import dedent
import time
from typing import Optional
import uuid

import psutil

from bpldiff.ast import Program
from bpldiff.syntax.boogie import EmitStyle, emit_boogie
from bpldiff.utils import get_regex_group, matches_any, quote_and_join

logger = logging.getLogger(__name__)

BOOGIE_ENV = 'BPLDIFF_BOOGIE'
INFER_FLAG = '/infer:j'


class BoogieKind(Enum):
    SUCCESS = 'success'
    FAILURE = 'failure'
    TIMEOUT = 'timeout'
    NAME_ERROR = 'name-error'
    TYPE_ERROR = 'type-error'
    PARSE_ERROR = 'parse-error'
    CRASH = 'crash'


@dataclass(frozen=True)
class Diagnostic:
    line: int
    column: int
    message: str


@dataclass(frozen=True)
class BoogieResult:
    kind: BoogieKind
    diagnostics: tuple[Diagnostic, ...] = ()
    wall_time: float = 0.0
    exit_code: Optional[int] = None
    stdout: str = ''
    stderr: str = ''


@dataclass(frozen=True)
class BoogieConfig:
    binary: Optional[str] = None
    timeout: float = 60.0
    flags: tuple[str, ...] = ()
    workdir: Optional[Path] = None
    version: str = '3'
    style: EmitStyle = EmitStyle.DECL_WITH_INIT

    def __post_init__(self) -> None:
        if self.timeout <= 0:
            raise ValueError('timeout must be positive')

    def with_flags(self, *flags: str) -> 'BoogieConfig':
        return BoogieConfig(
            self.binary, self.timeout, self.flags + tuple(flags),
            self.workdir, self.version, self.style
        )


@dataclass(frozen=True)
class PatternTable:
    version: str
    summary: re.Pattern[str]
    diagnostic: re.Pattern[str]
    assertion: tuple[str, ...] = field(default_factory=tuple)
    name_error: tuple[str, ...] = field(default_factory=tuple)
    type_error: tuple[str, ...] = field(default_factory=tuple)
    parse_error: tuple[str, ...] = field(default_factory=tuple)


class BoogieNotFoundError(Exception):
    def __init__(self, candidates: list[str]):
        self.candidates = candidates
        tried = quote_and_join(candidates) if candidates else 'nothing'
        message = dedent(f"""
            I'm trying to find the Boogie verifier, but I can't find one. I tried {tried}.
            Some alternatives could be:
                - Pass the binary with --boogie or the 'boogie' config key.
                - Set the {BOOGIE_ENV} environment variable.
                - Put 'boogie' on your PATH.
        """)
        super().__init__(message)


class PatternTableNotFoundError(Exception):
    def __init__(self, version: str):
        self.version = version
        message = dedent(f"""
            I'm trying to load the output patterns for Boogie version '{version}', but there isn't a file
            'boogie-{version}.json' in bpldiff/patterns.
        """)
        super().__init__(message)


@lru_cache(maxsize=None)
def load_patterns(version: str = '3') -> PatternTable:
    """
    Loads the output pattern table of a Boogie version.

    Parameters
    ----------
    version : str, optional
        The major version, defaults to '3'.

    Returns
    -------
    PatternTable
        The compiled table.

    Raises
    ------
    PatternTableNotFoundError
        If no table exists for the version.
    """
    source = resources.files('bpldiff.patterns').joinpath(f'boogie-{version}.json')
    if not source.is_file():
        raise PatternTableNotFoundError(version)
    raw = json.loads(source.read_text(encoding='utf-8'))
    return PatternTable(
        version=raw.get('version', version),
        summary=re.compile(raw['summary']),
        diagnostic=re.compile(raw['diagnostic'], flags=re.MULTILINE),
        assertion=tuple(raw.get('assertion', [])),
        name_error=tuple(raw.get('name_error', [])),
        type_error=tuple(raw.get('type_error', [])),
        parse_error=tuple(raw.get('parse_error', [])),
    )

def parse_diagnostics(text: str, patterns: PatternTable) -> tuple[Diagnostic, ...]:
    return tuple(
        Diagnostic(int(m.group(1)), int(m.group(2)), m.group(3).strip())
        for m in patterns.diagnostic.finditer(text)
    )

def classify_output(
    exit_code: Optional[int],
    stdout: str,
    stderr: str,
    patterns: Optional[PatternTable] = None,
    wall_time: float = 0.0
) -> BoogieResult:
    """
    Classifies a finished Boogie run from its exit code and output.

    The summary line decides first: no errors is SUCCESS (or TIMEOUT when the
    solver timed out on some procedure) and errors are FAILURE, provided an
    assertion diagnostic is present. Without a summary, the diagnostics are
    matched against the name resolution, type checking and parsing families, in
    this order. Anything else is a CRASH.

    Parameters
    ----------
    exit_code : Optional[int]
        The process exit code, None if unknown.
    stdout, stderr : str
        The captured streams.
    patterns : PatternTable, optional
        The pattern table, defaults to Boogie 3's.
    wall_time : float, optional
        Seconds the run took, stored in the result.

    Returns
    -------
    BoogieResult
        Exactly one classification; streams are kept verbatim.
    """
    patterns = patterns or load_patterns()
    text = f'{stdout}\n{stderr}'
    diagnostics = parse_diagnostics(text, patterns)

    def result(kind: BoogieKind) -> BoogieResult:
        return BoogieResult(kind, diagnostics, wall_time, exit_code, stdout, stderr)

    if patterns.summary.search(text):
        errors = int(get_regex_group(text, patterns.summary, group=2, if_none='0'))
        timeouts = int(get_regex_group(text, patterns.summary, group=3, if_none='0') or 0)
        if errors == 0:
            return result(BoogieKind.TIMEOUT if timeouts > 0 else BoogieKind.SUCCESS)
        if any(matches_any(d.message, patterns.assertion) for d in diagnostics):
            return result(BoogieKind.FAILURE)
        return result(BoogieKind.CRASH)
    for kind, family in (
        (BoogieKind.NAME_ERROR, patterns.name_error),
        (BoogieKind.TYPE_ERROR, patterns.type_error),
        (BoogieKind.PARSE_ERROR, patterns.parse_error),
    ):
        if matches_any(text, family):
            return result(kind)
    return result(BoogieKind.CRASH)


# Running ----------------------------------------------------------------------

def resolve_binary(explicit: Optional[str] = None) -> str:
    """
    Finds the Boogie binary.

    Parameters
    ----------
    explicit : str, optional
        A path or command name given by the caller.

    Returns
    -------
    str
        The first of `explicit`, `$BPLDIFF_BOOGIE` and `boogie` on PATH that
        resolves to an executable.

    Raises
    ------
    BoogieNotFoundError
        If none resolves.
    """
    candidates = [c for c in (explicit, os.environ.get(BOOGIE_ENV), 'boogie') if c]
    for candidate in candidates:
        if Path(candidate).is_file():
            return str(candidate)
        found = shutil.which(candidate)
        if found:
            return found
    raise BoogieNotFoundError(candidates)

def boogie_available(explicit: Optional[str] = None) -> bool:
    try:
        resolve_binary(explicit)
    except BoogieNotFoundError:
        return False
    return True

def _scratch_root(cfg: BoogieConfig) -> Optional[Path]:
    if cfg.workdir is None:
        return None
    root = Path(cfg.workdir)
    root.mkdir(parents=True, exist_ok=True)
    return root

def _kill_tree(pid: int) -> None:
    try:
        parent = psutil.Process(pid)
    except psutil.NoSuchProcess:
        return
    procs = parent.children(recursive=True) + [parent]
    for proc in procs:
        try:
            proc.kill()
        except (psutil.NoSuchProcess, psutil.AccessDenied):
            pass
    psutil.wait_procs(procs, timeout=5)

def run_boogie(file: str | Path, cfg: BoogieConfig = BoogieConfig()) -> BoogieResult:
    """
    Runs Boogie on a `.bpl` file and classifies the run.

    The file is copied into a fresh scratch directory under a unique name, so
    parallel runs never collide. When the timeout expires, Boogie and every
    process it started (the SMT solver included) are killed.

    Parameters
    ----------
    file : str | Path
        The Boogie file.
    cfg : BoogieConfig, optional
        Binary, timeout and extra flags.

    Returns
    -------
    BoogieResult
        The classified run. A run that can't be started is a CRASH.
    """
    binary = resolve_binary(cfg.binary)
    patterns = load_patterns(cfg.version)
    with tempfile.TemporaryDirectory(prefix='bpldiff-', dir=_scratch_root(cfg)) as scratch:
        target = Path(scratch) / f'{uuid.uuid4().hex}.bpl'
        shutil.copyfile(file, target)
        argv = [binary, target.name, *cfg.flags]
        logger.debug('Running %s in %s', argv, scratch)
        start = time.monotonic()
        try:
            proc = subprocess.Popen(
                argv,
                cwd=scratch,
                stdout=subprocess.PIPE,
                stderr=subprocess.PIPE,
                text=True,
                start_new_session=True,
            )
        except OSError as error:
            logger.warning('Boogie could not be started: %s', error)
            return BoogieResult(BoogieKind.CRASH, stderr=str(error))
        try:
            stdout, stderr = proc.communicate(timeout=cfg.timeout)
        except subprocess.TimeoutExpired:
            _kill_tree(proc.pid)
            stdout, stderr = proc.communicate()
            return BoogieResult(
                BoogieKind.TIMEOUT,
                wall_time=time.monotonic() - start,
                exit_code=proc.returncode,
                stdout=stdout or '',
                stderr=stderr or '',
            )
        elapsed = time.monotonic() - start
    outcome = classify_output(proc.returncode, stdout, stderr, patterns, elapsed)
    if outcome.kind is BoogieKind.CRASH:
        logger.warning('Boogie crashed on %s with exit code %s', file, proc.returncode)
    return outcome

def verify_program(p: Program, cfg: BoogieConfig = BoogieConfig()) -> BoogieResult:
    """Emits a program in the configured style and runs Boogie on it."""
    with tempfile.TemporaryDirectory(prefix='bpldiff-', dir=_scratch_root(cfg)) as scratch:
        source = Path(scratch) / 'program.bpl'
        source.write_text(emit_boogie(p, cfg.style), encoding='utf-8', newline='\n')
        return run_boogie(source, cfg)
