"""
Campaign orchestration: generate batches, execute and verify every program,
check the two outcomes against each other and aggregate the results.

A campaign writes, under its output directory::

    programs/<batch_id>/NNNNNN.sexpr
    programs/<batch_id>/NNNNNN.bpl
    programs/<batch_id>/manifest.jsonl
    results.jsonl
    report.json
    report.txt

`results.jsonl` holds one self-contained record per program and is appended to
as soon as a program's last phase completes, so an interrupted campaign can be
resumed and any log can be aggregated again later.
"""
from __future__ import annotations
from concurrent.futures import Executor, ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from fractions import Fraction
import json
import logging
from pathlib import Path
import random
from statistics import median_low
import textwrap
from typing import Any, Callable, Iterable, Iterator, Optional, TYPE_CHECKING

from bpldiff.ast import STAT_FIELDS, Program, depth, term_stats
from bpldiff.boogie import (
    BoogieConfig,
    BoogieKind,
    BoogieResult,
    PatternTableNotFoundError,
    load_patterns,
    resolve_binary,
    run_boogie,
    verify_program,
)
from bpldiff.config import CampaignConfig, CampaignConfigError
from bpldiff.consistency import (
    IncompletenessClass,
    IncompletenessReport,
    MismatchKind,
    Verdict,
    check,
    classify_incompleteness,
)
from bpldiff.executor import ExecConfig, ExecKind, ExecOutcome, ProgressViolationError, execute
from bpldiff.generator import BatchSpec, BatchStats, GeneratedProgram, GenKind, SaturationError, gen_batch
from bpldiff.report.templates import DEFAULT_TEMPLATE
from bpldiff.syntax.boogie import write_program
from bpldiff.utils import format_percent, ratio, smart_join

if TYPE_CHECKING:
    from jinja2 import Template

logger = logging.getLogger(__name__)

RESULTS_FILE = 'results.jsonl'
REPORT_JSON = 'report.json'
REPORT_TEXT = 'report.txt'
MANIFEST_FILE = 'manifest.jsonl'
CHUNK_SIZE = 1024

VERDICT_LABELS = (
    'consistent',
    'mismatch:soundness',
    'mismatch:completeness',
    'mismatch:frontend',
    'unknown',
    'unknown:crash',
)
CLASS_LABELS = tuple(c.value for c in IncompletenessClass) + ('undetermined',)
_CORRECT = {ExecKind.SUCCESS.value, ExecKind.LOOP.value}


def program_id(batch_id: str, index: int) -> str:
    return f'{batch_id}-{index:06d}'


# Records ----------------------------------------------------------------------

@dataclass(frozen=True)
class ResultRecord:
    program_id: str
    batch_id: str
    index: int
    seed: int
    kind: str
    max_depth: int
    stats: dict[str, int]
    exec_outcome: str
    exec_steps: int = 0
    loop_first: Optional[int] = None
    loop_recurrence: Optional[int] = None
    boogie_outcome: Optional[str] = None
    boogie_time: Optional[float] = None
    boogie_exit: Optional[int] = None
    boogie_stdout: Optional[str] = None
    boogie_stderr: Optional[str] = None
    verdict: Optional[str] = None
    incompleteness: Optional[dict[str, Any]] = None
    sexpr_path: Optional[str] = None
    bpl_path: Optional[str] = None

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ResultRecord:
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in known})

    def to_line(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False)

    @property
    def verified(self) -> bool:
        return self.boogie_outcome is not None

    def recheck(self) -> Optional[Verdict]:
        """Recomputes the verdict from the two recorded outcomes."""
        if self.boogie_outcome is None:
            return None
        return check(ExecKind(self.exec_outcome), BoogieKind(self.boogie_outcome))


def incompleteness_to_dict(report: IncompletenessReport) -> dict[str, Any]:
    return {
        'proxy': report.proxy.value if report.proxy else None,
        'final': report.final.value if report.final else None,
        'rerun': report.rerun.value,
        'guards': [
            {'location': list(g.location), 'value': g.value, 'stable': g.stable}
            for g in report.guards
        ],
    }


def make_record(
    spec: BatchSpec,
    generated: GeneratedProgram,
    outcome: ExecOutcome,
    paths: Optional[tuple[str, str]] = None,
    boogie: Optional[BoogieResult] = None,
    verdict: Optional[Verdict] = None,
    incompleteness: Optional[IncompletenessReport] = None
) -> ResultRecord:
    return ResultRecord(
        program_id=program_id(spec.id, generated.index),
        batch_id=spec.id,
        index=generated.index,
        seed=generated.seed,
        kind=spec.config.kind.value,
        max_depth=spec.config.max_depth,
        stats=term_stats(generated.program).as_dict(),
        exec_outcome=outcome.kind.value,
        exec_steps=outcome.steps_taken,
        loop_first=outcome.loop_first,
        loop_recurrence=outcome.loop_recurrence,
        boogie_outcome=boogie.kind.value if boogie else None,
        boogie_time=round(boogie.wall_time, 3) if boogie else None,
        boogie_exit=boogie.exit_code if boogie else None,
        boogie_stdout=boogie.stdout if boogie else None,
        boogie_stderr=boogie.stderr if boogie else None,
        verdict=verdict.label if verdict else None,
        incompleteness=incompleteness_to_dict(incompleteness) if incompleteness else None,
        sexpr_path=paths[0] if paths else None,
        bpl_path=paths[1] if paths else None,
    )


def read_log(path: str | Path) -> Iterator[tuple[int, dict[str, Any]]]:
    """Yields the line number and content of each readable line of a results log."""
    log = Path(path)
    if not log.is_file():
        return
    with log.open(encoding='utf-8') as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError:
                logger.warning('Skipping unreadable line %d of %s.', lineno, log)
                continue
            if not isinstance(data, dict) or 'program_id' not in data:
                logger.warning('Skipping line %d of %s, it is not a result record.', lineno, log)
                continue
            yield lineno, data

def load_results(path: str | Path) -> list[ResultRecord]:
    """
    Loads every readable record of a results log.

    Parameters
    ----------
    path : str | Path
        The `results.jsonl` file. A missing file has no records.

    Returns
    -------
    list[ResultRecord]
        The records in file order. Truncated or malformed lines are skipped with
        a warning.
    """
    return [ResultRecord.from_dict(data) for _, data in read_log(path)]

def canonical_lines(path: str | Path) -> list[str]:
    """Returns the records of a results log re-serialised and sorted by program id."""
    records = sorted(load_results(path), key=lambda r: r.program_id)
    return [r.to_line() for r in records]

def _repair_log(path: Path) -> None:
    """Cuts a trailing partial line left by an interrupted run."""
    if not path.is_file():
        return
    content = path.read_bytes()
    if not content or content.endswith(b'\n'):
        return
    cut = content.rfind(b'\n') + 1
    logger.warning('The last line of %s is truncated, dropping it before resuming.', path)
    with path.open('r+b') as handle:
        handle.truncate(cut)


# Single programs --------------------------------------------------------------

@dataclass(frozen=True)
class DiffResult:
    exec_outcome: ExecOutcome
    boogie: BoogieResult
    verdict: Verdict
    incompleteness: Optional[IncompletenessReport] = None


def verify_and_check(
    p: Program,
    outcome: ExecOutcome,
    cfg: BoogieConfig,
    classify: bool = True,
    bpl_path: Optional[Path] = None
) -> tuple[BoogieResult, Verdict, Optional[IncompletenessReport]]:
    """
    Verifies a program whose execution outcome is known and checks the pair.

    Parameters
    ----------
    p : Program
        The program.
    outcome : ExecOutcome
        Its execution outcome.
    cfg : BoogieConfig
        The verifier settings.
    classify : bool, optional
        Whether to classify completeness mismatches, defaults to True.
    bpl_path : Path, optional
        An already emitted Boogie file; the program is emitted afresh otherwise.

    Returns
    -------
    tuple[BoogieResult, Verdict, Optional[IncompletenessReport]]
        The verifier result, the verdict and, for classified completeness
        mismatches, the incompleteness report.
    """
    result = run_boogie(bpl_path, cfg) if bpl_path is not None else verify_program(p, cfg)
    verdict = check(outcome, result)
    report = None
    if classify and verdict.mismatch is MismatchKind.COMPLETENESS:
        report = classify_incompleteness(p, cfg)
    return result, verdict, report

def diff_program(
    p: Program,
    exec_config: ExecConfig = ExecConfig(),
    boogie_config: BoogieConfig = BoogieConfig(),
    classify: bool = True
) -> DiffResult:
    """Executes and verifies one program and checks the two outcomes agree."""
    outcome = execute(p, exec_config)
    result, verdict, report = verify_and_check(p, outcome, boogie_config, classify)
    return DiffResult(outcome, result, verdict, report)


def _execute_one(args: tuple[Program, ExecConfig]) -> ExecOutcome:
    p, cfg = args
    try:
        return execute(p, cfg)
    except ProgressViolationError as error:
        # Exceptions with extra constructor arguments don't survive pickling.
        raise RuntimeError(str(error)) from None


# Running ----------------------------------------------------------------------

class _Phases:
    """Worker pools and settings shared by every chunk of a campaign."""

    def __init__(self, cfg: CampaignConfig, log: Any):
        self.cfg = cfg
        self.log = log
        self.exec_pool: Optional[Executor] = (
            ProcessPoolExecutor(max_workers=cfg.exec_workers) if cfg.exec_workers > 1 else None
        )
        self.verify_pool: Optional[Executor] = (
            ThreadPoolExecutor(max_workers=cfg.verify_workers) if cfg.verify else None
        )

    def close(self) -> None:
        for pool in (self.exec_pool, self.verify_pool):
            if pool is not None:
                pool.shutdown(cancel_futures=True)

    def execute(self, programs: list[GeneratedProgram]) -> list[ExecOutcome]:
        args = [(g.program, self.cfg.exec_config) for g in programs]
        if self.exec_pool is None:
            return [_execute_one(a) for a in args]
        chunksize = max(1, len(args) // (4 * self.cfg.exec_workers))
        return list(self.exec_pool.map(_execute_one, args, chunksize=chunksize))

    def verify(
        self,
        programs: list[GeneratedProgram],
        outcomes: list[ExecOutcome],
        bpl_paths: list[Path]
    ) -> list[tuple[Optional[BoogieResult], Optional[Verdict], Optional[IncompletenessReport]]]:
        boogie = self.cfg.boogie
        if boogie is None or self.verify_pool is None:
            return [(None, None, None)] * len(programs)
        futures = [
            self.verify_pool.submit(
                verify_and_check, g.program, o, boogie, self.cfg.classify_incompleteness, path
            )
            for g, o, path in zip(programs, outcomes, bpl_paths)
        ]
        return [f.result() for f in futures]

    def run_chunk(self, spec: BatchSpec, chunk: list[GeneratedProgram]) -> int:
        out = self.cfg.output_dir
        directory = out / 'programs' / spec.id
        paths = []
        for g in chunk:
            sexpr_path, bpl_path = write_program(g.program, directory, f'{g.index:06d}', self.cfg.emit_style)
            paths.append((sexpr_path, bpl_path))
        outcomes = self.execute(chunk)
        verified = self.verify(chunk, outcomes, [bpl for _, bpl in paths])
        for g, outcome, (sexpr_path, bpl_path), (result, verdict, report) in zip(chunk, outcomes, paths, verified):
            relative = (sexpr_path.relative_to(out).as_posix(), bpl_path.relative_to(out).as_posix())
            record = make_record(spec, g, outcome, relative, result, verdict, report)
            logger.debug('%s: %s / %s', record.program_id, record.exec_outcome, record.boogie_outcome)
            self.log.write(record.to_line() + '\n')
        self.log.flush()
        return len(chunk)


def manifest_entry(spec: BatchSpec, generated: GeneratedProgram) -> dict[str, Any]:
    return {
        'program_id': program_id(spec.id, generated.index),
        'index': generated.index,
        'seed': generated.seed,
        'kind': spec.config.kind.value,
        'max_depth': spec.config.max_depth,
        'depth': depth(generated.program),
        'stats': term_stats(generated.program).as_dict(),
    }

def write_manifest(directory: str | Path, spec: BatchSpec, programs: Iterable[GeneratedProgram]) -> Path:
    """
    Writes `manifest.jsonl` for a batch, one line per program.

    Parameters
    ----------
    directory : str | Path
        The batch directory, created if needed.
    spec : BatchSpec
        The batch the programs were generated for.
    programs : Iterable[GeneratedProgram]
        The accepted programs, in index order.

    Returns
    -------
    Path
        The manifest path.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / MANIFEST_FILE
    with path.open('w', encoding='utf-8', newline='\n') as handle:
        for g in programs:
            handle.write(json.dumps(manifest_entry(spec, g), sort_keys=True) + '\n')
    return path

def _run_batch(
    phases: _Phases,
    spec: BatchSpec,
    done: set[str]
) -> None:
    cfg = phases.cfg
    stats = BatchStats()
    manifest: list[GeneratedProgram] = []
    pending: list[GeneratedProgram] = []
    processed = 0
    logger.info('Batch %s: generating %d %s programs of depth %d.',
                spec.id, spec.count, spec.config.kind.value, spec.config.max_depth)
    try:
        for generated in gen_batch(spec, cfg.gen_workers, cfg.saturation_factor, stats):
            manifest.append(generated)
            if program_id(spec.id, generated.index) in done:
                continue
            pending.append(generated)
            if len(pending) >= CHUNK_SIZE:
                processed += phases.run_chunk(spec, pending)
                pending = []
    except SaturationError as error:
        logger.error('Batch %s stopped early: %s', spec.id, error)
    if pending:
        processed += phases.run_chunk(spec, pending)
    write_manifest(cfg.output_dir / 'programs' / spec.id, spec, manifest)
    logger.info(
        'Batch %s: %d programs processed, %d skipped as done, %.2f attempts per program.',
        spec.id, processed, len(manifest) - processed, stats.attempts_per_accept
    )

def run_campaign(cfg: CampaignConfig) -> AggregateReport:
    """
    Runs a differential testing campaign.

    Every batch is generated, written to disk, executed and, when a verifier is
    configured, verified and checked. Records are appended to the results log
    in program order as each chunk completes. With `cfg.resume`, programs whose
    ids already appear in the log are skipped.

    Parameters
    ----------
    cfg : CampaignConfig
        What to generate and how to run it.

    Returns
    -------
    AggregateReport
        The aggregate over the whole results log, also written to `report.json`
        and `report.txt`.

    Raises
    ------
    BoogieNotFoundError
        If verification is requested and no verifier can be found. Nothing is
        generated in that case.
    CampaignConfigError
        If the Boogie version has no output patterns or the output directory
        can't be created. Nothing is generated in either case.
    """
    if cfg.boogie is not None:
        try:
            load_patterns(cfg.boogie.version)
        except PatternTableNotFoundError as error:
            raise CampaignConfigError(
                f"'boogie_version' is '{error.version}', but there are no output patterns for that version."
            )
        cfg = replace(cfg, boogie=replace(cfg.boogie, binary=resolve_binary(cfg.boogie.binary)))
    try:
        cfg.output_dir.mkdir(parents=True, exist_ok=True)
    except OSError as error:
        raise CampaignConfigError(f"The output directory '{cfg.output_dir}' can't be created: {error}")

    log_path = cfg.output_dir / RESULTS_FILE
    done: set[str] = set()
    if cfg.resume:
        _repair_log(log_path)
        done = {data['program_id'] for _, data in read_log(log_path)}
        logger.info('Resuming, %d programs already done.', len(done))
    elif log_path.exists():
        log_path.unlink()

    mode = 'execution and verification' if cfg.verify else 'execution only'
    logger.info('Campaign of %d batches, %s.', len(cfg.batches), mode)
    with log_path.open('a', encoding='utf-8', newline='\n') as log:
        phases = _Phases(cfg, log)
        try:
            for spec in cfg.batches:
                _run_batch(phases, spec, done)
        finally:
            phases.close()

    report = aggregate(load_results(log_path), cfg.review_sample_size, cfg.seed)
    write_report(report, cfg.output_dir)
    return report


# Aggregation ------------------------------------------------------------------

@dataclass(frozen=True)
class StatSummary:
    min: int = 0
    median: int = 0
    max: int = 0

    @property
    def text(self) -> str:
        return f'{self.min}/{self.median}/{self.max}'


@dataclass
class BatchRow:
    label: str
    kind: Optional[str] = None
    max_depth: Optional[int] = None
    total: int = 0
    verified: int = 0
    stats: dict[str, StatSummary] = field(default_factory=dict)
    exec_counts: dict[str, int] = field(default_factory=dict)
    boogie_counts: dict[str, int] = field(default_factory=dict)
    verdict_counts: dict[str, int] = field(default_factory=dict)
    matrix: dict[str, dict[str, int]] = field(default_factory=dict)
    classes: dict[str, int] = field(default_factory=dict)


@dataclass
class AggregateReport:
    batches: list[BatchRow]
    kinds: list[BatchRow]
    total: BatchRow
    ratios: dict[str, Fraction]
    rerun_counts: dict[str, int]
    crashes: list[str]
    findings: list[dict[str, str]]
    review: dict[str, list[str]]

    @property
    def verified(self) -> bool:
        return self.total.verified > 0

    @property
    def rows(self) -> list[BatchRow]:
        return self.batches + self.kinds + [self.total]


def _summarise(values: list[int]) -> StatSummary:
    if not values:
        return StatSummary()
    return StatSummary(min(values), median_low(values), max(values))

def _row(label: str, records: list[ResultRecord], kind: Optional[str] = None, max_depth: Optional[int] = None) -> BatchRow:
    row = BatchRow(label, kind, max_depth, total=len(records))
    row.stats = {f: _summarise([r.stats.get(f, 0) for r in records]) for f in STAT_FIELDS}
    row.exec_counts = {k.value: 0 for k in ExecKind}
    row.boogie_counts = {k.value: 0 for k in BoogieKind}
    row.verdict_counts = {v: 0 for v in VERDICT_LABELS}
    row.matrix = {e.value: {b.value: 0 for b in BoogieKind} for e in ExecKind}
    row.classes = {c: 0 for c in CLASS_LABELS}
    for r in records:
        row.exec_counts[r.exec_outcome] += 1
        if r.boogie_outcome is None:
            continue
        row.verified += 1
        row.boogie_counts[r.boogie_outcome] += 1
        row.matrix[r.exec_outcome][r.boogie_outcome] += 1
        if r.verdict is not None:
            row.verdict_counts[r.verdict] += 1
        if r.incompleteness is not None:
            row.classes[r.incompleteness.get('final') or 'undetermined'] += 1
    return row

def _kind_order(kind: str) -> int:
    values = [k.value for k in GenKind]
    return values.index(kind) if kind in values else len(values)

def _ratios(records: list[ResultRecord]) -> dict[str, Fraction]:
    checked = [r for r in records if r.verified]
    correct = [r for r in checked if r.exec_outcome in _CORRECT]
    incorrect = [r for r in checked if r.exec_outcome == ExecKind.FAILURE.value]
    classified = [
        r.incompleteness for r in checked
        if r.incompleteness is not None and r.incompleteness.get('proxy') is not None
    ]
    resisting = [c for c in classified if c['proxy'] == IncompletenessClass.REASONING_PROXY.value]
    return {
        'correct_verified': ratio(sum(r.boogie_outcome == BoogieKind.SUCCESS.value for r in correct), len(correct)),
        'incorrect_confirmed': ratio(sum(r.boogie_outcome == BoogieKind.FAILURE.value for r in incorrect), len(incorrect)),
        'correct_rejected': ratio(sum(r.verdict == 'mismatch:completeness' for r in correct), len(correct)),
        'inference_cured': ratio(len(classified) - len(resisting), len(classified)),
        'inference_resistant': ratio(len(resisting), len(classified)),
    }

def _findings(records: list[ResultRecord]) -> list[dict[str, str]]:
    rules = (
        ('mismatch:soundness', 'soundness', 'Error',
         'where execution fails an assertion but Boogie verifies'),
        ('mismatch:frontend', 'frontend', 'Error',
         'where Boogie and the judgments disagree on name or type errors'),
        ('mismatch:completeness', 'completeness', 'Warning',
         'where execution succeeds or loops but Boogie reports a failure'),
        ('unknown:crash', 'crash', 'Info',
         "where Boogie crashed or printed output I can't classify"),
    )
    findings = []
    for label, name, state, what in rules:
        ids = sorted(r.program_id for r in records if r.verdict == label)
        if not ids:
            continue
        noun = 'program' if len(ids) == 1 else 'programs'
        findings.append({
            'finding': name,
            'state': state,
            'message': f'{len(ids)} {noun} {what}, e.g. {smart_join(ids[:3])}.',
        })
    return findings

def _review_sample(records: list[ResultRecord], size: int, seed: int) -> dict[str, list[str]]:
    cured, resisting = [], []
    for r in records:
        if r.incompleteness is None:
            continue
        if r.incompleteness.get('proxy') == IncompletenessClass.ANNOTATION_PROXY.value:
            cured.append(r.program_id)
        elif r.incompleteness.get('proxy') == IncompletenessClass.REASONING_PROXY.value:
            resisting.append(r.program_id)
    rng = random.Random(seed)
    return {
        'cured': sorted(rng.sample(sorted(cured), min(size, len(cured)))),
        'resisting': sorted(rng.sample(sorted(resisting), min(size, len(resisting)))),
    }

def aggregate(records: Iterable[ResultRecord], review_sample_size: int = 20, seed: int = 0) -> AggregateReport:
    """
    Aggregates result records into per-batch, per-kind and total rows.

    Medians take the lower middle value for an even number of records. Counts
    are exact; ratios are kept as fractions and only rounded when rendered.

    Parameters
    ----------
    records : Iterable[ResultRecord]
        The records, in any order.
    review_sample_size : int, optional
        How many inference-cured and inference-resistant completeness mismatches
        to draw for manual review, defaults to 20 of each.
    seed : int, optional
        Seed of the review sample draw.

    Returns
    -------
    AggregateReport
        The report. No records give an all-zero report.
    """
    ordered = sorted(records, key=lambda r: r.program_id)
    by_batch: dict[str, list[ResultRecord]] = {}
    by_kind: dict[str, list[ResultRecord]] = {}
    for r in ordered:
        by_batch.setdefault(r.batch_id, []).append(r)
        by_kind.setdefault(r.kind, []).append(r)

    batches = [
        _row(batch_id, rs, rs[0].kind, rs[0].max_depth)
        for batch_id, rs in by_batch.items()
    ]
    batches.sort(key=lambda row: (_kind_order(row.kind or ''), row.max_depth or 0, row.label))
    kinds = [_row(f'{kind}-all', rs, kind) for kind, rs in by_kind.items()]
    kinds.sort(key=lambda row: _kind_order(row.kind or ''))

    rerun_counts = {k.value: 0 for k in BoogieKind}
    for r in ordered:
        if r.incompleteness is not None:
            rerun_counts[r.incompleteness['rerun']] += 1

    return AggregateReport(
        batches=batches,
        kinds=kinds,
        total=_row('total', ordered),
        ratios=_ratios(ordered),
        rerun_counts=rerun_counts,
        crashes=[r.program_id for r in ordered if r.verdict == 'unknown:crash'],
        findings=_findings(ordered),
        review=_review_sample(ordered, review_sample_size, seed),
    )


# Reports ----------------------------------------------------------------------

def _row_to_dict(row: BatchRow) -> dict[str, Any]:
    return asdict(row)

def report_to_dict(report: AggregateReport) -> dict[str, Any]:
    """Converts a report to plain JSON data; ratios become `[numerator, denominator]` with a percentage."""
    return {
        'verified': report.verified,
        'batches': [_row_to_dict(r) for r in report.batches],
        'kinds': [_row_to_dict(r) for r in report.kinds],
        'total': _row_to_dict(report.total),
        'ratios': {
            name: {'value': [value.numerator, value.denominator], 'percent': format_percent(value)}
            for name, value in report.ratios.items()
        },
        'rerun_counts': dict(report.rerun_counts),
        'crashes': list(report.crashes),
        'findings': [dict(f) for f in report.findings],
        'review': {k: list(v) for k, v in report.review.items()},
    }

def cell(count: int, total: int) -> str:
    return f'{count} ({format_percent(ratio(count, total))}%)'

def render_report(
    report: AggregateReport,
    report_template: str = DEFAULT_TEMPLATE,
    render: Callable[[Template, AggregateReport], str] | None = None
) -> str:
    """
    Renders a report as aligned text tables.

    Parameters
    ----------
    report : AggregateReport
        The report.
    report_template : str, optional
        A jinja2 template, defaults to `DEFAULT_TEMPLATE`.
    render : Callable, optional
        Renders the compiled template in place of the default variables.

    Returns
    -------
    str
        The rendered text.
    """
    from jinja2 import Template
    template = Template(source=textwrap.dedent(report_template), trim_blocks=True, lstrip_blocks=True)
    if render is not None:
        return render(template, report)
    return template.render(
        report=report,
        rows=report.rows,
        stat_fields=STAT_FIELDS,
        exec_kinds=[k.value for k in ExecKind],
        boogie_kinds=[k.value for k in BoogieKind],
        verdict_labels=VERDICT_LABELS,
        class_labels=CLASS_LABELS,
        ratios={name: format_percent(value) for name, value in report.ratios.items()},
        cell=cell,
    )

def write_report(report: AggregateReport, directory: str | Path) -> tuple[Path, Path]:
    """Writes `report.json` and `report.txt` into a directory and returns their paths."""
    target = Path(directory)
    target.mkdir(parents=True, exist_ok=True)
    json_path = target / REPORT_JSON
    text_path = target / REPORT_TEXT
    json_path.write_text(json.dumps(report_to_dict(report), indent=2, sort_keys=True) + '\n', encoding='utf-8')
    text_path.write_text(render_report(report), encoding='utf-8')
    return json_path, text_path
