"""
Seeded random generation of BPL0 programs.

Three kinds of programs are generated. FORMED programs follow the grammar only,
NAMED programs also declare every variable they use exactly once, and TYPED
programs are built type-directed so they always pass the type checker.

Candidate `i` of a batch is generated from its own seed, derived from the batch
seed and `i`. A batch is therefore the same for any number of workers, and any
program can be regenerated from the seed recorded in the manifest.
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
import logging
import random
from textwrap import dedent
from typing import Iterator, Mapping, Optional

from bpldiff.ast import (
    ARITH_OPS,
    BOOL_OPS,
    COMP_OPS,
    Assert,
    Assign,
    Binary,
    BinOp,
    Body,
    BoolLit,
    Expr,
    If,
    IntLit,
    Literal,
    LocalDecl,
    Program,
    Stmt,
    TypeTag,
    Unary,
    UnOp,
    Var,
    While,
    structural_hash,
)
from bpldiff.judgments import TypingContext, check_names, check_types, type_of
from bpldiff.utils import derive_seed

logger = logging.getLogger(__name__)

EXTRA_NAMES = ('acc', 'flag', 'count_1', 'tmp_x', 'AE', 'G')
DEFAULT_WEIGHTS: dict[str, float] = {
    'assign': 1.0,
    'assert': 1.0,
    'if': 1.0,
    'while': 1.0,
    'leaf': 1.0,
    'unary': 1.0,
    'binary': 2.0,
}
LOCALS_CONTINUE = 0.6
BODY_CONTINUE = 0.75
_LOG_INTERVAL = 10000


class GenKind(Enum):
    FORMED = 'formed'
    NAMED = 'named'
    TYPED = 'typed'


@dataclass(frozen=True)
class GenConfig:
    kind: GenKind
    max_depth: int
    seed: int = 0
    int_literal_range: tuple[int, int] = (-8, 8)
    n_candidate_vars: int = 10
    op_weights: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_WEIGHTS))
    allow_div: bool = True
    large_literal_prob: float = 0.1
    large_literal_max: int = 10**6
    extra_name_prob: float = 0.1

    def __post_init__(self) -> None:
        if self.max_depth < 1:
            raise ValueError('max_depth must be at least 1')
        low, high = self.int_literal_range
        if low > high:
            raise ValueError('int_literal_range must be nonempty')
        if not 1 <= self.n_candidate_vars <= 10:
            raise ValueError('n_candidate_vars must be between 1 and 10')
        unknown = set(self.op_weights) - set(DEFAULT_WEIGHTS)
        if unknown:
            raise ValueError(f'unknown op_weights keys: {sorted(unknown)}')
        if any(w < 0 for w in self.op_weights.values()):
            raise ValueError('op_weights must be nonnegative')

    def weight(self, key: str) -> float:
        return self.op_weights.get(key, DEFAULT_WEIGHTS[key])


@dataclass(frozen=True)
class BatchSpec:
    count: int
    config: GenConfig
    batch_id: str = ''

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValueError('count must be at least 1')

    @property
    def id(self) -> str:
        return self.batch_id or f'{self.config.kind.value}-{self.config.max_depth}'


@dataclass
class BatchStats:
    attempts: int = 0
    accepted: int = 0
    rejected: int = 0
    invalid: int = 0

    @property
    def attempts_per_accept(self) -> float:
        return self.attempts / self.accepted if self.accepted else 0.0


@dataclass(frozen=True)
class GeneratedProgram:
    index: int
    seed: int
    program: Program


class SaturationError(Exception):
    def __init__(self, count: int, accepted: int, rejected: int):
        self.count = count
        self.accepted = accepted
        self.rejected = rejected
        message = dedent(f"""
            I'm trying to generate {count} distinct programs, but after {accepted} I rejected {rejected} duplicates.
            This depth can't supply enough distinct programs. Some alternatives could be:
                - Ask for fewer programs.
                - Raise the maximum depth.
        """)
        super().__init__(message)


# Program construction ---------------------------------------------------------

class _Builder:
    def __init__(self, cfg: GenConfig, rng: random.Random):
        self.cfg = cfg
        self.rng = rng
        self.pool = [f'v{i}' for i in range(cfg.n_candidate_vars)]
        self.decls: tuple[LocalDecl, ...] = ()

    # choices

    def _pick(self, options: list[tuple[str, float]]) -> str:
        names = [name for name, w in options if w > 0]
        weights = [w for _, w in options if w > 0]
        return self.rng.choices(names, weights=weights, k=1)[0]

    def _int(self) -> int:
        if self.rng.random() < self.cfg.large_literal_prob:
            return self.rng.randint(-self.cfg.large_literal_max, self.cfg.large_literal_max)
        low, high = self.cfg.int_literal_range
        return self.rng.randint(low, high)

    def literal(self, t: TypeTag) -> Literal:
        if t is TypeTag.BOOL:
            return BoolLit(self.rng.random() < 0.5)
        return IntLit(self._int())

    def any_literal(self) -> Literal:
        return self.literal(self.rng.choice([TypeTag.INT, TypeTag.BOOL]))

    def fresh_name(self, taken: set[str]) -> Optional[str]:
        extras = [n for n in EXTRA_NAMES if n not in taken]
        pool = [n for n in self.pool if n not in taken]
        if extras and (not pool or self.rng.random() < self.cfg.extra_name_prob):
            return self.rng.choice(extras)
        return self.rng.choice(pool) if pool else None

    def any_name(self) -> str:
        if self.rng.random() < self.cfg.extra_name_prob:
            return self.rng.choice(EXTRA_NAMES)
        return self.rng.choice(self.pool)

    # locals

    def locals(self) -> tuple[LocalDecl, ...]:
        cap = min(self.cfg.n_candidate_vars, self.cfg.max_depth)
        n = 0
        while n < cap and self.rng.random() < LOCALS_CONTINUE:
            n += 1
        if self.cfg.kind is GenKind.TYPED and self.cfg.max_depth >= 2:
            n = max(n, 1)
        decls: list[LocalDecl] = []
        taken: set[str] = set()
        for _ in range(n):
            if self.cfg.kind is GenKind.FORMED:
                name = self.any_name()
                t = self.rng.choice([TypeTag.INT, TypeTag.BOOL])
                decls.append(LocalDecl(name, t, self.any_literal()))
                continue
            fresh = self.fresh_name(taken)
            if fresh is None:
                break
            taken.add(fresh)
            t = self.rng.choice([TypeTag.INT, TypeTag.BOOL])
            init = self.literal(t) if self.cfg.kind is GenKind.TYPED else self.any_literal()
            decls.append(LocalDecl(fresh, t, init))
        self.decls = tuple(decls)
        return self.decls

    def vars_of(self, t: Optional[TypeTag]) -> list[str]:
        return [d.name for d in self.decls if t is None or d.declared_type is t]

    # untyped expressions

    def untyped_expr(self, budget: int) -> Expr:
        leaf_weight = self.cfg.weight('leaf') * 2
        if budget <= 1:
            leaf_weight *= 2
        choice = 'leaf' if budget <= 0 else self._pick([
            ('leaf', leaf_weight),
            ('unary', self.cfg.weight('unary')),
            ('binary', self.cfg.weight('binary')),
        ])
        if choice == 'leaf':
            names = (
                [self.any_name()] if self.cfg.kind is GenKind.FORMED
                else self.vars_of(None)
            )
            if names and self.rng.random() < 0.5:
                return Var(self.rng.choice(names))
            return self.any_literal()
        if choice == 'unary':
            return Unary(self.rng.choice(list(UnOp)), self.untyped_expr(budget - 1))
        ops = [op for op in BinOp if self.cfg.allow_div or op is not BinOp.DIV]
        op = self.rng.choice(ops)
        left = self.untyped_expr(budget - 1)
        right = self.untyped_expr(budget - 1)
        if op in (BinOp.EQ_INT, BinOp.IFF_EQ_BOOL):
            op = self._resolve_equality(left)
        return Binary(op, left, right)

    def _resolve_equality(self, left: Expr) -> BinOp:
        ctx = TypingContext({d.name: d.declared_type for d in self.decls})
        found = type_of(left, ctx)
        return BinOp.IFF_EQ_BOOL if found is TypeTag.BOOL else BinOp.EQ_INT

    # typed expressions

    def typed_expr(self, t: TypeTag, budget: int) -> Expr:
        leaf_weight = self.cfg.weight('leaf') * (2 if budget <= 1 else 1)
        choice = 'leaf' if budget <= 0 else self._pick([
            ('leaf', leaf_weight),
            ('unary', self.cfg.weight('unary')),
            ('binary', self.cfg.weight('binary')),
        ])
        if choice == 'leaf':
            names = self.vars_of(t)
            if names and self.rng.random() < 0.5:
                return Var(self.rng.choice(names))
            return self.literal(t)
        if choice == 'unary':
            op = UnOp.NOT if t is TypeTag.BOOL else UnOp.NEG
            return Unary(op, self.typed_expr(t, budget - 1))
        if t is TypeTag.INT:
            ops = sorted(
                (op for op in ARITH_OPS if self.cfg.allow_div or op is not BinOp.DIV),
                key=lambda op: op.value
            )
            op = self.rng.choice(ops)
            operand = TypeTag.INT
        else:
            op = self.rng.choice(sorted(BOOL_OPS | COMP_OPS, key=lambda op: op.value))
            operand = TypeTag.BOOL if op in BOOL_OPS else TypeTag.INT
        return Binary(op, self.typed_expr(operand, budget - 1), self.typed_expr(operand, budget - 1))

    def expr(self, t: Optional[TypeTag], budget: int) -> Expr:
        if self.cfg.kind is GenKind.TYPED:
            return self.typed_expr(t or TypeTag.BOOL, budget)
        return self.untyped_expr(budget)

    # statements

    def stmt(self, budget: int) -> Stmt:
        kind = self.cfg.kind
        targets = self.vars_of(None)
        can_assign = kind is GenKind.FORMED or bool(targets)
        choice = self._pick([
            ('assign', self.cfg.weight('assign') if can_assign else 0.0),
            ('assert', self.cfg.weight('assert')),
            ('if', self.cfg.weight('if')),
            ('while', self.cfg.weight('while')),
        ])
        inner = budget - 1
        if choice == 'assign':
            if kind is GenKind.FORMED:
                return Assign(self.any_name(), self.expr(None, inner))
            target = self.rng.choice(targets)
            declared = next(d.declared_type for d in self.decls if d.name == target)
            return Assign(target, self.expr(declared, inner))
        if choice == 'assert':
            return Assert(self.expr(TypeTag.BOOL, inner))
        if choice == 'if':
            return If(self.expr(TypeTag.BOOL, inner), self.body(inner), self.body(inner))
        return While(self.expr(TypeTag.BOOL, inner), self.body(inner))

    def body(self, budget: int) -> Body:
        stmts: list[Stmt] = []
        while budget >= 2 and self.rng.random() < BODY_CONTINUE:
            stmts.append(self.stmt(budget - 1))
            budget -= 1
        return tuple(stmts)

    def program(self) -> Program:
        decls = self.locals()
        return Program(decls, self.body(self.cfg.max_depth))


def gen_program(cfg: GenConfig, rng: random.Random) -> Program:
    """
    Generates one random program.

    Parameters
    ----------
    cfg : GenConfig
        Kind, depth bound and knobs of the generator.
    rng : random.Random
        The random state; it is advanced.

    Returns
    -------
    Program
        A program of depth at most `cfg.max_depth`. TYPED programs pass
        `check_types` and NAMED programs pass `check_names`.
    """
    return _Builder(cfg, rng).program()

def gen_candidate(cfg: GenConfig, index: int) -> GeneratedProgram:
    seed = derive_seed(cfg.seed, index)
    return GeneratedProgram(index, seed, gen_program(cfg, random.Random(seed)))

def regenerate(cfg: GenConfig, seed: int) -> Program:
    """Rebuilds a program from the seed recorded for it."""
    return gen_program(cfg, random.Random(seed))

def _gen_range(args: tuple[GenConfig, int, int]) -> list[GeneratedProgram]:
    cfg, start, stop = args
    return [gen_candidate(cfg, i) for i in range(start, stop)]

def _is_valid(kind: GenKind, p: Program) -> bool:
    if kind is GenKind.TYPED:
        return check_types(p) is None
    if kind is GenKind.NAMED:
        return check_names(p) is None
    return True

def gen_batch(
    spec: BatchSpec,
    workers: int = 1,
    saturation_factor: int = 100,
    stats: Optional[BatchStats] = None,
    chunk_size: int = 256
) -> Iterator[GeneratedProgram]:
    """
    Generates a batch of pairwise distinct programs.

    Candidates are produced in chunks, in parallel when `workers > 1`, and
    deduplicated here in candidate order, so the output doesn't depend on the
    number of workers.

    Parameters
    ----------
    spec : BatchSpec
        How many programs and with which configuration.
    workers : int, optional
        Number of generator processes, defaults to 1 (no subprocesses).
    saturation_factor : int, optional
        The batch fails once more than `saturation_factor * spec.count`
        duplicates were rejected, defaults to 100.
    stats : BatchStats, optional
        Updated in place with attempt and rejection counts.
    chunk_size : int, optional
        Number of candidates per work unit.

    Yields
    ------
    GeneratedProgram
        Exactly `spec.count` programs.

    Raises
    ------
    SaturationError
        If the depth can't supply enough distinct programs.
    """
    stats = stats if stats is not None else BatchStats()
    cfg = spec.config
    buckets: dict[int, list[Program]] = {}
    limit = saturation_factor * spec.count
    next_index = 0
    executor = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        while stats.accepted < spec.count:
            ranges = []
            for _ in range(max(1, workers)):
                ranges.append((cfg, next_index, next_index + chunk_size))
                next_index += chunk_size
            if executor is None:
                chunks = map(_gen_range, ranges)
            else:
                chunks = executor.map(_gen_range, ranges)
            for chunk in chunks:
                for candidate in chunk:
                    if stats.accepted >= spec.count:
                        return
                    stats.attempts += 1
                    if not _is_valid(cfg.kind, candidate.program):
                        stats.invalid += 1
                        logger.error(
                            'Candidate %d of batch %s is not %s, skipping it.',
                            candidate.index, spec.id, cfg.kind.value
                        )
                        continue
                    digest = structural_hash(candidate.program)
                    bucket = buckets.setdefault(digest, [])
                    if candidate.program in bucket:
                        stats.rejected += 1
                        if stats.rejected > limit:
                            raise SaturationError(spec.count, stats.accepted, stats.rejected)
                        continue
                    bucket.append(candidate.program)
                    stats.accepted += 1
                    if stats.accepted % _LOG_INTERVAL == 0:
                        logger.info('Batch %s: %d/%d programs.', spec.id, stats.accepted, spec.count)
                    yield candidate
    finally:
        if executor is not None:
            executor.shutdown(cancel_futures=True)


# Batch plans ------------------------------------------------------------------

FULL_CAMPAIGN_BATCHES: tuple[tuple[GenKind, int, int], ...] = tuple(
    (kind, depth, count)
    for kind in GenKind
    for depth, count in ((3, 100000), (5, 200000), (7, 200000), (10, 500000))
)

def scaled_batches(factor: float, seed: int = 0) -> list[BatchSpec]:
    """
    Scales the twelve-batch plan of the full campaign to a smaller size.

    Parameters
    ----------
    factor : float
        Multiplier applied to each batch count; counts never drop below 1.
    seed : int, optional
        Base seed; each batch derives its own.

    Returns
    -------
    list[BatchSpec]
        One spec per kind and depth, in plan order.
    """
    return [
        BatchSpec(
            max(1, round(count * factor)),
            GenConfig(kind, depth, seed=derive_seed(seed, kind.value, depth))
        )
        for kind, depth, count in FULL_CAMPAIGN_BATCHES
    ]
