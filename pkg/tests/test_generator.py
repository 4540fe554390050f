import random
from statistics import median_low

from bpldiff.ast import Assert, Assign, Binary, BinOp, If, UnOp, Unary, While, depth, iter_exprs, iter_stmts
from bpldiff.executor import ExecConfig, ExecKind, execute
from bpldiff.generator import (
    FULL_CAMPAIGN_BATCHES,
    BatchSpec,
    BatchStats,
    GenConfig,
    GenKind,
    SaturationError,
    gen_batch,
    gen_candidate,
    gen_program,
    regenerate,
    scaled_batches,
)
from bpldiff.judgments import check_names, check_types
import pytest

# GenConfig ----

def test_config_validation():
    with pytest.raises(ValueError):
        GenConfig(GenKind.TYPED, 0)
    with pytest.raises(ValueError):
        GenConfig(GenKind.TYPED, 3, int_literal_range=(5, 1))
    with pytest.raises(ValueError):
        GenConfig(GenKind.TYPED, 3, n_candidate_vars=11)
    with pytest.raises(ValueError):
        GenConfig(GenKind.TYPED, 3, op_weights={'loop': 1.0})
    with pytest.raises(ValueError):
        GenConfig(GenKind.TYPED, 3, op_weights={'while': -1.0})

def test_batch_spec_id():
    assert BatchSpec(10, GenConfig(GenKind.NAMED, 5)).id == 'named-5'
    assert BatchSpec(10, GenConfig(GenKind.NAMED, 5), 'named-5-2').id == 'named-5-2'
    with pytest.raises(ValueError):
        BatchSpec(0, GenConfig(GenKind.NAMED, 5))

# gen_program ----

@pytest.mark.parametrize('kind', list(GenKind))
@pytest.mark.parametrize('max_depth', [1, 2, 3, 5, 7])
def test_depth_is_bounded(kind, max_depth):
    cfg = GenConfig(kind, max_depth, seed=1)
    rng = random.Random(max_depth)
    for _ in range(200):
        assert depth(gen_program(cfg, rng)) <= max_depth

def test_formed_depth_one_has_empty_body():
    cfg = GenConfig(GenKind.FORMED, 1)
    rng = random.Random(0)
    for _ in range(50):
        assert gen_program(cfg, rng).body == ()

@pytest.mark.parametrize('max_depth', [2, 3, 5, 7])
def test_typed_programs_type_check(max_depth):
    cfg = GenConfig(GenKind.TYPED, max_depth)
    rng = random.Random(42)
    for _ in range(300):
        p = gen_program(cfg, rng)
        assert check_types(p) is None
        assert len(p.locals) >= 1

@pytest.mark.parametrize('max_depth', [2, 3, 5, 7])
def test_named_programs_are_well_named(max_depth):
    cfg = GenConfig(GenKind.NAMED, max_depth)
    rng = random.Random(43)
    for _ in range(300):
        assert check_names(gen_program(cfg, rng)) is None

def test_named_programs_are_often_ill_typed():
    cfg = GenConfig(GenKind.NAMED, 5)
    rng = random.Random(44)
    ill_typed = sum(check_types(gen_program(cfg, rng)) is not None for _ in range(300))
    assert ill_typed > 0

def test_no_div():
    cfg = GenConfig(GenKind.TYPED, 7, allow_div=False)
    rng = random.Random(45)
    for _ in range(200):
        p = gen_program(cfg, rng)
        for s in iter_stmts(p.body):
            e = s.expr if isinstance(s, (Assign, Assert)) else s.cond
            assert not any(isinstance(x, Binary) and x.op is BinOp.DIV for x in iter_exprs(e))

def test_same_seed_same_program():
    cfg = GenConfig(GenKind.TYPED, 7, seed=5)
    assert gen_program(cfg, random.Random(8)) == gen_program(cfg, random.Random(8))

def test_regenerate_from_recorded_seed():
    cfg = GenConfig(GenKind.NAMED, 5, seed=9)
    candidate = gen_candidate(cfg, 17)
    assert regenerate(cfg, candidate.seed) == candidate.program

# gen_batch ----

def test_batch_is_distinct_and_complete():
    spec = BatchSpec(300, GenConfig(GenKind.TYPED, 5, seed=1))
    stats = BatchStats()
    programs = list(gen_batch(spec, stats=stats))
    assert len(programs) == 300
    assert len({g.program for g in programs}) == 300
    assert stats.accepted == 300
    assert stats.attempts == stats.accepted + stats.rejected + stats.invalid
    assert stats.invalid == 0
    assert stats.attempts_per_accept >= 1.0

def test_batch_does_not_depend_on_workers():
    spec = BatchSpec(120, GenConfig(GenKind.NAMED, 4, seed=3))
    serial = [(g.index, g.program) for g in gen_batch(spec, workers=1, chunk_size=32)]
    parallel = [(g.index, g.program) for g in gen_batch(spec, workers=3, chunk_size=32)]
    assert serial == parallel

def test_batch_saturates_at_low_depth():
    spec = BatchSpec(50, GenConfig(GenKind.FORMED, 1, int_literal_range=(0, 0), n_candidate_vars=1, large_literal_prob=0.0, extra_name_prob=0.0))
    with pytest.raises(SaturationError) as error:
        list(gen_batch(spec, saturation_factor=2, chunk_size=16))
    assert error.value.count == 50

# batch plans ----

def test_full_campaign_batches():
    assert len(FULL_CAMPAIGN_BATCHES) == 12
    assert sum(count for _, _, count in FULL_CAMPAIGN_BATCHES) == 3000000

def test_scaled_batches():
    specs = scaled_batches(0.001, seed=1)
    assert [s.count for s in specs[:4]] == [100, 200, 200, 500]
    assert len({s.id for s in specs}) == 12
    assert len({s.config.seed for s in specs}) == 12

# coverage ----

def constructors(p):
    found = set()
    for s in iter_stmts(p.body):
        found.add(type(s))
        e = s.expr if isinstance(s, (Assign, Assert)) else s.cond
        for x in iter_exprs(e):
            if isinstance(x, (Unary, Binary)):
                found.add(x.op)
    return found

def expression_nodes(p):
    total = 0
    for s in iter_stmts(p.body):
        e = s.expr if isinstance(s, (Assign, Assert)) else s.cond
        total += sum(1 for _ in iter_exprs(e))
    return total

def test_typed_programs_use_every_constructor():
    cfg = GenConfig(GenKind.TYPED, 5, seed=51)
    rng = random.Random(51)
    found = set()
    for _ in range(1000):
        found |= constructors(gen_program(cfg, rng))
    expected = {Assign, Assert, If, While} | set(BinOp) | set(UnOp)
    assert expected - found == set()

def test_typed_expressions_are_not_smaller_than_formed():
    medians = {}
    for kind in (GenKind.FORMED, GenKind.TYPED):
        cfg = GenConfig(kind, 7, seed=52)
        rng = random.Random(52)
        medians[kind] = median_low([expression_nodes(gen_program(cfg, rng)) for _ in range(1000)])
    assert medians[GenKind.TYPED] >= medians[GenKind.FORMED]

# distribution ----

@pytest.mark.slow
def test_outcome_distribution_bands():
    counts = {kind: 0 for kind in ExecKind}
    total = 0
    for max_depth in (5, 7):
        spec = BatchSpec(10000, GenConfig(GenKind.TYPED, max_depth, seed=max_depth))
        for g in gen_batch(spec, workers=4):
            counts[execute(g.program, ExecConfig()).kind] += 1
            total += 1
    assert 0.55 <= counts[ExecKind.FAILURE] / total <= 0.80
    assert 0.20 <= counts[ExecKind.LOOP] / total <= 0.45
    assert counts[ExecKind.TIMEOUT] / total < 0.03
