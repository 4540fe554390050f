from textwrap import dedent

from bpldiff.boogie import BoogieConfig
from bpldiff.config import (
    CampaignConfig,
    CampaignConfigError,
    default_workers,
    load_config,
    parse_batches,
    parse_bool,
    parse_config,
    parse_pairs,
)
from bpldiff.generator import BatchSpec, GenConfig, GenKind
from bpldiff.syntax.boogie import EmitStyle
import pytest

CONFIG = dedent("""
    # small campaign
    output_dir = runs/small
    batches = typed:5:100, named:3:50:42, typed:5:20
    step_budget = 5000
    gen_workers = 1
    exec_workers = 2
    verify_workers = 4
""")

# parse_pairs ----

def test_pairs_skip_comments():
    assert parse_pairs('# nothing\n\nseed = 3 # inline\n') == {'seed': '3'}

def test_pairs_errors():
    with pytest.raises(CampaignConfigError, match='unknown key'):
        parse_pairs('colour = blue')
    with pytest.raises(CampaignConfigError, match='set twice'):
        parse_pairs('seed = 1\nseed = 2')
    with pytest.raises(CampaignConfigError, match='key = value'):
        parse_pairs('seed 1')

def test_parse_bool():
    assert parse_bool('resume', 'Yes')
    assert not parse_bool('resume', 'off')
    with pytest.raises(CampaignConfigError):
        parse_bool('resume', 'maybe')

# parse_batches ----

def test_batches():
    specs = parse_batches('typed:5:100, named:3:50:42, typed:5:20', seed=1)
    assert [s.id for s in specs] == ['typed-5', 'named-3', 'typed-5-2']
    assert [s.count for s in specs] == [100, 50, 20]
    assert specs[1].config.seed == 42
    assert specs[0].config.seed != specs[2].config.seed

def test_batches_are_reproducible():
    assert parse_batches('typed:5:100', seed=7) == parse_batches('typed:5:100', seed=7)
    assert parse_batches('typed:5:100', seed=7) != parse_batches('typed:5:100', seed=8)

@pytest.mark.parametrize('value', ['typed:5', 'loose:5:10', 'typed:x:10', 'typed:5:0', 'typed:0:10'])
def test_invalid_batches(value):
    with pytest.raises(CampaignConfigError):
        parse_batches(value, seed=0)

def test_no_div():
    assert not parse_batches('typed:5:10', seed=0, allow_div=False)[0].config.allow_div

# parse_config ----

def test_parse_config(tmp_path):
    cfg = parse_config(CONFIG, tmp_path)
    assert cfg.output_dir == tmp_path / 'runs' / 'small'
    assert len(cfg.batches) == 3
    assert cfg.exec_config.step_budget == 5000
    assert (cfg.gen_workers, cfg.exec_workers, cfg.verify_workers) == (1, 2, 4)
    assert not cfg.verify
    assert not cfg.resume
    assert cfg.emit_style is EmitStyle.DECL_WITH_INIT

def test_parse_config_with_boogie():
    cfg = parse_config(CONFIG + 'boogie = /opt/boogie\nboogie_timeout = 5\nboogie_flags = /trace /noinfer\nemit_style = then-assign\n')
    assert cfg.verify
    assert cfg.boogie.binary == '/opt/boogie'
    assert cfg.boogie.timeout == 5.0
    assert cfg.boogie.flags == ('/trace', '/noinfer')
    assert cfg.boogie.style is EmitStyle.DECL_THEN_ASSIGN

def test_verify_without_binary():
    cfg = parse_config(CONFIG + 'verify = true\n')
    assert cfg.verify
    assert cfg.boogie.binary is None

def test_verify_false_with_binary():
    cfg = parse_config(CONFIG + 'boogie = /opt/boogie\nverify = false\n')
    assert not cfg.verify
    assert cfg.boogie is None

def test_absolute_output_dir(tmp_path):
    cfg = parse_config(f'output_dir = {tmp_path}\nbatches = typed:3:5\n', '/elsewhere')
    assert cfg.output_dir == tmp_path

@pytest.mark.parametrize('text', [
    'batches = typed:3:5',
    'output_dir = out',
    'output_dir = out\nbatches = typed:3:5\nstep_budget = 0',
    'output_dir = out\nbatches = typed:3:5\nexec_workers = 0',
    'output_dir = out\nbatches = typed:3:5\nemit_style = sideways',
    'output_dir = out\nbatches = typed:3:5\nseed = one',
    'output_dir = out\nbatches = typed:3:5\nverify = true\nboogie_timeout = -1',
])
def test_invalid_configs(text):
    with pytest.raises(CampaignConfigError):
        parse_config(text)

def test_default_workers():
    gen, run, verify = default_workers()
    assert 1 <= gen <= run <= verify

# CampaignConfig ----

def test_config_validation(tmp_path):
    spec = BatchSpec(10, GenConfig(GenKind.TYPED, 3))
    with pytest.raises(CampaignConfigError):
        CampaignConfig(tmp_path, ())
    with pytest.raises(CampaignConfigError, match='typed-3'):
        CampaignConfig(tmp_path, (spec, spec))
    with pytest.raises(CampaignConfigError):
        CampaignConfig(tmp_path, (spec,), saturation_factor=0)

def test_config_styles_must_match(tmp_path):
    spec = BatchSpec(10, GenConfig(GenKind.TYPED, 3))
    boogie = BoogieConfig(style=EmitStyle.DECL_THEN_ASSIGN)
    with pytest.raises(CampaignConfigError, match='then-assign'):
        CampaignConfig(tmp_path, (spec,), boogie=boogie)
    cfg = CampaignConfig(tmp_path, (spec,), boogie=boogie, emit_style=EmitStyle.DECL_THEN_ASSIGN)
    assert cfg.verify

# load_config ----

def test_load_config(tmp_path):
    path = tmp_path / 'campaign.conf'
    path.write_text(CONFIG, encoding='utf-8')
    cfg = load_config(path)
    assert cfg.output_dir == tmp_path / 'runs' / 'small'

def test_load_missing_config(tmp_path):
    with pytest.raises(CampaignConfigError) as error:
        load_config(tmp_path / 'nope.conf')
    assert 'nope.conf' in error.value.detail
