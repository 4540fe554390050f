from pathlib import Path
import stat
from textwrap import dedent

from bpldiff.boogie import (
    BOOGIE_ENV,
    INFER_FLAG,
    BoogieConfig,
    BoogieKind,
    BoogieNotFoundError,
    Diagnostic,
    PatternTableNotFoundError,
    classify_output,
    load_patterns,
    resolve_binary,
    run_boogie,
    verify_program,
)
from bpldiff.syntax.boogie import EmitStyle
import pytest

FIXTURES = Path(__file__).parent / 'fixtures' / 'boogie-3'


def fixture_output(case: str) -> str:
    return (FIXTURES / f'{case}.stdout').read_text(encoding='utf-8')

def fake_boogie(directory: Path, script: str) -> str:
    path = directory / 'fake-boogie'
    path.write_text('#!/bin/sh\n' + dedent(script), encoding='utf-8')
    path.chmod(path.stat().st_mode | stat.S_IXUSR | stat.S_IXGRP | stat.S_IXOTH)
    return str(path)

# load_patterns ----

def test_load_patterns():
    patterns = load_patterns('3')
    assert patterns.version == '3'
    assert patterns.summary.search('Boogie program verifier finished with 2 verified, 0 errors')

def test_load_patterns_unknown_version():
    with pytest.raises(PatternTableNotFoundError) as error:
        load_patterns('0')
    assert error.value.version == '0'

# classify_output ----

@pytest.mark.parametrize('case, kind', [
    ('success', BoogieKind.SUCCESS),
    ('failure', BoogieKind.FAILURE),
    ('timeout', BoogieKind.TIMEOUT),
    ('name_error', BoogieKind.NAME_ERROR),
    ('type_error', BoogieKind.TYPE_ERROR),
    ('parse_error', BoogieKind.PARSE_ERROR),
    ('crash', BoogieKind.CRASH),
])
def test_classify_recorded_output(case, kind):
    assert classify_output(0, fixture_output(case), '').kind is kind

def test_classify_empty_output_is_a_crash():
    result = classify_output(134, '', 'Aborted')
    assert result.kind is BoogieKind.CRASH
    assert result.exit_code == 134
    assert result.stderr == 'Aborted'

def test_classify_keeps_diagnostics():
    result = classify_output(1, fixture_output('failure'), '')
    assert result.diagnostics[0] == Diagnostic(3, 3, 'Error: this assertion could not be proved')

def test_classify_reads_stderr_too():
    assert classify_output(1, '', fixture_output('name_error')).kind is BoogieKind.NAME_ERROR

# resolve_binary ----

def test_resolve_explicit_binary(tmp_path):
    binary = fake_boogie(tmp_path, 'exit 0\n')
    assert resolve_binary(binary) == binary

def test_resolve_from_environment(tmp_path, monkeypatch):
    binary = fake_boogie(tmp_path, 'exit 0\n')
    monkeypatch.setenv(BOOGIE_ENV, binary)
    assert resolve_binary() == binary

def test_resolve_nothing(tmp_path, monkeypatch):
    monkeypatch.delenv(BOOGIE_ENV, raising=False)
    monkeypatch.setenv('PATH', str(tmp_path))
    with pytest.raises(BoogieNotFoundError) as error:
        resolve_binary()
    assert error.value.candidates == ['boogie']

# run_boogie ----

def test_run_classifies_output(tmp_path, success_program):
    binary = fake_boogie(tmp_path, """\
        echo "Boogie program verifier finished with 1 verified, 0 errors"
    """)
    result = verify_program(success_program, BoogieConfig(binary=binary))
    assert result.kind is BoogieKind.SUCCESS
    assert result.exit_code == 0

def test_run_passes_a_copy_and_flags(tmp_path, success_program):
    binary = fake_boogie(tmp_path, """\
        cat "$1"
        shift
        echo "flags: $@"
    """)
    cfg = BoogieConfig(binary=binary, style=EmitStyle.DECL_THEN_ASSIGN).with_flags(INFER_FLAG)
    result = verify_program(success_program, cfg)
    assert 'procedure main() returns () {' in result.stdout
    assert 'x := 0;' in result.stdout
    assert f'flags: {INFER_FLAG}' in result.stdout
    assert result.kind is BoogieKind.CRASH

def test_run_on_file(tmp_path):
    source = tmp_path / 'p.bpl'
    source.write_text('procedure main() returns () { }\n', encoding='utf-8')
    binary = fake_boogie(tmp_path, """\
        echo "p.bpl(1,1): error: invalid statement"
        echo "1 parse errors detected in p.bpl"
        exit 1
    """)
    result = run_boogie(source, BoogieConfig(binary=binary))
    assert result.kind is BoogieKind.PARSE_ERROR
    assert source.read_text(encoding='utf-8') == 'procedure main() returns () { }\n'

def test_run_timeout_kills_the_process(tmp_path, success_program):
    binary = fake_boogie(tmp_path, """\
        sleep 30 &
        wait
    """)
    result = verify_program(success_program, BoogieConfig(binary=binary, timeout=0.5))
    assert result.kind is BoogieKind.TIMEOUT
    assert result.wall_time < 10

def test_run_uses_workdir(tmp_path, success_program):
    binary = fake_boogie(tmp_path, 'pwd\n')
    scratch = tmp_path / 'scratch'
    result = verify_program(success_program, BoogieConfig(binary=binary, workdir=scratch))
    assert str(scratch) in result.stdout
    assert scratch.is_dir()

def test_config_validation():
    with pytest.raises(ValueError):
        BoogieConfig(timeout=0)

# real verifier ----

@pytest.mark.boogie
def test_examples_with_boogie(success_program, failure_program, name_error_program, type_error_program):
    assert verify_program(success_program).kind is BoogieKind.SUCCESS
    assert verify_program(failure_program).kind is BoogieKind.FAILURE
    assert verify_program(name_error_program).kind is BoogieKind.NAME_ERROR
    assert verify_program(type_error_program).kind is BoogieKind.TYPE_ERROR

@pytest.mark.boogie
def test_both_declaration_styles_agree(success_program, failure_program):
    for program in (success_program, failure_program):
        kinds = {
            verify_program(program, BoogieConfig(style=style)).kind
            for style in EmitStyle
        }
        assert len(kinds) == 1
