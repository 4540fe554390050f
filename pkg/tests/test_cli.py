import json
import stat

from bpldiff.ast import depth, term_stats
from bpldiff.boogie import BOOGIE_ENV
from bpldiff.campaign import MANIFEST_FILE, REPORT_JSON, RESULTS_FILE
from bpldiff.cli import EXIT_TOOL_ERROR, main
from bpldiff.syntax.boogie import write_program
from bpldiff.syntax.sexpr import read_program
import pytest


@pytest.fixture
def fake_boogie(tmp_path):
    path = tmp_path / 'fake-boogie'
    path.write_text('#!/bin/sh\necho "Boogie program verifier finished with 1 verified, 0 errors"\n', encoding='utf-8')
    path.chmod(path.stat().st_mode | stat.S_IXUSR | stat.S_IXGRP | stat.S_IXOTH)
    return str(path)

def sexpr_file(directory, program, stem='p'):
    sexpr_path, _ = write_program(program, directory, stem)
    return str(sexpr_path)

# gen ----

def test_gen(tmp_path, capsys):
    out = tmp_path / 'programs'
    assert main(['-q', 'gen', '--kind', 'named', '--depth', '3', '--count', '5', '--out', str(out)]) == 0
    assert len(list(out.glob('*.sexpr'))) == 5
    assert len(list(out.glob('*.bpl'))) == 5
    assert '5 programs written' in capsys.readouterr().out

    entries = [json.loads(line) for line in (out / MANIFEST_FILE).read_text(encoding='utf-8').splitlines()]
    assert [e['program_id'] for e in entries] == [f'named-3-{e["index"]:06d}' for e in entries]
    assert len(entries) == 5
    for entry in entries:
        program = read_program(out / f'{entry["index"]:06d}.sexpr')
        assert entry['kind'] == 'named'
        assert entry['depth'] == depth(program)
        assert entry['stats'] == term_stats(program).as_dict()
        assert isinstance(entry['seed'], int)

def test_gen_rejects_bad_depth(tmp_path):
    assert main(['-q', 'gen', '--depth', '0', '--count', '5', '--out', str(tmp_path)]) == EXIT_TOOL_ERROR

# exec ----

def test_exec_exit_codes(tmp_path, example_programs, capsys):
    expected = {'success': 0, 'failure': 1, 'loop': 2, 'name_error': 4, 'type_error': 5}
    for name, code in expected.items():
        assert main(['-q', 'exec', sexpr_file(tmp_path, example_programs[name], name)]) == code
    assert main(['-q', 'exec', '--budget', '50', sexpr_file(tmp_path, example_programs['timeout'], 't')]) == 3
    out = capsys.readouterr().out
    assert 'success after 4 steps' in out
    assert "undeclared identifier 'y'" in out

def test_exec_trace(tmp_path, success_program, capsys):
    assert main(['-q', 'exec', '--trace', sexpr_file(tmp_path, success_program)]) == 0
    assert '0\tlocal-substitution\tx' in capsys.readouterr().out

def test_exec_tool_errors(tmp_path):
    assert main(['-q', 'exec', str(tmp_path / 'missing.sexpr')]) == EXIT_TOOL_ERROR
    broken = tmp_path / 'broken.sexpr'
    broken.write_text('(main (let', encoding='utf-8')
    assert main(['-q', 'exec', str(broken)]) == EXIT_TOOL_ERROR

# verify and diff ----

def test_verify(tmp_path, success_program, fake_boogie, capsys):
    assert main(['-q', 'verify', '--boogie', fake_boogie, sexpr_file(tmp_path, success_program)]) == 0
    assert capsys.readouterr().out.startswith('success in ')

def test_verify_without_boogie(tmp_path, success_program, monkeypatch):
    monkeypatch.delenv(BOOGIE_ENV, raising=False)
    monkeypatch.setenv('PATH', str(tmp_path / 'empty'))
    assert main(['-q', 'verify', sexpr_file(tmp_path, success_program)]) == EXIT_TOOL_ERROR

def test_diff(tmp_path, success_program, failure_program, fake_boogie, capsys):
    assert main(['-q', 'diff', '--boogie', fake_boogie, sexpr_file(tmp_path, success_program, 's')]) == 0
    assert 'verdict:   consistent' in capsys.readouterr().out
    assert main(['-q', 'diff', '--boogie', fake_boogie, sexpr_file(tmp_path, failure_program, 'f')]) == 1
    assert 'verdict:   mismatch:soundness' in capsys.readouterr().out

# campaign and report ----

def test_campaign_and_report(tmp_path, capsys):
    config = tmp_path / 'small.conf'
    config.write_text('output_dir = run\nbatches = typed:3:8\nstep_budget = 2000\nexec_workers = 1\ngen_workers = 1\n', encoding='utf-8')
    assert main(['-q', 'campaign', str(config)]) == 0
    assert 'Programs: 8, execution only' in capsys.readouterr().out

    results = tmp_path / 'run' / RESULTS_FILE
    elsewhere = tmp_path / 'again'
    assert main(['-q', 'report', str(results), '--out', str(elsewhere)]) == 0
    assert (elsewhere / REPORT_JSON).is_file()
    assert 'typed-3' in capsys.readouterr().out

def test_campaign_bad_config(tmp_path):
    config = tmp_path / 'bad.conf'
    config.write_text('output_dir = run\n', encoding='utf-8')
    assert main(['-q', 'campaign', str(config)]) == EXIT_TOOL_ERROR
    assert main(['-q', 'campaign', str(tmp_path / 'missing.conf')]) == EXIT_TOOL_ERROR

def test_report_missing_log(tmp_path):
    assert main(['-q', 'report', str(tmp_path / RESULTS_FILE)]) == EXIT_TOOL_ERROR
