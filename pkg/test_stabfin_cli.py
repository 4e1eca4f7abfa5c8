#!/usr/bin/env python3
"""Tests for the stabfin scenario runner."""

import json
import os

import pytest

from stabfin import (
    STATUS_BOUNDED, STATUS_FAIL, STATUS_PASS, STATUS_USAGE, load_scenario, main,
    make_scenario, parse_assignments, render_report, run_scenario, run_suite, validate_scenario
)
from stabfin_config import ACCEPTANCE_DIR, EXIT_BOUNDED, EXIT_PASS, EXIT_USAGE, REPORT_SCHEMA
from stabfin_errors import UsageError


def scenario(command, **params):
    return make_scenario({'command': command, **{k: str(v) for k, v in params.items()}})


def test_parse_assignments():
    assert parse_assignments(['ring=F2', ' d = 2 ']) == {'ring': 'F2', 'd': '2'}
    with pytest.raises(UsageError) as info:
        parse_assignments(['d=1', 'd=2'])
    assert info.value.parameter == 'd'
    with pytest.raises(UsageError):
        parse_assignments(['ring'])


def test_make_scenario_lifts_reserved_keys():
    s = scenario('unit-search', ring='F2[Z]', window=0, seed=3, name='tiny')
    assert (s.name, s.window, s.seed) == ('tiny', 0, 3)
    assert s.params == {'ring': 'F2[Z]'}
    with pytest.raises(UsageError):
        make_scenario({'ring': 'F2'})
    with pytest.raises(UsageError):
        scenario('df-check', ring='F2', budget='lots')


def test_validate_names_the_bad_parameter():
    with pytest.raises(UsageError) as info:
        validate_scenario(scenario('df-check', ring='F2', colour='red'))
    assert info.value.parameter == 'colour'
    with pytest.raises(UsageError) as info:
        validate_scenario(scenario('hopf-pipeline', p=2))
    assert info.value.parameter == 'parts'


def test_df_check_over_f2_passes():
    report = run_scenario(scenario('df-check', ring='F2', d=2))
    assert report['schema'] == REPORT_SCHEMA
    assert report['status'] == STATUS_PASS and report['exit_code'] == EXIT_PASS
    (record,) = report['records']
    assert record['mode'] == 'pairs' and record['scanned'] == 256
    assert report['witnesses'] == []


def test_unit_search_over_laurent_ring_is_bounded():
    report = run_scenario(scenario('unit-search', ring='F2[Z]', window=0))
    assert report['status'] == STATUS_BOUNDED
    assert report['exit_code'] == EXIT_BOUNDED


def test_d8_scenario():
    report = run_scenario(scenario('wreath-verify', endo='d8'))
    assert report['status'] == STATUS_PASS
    (record,) = report['records']
    assert record['non_basic'] is True
    assert record['automorphism_order'] == 4
    assert record['isomorphic_to_d8'] is True


def test_top_epi_scenario():
    report = run_scenario(scenario('wreath-verify', endo='top_epi', base='C2', phi='C4->C2:[1]'))
    assert report['status'] == STATUS_PASS
    assert report['records'][0]['kernel_order'] == 8


def test_abelian_normal_scan_records_expected_failure():
    report = run_scenario(scenario('abelian-normal-scan', base='C2', top='C2'))
    assert report['status'] == STATUS_PASS
    assert report['expected_fail'] == 1
    assert len(report['records']) == 5


def test_ca_report_sweep():
    report = run_scenario(scenario('ca-report', group='C3', alphabet='F2'))
    assert report['status'] == STATUS_PASS
    assert report['summary']['automata'] == 8
    assert report['summary']['violations'] == 0


def test_localembed_matrices():
    report = run_scenario(scenario('localembed', mode='matrices', field='F4'))
    assert report['status'] == STATUS_PASS
    assert report['records'][0]['generator_matrix'] == '[[0, 1], [1, 1]]'


def test_usage_errors_become_reports():
    report = run_scenario(scenario('df-check', ring='F6'))
    assert report['status'] == STATUS_USAGE and report['exit_code'] == EXIT_USAGE
    assert report['error']['parameter'] == 'ring'
    unknown = run_scenario(scenario('df-check', ring='F2', colour='red'))
    assert unknown['error']['parameter'] == 'colour'
    strict = run_scenario(scenario('df-check', ring='F2[C2]', d=2, budget=16))
    assert strict['status'] == STATUS_USAGE
    assert strict['error']['parameter'] == 'budget'


def _without_timing(report):
    report = dict(report)
    report.pop('timing')
    return render_report(report)


def test_reports_are_deterministic():
    make = lambda: scenario('df-check', ring='Z', check='unitriangular', samples=10, seed=11)
    assert _without_timing(run_scenario(make())) == _without_timing(run_scenario(make()))


def test_load_scenario(tmp_path):
    path = tmp_path / 'tiny.scn'
    path.write_text('# comment\ncommand=df-check\n\nring=F2\nd=1\n')
    s = load_scenario(str(path))
    assert s.name == 'tiny' and s.params == {'ring': 'F2', 'd': '1'}


def test_empty_suite_passes(tmp_path):
    result = run_suite(str(tmp_path))
    assert result['status'] == STATUS_PASS
    assert result['scenarios'] == 0


def test_suite_with_broken_file_fails(tmp_path):
    (tmp_path / 'a_good.scn').write_text('command=df-check\nring=F2\n')
    (tmp_path / 'b_broken.scn').write_text('command=df-check\nthis is not a pair\n')
    result = run_suite(str(tmp_path))
    assert result['status'] == STATUS_FAIL
    assert [r['status'] for r in result['reports']] == [STATUS_PASS, STATUS_USAGE]
    assert result['counts'] == {STATUS_PASS: 1, STATUS_USAGE: 1}


def test_bounded_scenarios_do_not_fail_a_suite(tmp_path):
    (tmp_path / 'laurent.scn').write_text('command=unit-search\nring=F2[Z]\nwindow=0\n')
    result = run_suite(str(tmp_path))
    assert result['status'] == STATUS_PASS
    assert result['counts'] == {STATUS_BOUNDED: 1}


def test_missing_suite_directory(tmp_path):
    with pytest.raises(FileNotFoundError):
        run_suite(str(tmp_path / 'nowhere'))


def test_main_writes_json(tmp_path):
    out = tmp_path / 'report.json'
    code = main(['df-check', 'ring=F2', 'd=2', '--json', str(out), '--quiet'])
    assert code == EXIT_PASS
    report = json.loads(out.read_text())
    assert report['status'] == STATUS_PASS
    assert report['scenario']['params'] == {'ring': 'F2', 'd': '2'}


def test_main_flags_override_scenario(tmp_path):
    out = tmp_path / 'report.json'
    code = main(['unit-search', 'ring=F2[Z]', '--window', '0', '--json', str(out), '-q'])
    assert code == EXIT_BOUNDED
    assert json.loads(out.read_text())['scenario']['window'] == 0


def test_main_usage_errors(tmp_path):
    assert main(['run', str(tmp_path / 'missing.scn'), '-q']) == EXIT_USAGE
    assert main(['df-check', 'ring=F2', 'ring=F4', '-q']) == EXIT_USAGE
    assert main(['frobnicate', '-q']) == EXIT_USAGE
    assert main(['suite', str(tmp_path / 'nowhere'), '-q']) == EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        main(['df-check', '--seed', 'x'])
    assert info.value.code == EXIT_USAGE


def test_acceptance_scenarios_load():
    files = sorted(f for f in os.listdir(ACCEPTANCE_DIR) if f.endswith('.scn'))
    assert files
    for name in files:
        validate_scenario(load_scenario(os.path.join(ACCEPTANCE_DIR, name)))


def test_acceptance_suite_passes():
    result = run_suite(ACCEPTANCE_DIR)
    assert result['status'] == STATUS_PASS
    statuses = {r['status'] for r in result['reports']}
    assert not statuses & {STATUS_FAIL, STATUS_USAGE}
    assert len(result['reports']) == len([f for f in os.listdir(ACCEPTANCE_DIR) if f.endswith('.scn')])
