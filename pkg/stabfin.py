#!/usr/bin/env python3
"""
stabfin - Scenario Runner

Runs one verification scenario, a scenario file, or a whole directory of
scenario files, and writes a versioned JSON report.

Scenario files are flat key=value lines ('#' starts a comment):

    command=wreath-verify
    endo=top_epi
    base=C2
    phi=C4->C2:[1]

Usage:
    python stabfin.py df-check ring=F2 d=2
    python stabfin.py unit-search ring=F2[Z] d=1 --window 0
    python stabfin.py run acceptance/wreath_d8.scn --json report.json
    python stabfin.py suite acceptance

Exit codes: 0 pass, 1 fail, 2 bounded-inconclusive, 3 usage error.
"""

import argparse
import glob
import json
import logging
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np
from sympy import isprime

from stabfin_automata import (
    apply_ca_window, ca_kernel_image, decompose_ca, decomposition_sweep, involution, make_ca,
    matrix_from_ca, surjunctivity_report
)
from stabfin_config import (
    ACCEPTANCE_DIR, DEFAULT_BUDGET, DEFAULT_SEED, DEFAULT_WINDOW, EXIT_BOUNDED, EXIT_FAIL,
    EXIT_PASS, EXIT_USAGE, REPORT_SCHEMA, SCENARIO_SUFFIX, VALID_COMMANDS, make_rng
)
from stabfin_errors import BudgetExceeded, NotAHomomorphism, StabfinError, UsageError
from stabfin_groups import make_group
from stabfin_localembed import (
    Verified, embed_gf_into_matrices, local_embed_eval, local_embed_field,
    local_embed_pipeline, transport_product_check, verify_local_embedding, witness_record
)
from stabfin_matrices import (
    BlockShape, block_df_reduction_check, entry_values, hensel_sweep, is_unit_matrix,
    matrices_on, one_sided_unit_search, random_block_unit, solve_right_inverse,
    subring_df_check, unitriangular_sweep
)
from stabfin_parse import (
    parse_alphabet, parse_base, parse_domain, parse_group, parse_group_ring_element,
    parse_hom, parse_list, parse_literal, parse_matrix, parse_memory, parse_ring, parse_tower,
    parse_group_element
)
from stabfin_rings import group_ring, make_gf, z_mod
from stabfin_wreath import (
    PGroupBasis, abelianization_hom, automorphism_order, centre_of_wreath,
    classify_abelian_normal, d8_isomorphism, endo_from_matrix, endo_record, hom_from_base_epi,
    hom_from_top_epi, hopf_witness_pipeline, make_wreath, normalize_basic_endo, reference_endo,
    top_automorphism_endo
)

logger = logging.getLogger(__name__)

STATUS_PASS = 'pass'
STATUS_FAIL = 'fail'
STATUS_BOUNDED = 'bounded-inconclusive'
STATUS_USAGE = 'usage-error'

EXIT_CODES = {
    STATUS_PASS: EXIT_PASS,
    STATUS_FAIL: EXIT_FAIL,
    STATUS_BOUNDED: EXIT_BOUNDED,
    STATUS_USAGE: EXIT_USAGE,
}

# command -> (required parameters, optional parameters)
SCHEMAS = {
    'df-check': (('ring',), ('check', 'd', 'shape', 'samples', 'max_dim', 'p', 'precisions')),
    'unit-search': (('ring',), ('d',)),
    'wreath-verify': (('endo',), ('base', 'top', 'phi', 'images', 'n', 'd', 'Y', 'normalize')),
    'hopf-pipeline': (('p', 'parts'), ('i', 'top', 'samples', 'Y', 'Z')),
    'ca-report': (('group', 'alphabet'), ('memory', 'scope', 'decompose', 'config')),
    'localembed': (('mode',), ('field', 'p', 'tower', 'domain', 'group', 'a', 'b',
                               'avoid_numerator_roots')),
    'abelian-normal-scan': (('base', 'top'), ()),
}


# =============================================================================
# Scenarios
# =============================================================================

@dataclass
class Scenario:
    name: str
    command: str
    params: dict = field(default_factory=dict)
    seed: int = DEFAULT_SEED
    budget: int = DEFAULT_BUDGET
    window: int = DEFAULT_WINDOW
    path: str = None

    def echo(self):
        return {'name': self.name, 'command': self.command, 'params': dict(self.params),
                'seed': self.seed, 'budget': self.budget, 'window': self.window}


def _as_int(key, text):
    try:
        return int(str(text).strip())
    except ValueError:
        raise UsageError(f"{key} must be an integer, got {text!r}", key) from None


def parse_assignments(pairs, source='command line'):
    """key=value strings -> dict; repeated keys are an error."""
    out = {}
    for item in pairs:
        key, sep, value = item.partition('=')
        key = key.strip()
        if not sep or not key:
            raise UsageError(f"{source}: expected key=value, got {item!r}")
        if key in out:
            raise UsageError(f"{source}: {key} given twice", key)
        out[key] = value.strip()
    return out


def make_scenario(values, name=None, path=None):
    """Scenario from a flat key/value map (reserved keys lifted out)."""
    values = dict(values)
    if 'command' not in values:
        raise UsageError("scenario has no command", 'command')
    scenario = Scenario(
        name=values.pop('name', None) or name or values['command'],
        command=values.pop('command'),
        seed=_as_int('seed', values.pop('seed', DEFAULT_SEED)),
        budget=_as_int('budget', values.pop('budget', DEFAULT_BUDGET)),
        window=_as_int('window', values.pop('window', DEFAULT_WINDOW)),
        path=path,
    )
    scenario.params = values
    return scenario


def load_scenario(path):
    """Read a .scn file; the name defaults to the file stem."""
    with open(path, encoding='utf-8') as f:
        lines = [line.strip() for line in f]
    pairs = [line for line in lines if line and not line.startswith('#')]
    stem = os.path.splitext(os.path.basename(path))[0]
    return make_scenario(parse_assignments(pairs, source=path), name=stem, path=path)


def validate_scenario(s):
    if s.command not in SCHEMAS:
        raise UsageError(f"unknown command {s.command!r}; expected one of {VALID_COMMANDS}",
                         'command')
    required, optional = SCHEMAS[s.command]
    for key in required:
        if key not in s.params:
            raise UsageError(f"{s.command} needs {key}=...", key)
    for key in s.params:
        if key not in required and key not in optional:
            raise UsageError(f"{s.command} does not take {key}", key)
    if s.budget < 1:
        raise UsageError("budget must be positive", 'budget')
    if s.window < 0:
        raise UsageError("window must be nonnegative", 'window')


# =============================================================================
# Parameter helpers
# =============================================================================

def _param(s, key, fn, default=None):
    """Parse s.params[key] with fn, naming the parameter on failure."""
    if key not in s.params:
        if default is None:
            raise UsageError(f"{s.command} needs {key}=...", key)
        return default
    try:
        return fn(s.params[key])
    except (UsageError, ValueError, StabfinError) as exc:
        if isinstance(exc, UsageError) and exc.parameter:
            raise
        raise UsageError(f"{key}: {exc}", key) from None


def _int(s, key, default=None):
    return _param(s, key, lambda t: _as_int(key, t), default)


def _int_list(s, key, default=None):
    def parse(text):
        values = parse_literal(text)
        values = values if isinstance(values, (list, tuple)) else [values]
        return [int(v) for v in values]
    return _param(s, key, parse, default)


def _bool(s, key, default):
    def parse(text):
        text = text.strip().lower()
        if text in ('true', 'yes', '1'):
            return True
        if text in ('false', 'no', '0'):
            return False
        raise UsageError(f"{key} must be true or false, got {text!r}", key)
    return _param(s, key, parse, default)


def _group(s, key, default=None):
    return _param(s, key, lambda t: make_group(parse_group(t)), default)


def _choice(s, key, choices, default=None):
    value = s.params.get(key, default)
    if value not in choices:
        raise UsageError(f"{key} must be one of {list(choices)}, got {value!r}", key)
    return value


def _outcome(records, witnesses=(), bounded=False, summary=None, expected_fail=0):
    witnesses = list(witnesses)
    if witnesses:
        status = STATUS_FAIL
    elif bounded:
        status = STATUS_BOUNDED
    else:
        status = STATUS_PASS
    return {'status': status, 'summary': summary or {}, 'records': list(records),
            'witnesses': witnesses, 'expected_fail': expected_fail}


def _without(d, *keys):
    return {k: v for k, v in d.items() if k not in keys}


# =============================================================================
# Command handlers
# =============================================================================

def _search_outcome(report):
    return _outcome([_without(report, 'witnesses')], report['witnesses'],
                    bounded=report['bounded'])


def run_df_check(s, rng):
    base = _param(s, 'ring', parse_base)
    check = _choice(s, 'check', ('pairs', 'block', 'subring', 'unitriangular', 'hensel'),
                    'pairs')
    if check == 'pairs':
        report = one_sided_unit_search(base, _int(s, 'd', 1), s.window, s.budget, rng,
                                       strict=True)
        return _search_outcome(report)
    if check in ('block', 'subring'):
        shape = _param(s, 'shape', lambda t: BlockShape(tuple(parse_literal(t))))
        if check == 'block':
            report = block_df_reduction_check(base, shape, s.budget, rng)
            bad = not report['agrees'] or report['inverse_checks']['violations']
        else:
            report = subring_df_check(base, shape, s.budget, rng)
            bad = not report['consistent']
        return _outcome([report], [report] if bad else [])
    samples = _int(s, 'samples', 100)
    if check == 'unitriangular':
        report = unitriangular_sweep(base, samples, rng, _int(s, 'max_dim', 5), s.window)
    else:
        report = hensel_sweep(base, _int(s, 'p', 2), _int_list(s, 'precisions', [2, 3, 5]),
                              samples, rng, _int(s, 'd', 2), s.window)
    return _outcome([_without(report, 'failures')], report['failures'])


def run_unit_search(s, rng):
    base = _param(s, 'ring', parse_base)
    report = one_sided_unit_search(base, _int(s, 'd', 1), s.window, s.budget, rng)
    return _search_outcome(report)


def _coefficients_mod(n):
    return make_gf(n) if isprime(n) else z_mod(n)


def _matrix_endo_record(n, d, Y):
    record = endo_record(endo_from_matrix(n, d, Y))
    record['Y'] = repr(Y)
    record['unit'] = is_unit_matrix(Y)
    record['consistent'] = record['unit'] == (record['injective'] and record['surjective'])
    return record


def run_wreath_verify(s, rng):
    endo = _choice(s, 'endo', ('d8', 'top_epi', 'base_epi', 'matrix', 'matrix_sweep',
                               'top_auto', 'abelianize'))
    records, witnesses = [], []
    phi = None
    if endo == 'd8':
        phi = reference_endo('d8')
        record = endo_record(phi)
        record['automorphism_order'] = automorphism_order(phi)
        iso = d8_isomorphism()
        record['isomorphic_to_d8'] = iso.is_injective() and iso.is_surjective()
        ok = (record['injective'] and record['surjective'] and record['non_basic']
              and record['isomorphic_to_d8'])
    elif endo == 'top_epi':
        epi = _param(s, 'phi', parse_hom)
        phi = hom_from_top_epi(epi, _group(s, 'base'))
        record = endo_record(phi)
        record['expected_kernel_order'] = record['source_order'] // record['target_order']
        ok = record['surjective'] and record['kernel_order'] == record['expected_kernel_order']
    elif endo == 'base_epi':
        epi = _param(s, 'phi', parse_hom)
        top = _group(s, 'top')
        phi = hom_from_base_epi(epi, top)
        record = endo_record(phi)
        record['expected_kernel_order'] = len(epi.kernel()) ** top.order()
        ok = (record['surjective'] == epi.is_surjective()
              and record['kernel_order'] == record['expected_kernel_order'])
    elif endo in ('matrix', 'matrix_sweep'):
        n, d = _int(s, 'n'), _int(s, 'd', 1)
        base = group_ring(_coefficients_mod(n), _group(s, 'top'))
        if endo == 'matrix':
            candidates = [_param(s, 'Y', lambda t: parse_matrix(base, t))]
        else:
            values = entry_values(base)
            if len(values) ** (d * d) > s.budget:
                raise BudgetExceeded(f"{len(values)}^{d * d} matrices exceed budget {s.budget}")
            candidates = matrices_on(base, d, values)
        for Y in candidates:
            record = _matrix_endo_record(n, d, Y)
            records.append(record)
            if not record['consistent']:
                witnesses.append(record)
        return _outcome(records, witnesses, summary={
            'matrices': len(records), 'units': sum(r['unit'] for r in records),
            'mismatches': len(witnesses)})
    elif endo == 'top_auto':
        images = _param(s, 'images', parse_list)
        top = _group(s, 'top')
        phi = top_automorphism_endo(_group(s, 'base'), [parse_group_element(top, t)
                                                        for t in images], top)
        record = endo_record(phi)
        ok = record['injective'] and record['surjective']
    else:
        W = make_wreath(_param(s, 'base', parse_group, parse_group('C2')),
                        _param(s, 'top', parse_group, parse_group('C2')))
        _, record = abelianization_hom(W)
        record['centre_order'] = len(centre_of_wreath(W))
        ok = record['ok'] and record['surjective']
    if phi is not None and _bool(s, 'normalize', False):
        _, certificate = normalize_basic_endo(phi)
        record['normalization'] = certificate
        ok = ok and certificate['ok']
    records.append(record)
    return _outcome(records, [] if ok else [record])


def run_hopf_pipeline(s, rng):
    p = _int(s, 'p')
    basis = _param(s, 'parts', lambda t: PGroupBasis(p, tuple(parse_literal(t))))
    i = _int(s, 'i', 1)
    top = _group(s, 'top', make_group(parse_group('C2')))
    base = group_ring(make_gf(p), top)
    shape = basis.shape(i)
    if 'Y' in s.params:
        Y = _param(s, 'Y', lambda t: parse_matrix(base, t))
        if 'Z' in s.params:
            Z = _param(s, 'Z', lambda t: parse_matrix(base, t))
        elif top.is_finite:
            Z = solve_right_inverse(Y)
            if Z is None:
                raise UsageError("Y is not a unit", 'Y')
        else:
            raise UsageError("over an infinite top the left inverse Z must be given", 'Z')
        pairs = [(Y, Z)]
    else:
        if not top.is_finite:
            raise UsageError("random units need a finite top; give Y and Z", 'top')
        pairs = [random_block_unit(base, shape, rng) for _ in range(_int(s, 'samples', 10))]
    records, witnesses, bounded = [], [], False
    for k, (Y, Z) in enumerate(pairs):
        _, _, report = hopf_witness_pipeline(basis, i, Y, Z, s.window, s.budget)
        kernel = report['kernel']
        if kernel.get('skipped') and top.is_finite:
            raise BudgetExceeded(kernel['reason'])
        bounded |= bool(kernel.get('bounded'))
        record = {'sample': k, 'Y': repr(Y), 'ok': report['ok'],
                  'identity_on_generators': report['identity_on_generators'],
                  'v_containment': report['v_containment']['ok'],
                  'kernel_order': kernel.get('kernel_order'),
                  'bijective': kernel.get('bijective')}
        records.append(record)
        if not report['ok'] or kernel.get('bijective') is False:
            witnesses.append({'Y': Y, 'Z': Z, 'report': report})
    summary = {'p': p, 'parts': list(basis.parts), 'i': i, 'top': str(top),
               'samples': len(pairs), 'failures': len(witnesses)}
    return _outcome(records, witnesses, bounded=bounded, summary=summary)


def _ca_record(ca, decompose):
    info = ca_kernel_image(ca)
    record = {'memory': ca.format_memory(), **info}
    bad = info['injective'] != info['surjective']
    if ca.alphabet.is_vector_space():
        record['unit'] = is_unit_matrix(involution(matrix_from_ca(ca)))
        bad |= record['unit'] != (info['injective'] and info['surjective'])
    if decompose:
        record['decomposition'] = decompose_ca(ca)
        bad |= not (record['decomposition']['kernel_product_ok']
                    and record['decomposition']['injectivity_inherited'])
    return record, bad


def run_ca_report(s, rng):
    group = _group(s, 'group')
    alphabet = _param(s, 'alphabet', parse_alphabet)
    decompose = _bool(s, 'decompose', False)
    if not group.is_finite:
        memory = _param(s, 'memory', lambda t: parse_memory(group, t))
        config = _param(s, 'config', lambda t: parse_memory(group, t))
        ca = make_ca(group, alphabet, memory)
        result = apply_ca_window(ca, dict(config), s.window)
        record = {'memory': ca.format_memory(), 'window': s.window,
                  'values': {group.format(g): list(v) for g, v in result['values'].items()}}
        return _outcome([record], bounded=True)
    if 'memory' in s.params:
        ca = make_ca(group, alphabet, _param(s, 'memory', lambda t: parse_memory(group, t)))
        record, bad = _ca_record(ca, decompose)
        return _outcome([record], [record] if bad else [])
    scope = _choice(s, 'scope', ('exhaustive', 'sample'), 'exhaustive')
    report = surjunctivity_report(group, alphabet, scope, s.budget, rng)
    witnesses = list(report['violations'])
    witnesses += [r for r in report['records']
                  if 'unit' in r and r['unit'] != (r['injective'] and r['surjective'])]
    summary = _without(report, 'records', 'violations')
    summary['violations'] = len(report['violations'])
    if decompose:
        sweep = decomposition_sweep(group, alphabet, s.budget)
        summary['decomposition'] = _without(sweep, 'failures')
        witnesses += sweep['failures']
    return _outcome(report['records'], witnesses, summary=summary)


def _verified_record(w):
    record = witness_record(w)
    verdict = verify_local_embedding(w)
    record['verified'] = isinstance(verdict, Verified)
    return record


def run_localembed(s, rng):
    mode = _choice(s, 'mode', ('matrices', 'eval', 'field', 'pipeline', 'transport'))
    if mode == 'matrices':
        report = embed_gf_into_matrices(_param(s, 'field', parse_ring), rng).report()
        return _outcome([report], [] if report['modulus_vanishes'] else [report])
    if mode == 'eval':
        F = _param(s, 'field', parse_ring)
        domain = _param(s, 'domain', lambda t: parse_domain(F, t))
        w = local_embed_eval(F, domain, _bool(s, 'avoid_numerator_roots', True))
        record = _verified_record(w)
        return _outcome([record], [] if record['verified'] else [record])
    tower = _param(s, 'tower', lambda t: parse_tower(_int(s, 'p'), t))
    if mode == 'transport':
        G = _group(s, 'group')
        R = group_ring(tower.top, G)
        a = _param(s, 'a', lambda t: parse_group_ring_element(R, t))
        b = _param(s, 'b', lambda t: parse_group_ring_element(R, t))
        report = transport_product_check(tower, a, b, s.budget)
        return _outcome([report], [] if report['transported_product_ok'] else [report])
    domain = _param(s, 'domain', lambda t: parse_domain(tower.top, t))
    if mode == 'field':
        w = local_embed_field(tower.top, domain, s.budget)
        record = _verified_record(w)
        ok = record['verified']
    else:
        w = local_embed_pipeline(tower, domain, s.budget)
        record = _verified_record(w)
        ok = record['verified'] and w.info['composition_agrees']
    record['tower'] = str(tower)
    return _outcome([record], [] if ok else [record])


def run_abelian_normal_scan(s, rng):
    W = make_wreath(_param(s, 'base', parse_group), _param(s, 'top', parse_group))
    report = classify_abelian_normal(W)
    witnesses = [r for r in report['subgroups'] if not r['basic']
                 and any(c['status'] == 'fail' and not c['expected']
                         for c in r['conclusions'].values())]
    return _outcome(report['subgroups'], witnesses, summary=_without(report, 'subgroups'),
                    expected_fail=report['expected_failures'])


HANDLERS = {
    'df-check': run_df_check,
    'unit-search': run_unit_search,
    'wreath-verify': run_wreath_verify,
    'hopf-pipeline': run_hopf_pipeline,
    'ca-report': run_ca_report,
    'localembed': run_localembed,
    'abelian-normal-scan': run_abelian_normal_scan,
}


# =============================================================================
# Reports
# =============================================================================

def _usage_outcome(message, parameter=None):
    return {'status': STATUS_USAGE, 'summary': {}, 'records': [], 'witnesses': [],
            'expected_fail': 0, 'error': {'message': message, 'parameter': parameter}}


def run_scenario(s):
    """Run one scenario and return its report dict."""
    started = time.perf_counter()
    try:
        validate_scenario(s)
        outcome = HANDLERS[s.command](s, make_rng(s.seed))
    except UsageError as exc:
        outcome = _usage_outcome(str(exc), exc.parameter)
    except BudgetExceeded as exc:
        outcome = _usage_outcome(str(exc), 'budget')
    except NotAHomomorphism as exc:
        outcome = _outcome([], [{'error': str(exc), 'witness': exc.witness}])
    except StabfinError as exc:
        outcome = _usage_outcome(f"{type(exc).__name__}: {exc}")
    status = outcome['status']
    logger.info("%s: %s", s.name, status)
    return {
        'schema': REPORT_SCHEMA,
        'scenario': s.echo(),
        'exit_code': EXIT_CODES[status],
        **outcome,
        'timing': {'seconds': round(time.perf_counter() - started, 3)},
    }


def run_suite(path):
    """Run every scenario file in a directory, ordered by scenario name."""
    if not os.path.isdir(path):
        raise FileNotFoundError(f"no scenario directory at {path}")
    started = time.perf_counter()
    reports = []
    for scn in sorted(glob.glob(os.path.join(path, '*' + SCENARIO_SUFFIX))):
        try:
            scenario = load_scenario(scn)
        except UsageError as exc:
            stem = os.path.splitext(os.path.basename(scn))[0]
            reports.append({'schema': REPORT_SCHEMA,
                            'scenario': {'name': stem, 'path': scn},
                            'exit_code': EXIT_USAGE, **_usage_outcome(str(exc), exc.parameter),
                            'timing': {'seconds': 0.0}})
            continue
        reports.append(run_scenario(scenario))
    reports.sort(key=lambda r: r['scenario']['name'])
    counts = {}
    for r in reports:
        counts[r['status']] = counts.get(r['status'], 0) + 1
    failed = counts.get(STATUS_FAIL, 0) + counts.get(STATUS_USAGE, 0)
    status = STATUS_FAIL if failed else STATUS_PASS
    return {
        'schema': REPORT_SCHEMA,
        'suite': path,
        'status': status,
        'exit_code': EXIT_CODES[status],
        'scenarios': len(reports),
        'counts': counts,
        'expected_fail': sum(r['expected_fail'] for r in reports),
        'reports': reports,
        'timing': {'seconds': round(time.perf_counter() - started, 3)},
    }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted((_jsonable(v) for v in obj), key=repr)
    if isinstance(obj, np.integer):
        return int(obj)
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    return repr(obj)


def render_report(report):
    return json.dumps(_jsonable(report), indent=2, sort_keys=True, ensure_ascii=False)


def write_report(report, out):
    text = render_report(report)
    if out == '-':
        print(text)
        return
    with open(out, 'w', encoding='utf-8') as f:
        f.write(text + '\n')


# =============================================================================
# Console
# =============================================================================

def print_report(report):
    scenario = report['scenario']
    print(f"\n{'=' * 60}")
    print(f"{scenario.get('command', '?')}: {scenario['name']}")
    print('=' * 60)
    for key, value in report['summary'].items():
        print(f"  {key}: {value}")
    print(f"  records: {len(report['records'])}   witnesses: {len(report['witnesses'])}")
    if report['expected_fail']:
        print(f"  expected failures: {report['expected_fail']}")
    if 'error' in report:
        param = report['error']['parameter']
        print(f"  error: {report['error']['message']}" + (f" [{param}]" if param else ''))
    print(f"  status: {report['status']} ({report['timing']['seconds']}s)")


def print_suite(result):
    print("=" * 60)
    print(f"stabfin suite: {result['suite']}")
    print("=" * 60)
    for r in result['reports']:
        print(f"  [{r['status']}] {r['scenario']['name']} ({r['timing']['seconds']}s)")
    print(f"\n{result['scenarios']} scenarios: "
          + ', '.join(f"{n} {status}" for status, n in sorted(result['counts'].items())))
    if result['expected_fail']:
        print(f"Expected failures recorded: {result['expected_fail']}")
    print(f"Suite status: {result['status']}")


class _Parser(argparse.ArgumentParser):
    """Argument errors exit with the usage code, not argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def main(argv=None):
    parser = _Parser(description='stabfin verification scenarios')
    parser.add_argument('command', help=f"one of {', '.join(VALID_COMMANDS)}, 'run' or 'suite'")
    parser.add_argument('args', nargs='*',
                        help='key=value parameters, a scenario file (run) or a directory (suite)')
    parser.add_argument('--seed', type=int, help='Seed for sampled modes')
    parser.add_argument('--budget', type=int, help='Element/pair budget for searches')
    parser.add_argument('--window', type=int, help='Support window over Z and Z^r')
    parser.add_argument('--json', metavar='OUT', help="Write the JSON report to OUT ('-' for stdout)")
    parser.add_argument('--verbose', '-v', action='store_true', help='Log progress')
    parser.add_argument('--quiet', '-q', action='store_true', help='Only print the status')
    args = parser.parse_args(argv)

    level = logging.INFO if args.verbose else logging.ERROR if args.quiet else logging.WARNING
    logging.basicConfig(level=level, format='%(message)s')
    overrides = {k: v for k, v in (('seed', args.seed), ('budget', args.budget),
                                   ('window', args.window)) if v is not None}

    if args.command == 'suite':
        path = args.args[0] if args.args else ACCEPTANCE_DIR
        try:
            result = run_suite(path)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        if overrides:
            logger.warning("flags are ignored by suite; set them in the scenario files")
        if not args.quiet:
            print_suite(result)
        if args.json:
            write_report(result, args.json)
        return result['exit_code']

    try:
        if args.command == 'run':
            if len(args.args) != 1:
                raise UsageError("run takes exactly one scenario file")
            scenario = load_scenario(args.args[0])
        else:
            values = parse_assignments(args.args)
            values['command'] = args.command
            scenario = make_scenario(values)
    except (UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for key, value in overrides.items():
        setattr(scenario, key, value)

    report = run_scenario(scenario)
    if args.quiet:
        print(report['status'])
    else:
        print_report(report)
    if args.json:
        write_report(report, args.json)
    return report['exit_code']


if __name__ == '__main__':
    sys.exit(main())
