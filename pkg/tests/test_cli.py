import io
import os
import json

import pytest

from elliptic_qdr.commands.verify import exit_code
from elliptic_qdr.main import main
from elliptic_qdr.verify import CheckResult

GOLDEN = os.path.join(os.path.abspath(os.path.dirname(__file__)), 'data', 'golden', 'potential_classical.json')


def run(argv):
    stream = io.StringIO()
    code = main(argv, stream)
    return code, stream.getvalue().splitlines()


def test_classical_potential():
    code, lines = run(['potential', '--hbar-order', '0'])
    assert code == 0
    assert lines[:3] == ['# potential', '(1/2) * u1_0 u1_0 u4_0', 'u1_0 u2_0 u3_0']
    assert all(line.endswith('EXACT-ZERO') for line in lines[3:])


def test_classical_potential_structured_golden():
    stream = io.StringIO()
    assert main(['potential', '--hbar-order', '0', '--format', 'structured'], stream) == 0
    document = json.loads(stream.getvalue())
    with open(GOLDEN) as f:
        golden = json.load(f)
    assert document == golden


@pytest.mark.parametrize(
    'argv, expected',
    [
        (['hamiltonian', '2', '0', '--hbar-order', '0'], 'u1_0 u3_0'),
        (['hamiltonian', '1', '-1'], 'u4_0'),
        (['hamiltonian', '3', '-1'], '(-1) * u2_0'),
    ],
)
def test_hamiltonian(argv, expected):
    code, lines = run(argv)
    assert code == 0
    assert lines[-1] == expected


def test_hamiltonian_index_below_casimir():
    code, _ = run(['hamiltonian', '1', '-2'])
    assert code == 1


@pytest.mark.parametrize(
    'argv',
    [
        ['potential', '--eps-order', '3'],
        ['potential', '--q-order', '-1'],
        ['limit', 'semiclassical'],
        ['hamiltonian', '5', '0'],
        [],
    ],
)
def test_usage_errors(argv):
    code, _ = run(argv)
    assert code == 1


def test_ds_dispersionless_limit():
    code, lines = run(['limit', 'ds_dispersionless'])
    assert code == 0
    assert lines[0] == '# ds_dispersionless'
    assert lines[-1] == 'classical recursion color 4: EXACT-ZERO'


def test_output_file(tmp_path):
    path = str(tmp_path / 'out' / 'g.txt')
    code, lines = run(['hamiltonian', '4', '-1', '-o', path])
    assert code == 0
    assert lines == []
    with open(path) as f:
        assert f.read().splitlines()[-1] == 'u1_0'


def test_verify_algebra_suite():
    code, lines = run(['verify', 'algebra', '--count', '5', '--hbar-order', '0'])
    assert code == 0
    assert lines
    assert not [line for line in lines if ': FAIL' in line]


@pytest.mark.parametrize('output_format', ['text', 'structured'])
def test_output_is_deterministic(output_format):
    argv = ['potential', '--hbar-order', '1', '--q-order', '1', '--eps-order', '2', '--u-degree', '3']
    argv += ['--format', output_format]
    first, second = io.StringIO(), io.StringIO()
    assert main(argv, first) == 0
    assert main(argv, second) == 0
    assert first.getvalue().encode('utf-8') == second.getvalue().encode('utf-8')


@pytest.mark.parametrize('argv', [['verify', 'oracle', '--modes', '0'], ['verify', 'algebra', '--count', '-1']])
def test_verify_rejects_bad_sizes(argv):
    code, _ = run(argv)
    assert code == 1


def test_exit_code_ranks_inconsistency_first():
    passed = CheckResult('a', True, 'EXACT-ZERO')
    failed = CheckResult('b', False, 'u1_0')
    disagreeing = CheckResult('oracle #0', False, 'u1_0', inconsistent=True)
    assert exit_code([passed]) == 0
    assert exit_code([passed, failed]) == 2
    assert exit_code([failed, disagreeing]) == 3
    assert exit_code([passed, CheckResult('oracle #1', True, 'EXACT-ZERO', inconsistent=True)]) == 0


def test_hamiltonian_names_the_lossy_step():
    budget = ['--hbar-order', '1', '--q-order', '0', '--eps-order', '0', '--u-degree', '3', '--dx-degree', '0']
    code, lines = run(['hamiltonian', '4', '2'] + budget)
    assert code == 2
    assert [line for line in lines if line.startswith('budget: FAIL G_{4,0} lost ')]
