import io
import os
import json
import shutil
import tempfile

import pytest

from elliptic_qdr.diffpoly import DiffPoly, Generator, LocalFunctional, integrate_by_parts
from elliptic_qdr.drhell.limits import ds_potential
from elliptic_qdr.drhell.potential import potential_direct
from elliptic_qdr.scalars import I, TruncatedSeries, TruncationBudget
from elliptic_qdr.serialization import (
    OutputFormat,
    Result,
    checksum,
    entry_value,
    iter_entries,
    read_structured,
    render,
    write_output,
)
from elliptic_qdr.verify import CheckResult, EXACT_ZERO

SMALL = TruncationBudget(q_order=1, eps_order=2, hbar_order=1, u_degree=3, dx_degree=7)


@pytest.fixture
def output_dir():
    path = tempfile.mkdtemp(prefix='elliptic-qdr-pytest')
    yield path
    shutil.rmtree(path, ignore_errors=True)


def sample_density():
    u1, u4 = Generator(1, 0), Generator(4, 0)
    return DiffPoly.from_words(
        [
            ((u1, u4), 1),
            ((Generator(2, 1), Generator(3, 1)), TruncatedSeries.monomial(I * 3, q=1, hbar=1)),
        ]
    )


def test_output_format_from_string():
    assert OutputFormat.from_string('structured') == OutputFormat.STRUCTURED
    with pytest.raises(ValueError):
        OutputFormat.from_string('yaml')


def test_text_report():
    text = render(
        OutputFormat.TEXT,
        'hamiltonian',
        SMALL,
        [Result('G', sample_density())],
        [CheckResult('a = b', True, EXACT_ZERO), CheckResult('c = d', False, 'u1_0')],
        note='normalized',
    )
    assert text.splitlines() == [
        '# normalized',
        '# G',
        'u1_0 u4_0',
        '(3*i)*q*hbar * u2_1 u3_1',
        'a = b: EXACT-ZERO',
        'c = d: FAIL u1_0',
    ]


def test_empty_result_prints_zero():
    text = render(OutputFormat.TEXT, 'potential', SMALL, [Result('zero', DiffPoly())])
    assert text == '# zero\n0\n'


def test_structured_document():
    text = render(OutputFormat.STRUCTURED, 'hamiltonian', SMALL, [Result('G', sample_density())])
    document = json.loads(text)
    assert document['format'] == 'elliptic-qdr'
    assert document['budget']['u_degree'] == 3
    (entry,) = document['results']
    assert entry['kind'] == 'density'
    assert entry['terms'][1] == {'vars': [[2, 1], [3, 1]], 'q': 1, 'eps': 0, 'hbar': 1, 'c': '3*i'}
    assert entry['checksum'] == checksum(['u1_0 u4_0', '(3*i)*q*hbar * u2_1 u3_1'])


def test_functional_is_written_integrated_by_parts():
    density = DiffPoly.from_words([((Generator(1, 1), Generator(4, 0)), 1)])
    result = Result('F', LocalFunctional(density))
    assert result.kind == 'functional'
    assert result.text_lines() == integrate_by_parts(density).text_lines()


def test_round_trip_through_file(output_dir):
    path = os.path.join(output_dir, 'nested', 'potential.json')
    potential = potential_direct(SMALL)
    results = [Result('potential', potential), Result('double scaling', ds_potential(2))]
    write_output(render(OutputFormat.STRUCTURED, 'potential', SMALL, results), path)

    assert read_structured(path)['command'] == 'potential'
    entries = list(iter_entries(path))
    assert [e['name'] for e in entries] == ['potential', 'double scaling']
    assert entry_value(entries[0], SMALL) == potential
    assert entry_value(entries[1]) == ds_potential(2)


def test_read_structured_rejects_foreign_json(output_dir):
    path = os.path.join(output_dir, 'other.json')
    with io.open(path, 'w') as f:
        f.write('{"format": "something-else"}')
    with pytest.raises(ValueError):
        read_structured(path)


def test_write_to_stream():
    stream = io.StringIO()
    write_output('# x\n', stream=stream)
    assert stream.getvalue() == '# x\n'
