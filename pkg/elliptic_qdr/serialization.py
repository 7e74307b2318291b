"""
Text and structured output of results and verification reports.

The structured form is one JSON document:

    {"format": "elliptic-qdr", "version": 1, "command": ..., "budget": {...},
     "results": [{"name", "kind", "terms", "checksum"}, ...],
     "checks": [{"identity", "ok", "detail"}, ...], "note": ...}

Terms of a differential polynomial are {"vars": [[color, jet], ...], "q",
"eps", "hbar", "c"}; those of the double scaling ring carry "W", "eps",
"mu", "pi" instead. Scalars are strings ("1/6", "-1/24*i", "1/2+3/4*i").
"""
import io
import os
import hashlib
import logging

from enum import Enum

import ijson
import ujson as json

from elliptic_qdr.diffpoly import DiffPoly, Generator, LocalFunctional, integrate_by_parts
from elliptic_qdr.drhell.limits import DoubleScalingPoly
from elliptic_qdr.scalars import Scalar, TruncatedSeries
from elliptic_qdr.utils import ensure_dir

logger = logging.getLogger(__name__)

FORMAT_NAME = 'elliptic-qdr'
FORMAT_VERSION = 1

DENSITY = 'density'
FUNCTIONAL = 'functional'
DOUBLE_SCALING = 'double_scaling'


class OutputFormat(Enum):
    TEXT = 1
    STRUCTURED = 2

    def __str__(self):
        return self.name.lower()

    @classmethod
    def from_string(cls, s):
        try:
            return OutputFormat[s.upper()]
        except KeyError:
            raise ValueError()


class Result(object):
    """A named value to be written: DiffPoly, LocalFunctional or DoubleScalingPoly."""

    def __init__(self, name, value):
        self.name = name
        self.value = value

    @property
    def kind(self):
        if isinstance(self.value, LocalFunctional):
            return FUNCTIONAL
        if isinstance(self.value, DoubleScalingPoly):
            return DOUBLE_SCALING
        return DENSITY

    def canonical(self):
        """Functionals are written through their integrated-by-parts representative."""
        if isinstance(self.value, LocalFunctional):
            return integrate_by_parts(self.value.density)
        return self.value

    def text_lines(self):
        return self.canonical().text_lines()

    def terms(self):
        value = self.canonical()
        if isinstance(value, DoubleScalingPoly):
            return [
                {
                    'vars': [[l.color, l.jet] for l in key.word],
                    'W': key.w,
                    'eps': key.eps,
                    'mu': key.mu,
                    'pi': key.pi,
                    'c': str(c),
                }
                for key, c in value.items()
            ]
        terms = []
        for word, series in value.items():
            for (n, e, h), c in series.items():
                terms.append({'vars': [[l.color, l.jet] for l in word], 'q': n, 'eps': e, 'hbar': h, 'c': str(c)})
        return terms

    def checksum(self):
        return checksum(self.text_lines())


def checksum(lines):
    return hashlib.sha256('\n'.join(lines).encode('utf-8')).hexdigest()


def text_report(results, checks=(), note=None):
    lines = []
    if note:
        lines.append('# ' + note)
    for result in results:
        lines.append('# ' + result.name)
        lines.extend(result.text_lines() or ['0'])
    for check in checks:
        lines.append('%s: %s' % (check.identity, check.detail if check.ok else 'FAIL ' + check.detail))
    return '\n'.join(lines) + '\n'


def structured_document(command, budget, results, checks=(), note=None):
    return {
        'format': FORMAT_NAME,
        'version': FORMAT_VERSION,
        'command': command,
        'budget': budget.as_dict() if budget is not None else None,
        'results': [
            {'name': r.name, 'kind': r.kind, 'terms': r.terms(), 'checksum': r.checksum()} for r in results
        ],
        'checks': [{'identity': c.identity, 'ok': c.ok, 'detail': c.detail} for c in checks],
        'note': note,
    }


def render(output_format, command, budget, results, checks=(), note=None):
    if output_format == OutputFormat.STRUCTURED:
        return json.dumps(structured_document(command, budget, results, checks, note), indent=2) + '\n'
    return text_report(results, checks, note)


def write_output(text, path=None, stream=None):
    """Write to `path` (creating its directory) or to `stream`."""
    if path is None:
        stream.write(text)
        return
    ensure_dir(os.path.dirname(path))
    with io.open(path, 'w', encoding='utf-8') as f:
        f.write(text)
    logger.info('Wrote %s', path)


def read_structured(path):
    with io.open(path, 'r', encoding='utf-8') as f:
        document = json.load(f)
    if document.get('format') != FORMAT_NAME:
        raise ValueError('%s is not an %s document' % (path, FORMAT_NAME))
    return document


def iter_entries(path):
    """Stream the result entries of a structured document."""
    with io.open(path, 'rb') as f:
        logger.debug(f'ijson backend in use: {ijson.backend}')
        for entry in ijson.items(f, 'results.item'):
            yield entry


def _word(entry):
    return [Generator(int(color), int(jet)) for color, jet in entry['vars']]


def entry_value(entry, budget=None):
    """Rebuild a result entry; functionals come back as LocalFunctional."""
    terms = entry['terms']
    if entry['kind'] == DOUBLE_SCALING:
        return DoubleScalingPoly.from_words(
            (_word(t), int(t['W']), int(t['eps']), int(t['mu']), int(t['pi']), Scalar.from_string(t['c']))
            for t in terms
        )
    pairs = [
        (_word(t), TruncatedSeries({(int(t['q']), int(t['eps']), int(t['hbar'])): Scalar.from_string(t['c'])}))
        for t in terms
    ]
    density = DiffPoly.from_words(pairs, budget)
    return LocalFunctional(density) if entry['kind'] == FUNCTIONAL else density
