"""
Quasimodular forms: Eisenstein q-expansions, the ring C[G2, G4, G6],
the derivation D_q = q d/dq and the derivation d/dG2.
"""
import logging

from fractions import Fraction
from functools import lru_cache

import sympy

from elliptic_qdr.scalars import Scalar, SeriesCaps, TruncatedSeries, bernoulli

logger = logging.getLogger(__name__)

GENERATOR_WEIGHTS = (2, 4, 6)


class InvalidWeightError(ValueError):
    pass


class NoSolutionError(ValueError):
    pass


def divisor_sigma(k, n):
    return sum(d ** k for d in sympy.divisors(n))


def _check_weight(k):
    if k < 2 or k % 2:
        raise InvalidWeightError('Eisenstein weight must be even and >= 2, got %r' % k)


@lru_cache(maxsize=None)
def eisenstein_qexp(k, q_order):
    """G_k = -B_k/(2k) + sum_{n>=1} sigma_{k-1}(n) q^n, truncated at q^q_order."""
    _check_weight(k)
    caps = SeriesCaps(q_order, None, None)
    terms = {(0, 0, 0): -bernoulli(k) / (2 * k)}
    for n in range(1, q_order + 1):
        terms[(n, 0, 0)] = divisor_sigma(k - 1, n)
    return TruncatedSeries(terms, caps)


def eisenstein_qexp_lambert(k, q_order):
    """Same series summed as sum_d d^(k-1) q^d / (1 - q^d)."""
    _check_weight(k)
    caps = SeriesCaps(q_order, None, None)
    terms = {(0, 0, 0): -bernoulli(k) / (2 * k)}
    for d in range(1, q_order + 1):
        for n in range(d, q_order + 1, d):
            terms[(n, 0, 0)] = terms.get((n, 0, 0), 0) + d ** (k - 1)
    return TruncatedSeries(terms, caps)


def d_q(series):
    return series.d_q()


def monomial_weight(exps):
    return sum(w * e for w, e in zip(GENERATOR_WEIGHTS, exps))


def weight_basis(weight):
    """Monomials G2^i G4^j G6^k of the given weight, as exponent triples."""
    if weight < 0 or weight % 2:
        raise InvalidWeightError('Quasimodular weight must be even and >= 0, got %r' % weight)
    basis = []
    for i in range(weight // 2 + 1):
        for j in range(weight // 4 + 1):
            rest = weight - 2 * i - 4 * j
            if rest >= 0 and rest % 6 == 0:
                basis.append((i, j, rest // 6))
    return sorted(basis)


class QModForm(object):
    """Polynomial in G2, G4, G6 with Scalar coefficients."""

    __slots__ = ('terms',)

    def __init__(self, terms=None):
        self.terms = {}
        for exps, value in (terms or {}).items():
            value = Scalar.coerce(value)
            if value:
                self.terms[tuple(exps)] = value

    @classmethod
    def generator(cls, k):
        _check_weight(k)
        if k not in GENERATOR_WEIGHTS:
            raise InvalidWeightError('Ring generators are G2, G4, G6, got G%d' % k)
        exps = [0, 0, 0]
        exps[GENERATOR_WEIGHTS.index(k)] = 1
        return cls({tuple(exps): 1})

    @classmethod
    def one(cls):
        return cls({(0, 0, 0): 1})

    def weights(self):
        return sorted({monomial_weight(exps) for exps in self.terms})

    def is_homogeneous(self):
        return len(self.weights()) <= 1

    def component(self, weight):
        return QModForm({e: v for e, v in self.terms.items() if monomial_weight(e) == weight})

    def __add__(self, other):
        terms = dict(self.terms)
        for exps, value in other.terms.items():
            terms[exps] = terms.get(exps, Scalar(0)) + value
        return QModForm(terms)

    def __neg__(self):
        return QModForm({e: -v for e, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return QModForm({e: v * other for e, v in self.terms.items()})
        terms = {}
        for e1, v1 in self.terms.items():
            for e2, v2 in other.terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                terms[exps] = terms.get(exps, Scalar(0)) + v1 * v2
        return QModForm(terms)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, QModForm):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def __str__(self):
        if not self.terms:
            return '0'
        parts = []
        for exps, value in sorted(self.terms.items()):
            factors = ['G%d^%d' % (w, e) if e > 1 else 'G%d' % w for w, e in zip(GENERATOR_WEIGHTS, exps) if e]
            parts.append('*'.join(['(%s)' % value] + factors))
        return ' + '.join(parts)

    def __repr__(self):
        return 'QModForm(%s)' % self


@lru_cache(maxsize=None)
def _generator_power(k, e, q_order):
    series = TruncatedSeries.constant(1, SeriesCaps(q_order, None, None))
    for _ in range(e):
        series = series * eisenstein_qexp(k, q_order)
    return series


def qmod_expand(form, q_order):
    """q-expansion of a polynomial in G2, G4, G6 through q^q_order."""
    total = TruncatedSeries(caps=SeriesCaps(q_order, None, None))
    for exps, value in form.terms.items():
        series = TruncatedSeries.constant(value, SeriesCaps(q_order, None, None))
        for k, e in zip(GENERATOR_WEIGHTS, exps):
            if e:
                series = series * _generator_power(k, e, q_order)
        total = total + series
    return total


def _to_sympy(value):
    return sympy.Rational(value.re.numerator, value.re.denominator) + sympy.I * sympy.Rational(
        value.im.numerator, value.im.denominator
    )


def _from_sympy(value):
    re_part, im_part = sympy.re(value), sympy.im(value)
    return Scalar(
        Fraction(int(re_part.p), int(re_part.q)),
        Fraction(int(im_part.p), int(im_part.q)),
    )


def qmod_identify(series, weight):
    """
    Find the unique form of the given weight whose q-expansion matches
    `series` through its q cap. The cap must exceed the dimension of the
    weight space so that the linear system is overdetermined.
    """
    basis = weight_basis(weight)
    q_order = series.caps.q
    if q_order is None or q_order <= len(basis):
        raise NoSolutionError(
            'q_order %r too small to identify weight %d (dimension %d)' % (q_order, weight, len(basis))
        )
    if any(e or h for _, e, h in series.keys()):
        raise NoSolutionError('Series depends on eps or hbar, not a pure q-series')

    columns = [qmod_expand(QModForm({exps: 1}), q_order) for exps in basis]
    matrix = sympy.Matrix(
        q_order + 1, len(basis), lambda n, c: _to_sympy(columns[c].coefficient(q=n))
    )
    rhs = sympy.Matrix(q_order + 1, 1, lambda n, _: _to_sympy(series.coefficient(q=n)))
    try:
        solution, params = matrix.gauss_jordan_solve(rhs)
    except ValueError:
        raise NoSolutionError('No weight %d quasimodular form matches %s' % (weight, series))
    if params.shape[0]:
        raise NoSolutionError('Weight %d identification is underdetermined at q_order %d' % (weight, q_order))
    return QModForm({exps: _from_sympy(sympy.expand(solution[c])) for c, exps in enumerate(basis)})


def d_g2(form):
    """Formal derivative with respect to G2."""
    return QModForm({(i - 1, j, k): value * i for (i, j, k), value in form.terms.items() if i})


def qmod_d_q(form):
    """D_q on C[G2, G4, G6], raising the weight by 2, found by expanding and re-identifying."""
    result = QModForm()
    for weight in form.weights():
        target = weight + 2
        q_order = len(weight_basis(target)) + 4
        expanded = qmod_expand(form.component(weight), q_order)
        result = result + qmod_identify(d_q(expanded), target)
    logger.debug('D_q(%s) = %s', form, result)
    return result


