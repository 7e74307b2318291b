"""
Exact coefficient arithmetic: Gaussian rationals, truncated series in
(q, eps, hbar) and the truncation budget shared by the whole engine.
"""
import re
import logging

from collections import namedtuple
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from math import comb

logger = logging.getLogger(__name__)


class InvalidBudgetError(ValueError):
    pass


class Scalar(object):
    """Gaussian rational re + im*i with exact Fraction parts."""

    __slots__ = ('re', 'im')

    _PATTERN = re.compile(
        r'^\s*(?:(?P<re>[+-]?\d+(?:/\d+)?)(?=\s*(?:[+-]|$)))?\s*(?:(?P<im>[+-]?\s*\d+(?:/\d+)?)\*i)?\s*$'
    )

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, value):
        if isinstance(value, Scalar):
            return value
        return cls(value)

    @classmethod
    def from_string(cls, s):
        m = cls._PATTERN.match(s)
        if m is None or (m.group('re') is None and m.group('im') is None):
            raise ValueError('Not a scalar: %r' % s)
        re_part = Fraction(m.group('re')) if m.group('re') else Fraction(0)
        im_part = Fraction(m.group('im').replace(' ', '')) if m.group('im') else Fraction(0)
        return cls(re_part, im_part)

    def __add__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction)):
                return Scalar(self.re + other, self.im)
            return NotImplemented
        return Scalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.re, -self.im)

    def __sub__(self, other):
        if not isinstance(other, (Scalar, int, Fraction)):
            return NotImplemented
        return self + (-Scalar.coerce(other))

    def __rsub__(self, other):
        return Scalar.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            if isinstance(other, (int, Fraction)):
                return Scalar(self.re * other, self.im * other)
            return NotImplemented
        return Scalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = Scalar.coerce(other)
        norm = other.re * other.re + other.im * other.im
        if norm == 0:
            raise ZeroDivisionError('Scalar division by zero')
        return self * Scalar(other.re / norm, -other.im / norm)

    def __rtruediv__(self, other):
        return Scalar.coerce(other) / self

    def __pow__(self, k):
        if k < 0:
            return Scalar(1) / (self ** -k)
        result = Scalar(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_real(self):
        return self.im == 0

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return '%s*i' % self.im
        sign = '+' if self.im > 0 else ''
        return '%s%s%s*i' % (self.re, sign, self.im)

    def __repr__(self):
        return 'Scalar(%s)' % self


I = Scalar(0, 1)


def i_power(k):
    """i**k for any integer k."""
    return (Scalar(1), I, Scalar(-1), Scalar(0, -1))[k % 4]


@lru_cache(maxsize=None)
def bernoulli(k):
    """B_k from sum_{j=0}^{m} C(m+1, j) B_j = 0, so that B_1 = -1/2 and B_2 = 1/6."""
    if k < 0:
        raise ValueError('Bernoulli index must be nonnegative, got %d' % k)
    if k == 0:
        return Fraction(1)
    total = sum(comb(k + 1, j) * bernoulli(j) for j in range(k))
    return -total / (k + 1)


class SeriesCaps(namedtuple('SeriesCaps', ['q', 'eps', 'hbar'])):
    """Maximal exponents per variable; None leaves the variable uncapped."""

    __slots__ = ()

    def admits(self, key):
        n, e, h = key
        return (
            (self.q is None or n <= self.q)
            and (self.eps is None or e <= self.eps)
            and (self.hbar is None or h <= self.hbar)
        )

    def meet(self, other):
        def _min(a, b):
            if a is None:
                return b
            if b is None:
                return a
            return min(a, b)

        return SeriesCaps(_min(self.q, other.q), _min(self.eps, other.eps), _min(self.hbar, other.hbar))


UNCAPPED = SeriesCaps(None, None, None)


@dataclass(frozen=True)
class TruncationBudget:
    q_order: int = 5
    eps_order: int = 4
    hbar_order: int = 2
    u_degree: int = 5
    dx_degree: int = 7

    def __post_init__(self):
        for name in ('q_order', 'eps_order', 'hbar_order', 'u_degree', 'dx_degree'):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 0:
                raise InvalidBudgetError('%s must be a nonnegative integer, got %r' % (name, value))
        if self.eps_order % 2:
            raise InvalidBudgetError('eps_order must be even, got %d' % self.eps_order)

    @property
    def caps(self):
        return SeriesCaps(self.q_order, self.eps_order, self.hbar_order)

    def replace(self, **changes):
        return replace(self, **changes)

    def as_dict(self):
        return {
            'q_order': self.q_order,
            'eps_order': self.eps_order,
            'hbar_order': self.hbar_order,
            'u_degree': self.u_degree,
            'dx_degree': self.dx_degree,
        }


class TruncatedSeries(object):
    """
    Polynomial in q, eps, hbar with Scalar coefficients, keyed by the
    exponent triple (q-power, eps-power, hbar-power). Terms outside the caps
    are discarded on construction, so every operation truncates silently.
    """

    __slots__ = ('_terms', 'caps')

    def __init__(self, terms=None, caps=UNCAPPED):
        self.caps = caps
        self._terms = {}
        if terms:
            for key, value in terms.items():
                value = Scalar.coerce(value)
                if value and caps.admits(key):
                    self._terms[key] = value

    @classmethod
    def constant(cls, value, caps=UNCAPPED):
        return cls({(0, 0, 0): value}, caps)

    @classmethod
    def monomial(cls, coeff=1, q=0, eps=0, hbar=0, caps=UNCAPPED):
        return cls({(q, eps, hbar): coeff}, caps)

    @classmethod
    def coerce(cls, value, caps=UNCAPPED):
        if isinstance(value, TruncatedSeries):
            return value
        return cls.constant(value, caps)

    def items(self):
        return sorted(self._terms.items())

    def keys(self):
        return self._terms.keys()

    def coefficient(self, q=0, eps=0, hbar=0):
        return self._terms.get((q, eps, hbar), Scalar(0))

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            other = TruncatedSeries.constant(other)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None

    def __add__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            other = TruncatedSeries.constant(other)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        caps = self.caps.meet(other.caps)
        terms = dict(self._terms)
        for key, value in other._terms.items():
            terms[key] = terms[key] + value if key in terms else value
        return TruncatedSeries(terms, caps)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries({k: -v for k, v in self._terms.items()}, self.caps)

    def __sub__(self, other):
        return self + (-TruncatedSeries.coerce(other))

    def __rsub__(self, other):
        return TruncatedSeries.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        caps = self.caps.meet(other.caps)
        terms = {}
        for (n1, e1, h1), c1 in self._terms.items():
            for (n2, e2, h2), c2 in other._terms.items():
                key = (n1 + n2, e1 + e2, h1 + h2)
                if not caps.admits(key):
                    continue
                product = c1 * c2
                terms[key] = terms[key] + product if key in terms else product
        return TruncatedSeries(terms, caps)

    def __rmul__(self, other):
        return self.__mul__(other)

    def scale(self, factor):
        factor = Scalar.coerce(factor)
        if not factor:
            return TruncatedSeries(caps=self.caps)
        return TruncatedSeries({k: v * factor for k, v in self._terms.items()}, self.caps)

    def with_caps(self, caps):
        return TruncatedSeries(self._terms, self.caps.meet(caps))

    def recapped(self, caps):
        """Same terms under `caps` alone; unlike with_caps this can raise a cap."""
        return TruncatedSeries(self._terms, caps)

    def shift(self, q=0, eps=0, hbar=0):
        """Multiply by q^q eps^eps hbar^hbar; negative shifts require the terms to allow it."""
        terms = {}
        for (n, e, h), value in self._terms.items():
            key = (n + q, e + eps, h + hbar)
            if min(key) < 0:
                raise ValueError('Shift by (%d, %d, %d) leaves a negative exponent' % (q, eps, hbar))
            terms[key] = value
        return TruncatedSeries(terms, self.caps)

    def project(self, q=None, eps=None, hbar=None):
        """Keep the terms with the given exponents; e.g. project(eps=0) sets eps to zero."""
        return TruncatedSeries(
            {
                key: value
                for key, value in self._terms.items()
                if (q is None or key[0] == q) and (eps is None or key[1] == eps) and (hbar is None or key[2] == hbar)
            },
            self.caps,
        )

    def weighted(self, weight):
        """Multiply every term by weight(q_power, eps_power, hbar_power)."""
        terms = {}
        for key, value in self._terms.items():
            factor = weight(*key)
            if factor:
                terms[key] = value * factor
        return TruncatedSeries(terms, self.caps)

    def d_q(self):
        return self.weighted(lambda n, e, h: n)

    def eps_coefficients(self):
        """Split as sum_e eps^e * s_e with each s_e free of eps."""
        groups = {}
        for (n, e, h), value in self._terms.items():
            groups.setdefault(e, {})[(n, 0, h)] = value
        return {e: TruncatedSeries(terms, self.caps) for e, terms in groups.items()}

    def min_hbar(self):
        return min((h for _, _, h in self._terms), default=None)

    def is_constant(self):
        return all(key == (0, 0, 0) for key in self._terms)

    def __str__(self):
        if not self._terms:
            return '0'
        return ' + '.join(_term_text(key, value) for key, value in self.items())

    def __repr__(self):
        return 'TruncatedSeries(%s)' % self


def _term_text(key, value):
    n, e, h = key
    factors = []
    if not (value == 1 and key != (0, 0, 0)):
        text = str(value)
        factors.append('(%s)' % text if ('/' in text or '*' in text or text.startswith('-')) else text)
    for name, power in (('q', n), ('hbar', h), ('eps', e)):
        if power == 1:
            factors.append(name)
        elif power > 1:
            factors.append('%s^%d' % (name, power))
    return '*'.join(factors)
