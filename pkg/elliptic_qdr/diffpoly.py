"""
The Z2-graded ring of differential polynomials in u^a_j, a = 1..4, where
u^2 and u^3 are odd, with coefficients in truncated (q, eps, hbar) series.

Monomials are stored as sorted tuples of Generators. Sorting a raw word
multiplies the coefficient by the Koszul sign of the odd letters, and a
repeated odd letter kills the monomial.
"""
import logging

from collections import namedtuple
from fractions import Fraction

from elliptic_qdr.scalars import Scalar, TruncatedSeries, UNCAPPED

logger = logging.getLogger(__name__)

COLORS = (1, 2, 3, 4)
PARITY = {1: 0, 2: 1, 3: 1, 4: 0}

LEFT = 'left'
RIGHT = 'right'


class Generator(namedtuple('Generator', ['color', 'jet'])):
    __slots__ = ()

    @property
    def parity(self):
        return PARITY[self.color]

    def shifted(self, by=1):
        return Generator(self.color, self.jet + by)

    def __str__(self):
        return 'u%d_%d' % (self.color, self.jet)


DiffMonomial = namedtuple('DiffMonomial', ['word', 'coeff'])


def koszul_sign(letters):
    """Sign of sorting `letters`; 0 if an odd letter repeats. Letters are (color, index) tuples."""
    odd = [letter for letter in letters if PARITY[letter[0]]]
    sign = 1
    for i in range(len(odd)):
        for j in range(i + 1, len(odd)):
            if odd[i] == odd[j]:
                return 0
            if odd[i] > odd[j]:
                sign = -sign
    return sign


def koszul_sort(letters):
    sign = koszul_sign(letters)
    if not sign:
        return 0, None
    return sign, tuple(sorted(letters))


def word_parity(word):
    return sum(PARITY[letter[0]] for letter in word) % 2


def word_jets(word):
    return sum(letter[1] for letter in word)


def word_text(word):
    return ' '.join(str(letter) for letter in word) if word else '1'


def normal_form(word, coeff):
    """Sort a raw word into a DiffMonomial, or None when an odd letter repeats."""
    sign, word = koszul_sort(word)
    if not sign:
        return None
    coeff = TruncatedSeries.coerce(coeff)
    return DiffMonomial(word, coeff if sign > 0 else -coeff)


def _as_series(value):
    if isinstance(value, TruncatedSeries):
        return value
    return TruncatedSeries.constant(value)


class DiffPoly(object):
    """
    Sum of monomials, as a map from sorted words to nonzero coefficient
    series. With a budget, coefficients are capped in (q, eps, hbar) and
    words whose total jet order exceeds dx_degree are dropped and counted
    in `loss`.
    """

    __slots__ = ('_terms', 'budget', 'loss')

    def __init__(self, terms=None, budget=None, loss=0):
        self.budget = budget
        self.loss = loss
        self._terms = {}
        caps = budget.caps if budget is not None else UNCAPPED
        dropped = 0
        for word, series in (terms or {}).items():
            series = _as_series(series)
            if budget is not None:
                series = series.with_caps(caps)
                if word_jets(word) > budget.dx_degree:
                    if series:
                        dropped += 1
                    continue
            if series:
                self._terms[word] = series
        if dropped:
            self.loss += dropped
            logger.debug('Dropped %d monomials beyond dx_degree %d', dropped, budget.dx_degree)

    @classmethod
    def from_words(cls, pairs, budget=None):
        """Build from (raw word, coefficient) pairs, normalizing each word."""
        terms = {}
        for word, coeff in pairs:
            monomial = normal_form(word, coeff)
            if monomial is not None:
                _accumulate(terms, monomial.word, monomial.coeff)
        return cls(terms, budget)

    @classmethod
    def constant(cls, value, budget=None):
        return cls({(): _as_series(value)}, budget)

    @classmethod
    def letter(cls, color, jet=0, coeff=1, budget=None):
        return cls({(Generator(color, jet),): _as_series(coeff)}, budget)

    def items(self):
        return sorted(self._terms.items())

    def words(self):
        return sorted(self._terms)

    def coefficient(self, word):
        return self._terms.get(tuple(word), TruncatedSeries())

    def monomials(self):
        return [DiffMonomial(word, series) for word, series in self.items()]

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self):
        return not self._terms

    def __eq__(self, other):
        if not isinstance(other, DiffPoly):
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None

    def _combine_budget(self, other):
        return self.budget if self.budget is not None else other.budget

    def __add__(self, other):
        if not isinstance(other, DiffPoly):
            return NotImplemented
        terms = dict(self._terms)
        for word, series in other._terms.items():
            _accumulate(terms, word, series)
        return DiffPoly(terms, self._combine_budget(other), self.loss + other.loss)

    def __neg__(self):
        return DiffPoly({w: -s for w, s in self._terms.items()}, self.budget, self.loss)

    def __sub__(self, other):
        if not isinstance(other, DiffPoly):
            return NotImplemented
        return self + (-other)

    def scale(self, factor):
        if isinstance(factor, TruncatedSeries):
            return DiffPoly({w: s * factor for w, s in self._terms.items()}, self.budget, self.loss)
        factor = Scalar.coerce(factor)
        return DiffPoly({w: s.scale(factor) for w, s in self._terms.items()}, self.budget, self.loss)

    def __mul__(self, other):
        if isinstance(other, DiffPoly):
            return mul(self, other)
        if isinstance(other, (int, Fraction, Scalar, TruncatedSeries)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Scalar, TruncatedSeries)):
            return self.scale(other)
        return NotImplemented

    def with_budget(self, budget):
        return DiffPoly(self._terms, budget, self.loss)

    def map_coefficients(self, func):
        return DiffPoly({w: func(s) for w, s in self._terms.items()}, self.budget, self.loss)

    def project(self, q=None, eps=None, hbar=None):
        return self.map_coefficients(lambda s: s.project(q=q, eps=eps, hbar=hbar))

    def shift(self, q=0, eps=0, hbar=0):
        return self.map_coefficients(lambda s: s.shift(q=q, eps=eps, hbar=hbar))

    def parity(self):
        """Z2-degree, or None for an inhomogeneous polynomial."""
        parities = {word_parity(w) for w in self._terms}
        if len(parities) > 1:
            return None
        return parities.pop() if parities else 0

    def degree(self):
        return max((len(w) for w in self._terms), default=0)

    def max_jet(self):
        return max((letter.jet for w in self._terms for letter in w), default=0)

    def truncate_degree(self, degree):
        return DiffPoly({w: s for w, s in self._terms.items() if len(w) <= degree}, self.budget, self.loss)

    def truncate_weight(self, weight):
        """Keep terms with u-degree + 2*hbar-power <= weight."""
        return self.map_weighted(lambda word, n, e, h: 1 if len(word) + 2 * h <= weight else 0)

    def map_weighted(self, factor):
        """Multiply each term by factor(word, q-power, eps-power, hbar-power)."""
        terms = {}
        for word, series in self._terms.items():
            series = series.weighted(lambda n, e, h, word=word: factor(word, n, e, h))
            if series:
                terms[word] = series
        return DiffPoly(terms, self.budget, self.loss)

    def min_weight(self):
        return min(
            (len(w) + 2 * h for w, s in self._terms.items() for _, _, h in s.keys()),
            default=None,
        )

    def text_lines(self):
        lines = []
        for word, series in self.items():
            for key, value in series.items():
                if key == (0, 0, 0) and value == 1 and word:
                    lines.append(word_text(word))
                else:
                    lines.append('%s * %s' % (_series_term_text(key, value), word_text(word)))
        return lines

    def __str__(self):
        return '\n'.join(self.text_lines()) or '0'

    def __repr__(self):
        return 'DiffPoly(%s)' % ' + '.join(self.text_lines())


def _series_term_text(key, value):
    return str(TruncatedSeries({key: value}))


def _accumulate(terms, word, series):
    if word in terms:
        total = terms[word] + series
        if total:
            terms[word] = total
        else:
            del terms[word]
    elif series:
        terms[word] = series


def mul(f, g):
    """Graded-commutative product, truncated to the u-degree of the budget."""
    budget = f._combine_budget(g)
    max_degree = budget.u_degree if budget is not None else None
    terms = {}
    for w1, s1 in f._terms.items():
        for w2, s2 in g._terms.items():
            if max_degree is not None and len(w1) + len(w2) > max_degree:
                continue
            sign, word = koszul_sort(w1 + w2)
            if not sign:
                continue
            product = s1 * s2
            _accumulate(terms, word, product if sign > 0 else -product)
    return DiffPoly(terms, budget, f.loss + g.loss)


def power(f, n):
    result = DiffPoly.constant(1, f.budget)
    for _ in range(n):
        result = mul(result, f)
    return result


def d_x(f):
    terms = {}
    for word, series in f._terms.items():
        for i, letter in enumerate(word):
            raw = word[:i] + (letter.shifted(),) + word[i + 1:]
            sign, new_word = koszul_sort(raw)
            if sign:
                _accumulate(terms, new_word, series if sign > 0 else -series)
    return DiffPoly(terms, f.budget, f.loss)


def d_x_power(f, n):
    for _ in range(n):
        f = d_x(f)
    return f


def partial(f, color, jet, side=LEFT):
    """
    Derivative by u^color_jet. The left version moves the letter to the front
    before striking it, the right version moves it to the back.
    """
    target = Generator(color, jet)
    parity = target.parity
    terms = {}
    for word, series in f._terms.items():
        count = word.count(target)
        if not count:
            continue
        i = word.index(target)
        if side == LEFT:
            passed = sum(letter.parity for letter in word[:i])
        else:
            passed = sum(letter.parity for letter in word[i + count:])
        factor = count * (-1 if parity and passed % 2 else 1)
        _accumulate(terms, word[:i] + word[i + 1:], series.scale(factor))
    return DiffPoly(terms, f.budget, f.loss)


def variational_derivative(f, color, side=LEFT):
    """sum_j (-d_x)^j d f / d u^color_j."""
    result = DiffPoly(budget=f.budget)
    for jet in range(f.max_jet() + 1):
        term = d_x_power(partial(f, color, jet, side), jet)
        result = result + (term if jet % 2 == 0 else -term)
    return result


def is_zero_functional(f):
    """True iff the integral of f vanishes modulo constants."""
    density = f.density if isinstance(f, LocalFunctional) else f
    return all(variational_derivative(density, color).is_zero() for color in COLORS)


def dilaton_vector_field(f):
    """eps d/deps + 2 hbar d/dhbar + sum_s u_s d/du_s."""
    return f.map_weighted(lambda word, n, e, h: len(word) + e + 2 * h)


def _reducible_letter(word):
    """Index of a linear top-jet letter exceeding every other jet by >= 2, if any."""
    if not word:
        return None
    top = max(range(len(word)), key=lambda i: word[i].jet)
    letter = word[top]
    others = [w.jet for i, w in enumerate(word) if i != top]
    if letter in word[:top] + word[top + 1:]:
        return None
    if letter.jet >= 1 and all(letter.jet - j >= 2 for j in others):
        return top
    return None


def integrate_by_parts(f):
    """
    Canonical representative of the functional of f: rewrite R*u_j as
    -d_x(R)*u_{j-1} while some monomial allows it, then drop constants.
    """
    terms = dict(f._terms)
    terms.pop((), None)
    pending = [w for w in terms if _reducible_letter(w) is not None]
    while pending:
        word = pending.pop()
        if word not in terms:
            continue
        top = _reducible_letter(word)
        if top is None:
            continue
        series = terms.pop(word)
        letter = word[top]
        rest = DiffPoly({word: series}, None)
        rest = partial(rest, letter.color, letter.jet, side=RIGHT)
        moved = mul(d_x(rest), DiffPoly.letter(letter.color, letter.jet - 1))
        for new_word, new_series in moved._terms.items():
            _accumulate(terms, new_word, -new_series)
            if new_word in terms and _reducible_letter(new_word) is not None:
                pending.append(new_word)
        terms.pop((), None)
    return DiffPoly(terms, f.budget, f.loss)


class LocalFunctional(object):
    """Integral of a density, compared modulo total derivatives and constants."""

    __slots__ = ('density',)

    def __init__(self, density):
        self.density = density

    @property
    def budget(self):
        return self.density.budget

    @property
    def loss(self):
        return self.density.loss

    def __add__(self, other):
        return LocalFunctional(self.density + _density(other))

    def __sub__(self, other):
        return LocalFunctional(self.density - _density(other))

    def __neg__(self):
        return LocalFunctional(-self.density)

    def scale(self, factor):
        return LocalFunctional(self.density.scale(factor))

    def __eq__(self, other):
        if not isinstance(other, (LocalFunctional, DiffPoly)):
            return NotImplemented
        return is_zero_functional(self.density - _density(other))

    __hash__ = None

    def is_zero(self):
        return is_zero_functional(self.density)

    def canonical(self):
        return integrate_by_parts(self.density)

    def __str__(self):
        return str(self.canonical())

    def __repr__(self):
        return 'LocalFunctional(%r)' % self.density


def _density(value):
    return value.density if isinstance(value, LocalFunctional) else value
