"""
Limits of the potential: dispersionless (eps = 0), trigonometric (q = 0)
and the double scaling classical limit.

The double scaling limit lives in DoubleScalingPoly: differential
polynomials times Laurent monomials W^w eps^e mu^m pi^p, with
W = T + u^4 and T = 2 pi i tau a d_x-constant. G_2g(e^{2 pi i a tau})
is replaced by its leading term -(B_2g/4g)(2 pi i)^2g T^-2g, and the sum
over u^4 powers resums into powers of W.
"""
import logging

from collections import namedtuple
from enum import Enum
from fractions import Fraction
from math import factorial

from elliptic_qdr.diffpoly import (
    COLORS,
    LEFT,
    RIGHT,
    Generator,
    LocalFunctional,
    koszul_sort,
    word_text,
)
from elliptic_qdr.drhell.pairing import ETA_UP, casimir_density
from elliptic_qdr.drhell.potential import potential_cells, potential_direct
from elliptic_qdr.fock import reduced_commutator
from elliptic_qdr.scalars import I, Scalar, bernoulli
from elliptic_qdr.utils import InternalInconsistencyError

logger = logging.getLogger(__name__)

U4 = Generator(4, 0)


class LimitKind(Enum):
    DISPERSIONLESS = 1
    TRIGONOMETRIC = 2
    DOUBLE_SCALING = 3
    DS_DISPERSIONLESS = 4

    def __str__(self):
        return self.name.lower()

    @classmethod
    def from_string(cls, s):
        try:
            return LimitKind[s.upper()]
        except KeyError:
            raise ValueError()


DSKey = namedtuple('DSKey', ['word', 'w', 'eps', 'mu', 'pi'])


class DoubleScalingPoly(object):
    """Sum of coeff * word * W^w eps^e mu^m pi^p with Scalar coefficients."""

    __slots__ = ('terms',)

    def __init__(self, terms=None):
        self.terms = {}
        for key, value in (terms or {}).items():
            value = Scalar.coerce(value)
            if value:
                self.terms[DSKey(*key)] = value

    @classmethod
    def from_words(cls, entries):
        """entries: (raw word, w, eps, mu, pi, coefficient)."""
        terms = {}
        for word, w, eps, mu, pi, coeff in entries:
            sign, word = koszul_sort(tuple(word))
            if sign:
                _add(terms, DSKey(word, w, eps, mu, pi), Scalar.coerce(coeff) * sign)
        return cls(terms)

    @classmethod
    def from_diffpoly(cls, f):
        """Embed a polynomial with constant (q, hbar free) eps-series coefficients."""
        entries = []
        for word, series in f.items():
            for (n, e, h), value in series.items():
                if n or h:
                    raise ValueError('Only eps may appear in coefficients embedded in the double scaling ring')
                entries.append((word, 0, e, 0, 0, value))
        return cls.from_words(entries)

    @classmethod
    def letter(cls, color, jet=0, coeff=1):
        return cls({DSKey((Generator(color, jet),), 0, 0, 0, 0): coeff})

    @classmethod
    def w_power(cls, w, coeff=1):
        return cls({DSKey((), w, 0, 0, 0): coeff})

    def items(self):
        return sorted(self.terms.items())

    def __add__(self, other):
        terms = dict(self.terms)
        for key, value in other.terms.items():
            _add(terms, key, value)
        return DoubleScalingPoly(terms)

    def __neg__(self):
        return DoubleScalingPoly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, factor):
        return DoubleScalingPoly({k: v * factor for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        terms = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                sign, word = koszul_sort(k1.word + k2.word)
                if sign:
                    key = DSKey(word, k1.w + k2.w, k1.eps + k2.eps, k1.mu + k2.mu, k1.pi + k2.pi)
                    _add(terms, key, v1 * v2 * sign)
        return DoubleScalingPoly(terms)

    def __eq__(self, other):
        if not isinstance(other, DoubleScalingPoly):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def project_eps(self, eps):
        return DoubleScalingPoly({k: v for k, v in self.terms.items() if k.eps == eps})

    def max_jet(self):
        return max((l.jet for k in self.terms for l in k.word), default=0)

    def text_lines(self):
        lines = []
        for key, value in self.items():
            factors = ['(%s)' % value]
            for name, power in (('mu', key.mu), ('pi', key.pi), ('eps', key.eps)):
                if power == 1:
                    factors.append(name)
                elif power:
                    factors.append('%s^%d' % (name, power))
            text = '*'.join(factors) + ' * ' + word_text(key.word)
            if key.w:
                text += ' * W^%d' % key.w
            lines.append(text)
        return lines

    def __str__(self):
        return '\n'.join(self.text_lines()) or '0'


def _add(terms, key, value):
    total = terms[key] + value if key in terms else value
    if total:
        terms[key] = total
    else:
        terms.pop(key, None)


def ds_d_x(f):
    """d_x with d_x T = 0, so d_x W^w = w W^(w-1) u4_1."""
    entries = []
    for key, value in f.terms.items():
        word = key.word
        for i, letter in enumerate(word):
            entries.append((word[:i] + (letter.shifted(),) + word[i + 1:], key.w, key.eps, key.mu, key.pi, value))
        if key.w:
            entries.append((word + (Generator(4, 1),), key.w - 1, key.eps, key.mu, key.pi, value * key.w))
    return DoubleScalingPoly.from_words(entries)


def ds_d_x_power(f, n):
    for _ in range(n):
        f = ds_d_x(f)
    return f


def ds_partial(f, color, jet, side=LEFT):
    """Partial derivative at fixed T; by u4_0 it also differentiates W."""
    target = Generator(color, jet)
    entries = []
    for key, value in f.terms.items():
        word = key.word
        count = word.count(target)
        if count:
            i = word.index(target)
            passed = word[:i] if side == LEFT else word[i + count:]
            sign = -1 if target.parity and sum(l.parity for l in passed) % 2 else 1
            entries.append((word[:i] + word[i + 1:], key.w, key.eps, key.mu, key.pi, value * (count * sign)))
        if target == U4 and key.w:
            entries.append((word, key.w - 1, key.eps, key.mu, key.pi, value * key.w))
    return DoubleScalingPoly.from_words(entries)


def ds_variational_derivative(f, color, side=LEFT):
    result = DoubleScalingPoly()
    for jet in range(f.max_jet() + 1):
        term = ds_d_x_power(ds_partial(f, color, jet, side), jet)
        result = result + (term if jet % 2 == 0 else -term)
    return result


def ds_is_zero_functional(f):
    return all(ds_variational_derivative(f, color).is_zero() for color in COLORS)


def ds_euler(f):
    """D = mu d/dmu + eps d/deps + sum_s u_s d/du_s at fixed T."""
    entries = []
    for key, value in f.terms.items():
        entries.append((key.word, key.w, key.eps, key.mu, key.pi, value * (len(key.word) + key.eps + key.mu)))
        if key.w:
            entries.append((key.word + (U4,), key.w - 1, key.eps, key.mu, key.pi, value * key.w))
    return DoubleScalingPoly.from_words(entries)


def t_symbol():
    """T = W - u^4."""
    return DoubleScalingPoly.w_power(1) - DoubleScalingPoly.letter(4)


def tau_symbol():
    """tau = T / (2 pi i)."""
    return t_symbol() * DoubleScalingPoly({DSKey((), 0, 0, 0, -1): Scalar(0, Fraction(-1, 2))})


def _falling(x, k):
    result = 1
    for j in range(k):
        result *= x - j
    return result


def ordered_positive_compositions(total):
    """Ordered tuples of integers >= 1 summing to total, including () for 0."""
    if total == 0:
        yield ()
        return
    for first in range(1, total + 1):
        for rest in ordered_positive_compositions(total - first):
            yield (first,) + rest


def ds_potential(eps_order):
    """
    Leading term of a * G under the double scaling, resummed:
    cubic + sum_g i mu^2 eps^(2g-2) 2^(2-2g) (-B_2g/4g)(2 pi i)^2g
    sum (derivative pattern) (1/s!) (-2g)_s prod u4_2c/(2c+1)! W^(-2g-s).
    """
    u1, u2, u3 = (Generator(c, 0) for c in (1, 2, 3))
    entries = [((u1, u1, U4), 0, 0, 0, 0, Fraction(1, 2)), ((u1, u2, u3), 0, 0, 0, 0, 1)]
    for g in range(1, eps_order // 2 + 2):
        constant = I * Fraction(1, 2 ** (2 * g - 2)) * (-bernoulli(2 * g) / (4 * g)) * (-4) ** g
        for b1 in range(g):
            for b2 in range(g - b1):
                for cs in ordered_positive_compositions(g - 1 - b1 - b2):
                    s = len(cs)
                    weight = Fraction(_falling(-2 * g, s), factorial(s))
                    weight /= factorial(2 * b1 + 1) * factorial(2 * b2 + 1)
                    tail = []
                    for c in cs:
                        weight /= factorial(2 * c + 1)
                        tail.append(Generator(4, 2 * c))
                    coeff = constant * weight
                    j1, j2 = 2 * b1 + 1, 2 * b2 + 1
                    for left, right in ((1, 4), (2, 3)):
                        word = [Generator(left, j1), Generator(right, j2)] + tail
                        entries.append((word, -2 * g - s, 2 * g - 2, 2, 2 * g, coeff))
    return DoubleScalingPoly.from_words(entries)


def ds_from_cells(eps_order, u_degree):
    """
    Leading order in a of a * G under the double scaling, cell by cell, in
    the T frame: the W slot of every key holds a power of T instead. Each
    D_q^m G_2g(e^{2 pi i a tau}) becomes (-B_2g/4g)(2 pi i)^2g (-2g)_m T^(-2g-m),
    since D_q = d/dT, and hbar becomes mu^2.
    """
    u1, u2, u3 = (Generator(c, 0) for c in (1, 2, 3))
    entries = [((u1, u1, U4), 0, 0, 0, 0, Fraction(1, 2)), ((u1, u2, u3), 0, 0, 0, 0, 1)]
    for g, n, word, weight in potential_cells(eps_order, u_degree):
        if rescaling_exponent(g, n):
            raise InternalInconsistencyError('Cell g=%d n=%d does not survive the double scaling' % (g, n))
        m = n - 2
        constant = I * (-bernoulli(2 * g) / (4 * g)) * (-4) ** g * _falling(-2 * g, m)
        entries.append((word, -2 * g - m, 2 * g - 2, 2, 2 * g, constant * weight))
    return DoubleScalingPoly.from_words(entries)


def expand_in_t(f, u_degree):
    """
    Rewrite W^w = (T + u4)^w as sum_k (w)_k/k! (u4)^k T^(w-k), keeping
    words of at most u_degree letters; the result is in the T frame.
    """
    entries = []
    for key, value in f.terms.items():
        k = 0
        while len(key.word) + k <= u_degree:
            coeff = Fraction(_falling(key.w, k), factorial(k))
            if coeff:
                entries.append((key.word + (U4,) * k, key.w - k, key.eps, key.mu, key.pi, value * coeff))
            if not key.w:
                break
            k += 1
    return DoubleScalingPoly.from_words(entries)


def ds_potential_matches_cells(eps_order, u_degree):
    """The resummed potential agrees with the cell-by-cell rescaling through u_degree."""
    difference = expand_in_t(ds_potential(eps_order), u_degree) - ds_from_cells(eps_order, u_degree)
    if difference:
        logger.warning('Resummed double scaling potential differs from the cells: %s', difference.text_lines()[0])
    return not difference


def ds_g11(eps_order):
    """(D - 2) applied to the double scaling potential."""
    h = ds_potential(eps_order)
    return ds_euler(h) - h.scale(2)


def ds_hamiltonian(alpha, eps_order=0):
    """h_{a,0} = left variational derivative of the potential by u^a."""
    return ds_variational_derivative(ds_potential(eps_order), alpha, LEFT)


def classical_bracket_density(f, g):
    """{f, integral g} = sum (f <-d/du^a_s) d_x^(s+1)(eta^ab delta_L g / delta u^b)."""
    flows = {}
    for (a, b), eta in ETA_UP.items():
        flows.setdefault(a, DoubleScalingPoly())
        flows[a] = flows[a] + ds_variational_derivative(g, b, LEFT).scale(eta)
    result = DoubleScalingPoly()
    for a, flow in flows.items():
        for jet in range(f.max_jet() + 1):
            derivative = ds_partial(f, a, jet, RIGHT)
            if derivative:
                result = result + derivative * ds_d_x_power(flow, jet + 1)
    return result


def classical_bracket(f, g, budget):
    """hbar -> 0 of (1/hbar)[f, g] for polynomial functionals."""
    classical = budget.replace(hbar_order=0)
    f = f.density if isinstance(f, LocalFunctional) else f
    g = g.density if isinstance(g, LocalFunctional) else g
    return LocalFunctional(reduced_commutator(f.with_budget(classical), g.with_budget(classical), classical))

RecursionCheck = namedtuple('RecursionCheck', ['alpha', 'ok', 'residue'])


def verify_classical_recursion(alpha, eps_order=0):
    """d_x (D - 1) h_{a,0} == {h_{a,-1}, h_11} identically in the double scaling ring."""
    h0 = ds_hamiltonian(alpha, eps_order)
    lhs = ds_d_x(ds_euler(h0) - h0)
    casimir = DoubleScalingPoly.from_diffpoly(casimir_density(alpha))
    rhs = classical_bracket_density(casimir, ds_g11(eps_order))
    residue = lhs - rhs
    if residue:
        logger.warning('Classical recursion fails for color %d: %s', alpha, residue.text_lines()[0])
    return RecursionCheck(alpha, not residue, residue)


def dispersionless(budget):
    return LocalFunctional(potential_direct(budget).density.project(eps=0))


def trigonometric(budget):
    return LocalFunctional(potential_direct(budget).density.project(q=0))


def limit(kind, budget):
    logger.info('Computing the %s limit at %s', kind, budget)
    if kind == LimitKind.DISPERSIONLESS:
        return dispersionless(budget)
    if kind == LimitKind.TRIGONOMETRIC:
        return trigonometric(budget)
    if kind == LimitKind.DOUBLE_SCALING:
        return ds_potential(budget.eps_order)
    if kind == LimitKind.DS_DISPERSIONLESS:
        return ds_potential(0)
    raise ValueError('Unknown limit %r' % kind)


def scale_exponent(color):
    """Power of a multiplying u^color under the double scaling."""
    return -1 if color in (1, 2) else 1


def rescaling_exponent(g, n):
    """
    a-power of a * (g, n) cell of the potential after rescaling: hbar and the
    eps^(2g-2) prefactor, one u^1 (or u^2) and n - 1 of u^4 (or u^3), and
    D_q^(n-2) G_2g ~ (a tau)^(-2g-(n-2)).
    """
    return 1 + 1 + (2 * g - 2) + scale_exponent(1) + (n - 1) * scale_exponent(4) - 2 * g - (n - 2)


def hamiltonian_scale_exponent(alpha, d):
    """a^k multiplying G_{a,d} so that it has a finite double scaling limit."""
    return d if alpha in (1, 2) else d + 2


def classical_primaries_commute(alpha, beta, eps_order=0):
    """{h_{a,0}, h_{b,0}} vanishes as a functional."""
    bracket = classical_bracket_density(ds_hamiltonian(alpha, eps_order), ds_hamiltonian(beta, eps_order))
    return ds_is_zero_functional(bracket)
