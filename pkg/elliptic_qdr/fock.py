"""
Mode (vertex) representation u^a = sum_k p^a_k e^{ikx} and the quantum
commutator.

Two independent routes compute commutators:

* the closed form works on differential polynomials; every contraction
  sum over k is a composition sum with a polynomial closed form, so the
  result is exact and local by construction;
* the oracle instantiates both arguments on a finite window |k| <= K,
  expands the star product on concrete p-monomials and keeps the
  coefficients whose modes lie in |k| <= K/2.
"""
import logging

from collections import defaultdict, namedtuple
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb

from sympy.ntheory import multinomial_coefficients
from sympy.utilities.iterables import multiset_permutations

from elliptic_qdr.diffpoly import (
    LEFT,
    PARITY,
    RIGHT,
    DiffPoly,
    Generator,
    LocalFunctional,
    is_zero_functional,
    koszul_sort,
    word_parity,
)
from elliptic_qdr.drhell.pairing import ETA_UP
from elliptic_qdr.scalars import I, Scalar, TruncatedSeries, bernoulli, i_power
from elliptic_qdr.utils import InternalInconsistencyError

logger = logging.getLogger(__name__)


class NonLocalCommutatorError(InternalInconsistencyError):
    pass


class StabilizationError(InternalInconsistencyError):
    pass


class ZeroModeObstructionError(ArithmeticError):
    pass


class DivisionFailureError(ArithmeticError):
    pass


class Kind(Enum):
    DENSITY = 1
    FUNCTIONAL = 2

    def __str__(self):
        return self.name.lower()

    @classmethod
    def from_string(cls, s):
        try:
            return Kind[s.upper()]
        except KeyError:
            raise ValueError()


# ---------------------------------------------------------------------------
# polynomials in the mode variables


def _add_into(terms, key, series):
    if key in terms:
        total = terms[key] + series
        if total:
            terms[key] = total
        else:
            del terms[key]
    elif series:
        terms[key] = series


class ModePoly(object):
    """Polynomial in a_1..a_n, as a map from exponent tuples to coefficient series."""

    __slots__ = ('nvars', 'terms')

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        self.terms = {}
        for exps, series in (terms or {}).items():
            series = TruncatedSeries.coerce(series)
            if series:
                self.terms[tuple(exps)] = series

    def __add__(self, other):
        terms = dict(self.terms)
        for exps, series in other.terms.items():
            _add_into(terms, exps, series)
        return ModePoly(self.nvars, terms)

    def __neg__(self):
        return ModePoly(self.nvars, {e: -s for e, s in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, factor):
        return ModePoly(self.nvars, {e: s * factor for e, s in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, ModePoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def evaluate(self, modes):
        total = TruncatedSeries()
        for exps, series in self.terms.items():
            value = 1
            for a, e in zip(modes, exps):
                value *= a ** e
            if value:
                total = total + series.scale(value)
        return total

    def symmetrized(self, colors):
        """
        Average over permutations of slots sharing a color, with the Koszul
        sign on odd colors, so that equal vertex terms have equal polynomials.
        """
        blocks = defaultdict(list)
        for slot, color in enumerate(colors):
            blocks[color].append(slot)
        blocks = list(blocks.values())
        terms = {}
        for exps, series in self.terms.items():
            options = []
            for slots in blocks:
                odd = PARITY[colors[slots[0]]]
                options.append(_block_arrangements([exps[s] for s in slots], odd))
            for choice in product(*options):
                new_exps = list(exps)
                weight = Fraction(1)
                for slots, (arranged, factor) in zip(blocks, choice):
                    weight *= factor
                    for s, e in zip(slots, arranged):
                        new_exps[s] = e
                if weight:
                    _add_into(terms, tuple(new_exps), series.scale(weight))
        return ModePoly(self.nvars, terms)

    def reduced_total(self):
        """Substitute a_n = -(a_1 + ... + a_{n-1}): the representative modulo (a_1 + ... + a_n)."""
        if self.nvars == 0:
            return self
        if self.nvars == 1:
            return ModePoly(1, {(0,): s for e, s in self.terms.items() if e[0] == 0})
        terms = {}
        for exps, series in self.terms.items():
            head, last = exps[:-1], exps[-1]
            for mu, mult in _multinomial(self.nvars - 1, last).items():
                new_exps = tuple(a + b for a, b in zip(head, mu)) + (0,)
                _add_into(terms, new_exps, series.scale(mult * (-1) ** last))
        return ModePoly(self.nvars, terms)

    def divided_by_total(self):
        """Exact quotient by a_1 + ... + a_n; a nonzero remainder raises DivisionFailureError."""
        n = self.nvars
        if not self.terms:
            return ModePoly(n)
        if n == 0:
            raise DivisionFailureError('A constant is not divisible by the total mode')
        by_power = defaultdict(dict)
        for exps, series in self.terms.items():
            by_power[exps[-1]][exps[:-1]] = series
        degree = max(by_power)
        quotient = {}
        carry = {}
        # synthetic division in a_n by (a_n + s), s = a_1 + ... + a_{n-1}
        for k in range(degree, 0, -1):
            coeff = dict(by_power.get(k, {}))
            for head, series in carry.items():
                _add_into(coeff, head, series)
            for head, series in coeff.items():
                quotient[head + (k - 1,)] = series
            carry = _times_minus_sum(coeff, n - 1)
        remainder = dict(by_power.get(0, {}))
        for head, series in carry.items():
            _add_into(remainder, head, series)
        if remainder:
            raise DivisionFailureError('Mode polynomial is not divisible by the total mode')
        return ModePoly(n, quotient)

    def text(self):
        if not self.terms:
            return '0'
        parts = []
        for exps, series in sorted(self.terms.items()):
            factors = ['a%d^%d' % (i + 1, e) if e > 1 else 'a%d' % (i + 1) for i, e in enumerate(exps) if e]
            parts.append('(%s)%s' % (series, ''.join('*' + f for f in factors)))
        return ' + '.join(parts)


def _times_minus_sum(coeff, nvars):
    out = {}
    for head, series in coeff.items():
        for i in range(nvars):
            bumped = head[:i] + (head[i] + 1,) + head[i + 1:]
            _add_into(out, bumped, -series)
    return out


@lru_cache(maxsize=None)
def _multinomial(nvars, degree):
    """{exponent tuple: coefficient} of (x_1 + ... + x_nvars)^degree."""
    if nvars == 0:
        return {(): 1} if degree == 0 else {}
    return dict(multinomial_coefficients(nvars, degree))


def _inversions(seq):
    return sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])


@lru_cache(maxsize=None)
def _block_arrangements_cached(exps, odd):
    arrangements = list(multiset_permutations(list(exps)))
    if odd:
        if len(set(exps)) < len(exps):
            return ()
        base = _inversions(exps)
        weight = Fraction(1, len(arrangements))
        return tuple((tuple(a), weight * (-1) ** ((_inversions(a) + base) % 2)) for a in arrangements)
    weight = Fraction(1, len(arrangements))
    return tuple((tuple(a), weight) for a in arrangements)


def _block_arrangements(exps, odd):
    return _block_arrangements_cached(tuple(exps), bool(odd))


VertexTerm = namedtuple('VertexTerm', ['colors', 'poly'])


class VertexForm(object):
    """Vertex terms grouped by their (sorted) color tuple."""

    __slots__ = ('kind', 'terms', 'budget')

    def __init__(self, kind, terms=None, budget=None):
        self.kind = kind
        self.budget = budget
        self.terms = {colors: poly for colors, poly in (terms or {}).items() if poly}

    def vertex_terms(self):
        return [VertexTerm(colors, poly) for colors, poly in sorted(self.terms.items())]

    def __eq__(self, other):
        if not isinstance(other, VertexForm):
            return NotImplemented
        return self.kind == other.kind and self.terms == other.terms

    __hash__ = None

    def __str__(self):
        lines = ['%s' % self.kind]
        for colors, poly in sorted(self.terms.items()):
            lines.append('%s: %s' % (colors, poly.text()))
        return '\n'.join(lines)


def to_vertex(f, kind=None):
    """u^a_j contributes (i a)^j on its slot; functionals are reduced modulo the total mode."""
    if isinstance(f, LocalFunctional):
        kind = Kind.FUNCTIONAL
        f = f.density
    kind = kind or Kind.DENSITY
    grouped = defaultdict(dict)
    for word, series in f.items():
        colors = tuple(letter.color for letter in word)
        exps = tuple(letter.jet for letter in word)
        _add_into(grouped[colors], exps, series.scale(i_power(sum(exps))))
    terms = {}
    for colors, raw in grouped.items():
        poly = ModePoly(len(colors), raw).symmetrized(colors)
        if kind == Kind.FUNCTIONAL:
            poly = poly.reduced_total()
        terms[colors] = poly
    return VertexForm(kind, terms, f.budget)


def from_vertex(form):
    """a^s on a slot of color c becomes u^c_s / i^s."""
    pairs = []
    for colors, poly in form.terms.items():
        for exps, series in poly.terms.items():
            word = [Generator(c, e) for c, e in zip(colors, exps)]
            pairs.append((word, series.scale(i_power(-sum(exps)))))
    density = DiffPoly.from_words(pairs, form.budget)
    if form.kind == Kind.FUNCTIONAL:
        return LocalFunctional(density)
    return density


# ---------------------------------------------------------------------------
# closed-form contraction sums


@lru_cache(maxsize=None)
def faulhaber_sum(p):
    """Coefficients c_m of sum_{k=0}^{M} k^p = sum_m c_m M^m."""
    if p < 0:
        raise ValueError('Faulhaber exponent must be nonnegative, got %d' % p)
    coeffs = [Fraction(0)] * (p + 2)
    for j in range(p + 1):
        coeffs[p + 1 - j] += Fraction(comb(p + 1, j)) * bernoulli(j) / (p + 1)
    coeffs[p] += 1
    return tuple(coeffs)


def evaluate_poly(coeffs, value):
    return sum(c * value ** m for m, c in enumerate(coeffs))


def _poly_add(a, b):
    out = [Fraction(0)] * max(len(a), len(b))
    for m, c in enumerate(a):
        out[m] += c
    for m, c in enumerate(b):
        out[m] += c
    return out


@lru_cache(maxsize=None)
def _power_sum_below(p):
    """sum_{k=1}^{M-1} k^p for p >= 1, as coefficients in M."""
    coeffs = list(faulhaber_sum(p))
    coeffs[p] -= 1
    return tuple(coeffs)


@lru_cache(maxsize=None)
def _composition_sum_sorted(exps):
    if len(exps) == 1:
        return tuple([Fraction(0)] * exps[0] + [Fraction(1)])
    head, rest = exps[0], _composition_sum_sorted(exps[1:])
    total = []
    # sum_{k=1}^{M-1} k^head * rest(M - k), rest expanded in (M - k)
    for m, c in enumerate(rest):
        if not c:
            continue
        for r in range(m + 1):
            scale = c * comb(m, r) * (-1) ** r
            partial_sum = [Fraction(0)] * (m - r) + [scale * x for x in _power_sum_below(head + r)]
            total = _poly_add(total, partial_sum)
    while total and not total[-1]:
        total.pop()
    return tuple(total)


def composition_sum(exps):
    """sum over k_1 + ... + k_n = M, all k_i >= 1, of prod k_i^e_i, as coefficients in M."""
    if not exps or min(exps) < 1:
        raise ValueError('Composition sums need exponents >= 1, got %r' % (exps,))
    return _composition_sum_sorted(tuple(sorted(exps)))


def _matchings(left_size, right_size, n_max, allowed):
    """Lists of pairs (s, t) with s increasing and t distinct, of length 1..n_max."""

    def extend(pairs, start, used):
        if pairs:
            yield list(pairs)
        if len(pairs) == n_max:
            return
        for s in range(start, left_size):
            for t in range(right_size):
                if t not in used and allowed(s, t):
                    pairs.append((s, t))
                    used.add(t)
                    yield from extend(pairs, s + 1, used)
                    used.discard(t)
                    pairs.pop()

    if n_max < 1:
        return
    yield from extend([], 0, set())


def _extraction(parities, slots, side):
    """Sign of removing slots one by one, each moved to the given end, and the remaining slots."""
    remaining = list(range(len(parities)))
    sign = 1
    for s in slots:
        pos = remaining.index(s)
        if parities[s]:
            passed = remaining[pos + 1:] if side == RIGHT else remaining[:pos]
            if sum(parities[r] for r in passed) % 2:
                sign = -sign
        remaining.pop(pos)
    return sign, remaining


def _branch(fw, gw, n_max, reverse):
    """
    Contraction terms of one monomial pair, as {(word, n): Scalar} to be
    multiplied by c_f c_g hbar^n. Without `reverse` this is f*g (valid for a
    positive total mode of the free g slots); with it, the graded g*f branch.
    """
    fpar = [letter.parity for letter in fw]
    gpar = [letter.parity for letter in gw]
    if reverse:
        allowed = lambda s, t: (gw[t].color, fw[s].color) in ETA_UP
    else:
        allowed = lambda s, t: (fw[s].color, gw[t].color) in ETA_UP
    out = {}
    for pairs in _matchings(len(fw), len(gw), n_max, allowed):
        n = len(pairs)
        s_slots = [s for s, _ in pairs]
        t_slots = [t for _, t in pairs]
        exps = tuple(fw[s].jet + gw[t].jet + 1 for s, t in pairs)
        if reverse:
            sign_g, grem = _extraction(gpar, t_slots, RIGHT)
            sign_f, frem = _extraction(fpar, s_slots, LEFT)
            eta = 1
            for s, t in pairs:
                eta *= ETA_UP[(gw[t].color, fw[s].color)]
            base = sign_f * sign_g * eta * (-1) ** sum(fw[s].jet for s in s_slots)
            base *= -(-1) ** (word_parity(fw) * word_parity(gw))
        else:
            sign_f, frem = _extraction(fpar, s_slots, RIGHT)
            sign_g, grem = _extraction(gpar, t_slots, LEFT)
            eta = 1
            for s, t in pairs:
                eta *= ETA_UP[(fw[s].color, gw[t].color)]
            base = sign_f * sign_g * eta * (-1) ** sum(gw[t].jet for t in t_slots)
        i_base = sum(fw[s].jet for s in s_slots) + sum(gw[t].jet for t in t_slots) + n
        f_free = [fw[x] for x in frem]
        g_free = [gw[y] for y in grem]
        for m, c in enumerate(composition_sum(exps)):
            if not c:
                continue
            if reverse and m % 2:
                c = -c
            for mu, mult in _multinomial(len(g_free), m).items():
                bumped = [Generator(l.color, l.jet + d) for l, d in zip(g_free, mu)]
                raw = bumped + f_free if reverse else f_free + bumped
                sign, word = koszul_sort(raw)
                if not sign:
                    continue
                value = i_power(i_base - m) * (base * c * mult * sign)
                key = (word, n)
                out[key] = out.get(key, Scalar(0)) + value
    return {key: value for key, value in out.items() if value}


def _hbar_room(series, budget):
    low = series.min_hbar()
    return budget.hbar_order - (low or 0)


def commutator_density(f, g, budget, certify=True):
    """
    [f, integral g] for a density f, in closed form. Both orderings of the
    star product are evaluated as polynomials in the free modes; locality
    means they coincide, which is certified unless `certify` is False.
    """
    f = f.density if isinstance(f, LocalFunctional) else f
    g = g.density if isinstance(g, LocalFunctional) else g
    terms = {}
    pairs_done = 0
    for fw, fc in f.items():
        for gw, gc in g.items():
            n_max = min(_hbar_room(fc, budget) - (gc.min_hbar() or 0), len(fw), len(gw))
            if n_max < 1:
                continue
            forward = _branch(fw, gw, n_max, reverse=False)
            if certify:
                backward = _branch(fw, gw, n_max, reverse=True)
                if forward != backward:
                    raise NonLocalCommutatorError(
                        'Orderings disagree for [%s, %s]' % (' '.join(map(str, fw)), ' '.join(map(str, gw)))
                    )
            if not forward:
                continue
            coeff = fc.recapped(budget.caps) * gc.recapped(budget.caps)
            by_n = defaultdict(dict)
            for (word, n), value in forward.items():
                by_n[n][word] = value
            for n, words in by_n.items():
                shifted = coeff.shift(hbar=n).with_caps(budget.caps)
                if not shifted:
                    continue
                for word, value in words.items():
                    _add_into(terms, word, shifted.scale(value))
            pairs_done += 1
    logger.debug('Closed-form commutator: %d monomial pairs contributed, %d words', pairs_done, len(terms))
    return DiffPoly(terms, budget, f.loss + g.loss)


def commutator_functionals(f, g, budget, certify=True):
    return LocalFunctional(commutator_density(f, g, budget, certify))


def reduced_commutator(f, g, budget, certify=True):
    """(1/hbar)[f, integral g], computed one hbar order higher and shifted down."""
    raised = budget.replace(hbar_order=budget.hbar_order + 1)
    result = commutator_density(f, g, raised, certify)
    return result.shift(hbar=-1).with_budget(budget)


def solve_dx_and_degree(rhs, alpha=None):
    """
    Invert d_x (D - 1) on rhs: divide the vertex form by i(a_1 + ... + a_n),
    then each monomial by letters + eps-power + 2 hbar-power - 1. Monomials
    with eigenvalue 0 (Casimir densities) are set to zero.
    """
    if rhs.is_zero():
        return DiffPoly(budget=rhs.budget, loss=rhs.loss)
    if not is_zero_functional(rhs):
        raise ZeroModeObstructionError('Right-hand side for color %s is not a total derivative' % alpha)
    vertex = to_vertex(rhs, Kind.DENSITY)
    divided = VertexForm(
        Kind.DENSITY,
        {colors: poly.divided_by_total().scale(Scalar(0, -1)) for colors, poly in vertex.terms.items()},
        rhs.budget,
    )
    primitive = from_vertex(divided)

    def eigen_inverse(word, n, e, h):
        eigenvalue = len(word) + e + 2 * h - 1
        return Fraction(1, eigenvalue) if eigenvalue else 0

    result = primitive.map_weighted(eigen_inverse)
    zeroed = primitive.map_weighted(lambda word, n, e, h: 1 if len(word) + e + 2 * h == 1 else 0)
    if zeroed:
        logger.warning('Zeroed Casimir component for color %s: %s', alpha, ' + '.join(zeroed.text_lines()))
    result.loss += rhs.loss
    return result


# ---------------------------------------------------------------------------
# concrete modes: the oracle


class PMode(namedtuple('PMode', ['color', 'mode'])):
    __slots__ = ()

    def __str__(self):
        return 'p%d_%d' % (self.color, self.mode)


ModeWindow = namedtuple('ModeWindow', ['K'])


def mode_window(K):
    if not isinstance(K, int) or K < 1:
        raise ValueError('Mode window must be a positive integer, got %r' % (K,))
    return ModeWindow(K)


class PPoly(object):
    """Polynomial in concrete p-modes: sorted p-words to coefficient series."""

    __slots__ = ('terms',)

    def __init__(self, terms=None):
        self.terms = {w: s for w, s in (terms or {}).items() if s}

    @classmethod
    def from_words(cls, pairs):
        terms = {}
        for word, coeff in pairs:
            sign, sorted_word = koszul_sort(tuple(word))
            if sign:
                coeff = TruncatedSeries.coerce(coeff)
                _add_into(terms, sorted_word, coeff if sign > 0 else -coeff)
        return cls(terms)

    @classmethod
    def letter(cls, color, mode):
        return cls({(PMode(color, mode),): TruncatedSeries.constant(1)})

    def items(self):
        return sorted(self.terms.items())

    def __add__(self, other):
        terms = dict(self.terms)
        for w, s in other.terms.items():
            _add_into(terms, w, s)
        return PPoly(terms)

    def __neg__(self):
        return PPoly({w: -s for w, s in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, factor):
        return PPoly({w: s * factor for w, s in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, PPoly):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def restricted(self, max_mode):
        return PPoly({w: s for w, s in self.terms.items() if all(abs(l.mode) <= max_mode for l in w)})

    def __str__(self):
        if not self.terms:
            return '0'
        return '\n'.join('(%s) * %s' % (s, ' '.join(map(str, w)) or '1') for w, s in self.items())


def instantiate(f, window, kind=None):
    """Expand a density or functional over all mode tuples in |k| <= K."""
    if isinstance(f, LocalFunctional):
        kind = Kind.FUNCTIONAL
        f = f.density
    kind = kind or Kind.DENSITY
    K = window.K
    modes = range(-K, K + 1)
    pairs = []
    for word, series in f.items():
        n = len(word)
        if n == 0:
            if kind == Kind.DENSITY:
                pairs.append(((), series))
            continue
        if kind == Kind.FUNCTIONAL:
            tuples = (head + (-sum(head),) for head in product(modes, repeat=n - 1) if abs(sum(head)) <= K)
        else:
            tuples = product(modes, repeat=n)
        for a in tuples:
            value = Scalar(1)
            for letter, k in zip(word, a):
                if letter.jet:
                    value = value * (I * k) ** letter.jet
            if value:
                pairs.append(([PMode(l.color, k) for l, k in zip(word, a)], series.scale(value)))
    return PPoly.from_words(pairs)


def _contract(left, right, budget, max_mode=None, pair_factor=None):
    """left * right minus the plain product, restricted to free modes |k| <= max_mode."""
    index = defaultdict(set)
    for word in right.terms:
        for letter in word:
            index[letter].add(word)
    terms = {}
    for lw, lc in left.terms.items():
        candidates = set()
        for letter in lw:
            if letter.mode > 0:
                for (a, b) in ETA_UP:
                    if a == letter.color:
                        candidates |= index.get(PMode(b, -letter.mode), set())
        lpar = [PARITY[l.color] for l in lw]
        for rw in sorted(candidates):
            rc = right.terms[rw]
            n_max = _hbar_room(lc, budget) - (rc.min_hbar() or 0)
            if n_max < 1:
                continue
            rpar = [PARITY[l.color] for l in rw]
            factor = pair_factor(lw, rw) if pair_factor else 1

            def allowed(s, t):
                return lw[s].mode > 0 and rw[t].mode == -lw[s].mode and (lw[s].color, rw[t].color) in ETA_UP

            for pairs in _matchings(len(lw), len(rw), n_max, allowed):
                sign_l, lrem = _extraction(lpar, [s for s, _ in pairs], RIGHT)
                sign_r, rrem = _extraction(rpar, [t for _, t in pairs], LEFT)
                free = [lw[x] for x in lrem] + [rw[y] for y in rrem]
                if max_mode is not None and any(abs(l.mode) > max_mode for l in free):
                    continue
                sign, word = koszul_sort(tuple(free))
                if not sign:
                    continue
                weight = sign * sign_l * sign_r * factor
                for s, t in pairs:
                    weight *= lw[s].mode * ETA_UP[(lw[s].color, rw[t].color)]
                n = len(pairs)
                product = lc.recapped(budget.caps) * rc.recapped(budget.caps)
                series = product.shift(hbar=n).scale(i_power(n) * weight)
                _add_into(terms, word, series)
    return PPoly(terms)


def star(f, g, budget):
    """Star product of concrete p-polynomials."""
    plain = PPoly.from_words(
        (lw + rw, (lc * rc).with_caps(budget.caps)) for lw, lc in f.terms.items() for rw, rc in g.terms.items()
    )
    return plain + _contract(f, g, budget)


def commutator(f, g, budget, max_mode=None):
    """Graded commutator f*g - (-1)^{|f||g|} g*f; the plain products cancel."""
    forward = _contract(f, g, budget, max_mode)
    backward = _contract(
        g, f, budget, max_mode, pair_factor=lambda gw, fw: -(-1) ** (word_parity(gw) * word_parity(fw))
    )
    return forward + backward


def brute_force_commutator(f, g, window, budget):
    """
    Oracle for [f, g]: coefficients of p-monomials with all modes within
    K/2, computed on windows K and K + 4, which must agree.
    """
    max_mode = window.K // 2
    results = []
    for K in (window.K, window.K + 4):
        fk = instantiate(f, ModeWindow(K))
        gk = instantiate(g, ModeWindow(K))
        results.append(commutator(fk, gk, budget, max_mode))
    if results[0] != results[1]:
        raise StabilizationError(
            'Oracle differs between K=%d and K=%d:\n%s\n---\n%s' % (window.K, window.K + 4, results[0], results[1])
        )
    logger.debug('Oracle at K=%d: %d p-monomials', window.K, len(results[0].terms))
    return results[0]
