"""
The potential of the quantum hierarchy of the elliptic curve, assembled
three ways: term by term from the double sum over (g, n), from the
p-variable intersection formula with its selection rules, and in closed
form through the operator S_eps and the series G(eps, q) = sum eps^2g G_{2g+2}.
"""
import logging

from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import factorial

from elliptic_qdr.diffpoly import (
    LEFT,
    DiffPoly,
    Generator,
    LocalFunctional,
    d_x_power,
    is_zero_functional,
    mul,
    partial,
)
from elliptic_qdr.fock import Kind, ModePoly, VertexForm, from_vertex
from elliptic_qdr.quasimodular import eisenstein_qexp
from elliptic_qdr.scalars import I, SeriesCaps, TruncatedSeries
from elliptic_qdr.utils import InternalInconsistencyError

logger = logging.getLogger(__name__)

E1 = 'e1'
E23 = 'e23'


class AssemblyMismatchError(InternalInconsistencyError):
    pass


class ClosedForm(Enum):
    HADAMARD = 1
    DIAG = 2

    def __str__(self):
        return self.name.lower()

    @classmethod
    def from_string(cls, s):
        try:
            return ClosedForm[s.upper()]
        except KeyError:
            raise ValueError()


def compositions(total, parts):
    """Tuples of `parts` nonnegative integers summing to `total`."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def genus_range(budget):
    """Genera g >= 1 whose eps^(2g-2) fits the budget."""
    if budget.hbar_order < 1:
        return range(1, 1)
    return range(1, budget.eps_order // 2 + 2)


def eisenstein_dq(k, m, caps):
    """D_q^m G_k as a q-series under the given caps."""
    series = eisenstein_qexp(k, caps.q)
    return series.weighted(lambda n, e, h: n ** m).with_caps(caps)


def classical_part(budget=None):
    u1, u2, u3, u4 = (Generator(c, 0) for c in (1, 2, 3, 4))
    return DiffPoly.from_words([((u1, u1, u4), Fraction(1, 2)), ((u1, u2, u3), 1)], budget)


def intersection_lambda_poly(kind, g, n, q_order):
    """
    The lambda_{g-1} intersection number against the DR cycle as a
    polynomial in a_1..a_n: a_1^2 (kind e1) or -a_1 a_2 (kind e23), times
    2^(2-2g) sum_{sum b = g-1} prod a_i^(2b_i)/(2b_i+1)!, times D_q^(n-2) G_2g.
    """
    if kind not in (E1, E23):
        raise ValueError('Unknown intersection kind %r' % kind)
    if g < 1 or n < 2:
        raise ValueError('Intersection formula needs g >= 1 and n >= 2, got g=%d n=%d' % (g, n))
    series = eisenstein_dq(2 * g, n - 2, SeriesCaps(q_order, None, None))
    prefactor = Fraction(1, 2 ** (2 * g - 2))
    terms = {}
    for b in compositions(g - 1, n):
        exps = [2 * bi for bi in b]
        weight = prefactor
        for bi in b:
            weight /= factorial(2 * bi + 1)
        if kind == E1:
            exps[0] += 2
        else:
            exps[0] += 1
            exps[1] += 1
            weight = -weight
        terms[tuple(exps)] = series.scale(weight)
    return ModePoly(n, terms)


def intersection_lambda(kind, g, n, modes, q_order):
    if len(modes) != n:
        raise ValueError('Expected %d modes, got %d' % (n, len(modes)))
    return intersection_lambda_poly(kind, g, n, q_order).evaluate(modes)


def potential_cells(eps_order, u_degree):
    """
    Monomials of the hbar-linear part: (g, n, word, weight) such that the
    potential is the cubic plus sum i hbar eps^(2g-2) weight D_q^(n-2) G_2g word,
    with g >= 1 up to eps_order and 2 <= n <= u_degree.
    """
    for g in range(1, eps_order // 2 + 2):
        for n in range(2, u_degree + 1):
            prefactor = Fraction(1, 2 ** (2 * g - 2) * factorial(n - 2))
            for b in compositions(g - 1, n):
                weight = prefactor
                for bi in b:
                    weight /= factorial(2 * bi + 1)
                tail = [Generator(4, 2 * bi) for bi in b[2:]]
                j1, j2 = 2 * b[0] + 1, 2 * b[1] + 1
                yield g, n, [Generator(1, j1), Generator(4, j2)] + tail, weight
                yield g, n, [Generator(2, j1), Generator(3, j2)] + tail, weight


def _first_display(budget):
    """Classical cubic plus the hbar-linear double sum over g >= 1, 2 <= n <= u_degree."""
    caps = budget.caps
    pairs = []
    if budget.hbar_order >= 1:
        series = {}
        for g, n, word, weight in potential_cells(budget.eps_order, budget.u_degree):
            if (g, n) not in series:
                series[(g, n)] = eisenstein_dq(2 * g, n - 2, caps).shift(hbar=1, eps=2 * g - 2).with_caps(caps)
            if series[(g, n)]:
                pairs.append((word, series[(g, n)].scale(I * weight)))
        logger.debug('Potential cells: %d monomials before collection', len(pairs))
    return classical_part(budget) + DiffPoly.from_words(pairs, budget)


def _from_intersections(budget):
    """
    The same potential from the p-variable formula: genus-0 three-point
    data plus, for g >= 1, the only classes surviving the selection rules,
    colors (1, 4, ..., 4) and (2, 3, 4, ..., 4) against lambda_{g-1}.
    """
    caps = budget.caps
    terms = {
        (1, 1, 4): ModePoly(3, {(0, 0, 0): Fraction(1, 2)}),
        (1, 2, 3): ModePoly(3, {(0, 0, 0): 1}),
    }
    for g in genus_range(budget):
        # (i hbar)^g (-eps^2 / i hbar)^(g-1)
        factor = TruncatedSeries.monomial(I * (-1) ** (g - 1), eps=2 * g - 2, hbar=1, caps=caps)
        if not factor:
            continue
        for n in range(2, budget.u_degree + 1):
            for kind, colors, orderings in (
                (E1, (1,) + (4,) * (n - 1), factorial(n - 1)),
                (E23, (2, 3) + (4,) * (n - 2), factorial(n - 2)),
            ):
                poly = intersection_lambda_poly(kind, g, n, budget.q_order)
                poly = ModePoly(n, {e: (s * factor).scale(Fraction(1, orderings)) for e, s in poly.terms.items()})
                terms[colors] = terms[colors] + poly if colors in terms else poly
    return from_vertex(VertexForm(Kind.FUNCTIONAL, terms, budget))


@lru_cache(maxsize=None)
def potential_direct(budget):
    """Term-by-term potential, cross-checked against the intersection assembly."""
    logger.info('Assembling potential at %s', budget)
    density = _first_display(budget)
    dual = _from_intersections(budget)
    if not is_zero_functional(density - dual.density):
        raise AssemblyMismatchError('Double-sum and intersection assemblies of the potential differ')
    if density.loss:
        logger.warning('Potential lost %d monomials to dx_degree %d', density.loss, budget.dx_degree)
    return LocalFunctional(density)


def s_epsilon(f, budget):
    """sum_b eps^2b d_x^2b f / (2^2b (2b+1)!), i.e. sinh(eps d_x/2)/(eps d_x/2)."""
    result = DiffPoly(budget=budget)
    for b in range(budget.eps_order // 2 + 1):
        weight = TruncatedSeries.monomial(Fraction(1, 2 ** (2 * b) * factorial(2 * b + 1)), eps=2 * b)
        result = result + d_x_power(f, 2 * b).scale(weight).with_budget(budget)
    return result


def hadamard(f, g):
    """Coefficientwise product in eps of two series."""
    g_parts = g.eps_coefficients()
    total = TruncatedSeries(caps=f.caps.meet(g.caps))
    for e, part in f.eps_coefficients().items():
        if e in g_parts:
            total = total + (part * g_parts[e]).shift(eps=e)
    return total


def hadamard_poly(f, series):
    return f.map_coefficients(lambda s: hadamard(s, series))


def diag(h):
    """sum_i c_ii eps^i for a mapping {(i, j): c_ij}; values may be series or polynomials."""
    total = None
    for (i, j), value in sorted(h.items(), key=lambda item: item[0]):
        if i != j:
            continue
        term = value.shift(eps=i)
        total = term if total is None else total + term
    return total


def big_g(budget, m=0):
    """D_q^m G(eps, q) with G(eps, q) = sum_g eps^2g G_{2g+2}(q)."""
    caps = budget.caps
    total = TruncatedSeries(caps=caps)
    for g in range(budget.eps_order // 2 + 1):
        total = total + eisenstein_dq(2 * g + 2, m, caps).shift(eps=2 * g)
    return total


def qexp_substitute(series, f, budget):
    """series(q e^f), with e^(n f) expanded to the u-degree of the budget."""
    result = DiffPoly(budget=budget)
    f_power = DiffPoly.constant(1, budget)
    for m in range(budget.u_degree + 1):
        if m:
            f_power = mul(f_power, f).scale(Fraction(1, m))
        if f_power.is_zero():
            break
        coefficient = series.weighted(lambda n, e, h: n ** m)
        result = result + f_power.scale(coefficient)
    return result


def _x_factor(budget):
    s = {c: s_epsilon(DiffPoly.letter(c, 1, budget=budget), budget) for c in (1, 2, 3, 4)}
    return mul(s[1], s[4]) + mul(s[2], s[3])


def potential_closed(budget, form=ClosedForm.HADAMARD):
    """
    i hbar [(S(u1_x) S(u4_x) + S(u2_x) S(u3_x)) exp(S(u4) D_q)] (.) G(eps, q)
    plus the classical cubic, in the Hadamard or the diagonal form.
    """
    x_factor = _x_factor(budget)
    s4 = s_epsilon(DiffPoly.letter(4, 0, budget=budget), budget)
    hbar = TruncatedSeries.monomial(I, hbar=1, caps=budget.caps)
    quantum = DiffPoly(budget=budget)
    if form == ClosedForm.HADAMARD:
        s4_power = DiffPoly.constant(1, budget)
        for m in range(budget.u_degree - 1):
            if m:
                s4_power = mul(s4_power, s4).scale(Fraction(1, m))
            quantum = quantum + hadamard_poly(mul(x_factor, s4_power), big_g(budget, m))
    elif form == ClosedForm.DIAG:
        cells = {}
        for j in range(budget.eps_order // 2 + 1):
            substituted = qexp_substitute(eisenstein_qexp(2 * j + 2, budget.q_order), s4, budget)
            product = mul(x_factor, substituted)
            for e in range(0, budget.eps_order + 1, 2):
                cells[(e, 2 * j)] = product.project(eps=e).shift(eps=-e)
        quantum = diag(cells) or quantum
    else:
        raise ValueError('Unknown closed form %r' % form)
    return LocalFunctional(classical_part(budget) + quantum.scale(hbar))


def g11(budget):
    """(eps d/deps + 2 hbar d/dhbar + sum u d/du - 2) applied to the potential."""
    density = potential_direct(budget).density
    return LocalFunctional(density.map_weighted(lambda word, n, e, h: len(word) + e + 2 * h - 2))


def primary_hamiltonian(alpha, budget):
    """Zero-jet left partial derivative of the potential density by u^alpha."""
    density = potential_direct(budget).density
    return LocalFunctional(partial(density, alpha, 0, LEFT))
