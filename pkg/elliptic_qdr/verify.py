"""
Verification suites. Each suite returns a list of CheckResult; an identity
holds only if it is exactly zero (or exactly equal) at the budget used.
"""
import logging
import random

from collections import namedtuple
from enum import Enum
from fractions import Fraction
from itertools import combinations_with_replacement
from math import factorial

from elliptic_qdr.diffpoly import (
    COLORS,
    DiffPoly,
    Generator,
    LocalFunctional,
    dilaton_vector_field,
    is_zero_functional,
    word_parity,
)
from elliptic_qdr.drhell import hierarchy, limits
from elliptic_qdr.drhell.pairing import PAIRING
from elliptic_qdr.drhell.potential import (
    ClosedForm,
    classical_part,
    eisenstein_dq,
    g11,
    potential_closed,
    potential_direct,
    primary_hamiltonian,
)
from elliptic_qdr.fock import brute_force_commutator, commutator_density, instantiate, mode_window
from elliptic_qdr.quasimodular import (
    QModForm,
    d_g2,
    d_q,
    eisenstein_qexp,
    eisenstein_qexp_lambert,
    qmod_d_q,
    qmod_expand,
    weight_basis,
)
from elliptic_qdr.scalars import I, Scalar, TruncationBudget, bernoulli
from elliptic_qdr.utils import parallel_map

logger = logging.getLogger(__name__)

# inconsistent marks a failure where two computations of one value disagree
CheckResult = namedtuple('CheckResult', ['identity', 'ok', 'detail', 'inconsistent'], defaults=(False,))

EXACT_ZERO = 'EXACT-ZERO'

G2_HEAD = (Fraction(-1, 24), 1, 3, 4, 7, 6)

# Budget for the graded Lie checks: constant coefficients, room for nested brackets.
ALGEBRA_BUDGET = TruncationBudget(q_order=0, eps_order=0, hbar_order=2, u_degree=9, dx_degree=30)


class Suite(Enum):
    ALGEBRA = 1
    ORACLE = 2
    COMMUTATIVITY = 3
    DILATON = 4
    RECURSION = 5
    LIMITS = 6
    ALL = 7

    def __str__(self):
        return self.name.lower()

    @classmethod
    def from_string(cls, s):
        try:
            return Suite[s.upper()]
        except KeyError:
            raise ValueError()


def equality(identity, lhs, rhs):
    """CheckResult for lhs == rhs, with the first differing line as detail."""
    if lhs == rhs:
        return CheckResult(identity, True, EXACT_ZERO)
    difference = lhs - rhs
    lines = difference.text_lines() if hasattr(difference, 'text_lines') else [str(difference)]
    return CheckResult(identity, False, lines[0] if lines else str(difference))


def functional_zero(identity, density):
    density = density.density if isinstance(density, LocalFunctional) else density
    if is_zero_functional(density) and not density.loss:
        return CheckResult(identity, True, EXACT_ZERO)
    detail = hierarchy.first_surviving(density) or 'lost %d monomials' % density.loss
    return CheckResult(identity, False, detail)


def truth(identity, ok, detail=''):
    return CheckResult(identity, bool(ok), EXACT_ZERO if ok else detail)


# ---------------------------------------------------------------------------
# random inputs


def random_density(rng, budget, parity=None, max_degree=3, max_jet=2, terms=2):
    """Random homogeneous density with small integer coefficients."""
    pairs = []
    while len(pairs) < terms:
        degree = rng.randint(1, max_degree)
        word = [Generator(rng.choice(COLORS), rng.randint(0, max_jet)) for _ in range(degree)]
        if parity is not None and word_parity(word) != parity:
            continue
        if len(set(l for l in word if l.parity)) < sum(l.parity for l in word):
            continue
        coeff = rng.choice([-3, -2, -1, 1, 2, 3])
        pairs.append((word, coeff))
        if parity is None:
            parity = word_parity(word)
    return DiffPoly.from_words(pairs, budget)


def _parity(f):
    return f.parity() or 0


# ---------------------------------------------------------------------------
# suites


def check_algebra(count=100, seed=0):
    results = []
    g2 = eisenstein_qexp(2, 10)
    results.append(
        truth(
            'G2 = -1/24 + q + 3q^2 + 4q^3 + 7q^4 + 6q^5',
            all(g2.coefficient(q=n) == c for n, c in enumerate(G2_HEAD)),
            str(g2),
        )
    )
    for k in (2, 4, 6, 8):
        results.append(equality('G%d divisor sum = Lambert sum' % k, eisenstein_qexp(k, 10), eisenstein_qexp_lambert(k, 10)))

    G2, G4 = QModForm.generator(2), QModForm.generator(4)
    expected = G2 * G2 * (-2) + G4 * Fraction(5, 6)
    results.append(equality('D_q G2 = -2 G2^2 + (5/6) G4', qmod_d_q(G2), expected))
    results.append(equality('D_q G2 q-expansion through q^10', d_q(eisenstein_qexp(2, 10)), qmod_expand(expected, 10)))

    for k in (2, 4, 6, 8):
        for exps in weight_basis(k):
            form = QModForm({exps: 1})
            bracket = d_g2(qmod_d_q(form)) - qmod_d_q(d_g2(form))
            results.append(equality('[d/dG2, D_q] = -2*%d on %s' % (k, form), bracket, form * (-2 * k)))

    results.append(truth('pairing is graded symmetric', PAIRING.is_graded_symmetric()))
    results.append(truth('pairing inverse', PAIRING.check_inverse()))

    rng = random.Random(seed)
    algebra_budget = ALGEBRA_BUDGET
    for trial in range(count):
        f, g, h = (random_density(rng, algebra_budget, rng.randint(0, 1)) for _ in range(3))
        pf, pg = _parity(f), _parity(g)
        fg = commutator_density(f, g, algebra_budget)
        gf = commutator_density(g, f, algebra_budget)
        results.append(functional_zero('antisymmetry #%d' % trial, fg + gf.scale((-1) ** (pf * pg))))
        jacobi = (
            commutator_density(f, commutator_density(g, h, algebra_budget), algebra_budget)
            - commutator_density(fg, h, algebra_budget)
            - commutator_density(g, commutator_density(f, h, algebra_budget), algebra_budget).scale((-1) ** (pf * pg))
        )
        results.append(functional_zero('Jacobi #%d' % trial, jacobi))
    return results


def check_oracle(budget, modes=8, count=50, seed=0):
    """Closed-form commutators against the p-variable brute force on random functional pairs."""
    rng = random.Random(seed)
    seeds = [rng.randrange(2 ** 32) for _ in range(2 * count)]
    oracle_budget = budget.replace(q_order=0, eps_order=0, u_degree=6, dx_degree=max(budget.dx_degree, 30))
    window = mode_window(modes)

    def rng_for(index):
        return random.Random(seeds[index])

    def one(trial):
        f = random_density(rng_for(trial), oracle_budget, trial % 2)
        g = random_density(rng_for(trial + count), oracle_budget, (trial // 2) % 2)
        closed = commutator_density(f, g, oracle_budget)
        expected = instantiate(LocalFunctional(closed), window).restricted(modes // 2)
        oracle = brute_force_commutator(LocalFunctional(f), LocalFunctional(g), window, oracle_budget)
        result = equality('oracle #%d' % trial, oracle, expected)
        return result if result.ok else result._replace(inconsistent=True)

    return parallel_map(one, range(count))


def commutativity_pairs():
    """Unordered pairs of (color, index) for index 0 and 1; antisymmetry covers the rest."""
    hamiltonians = [(alpha, p) for alpha in COLORS for p in (0, 1)]
    return list(combinations_with_replacement(hamiltonians, 2))


def check_commutativity(budget):
    def one(pair):
        (alpha, p), (beta, s) = pair
        report = hierarchy.verify_commutativity(alpha, p, beta, s, budget)
        detail = EXACT_ZERO if report.ok else (report.offending or 'lost %d monomials' % report.loss)
        return CheckResult('[G_{%d,%d}, G_{%d,%d}]' % (alpha, p, beta, s), report.ok, detail)

    return parallel_map(one, commutativity_pairs())


def check_dilaton(budget):
    results = []
    potential = potential_direct(budget)
    results.append(equality('classical part', potential.density.project(hbar=0), classical_part(budget)))
    for form in ClosedForm:
        closed = potential_closed(budget, form)
        results.append(functional_zero('potential = closed %s form' % form, potential.density - closed.density))
    closed = potential_closed(budget).density
    dilaton = dilaton_vector_field(closed) - closed.scale(2)
    results.append(functional_zero('G_11 = (D - 2) G', g11(budget).density - dilaton))
    if budget.hbar_order >= 1:
        # the potential is hbar-linear, so one hbar order is the whole comparison
        linear = budget.replace(hbar_order=1)
        rebuilt = hierarchy.reconstruct(1, 1, linear)[-1]
        generator = hierarchy.g11_hamiltonian(linear)
        weight = min(rebuilt.weight, generator.weight)
        difference = hierarchy.modulo_casimirs(rebuilt.density - generator.density).truncate_weight(weight)
        results.append(functional_zero('recursion G_11 = dilaton G_11', difference))
    return results


def check_recursion(budget):
    results = []
    for alpha in COLORS:
        ok, difference = hierarchy.reconstruction_matches_primary(alpha, budget)
        results.append(
            truth('reconstruct(%d, 0) = primary' % alpha, ok, hierarchy.first_surviving(difference) or '')
        )
    u1, u2, u3, u4 = (Generator(c, 0) for c in COLORS)
    known = {
        1: DiffPoly.from_words([((u1, u4), 1), ((u2, u3), 1)]),
        2: DiffPoly.from_words([((u1, u3), 1)]),
        3: DiffPoly.from_words([((u1, u2), -1)]),
    }
    for alpha, expected in known.items():
        density = primary_hamiltonian(alpha, budget).density
        results.append(functional_zero('G_{%d,0} known value' % alpha, density - expected.with_budget(budget)))
    g40 = primary_hamiltonian(4, budget).density
    results.append(
        equality('G_{4,0} classical part', g40.project(hbar=0), DiffPoly.from_words([((u1, u1), Fraction(1, 2))], budget))
    )
    # hbar-corrections: i hbar (u1_1 u4_1 + u2_1 u3_1) D_q G2 at eps^0, from u4 in the n = 3 cell
    if budget.hbar_order >= 1 and budget.u_degree >= 3:
        series = eisenstein_dq(2, 1, budget.caps).shift(hbar=1).scale(I)
        x = DiffPoly.from_words(
            [((Generator(1, 1), Generator(4, 1)), 1), ((Generator(2, 1), Generator(3, 1)), 1)], budget
        )
        results.append(equality('G_{4,0} hbar family', g40.project(eps=0).truncate_degree(2).project(hbar=1), x.scale(series)))
    return results


def _dispersionless_display(budget):
    """cubic + i hbar (u1_1 u4_1 + u2_1 u3_1) sum_m (u4)^m/m! D_q^m G2."""
    caps = budget.caps
    x = [(Generator(1, 1), Generator(4, 1)), (Generator(2, 1), Generator(3, 1))]
    pairs = []
    for m in range(budget.u_degree - 1):
        series = eisenstein_dq(2, m, caps).shift(hbar=1).with_caps(caps).scale(I * Fraction(1, factorial(m)))
        for word in x:
            pairs.append((word + (Generator(4, 0),) * m, series))
    return classical_part(budget) + DiffPoly.from_words(pairs, budget)


def _ds_display_potential():
    u1, u2, u3, u4 = (Generator(c, 0) for c in COLORS)
    cubic = limits.DoubleScalingPoly.from_words(
        [((u1, u1, u4), 0, 0, 0, 0, Fraction(1, 2)), ((u1, u2, u3), 0, 0, 0, 0, 1)]
    )
    return cubic, _ds_x()


def _ds_x():
    return limits.DoubleScalingPoly.from_words(
        [
            ((Generator(1, 1), Generator(4, 1)), 0, 0, 2, 2, 1),
            ((Generator(2, 1), Generator(3, 1)), 0, 0, 2, 2, 1),
        ]
    )


def check_limits(budget):
    results = []
    if budget.hbar_order >= 1:
        results.append(
            functional_zero(
                'dispersionless display',
                limits.dispersionless(budget).density - _dispersionless_display(budget),
            )
        )
    for g in range(1, 4):
        constant = eisenstein_qexp(2 * g, 0).coefficient()
        results.append(equality('G_%d(0) = -B_%d/%d' % (2 * g, 2 * g, 4 * g), constant, -bernoulli(2 * g) / (4 * g)))
    trigonometric = limits.trigonometric(budget).density
    for g in range(1, budget.eps_order // 2 + 2):
        if budget.hbar_order < 1 or budget.u_degree < 2:
            break
        word = (Generator(1, 2 * g - 1), Generator(4, 1))
        expected = I * (-bernoulli(2 * g) / (4 * g)) * Fraction(1, 2 ** (2 * g - 2) * factorial(2 * g - 1))
        value = trigonometric.coefficient(word).coefficient(eps=2 * g - 2, hbar=1)
        results.append(equality('trigonometric genus %d coefficient' % g, value, expected))

    cubic, x = _ds_display_potential()
    c6 = Scalar(0, Fraction(1, 6))
    c3 = Scalar(0, Fraction(1, 3))
    w = limits.DoubleScalingPoly.w_power
    h = limits.ds_potential(0)
    results.append(equality('double scaling potential at eps = 0', h, cubic + x * w(-2, c6)))
    results.append(
        truth(
            'double scaling potential = rescaled cells of the potential',
            limits.ds_potential_matches_cells(budget.eps_order, budget.u_degree),
        )
    )
    partial4 = limits.ds_partial(h, 4, 0)
    u1 = Generator(1, 0)
    half_u1_sq = limits.DoubleScalingPoly.from_words([((u1, u1), 0, 0, 0, 0, Fraction(1, 2))])
    results.append(equality('h_{4,0} display', partial4, half_u1_sq - x * w(-3, c3)))
    results.append(
        truth(
            'h_{4,0} density is the variational derivative mod d_x',
            limits.ds_is_zero_functional(limits.ds_hamiltonian(4) - partial4),
        )
    )
    # written with tau: -(2/3) pi tau X W^-3
    w_cubed = limits.DoubleScalingPoly({limits.DSKey((), -3, 0, 0, 1): Fraction(-2, 3)})
    tau_term = x * limits.tau_symbol() * w_cubed
    results.append(equality('h_{1,1} display', limits.ds_g11(0), cubic + tau_term))

    c60 = Scalar(0, Fraction(1, 60))
    eps2 = limits.ds_potential(2).project_eps(2)
    j = Generator
    first = limits.DoubleScalingPoly.from_words(
        [
            ((j(1, 3), j(4, 1)), -4, 2, 2, 4, Fraction(1, 6)),
            ((j(1, 1), j(4, 3)), -4, 2, 2, 4, Fraction(1, 6)),
            ((j(2, 3), j(3, 1)), -4, 2, 2, 4, Fraction(1, 6)),
            ((j(2, 1), j(3, 3)), -4, 2, 2, 4, Fraction(1, 6)),
            ((j(1, 1), j(4, 1), j(4, 2)), -5, 2, 2, 4, Fraction(-4, 6)),
            ((j(2, 1), j(3, 1), j(4, 2)), -5, 2, 2, 4, Fraction(-4, 6)),
        ]
    )
    results.append(equality('double scaling eps^2 term', eps2, first.scale(c60)))

    for alpha in COLORS:
        check = limits.verify_classical_recursion(alpha)
        detail = check.residue.text_lines()[0] if check.residue else ''
        results.append(truth('classical recursion color %d' % alpha, check.ok, detail))
    for alpha, beta in combinations_with_replacement(COLORS, 2):
        results.append(
            truth('{h_{%d,0}, h_{%d,0}} = 0' % (alpha, beta), limits.classical_primaries_commute(alpha, beta))
        )

    u4 = Generator(4, 0)
    f = DiffPoly.from_words([((u1, u1), Fraction(1, 2))])
    g = DiffPoly.from_words([((u4, u4), Fraction(1, 2))])
    expected = DiffPoly.from_words([((u1, Generator(4, 1)), 1)])
    bracket = limits.classical_bracket(f, g, budget)
    results.append(functional_zero('{(u1)^2/2, (u4)^2/2} = u1 u4_1', bracket.density - expected.with_budget(bracket.budget)))
    return results


def run_suite(suite, budget, modes=8, count=None, seed=0):
    if suite == Suite.ALL:
        results = []
        for single in Suite:
            if single != Suite.ALL:
                results.extend(run_suite(single, budget, modes, count, seed))
        return results
    logger.info('Running %s suite at %s', suite, budget)
    if suite == Suite.ALGEBRA:
        return check_algebra(count or 100, seed)
    if suite == Suite.ORACLE:
        return check_oracle(budget, modes, count or 50, seed)
    if suite == Suite.COMMUTATIVITY:
        return check_commutativity(budget)
    if suite == Suite.DILATON:
        return check_dilaton(budget)
    if suite == Suite.RECURSION:
        return check_recursion(budget)
    if suite == Suite.LIMITS:
        return check_limits(budget)
    raise ValueError('Unknown suite %r' % suite)


def report_lines(results):
    return ['%s: %s' % (r.identity, r.detail if r.ok else 'FAIL ' + r.detail) for r in results]
