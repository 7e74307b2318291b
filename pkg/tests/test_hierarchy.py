import math

from fractions import Fraction

import pytest

from elliptic_qdr.diffpoly import DiffPoly, Generator, LocalFunctional, is_zero_functional
from elliptic_qdr.drhell import hierarchy
from elliptic_qdr.drhell.pairing import PAIRING, casimir_density
from elliptic_qdr.scalars import TruncationBudget
from elliptic_qdr.verify import check_commutativity, check_dilaton, commutativity_pairs

CLASSICAL = TruncationBudget(q_order=0, eps_order=0, hbar_order=0, u_degree=3, dx_degree=7)
SMALL = TruncationBudget(q_order=1, eps_order=2, hbar_order=1, u_degree=4, dx_degree=7)
BRACKET = TruncationBudget(q_order=1, eps_order=2, hbar_order=2, u_degree=4, dx_degree=7)


def u(color, jet=0):
    return Generator(color, jet)


def test_pairing():
    assert PAIRING.check_inverse()
    assert PAIRING.is_graded_symmetric()
    assert PAIRING.eta(3, 2) == -1
    assert PAIRING.eta_inverse(2, 3) == -1


@pytest.mark.parametrize(
    'alpha, expected',
    [(1, DiffPoly.letter(4)), (2, DiffPoly.letter(3)), (3, DiffPoly.letter(2, coeff=-1)), (4, DiffPoly.letter(1))],
)
def test_casimirs(alpha, expected):
    assert casimir_density(alpha) == expected
    h = hierarchy.hamiltonian(alpha, -1, SMALL)
    assert h.density == expected
    assert h.weight == math.inf


def test_negative_index_rejected():
    with pytest.raises(ValueError):
        hierarchy.hamiltonian(1, -2, SMALL)


def test_classical_reconstruction():
    chain = hierarchy.reconstruct(1, 0, CLASSICAL)
    assert [h.index for h in chain] == [-1, 0]
    expected = DiffPoly.from_words([((u(1), u(4)), 1), ((u(2), u(3)), 1)])
    assert hierarchy.as_functional(chain[-1]) == LocalFunctional(expected)


@pytest.mark.parametrize('alpha', [1, 2, 3, 4])
def test_reconstruction_matches_primary(alpha):
    ok, difference = hierarchy.reconstruction_matches_primary(alpha, CLASSICAL)
    assert ok, difference
    ok, difference = hierarchy.reconstruction_matches_primary(alpha, SMALL)
    assert ok, difference


def test_g11_is_the_dilaton_hamiltonian():
    h = hierarchy.hamiltonian(1, 1, SMALL)
    assert h.weight == hierarchy.potential_weight(SMALL) == 6
    cubic = DiffPoly.from_words([((u(1), u(1), u(4)), Fraction(1, 2)), ((u(1), u(2), u(3)), 1)])
    assert h.density.project(hbar=0) == cubic


def test_reconstructed_hamiltonian_keeps_hbar_corrections():
    h = hierarchy.hamiltonian(4, 1, SMALL)
    assert h.density.project(hbar=1)
    classical = DiffPoly.from_words([((u(1), u(1), u(1)), Fraction(1, 6))])
    assert is_zero_functional(hierarchy.modulo_casimirs(h.density.project(hbar=0) - classical))


def test_dilaton_checks():
    failures = [r for r in check_dilaton(SMALL) if not r.ok]
    assert not failures, failures


def test_first_lossy_step():
    assert hierarchy.first_lossy_step(1, -1, SMALL) is None
    starved = TruncationBudget(q_order=0, eps_order=0, hbar_order=1, u_degree=3, dx_degree=0)
    step = hierarchy.first_lossy_step(4, 2, starved)
    assert (step.alpha, step.index) == (4, 0)
    assert step.density.loss
    assert hierarchy.hamiltonian(4, 2, starved).density.loss


def test_exact_weight():
    quadratic = DiffPoly.letter(1) * DiffPoly.letter(4)
    cubic = quadratic * DiffPoly.letter(1)
    assert hierarchy.exact_weight(5, quadratic, 6, cubic) == 8
    assert hierarchy.exact_weight(math.inf, DiffPoly.letter(4), 6, cubic) == 7
    assert hierarchy.exact_weight(5, DiffPoly(), 6, cubic) == math.inf


@pytest.mark.parametrize(
    'first, second',
    [((1, 0), (4, 0)), ((2, 0), (2, 0)), ((3, 0), (3, 0)), ((1, 0), (1, 1)), ((2, 1), (3, 1)), ((4, 1), (1, 1))],
)
def test_commutativity_small_budget(first, second):
    report = hierarchy.verify_commutativity(first[0], first[1], second[0], second[1], BRACKET)
    assert report.ok, report.offending
    assert report.loss == 0


def test_commutativity_pairs():
    pairs = commutativity_pairs()
    assert len(pairs) == 36
    assert ((2, 0), (2, 0)) in pairs


@pytest.mark.slow
def test_commutativity_full_grid():
    budget = TruncationBudget(q_order=3, eps_order=4, hbar_order=2, u_degree=4, dx_degree=7)
    failures = [r for r in check_commutativity(budget) if not r.ok]
    assert not failures, failures
