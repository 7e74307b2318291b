from fractions import Fraction

import pytest

from elliptic_qdr.diffpoly import DiffPoly, Generator, LocalFunctional, dilaton_vector_field
from elliptic_qdr.drhell.potential import (
    E1,
    E23,
    ClosedForm,
    classical_part,
    compositions,
    diag,
    g11,
    genus_range,
    hadamard,
    intersection_lambda,
    intersection_lambda_poly,
    potential_closed,
    potential_direct,
    primary_hamiltonian,
    s_epsilon,
)
from elliptic_qdr.quasimodular import eisenstein_qexp
from elliptic_qdr.scalars import I, Scalar, TruncatedSeries, TruncationBudget

SMALL = TruncationBudget(q_order=2, eps_order=2, hbar_order=1, u_degree=4, dx_degree=7)


def u(color, jet=0):
    return Generator(color, jet)


def test_compositions():
    assert list(compositions(2, 2)) == [(0, 2), (1, 1), (2, 0)]
    assert list(compositions(0, 3)) == [(0, 0, 0)]
    assert list(compositions(1, 0)) == []


def test_genus_range():
    assert list(genus_range(TruncationBudget(hbar_order=0))) == []
    assert list(genus_range(TruncationBudget(eps_order=4))) == [1, 2, 3]


def test_classical_potential():
    budget = TruncationBudget(hbar_order=0)
    assert potential_direct(budget).density == classical_part(budget)
    assert len(classical_part()) == 2


def test_genus_one_term():
    budget = TruncationBudget(q_order=1, eps_order=0, hbar_order=1, u_degree=2, dx_degree=7)
    density = potential_direct(budget).density
    expected = TruncatedSeries({(0, 0, 1): Scalar(0, Fraction(-1, 24)), (1, 0, 1): I})
    assert density.coefficient((u(1, 1), u(4, 1))) == expected
    assert density.coefficient((u(2, 1), u(3, 1))) == expected


def test_genus_two_term():
    budget = TruncationBudget(q_order=0, eps_order=2, hbar_order=1, u_degree=2, dx_degree=7)
    density = potential_direct(budget).density
    # i hbar eps^2 / 4 * G4(0) / 3!
    assert density.coefficient((u(1, 3), u(4, 1))).coefficient(eps=2, hbar=1) == I * Fraction(1, 5760)
    assert density.coefficient((u(1, 1), u(4, 3))).coefficient(eps=2, hbar=1) == I * Fraction(1, 5760)


def test_potential_is_even():
    density = potential_direct(SMALL).density
    assert density.parity() == 0
    for word in density.words():
        assert sum(1 for l in word if l.color == 2) == sum(1 for l in word if l.color == 3) <= 1


@pytest.mark.parametrize('form', list(ClosedForm))
def test_closed_forms_agree(form):
    assert potential_closed(SMALL, form) == potential_direct(SMALL)


@pytest.mark.slow
@pytest.mark.parametrize('form', list(ClosedForm))
def test_closed_forms_agree_full_budget(form):
    budget = TruncationBudget(q_order=5, eps_order=4, hbar_order=1, u_degree=5, dx_degree=7)
    assert potential_closed(budget, form) == potential_direct(budget)


def test_intersection_lambda():
    g2 = eisenstein_qexp(2, 3)
    assert intersection_lambda(E1, 1, 2, (3, -3), 3) == g2.scale(9)
    assert intersection_lambda(E23, 1, 2, (3, -3), 3) == g2.scale(9)
    assert not intersection_lambda(E1, 2, 3, (0, 1, -1), 3)
    assert intersection_lambda(E1, 2, 3, (1, 2, 3), 3) == intersection_lambda(E1, 2, 3, (1, 3, 2), 3)


def test_intersection_lambda_errors():
    with pytest.raises(ValueError):
        intersection_lambda_poly(E1, 0, 2, 3)
    with pytest.raises(ValueError):
        intersection_lambda_poly(E1, 1, 1, 3)
    with pytest.raises(ValueError):
        intersection_lambda_poly('e5', 1, 2, 3)
    with pytest.raises(ValueError):
        intersection_lambda(E1, 1, 2, (1,), 3)


def test_s_epsilon():
    budget = TruncationBudget(eps_order=2)
    result = s_epsilon(DiffPoly.letter(1, budget=budget), budget)
    eps2 = TruncatedSeries.monomial(Fraction(1, 24), eps=2)
    assert result == DiffPoly.letter(1, budget=budget) + DiffPoly.letter(1, 2, coeff=eps2, budget=budget)


def test_hadamard_and_diag():
    f = TruncatedSeries({(0, 0, 0): 2, (0, 2, 0): 3, (1, 4, 0): 1})
    g = TruncatedSeries({(0, 0, 0): 5, (0, 2, 1): 7})
    assert hadamard(f, g) == TruncatedSeries({(0, 0, 0): 10, (0, 2, 1): 21})
    cells = {(0, 0): f, (0, 2): g, (2, 2): g}
    assert diag(cells) == f + g.shift(eps=2)


def test_dilaton_generator():
    potential = potential_direct(SMALL).density
    assert g11(SMALL).density == dilaton_vector_field(potential) - potential.scale(2)


def test_primary_hamiltonians():
    u1, u2, u3, u4 = (u(c) for c in (1, 2, 3, 4))
    assert primary_hamiltonian(1, SMALL).density == DiffPoly.from_words([((u1, u4), 1), ((u2, u3), 1)])
    assert primary_hamiltonian(2, SMALL).density == DiffPoly.from_words([((u1, u3), 1)])
    assert primary_hamiltonian(3, SMALL).density == DiffPoly.from_words([((u1, u2), -1)])
    g40 = primary_hamiltonian(4, SMALL).density
    assert g40.project(hbar=0) == DiffPoly.from_words([((u1, u1), Fraction(1, 2))])
    assert isinstance(primary_hamiltonian(4, SMALL), LocalFunctional)
