import random

from fractions import Fraction

from elliptic_qdr.diffpoly import (
    LEFT,
    RIGHT,
    DiffPoly,
    Generator,
    LocalFunctional,
    d_x,
    dilaton_vector_field,
    integrate_by_parts,
    is_zero_functional,
    koszul_sign,
    mul,
    partial,
    power,
    variational_derivative,
)
from elliptic_qdr.scalars import TruncatedSeries, TruncationBudget


def u(color, jet=0):
    return Generator(color, jet)


def poly(*pairs, budget=None):
    return DiffPoly.from_words(pairs, budget)


def test_koszul_sign():
    assert koszul_sign([u(3), u(2)]) == -1
    assert koszul_sign([u(3), u(1), u(2)]) == -1
    assert koszul_sign([u(4), u(2, 1), u(2, 0)]) == -1
    assert koszul_sign([u(2), u(2)]) == 0
    assert koszul_sign([u(1), u(1)]) == 1


def test_normal_form():
    assert poly(((u(3), u(2)), 1)) == poly(((u(2), u(3)), -1))
    assert poly(((u(2), u(2)), 1)).is_zero()
    assert poly(((u(4), u(1)), 1), ((u(1), u(4)), 1)) == poly(((u(1), u(4)), 2))


def test_graded_commutative_product():
    u2, u3 = DiffPoly.letter(2), DiffPoly.letter(3)
    assert mul(u2, u3) == -mul(u3, u2)
    assert mul(u2, u2).is_zero()
    u1 = DiffPoly.letter(1)
    assert power(u1, 3) == poly(((u(1), u(1), u(1)), 1))


def test_d_x_leibniz():
    f = poly(((u(1), u(4)), 1))
    assert d_x(f) == poly(((u(1, 1), u(4)), 1), ((u(1), u(4, 1)), 1))
    g = poly(((u(2), u(3)), 1))
    assert d_x(g) == poly(((u(2, 1), u(3)), 1), ((u(2), u(3, 1)), 1))


def test_partial_sides():
    f = poly(((u(2), u(3)), 1))
    assert partial(f, 3, 0, LEFT) == -DiffPoly.letter(2)
    assert partial(f, 3, 0, RIGHT) == DiffPoly.letter(2)
    assert partial(f, 2, 0, LEFT) == DiffPoly.letter(3)
    assert partial(f, 2, 0, RIGHT) == -DiffPoly.letter(3)
    half_square = poly(((u(1), u(1)), Fraction(1, 2)))
    assert partial(half_square, 1, 0) == DiffPoly.letter(1)


def test_variational_derivative():
    f = poly(((u(1), u(4, 2)), 1))
    assert variational_derivative(f, 4) == DiffPoly.letter(1, 2)
    assert variational_derivative(f, 1) == DiffPoly.letter(4, 2)
    cubic = poly(((u(1), u(1), u(4)), Fraction(1, 2)), ((u(1), u(2), u(3)), 1))
    assert variational_derivative(cubic, 4) == poly(((u(1), u(1)), Fraction(1, 2)))
    assert variational_derivative(cubic, 3) == poly(((u(1), u(2)), -1))


def test_total_derivatives_are_zero_functionals():
    rng = random.Random(3)
    for _ in range(20):
        word = [u(rng.choice((1, 4)), rng.randint(0, 3)) for _ in range(rng.randint(1, 3))]
        f = poly((word, rng.randint(1, 5)))
        assert is_zero_functional(d_x(f))
    assert is_zero_functional(DiffPoly.constant(7))
    assert not is_zero_functional(poly(((u(1), u(4)), 1)))


def test_integrate_by_parts():
    f = poly(((u(1), u(4, 2)), 1))
    assert integrate_by_parts(f) == poly(((u(1, 1), u(4, 1)), -1))
    assert LocalFunctional(f) == LocalFunctional(poly(((u(1, 1), u(4, 1)), -1)))
    assert integrate_by_parts(DiffPoly.constant(3)).is_zero()


def test_budget_caps_and_loss():
    budget = TruncationBudget(u_degree=2, dx_degree=7)
    dropped = DiffPoly.letter(1, 8, budget=budget)
    assert dropped.is_zero()
    assert dropped.loss == 1
    assert mul(DiffPoly.letter(1, budget=budget), poly(((u(1), u(4)), 1))).is_zero()
    series = TruncatedSeries.monomial(1, hbar=3)
    assert DiffPoly.letter(1, coeff=series, budget=budget).is_zero()


def test_weights():
    hbar = TruncatedSeries.monomial(1, hbar=1)
    f = poly(((u(1), u(4, 1)), hbar), ((u(1), u(1), u(4)), 1))
    assert f.min_weight() == 3
    assert f.truncate_weight(3) == poly(((u(1), u(1), u(4)), 1))
    assert dilaton_vector_field(f) == f.scale(Fraction(3)) + poly(((u(1), u(4, 1)), hbar))


def test_text_form():
    assert DiffPoly.letter(1).text_lines() == ['u1_0']
    f = poly(((u(1, 3), u(4, 1)), TruncatedSeries.monomial(Fraction(1, 6), eps=2, hbar=1)))
    assert f.text_lines() == ['(1/6)*hbar*eps^2 * u1_3 u4_1']
    assert str(DiffPoly()) == '0'
