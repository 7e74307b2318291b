from fractions import Fraction

import pytest

from elliptic_qdr.diffpoly import COLORS, DiffPoly, Generator
from elliptic_qdr.drhell import limits
from elliptic_qdr.drhell.limits import DoubleScalingPoly, DSKey, LimitKind
from elliptic_qdr.scalars import Scalar, TruncationBudget
from elliptic_qdr.verify import check_limits

SMALL = TruncationBudget(q_order=2, eps_order=2, hbar_order=1, u_degree=4, dx_degree=7)

u1, u2, u3, u4 = (Generator(c, 0) for c in COLORS)


def cubic():
    return DoubleScalingPoly.from_words([((u1, u1, u4), 0, 0, 0, 0, Fraction(1, 2)), ((u1, u2, u3), 0, 0, 0, 0, 1)])


def x_term(w, coeff):
    return DoubleScalingPoly.from_words(
        [
            ((Generator(1, 1), Generator(4, 1)), w, 0, 2, 2, coeff),
            ((Generator(2, 1), Generator(3, 1)), w, 0, 2, 2, coeff),
        ]
    )


@pytest.mark.parametrize('text', ['dispersionless', 'TRIGONOMETRIC', 'double_scaling', 'ds_dispersionless'])
def test_limit_kind_from_string(text):
    assert str(LimitKind.from_string(text)) == text.lower()


def test_limit_kind_unknown():
    with pytest.raises(ValueError):
        LimitKind.from_string('semiclassical')


def test_potential_at_eps_zero():
    assert limits.ds_potential(0) == cubic() + x_term(-2, Scalar(0, Fraction(1, 6)))


def test_u4_partial():
    h = limits.ds_potential(0)
    half_u1_sq = DoubleScalingPoly.from_words([((u1, u1), 0, 0, 0, 0, Fraction(1, 2))])
    assert limits.ds_partial(h, 4, 0) == half_u1_sq - x_term(-3, Scalar(0, Fraction(1, 3)))


def test_g11_display():
    expected = cubic() + x_term(-3, Scalar(0, Fraction(1, 3))) * limits.t_symbol()
    assert limits.ds_g11(0) == expected


def test_g11_display_in_tau():
    # (i/3) T W^-3 = -(2/3) pi tau W^-3
    factor = DoubleScalingPoly({DSKey((), -3, 0, 0, 1): Fraction(-2, 3)})
    assert limits.ds_g11(0) == cubic() + x_term(0, 1) * limits.tau_symbol() * factor


def test_expand_in_t():
    f = DoubleScalingPoly.w_power(-2)
    expected = DoubleScalingPoly.from_words(
        [((), -2, 0, 0, 0, 1), ((u4,), -3, 0, 0, 0, -2), ((u4, u4), -4, 0, 0, 0, 3)]
    )
    assert limits.expand_in_t(f, 2) == expected


def test_cells_at_eps_zero():
    i_sixth = Scalar(0, Fraction(1, 6))
    with_u4 = DoubleScalingPoly.from_words(
        [
            ((Generator(1, 1), Generator(4, 1), u4), -3, 0, 2, 2, Scalar(0, Fraction(-1, 3))),
            ((Generator(2, 1), Generator(3, 1), u4), -3, 0, 2, 2, Scalar(0, Fraction(-1, 3))),
        ]
    )
    assert limits.ds_from_cells(0, 3) == cubic() + x_term(-2, i_sixth) + with_u4


@pytest.mark.parametrize('eps_order, u_degree', [(0, 4), (2, 5), (4, 5)])
def test_resummed_potential_matches_cells(eps_order, u_degree):
    assert limits.ds_potential_matches_cells(eps_order, u_degree)


def test_from_diffpoly_rejects_quantum_terms():
    with pytest.raises(ValueError):
        DoubleScalingPoly.from_diffpoly(DiffPoly.letter(1).shift(hbar=1))


def test_d_x_hits_only_the_word():
    f = DoubleScalingPoly.from_words([((u1,), -2, 0, 0, 0, 1)])
    expected = DoubleScalingPoly.from_words(
        [((Generator(1, 1),), -2, 0, 0, 0, 1), ((u1, Generator(4, 1)), -3, 0, 0, 0, -2)]
    )
    assert limits.ds_d_x(f) == expected


@pytest.mark.parametrize('alpha', COLORS)
def test_classical_recursion(alpha):
    check = limits.verify_classical_recursion(alpha)
    assert check.ok, check.residue


@pytest.mark.parametrize('alpha, beta', [(1, 4), (2, 3), (4, 4), (1, 1)])
def test_primaries_commute(alpha, beta):
    assert limits.classical_primaries_commute(alpha, beta)


def test_classical_bracket_example():
    f = DiffPoly.from_words([((u1, u1), Fraction(1, 2))])
    g = DiffPoly.from_words([((u4, u4), Fraction(1, 2))])
    bracket = limits.classical_bracket(f, g, SMALL)
    assert bracket == DiffPoly.from_words([((u1, Generator(4, 1)), 1)])


@pytest.mark.parametrize('g, n', [(1, 2), (1, 5), (2, 3), (3, 4)])
def test_cells_rescale_uniformly(g, n):
    assert limits.rescaling_exponent(g, n) == 0


def test_hamiltonian_scale_exponent():
    assert limits.hamiltonian_scale_exponent(1, 3) == 3
    assert limits.hamiltonian_scale_exponent(4, 3) == 5


def test_dispersionless_has_no_eps():
    density = limits.limit(LimitKind.DISPERSIONLESS, SMALL).density
    assert density == density.project(eps=0)


def test_check_limits_small_budget():
    failures = [r for r in check_limits(SMALL) if not r.ok]
    assert not failures, failures
