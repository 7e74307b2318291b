from fractions import Fraction

import pytest

from elliptic_qdr.quasimodular import (
    InvalidWeightError,
    NoSolutionError,
    QModForm,
    d_g2,
    d_q,
    divisor_sigma,
    eisenstein_qexp,
    eisenstein_qexp_lambert,
    qmod_d_q,
    qmod_expand,
    qmod_identify,
    weight_basis,
)

G2 = QModForm.generator(2)
G4 = QModForm.generator(4)
G6 = QModForm.generator(6)


def test_divisor_sigma():
    assert divisor_sigma(1, 6) == 12
    assert divisor_sigma(3, 2) == 9
    assert divisor_sigma(0, 12) == 6


def test_eisenstein_head():
    g2 = eisenstein_qexp(2, 5)
    assert [g2.coefficient(q=n) for n in range(6)] == [Fraction(-1, 24), 1, 3, 4, 7, 6]
    g4 = eisenstein_qexp(4, 2)
    assert [g4.coefficient(q=n) for n in range(3)] == [Fraction(1, 240), 1, 9]
    assert eisenstein_qexp(6, 0).coefficient() == Fraction(-1, 504)


@pytest.mark.parametrize('k', [2, 4, 6, 8, 10])
def test_lambert_form_agrees(k):
    assert eisenstein_qexp(k, 12) == eisenstein_qexp_lambert(k, 12)


def test_invalid_weights():
    with pytest.raises(InvalidWeightError):
        eisenstein_qexp(3, 4)
    with pytest.raises(InvalidWeightError):
        weight_basis(5)
    with pytest.raises(InvalidWeightError):
        QModForm.generator(8)


def test_weight_basis():
    assert weight_basis(0) == [(0, 0, 0)]
    assert weight_basis(6) == [(0, 0, 1), (1, 1, 0), (3, 0, 0)]
    assert len(weight_basis(12)) == 7


def test_ramanujan_d_q_g2():
    expected = G2 * G2 * (-2) + G4 * Fraction(5, 6)
    assert qmod_d_q(G2) == expected
    assert d_q(eisenstein_qexp(2, 10)) == qmod_expand(expected, 10)


def test_ramanujan_d_q_g4_g6():
    assert qmod_d_q(G4) == G4 * G2 * (-8) + G6 * Fraction(7, 10)
    assert qmod_d_q(G6) == G6 * G2 * (-12) + G4 * G4 * Fraction(400, 7)


@pytest.mark.parametrize('k', [2, 4, 6, 8])
def test_d_g2_d_q_commutator(k):
    for exps in weight_basis(k):
        form = QModForm({exps: 1})
        assert d_g2(qmod_d_q(form)) - qmod_d_q(d_g2(form)) == form * (-2 * k)


def test_identify_needs_enough_coefficients():
    with pytest.raises(NoSolutionError):
        qmod_identify(eisenstein_qexp(4, 0), 4)
    assert qmod_identify(eisenstein_qexp(4, 6), 4) == G4


def test_identify_needs_more_coefficients_than_the_dimension():
    # weight 4 is spanned by G2^2 and G4
    assert len(weight_basis(4)) == 2
    with pytest.raises(NoSolutionError):
        qmod_identify(eisenstein_qexp(4, 2), 4)
    assert qmod_identify(eisenstein_qexp(4, 3), 4) == G4


def test_identify_rejects_non_forms():
    series = eisenstein_qexp(4, 6) + eisenstein_qexp(2, 6).d_q().d_q().d_q()
    with pytest.raises(NoSolutionError):
        qmod_identify(series, 4)


def test_form_text():
    assert str(G2 * G2 * (-2) + G4) == '(1)*G4 + (-2)*G2^2'
