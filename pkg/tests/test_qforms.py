from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from genus_forge.arith import divisor_power_sum
from genus_forge.errors import InsufficientTruncationError, InvalidArgumentError
from genus_forge.qforms import (
    _parse_argument,
    eisenstein,
    eta_cubed_power,
    euler_product,
    modular_basis,
    modular_membership,
    theta,
    theta_at_root,
    theta_hat_constant,
    theta_product,
)
from genus_forge.series import QYSeries

N = 8


def pentagonal(n):
    # Euler: prod (1 - q^m) = sum_k (-1)^k q^{k(3k-1)/2}
    out = [0] * n
    for k in range(-n, n + 1):
        e = k * (3 * k - 1) // 2
        if 0 <= e < n:
            out[e] += (-1) ** (k % 2)
    return QYSeries.from_q_list(out, n)


def E(weight, n):
    factor = {4: 240, 6: -504, 8: 480, 10: -264}[weight]
    return eisenstein(weight, n).scale(factor)


def test_eisenstein_constants():
    assert eisenstein(2, 1).coefficient(0) == Fraction(-1, 24)
    assert eisenstein(4, 1).coefficient(0) == Fraction(1, 240)
    assert eisenstein(6, 1).coefficient(0) == Fraction(-1, 504)


@given(st.sampled_from([2, 4, 6, 8]), st.integers(1, 20))
def test_eisenstein_coefficients(weight, m):
    assert eisenstein(weight, m + 1).coefficient(m) == divisor_power_sum(weight - 1, m)


def test_classical_eisenstein_identities():
    assert E(4, N) * E(4, N) == E(8, N)
    assert E(4, N) * E(6, N) == E(10, N)


def test_discriminant_product():
    delta = (E(4, N) ** 3 - E(6, N) ** 2).scale(Fraction(1, 1728))
    want = euler_product(N, 24) * QYSeries.monomial(1, 1, 0)
    assert delta.truncate(N) == want.truncate(N)


def test_euler_product_pentagonal():
    assert euler_product(30) == pentagonal(30)
    assert euler_product(12, -1) * euler_product(12) == QYSeries.from_q_list([1], 12)


def test_theta_sum_equals_triple_product():
    for n in range(1, 9):
        assert theta(n) == theta_product(n)


def test_theta_at_u_matches_theta():
    # theta(q, y) = q^(1/8) * Theta-hat(q, u)
    lifted = theta_at_root("u", N, 0)[0] * QYSeries.monomial(1, Fraction(1, 8), 0)
    assert lifted.truncate(N) == theta(N)


def test_theta_hat_constant_is_eta_cubed():
    # Jacobi: sum (-1)^k (2k+1) q^{k(k+1)/2} = prod (1 - q^m)^3
    assert theta_hat_constant(20) == euler_product(20, 3)
    assert eta_cubed_power(1, 5) == euler_product(5, 3) * QYSeries.monomial(1, Fraction(1, 8), 0)


def test_theta_root_coefficients_are_odd():
    th = theta_at_root("v", 6, 5)
    assert th[0].is_zero()
    # theta is odd in v, so every even-degree root coefficient vanishes
    assert th[2].is_zero() and th[4].is_zero()


@pytest.mark.parametrize("arg, parsed", [("v", (1, 0)), ("r-u", (1, -1)), ("-v+u", (-1, 1)),
                                         ("u", (0, 1)), ("-u", (0, -1))])
def test_theta_argument_grammar(arg, parsed):
    assert _parse_argument(arg) == parsed


@pytest.mark.parametrize("arg", ["", "2v", "vu", "x", "v+"])
def test_theta_argument_rejects(arg):
    with pytest.raises(InvalidArgumentError):
        _parse_argument(arg)


def test_modular_basis():
    assert modular_basis(12) == [(3, 0), (0, 2)]
    assert modular_basis(2) == []
    assert modular_basis(5) == []


def test_membership_certificates():
    cert = modular_membership(eisenstein(4, 6) ** 2, 8, 6)
    assert cert.verdict == "member"
    assert cert.coefficients == {(2, 0): 1}
    delta = (E(4, 6) ** 3 - E(6, 6) ** 2).scale(Fraction(1, 1728))
    cert = modular_membership(delta, 12, 6)
    assert cert.verdict == "member"
    assert cert.coefficients[(3, 0)] == Fraction(240**3, 1728)


def test_membership_failures():
    assert modular_membership(QYSeries.from_q_list([1, 1], 4), 4, 4).verdict == "fail"
    assert modular_membership(QYSeries.from_q_list([0, 1], 4), 3, 4).verdict == "fail"
    assert modular_membership(QYSeries.zero(4), 5, 4).verdict == "zero"
    # the quasi-modular G2 is not in weight 2
    assert modular_membership(eisenstein(2, 4), 2, 4).verdict == "fail"


def test_membership_needs_enough_terms():
    with pytest.raises(InsufficientTruncationError):
        modular_membership(eisenstein(4, 1) ** 3, 12, 1)
    with pytest.raises(InsufficientTruncationError):
        modular_membership(eisenstein(4, 3), 4, 5)


def test_membership_rejects_y():
    with pytest.raises(InvalidArgumentError):
        modular_membership(theta(3), 1, 3)


def test_certificate_text():
    text = modular_membership(eisenstein(4, 4), 4, 4).to_text()
    assert "verdict: member" in text and "coefficient G4^1 G6^0: 1" in text
