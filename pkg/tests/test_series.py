from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, strategies as st

from genus_forge.errors import InsufficientTruncationError, InvalidArgumentError, NonUnitError
from genus_forge.series import (
    Poly,
    QYSeries,
    RootSeries,
    ZSeries,
    format_terms,
    series_exp,
    series_invert,
    shift_y_by_q,
    y_to_z,
)

CAP = 5
small = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def qy_series(min_q=0):
    keys = st.tuples(st.integers(min_q, CAP - 1), st.integers(-2, 2))
    return st.dictionaries(keys, small, max_size=6).map(lambda t: QYSeries.from_terms(t, CAP))


def naive_product(a, b, cap):
    out = {}
    for (qa, ya), ca in a.items():
        for (qb, yb), cb in b.items():
            if qa + qb < cap:
                out[(qa + qb, ya + yb)] = out.get((qa + qb, ya + yb), 0) + ca * cb
    return QYSeries.from_terms(out, cap)


@given(qy_series(), qy_series())
def test_product_against_double_loop(a, b):
    assert a * b == naive_product(a, b, CAP)


@given(qy_series(), qy_series(), qy_series())
def test_ring_axioms(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == QYSeries.zero(CAP)


@given(qy_series(min_q=1), st.sampled_from([-1, 1, 2, Fraction(1, 3)]))
def test_invert_multiplies_back(rest, lead):
    s = rest + QYSeries.monomial(lead, 0, 0)
    inv = series_invert(s)
    assert s * inv == QYSeries.from_q_list([1], CAP)


def test_invert_with_y_monomial_lead():
    s = QYSeries.from_terms({(Fraction(1, 8), Fraction(1, 2)): 2, (1, 0): 1}, 4)
    assert (s * series_invert(s)).truncate(Fraction(31, 8)) == QYSeries.from_q_list([1], Fraction(31, 8))


def test_invert_rejects_non_units():
    with pytest.raises(NonUnitError):
        series_invert(QYSeries.zero(3))
    with pytest.raises(NonUnitError):
        series_invert(QYSeries.from_terms({(0, 1): 1, (0, -1): 1}, 3))


@given(qy_series(min_q=1), qy_series(min_q=1))
def test_exp_is_a_homomorphism(a, b):
    assert series_exp(a + b) == series_exp(a) * series_exp(b)


@given(qy_series(min_q=1))
def test_exp_against_power_sum(a):
    total = QYSeries.from_q_list([1], CAP)
    power = QYSeries.from_q_list([1], CAP)
    for k in range(1, CAP):
        power = power * a
        total = total + power.scale(Fraction(1, factorial(k)))
    assert series_exp(a) == total


def test_exp_needs_positive_valuation():
    with pytest.raises(InvalidArgumentError):
        series_exp(QYSeries.from_q_list([1, 1], 3))


def test_truncation_is_enforced():
    s = QYSeries.from_q_list([1, 2, 3])
    assert s.coefficient(2) == 3
    with pytest.raises(InsufficientTruncationError):
        s.coefficient(3)
    with pytest.raises(InsufficientTruncationError):
        s.truncate(4)


def test_product_cap_follows_valuation():
    a = QYSeries.from_terms({(1, 0): 1}, 3)
    b = QYSeries.from_terms({(0, 0): 1}, 3)
    # q * O(q^3) is known to O(q^4), q^0 * O(q^3) only to O(q^3)
    assert (a * b).cap == 3
    assert (a * a).cap == 4


def test_shift_y_by_q_moves_and_flags():
    s = QYSeries.from_terms({(0, 1): 1, (1, -1): 2, (2, 2): 5}, 3)
    shifted, dropped = shift_y_by_q(s)
    assert shifted == QYSeries.from_terms({(1, 1): 1, (0, -1): 2}, 3)
    assert dropped


def test_y_to_z_matches_exponential():
    s = QYSeries.from_terms({(0, Fraction(1, 2)): 1, (1, -2): 3}, 2)
    z = y_to_z(s, 4)
    for m in range(4):
        want = QYSeries.from_terms({(0, 0): Fraction(1, 2) ** m / factorial(m),
                                    (1, 0): 3 * Fraction(-2) ** m / factorial(m)}, 2)
        assert z.coefficient(m) == want
    with pytest.raises(InsufficientTruncationError):
        z.coefficient(4)


def test_zseries_product_truncates():
    a = ZSeries({1: Fraction(1)}, 3)
    assert (a * a).coefficient(2) == 1
    assert (a * a * a).is_zero()


roots = st.lists(small, min_size=1, max_size=6)


@given(roots.filter(lambda c: c[0] != 0))
def test_root_invert_multiplies_back(coeffs):
    s = RootSeries(coeffs)
    prod = s * s.invert()
    assert prod.coeffs == [1] + [0] * (len(coeffs) - 1)


def test_root_shift_down():
    assert RootSeries([0, 1, 2]).shift_down().coeffs == [1, 2]
    with pytest.raises(InvalidArgumentError):
        RootSeries([1, 1]).shift_down()


def test_root_exp_rescale():
    assert RootSeries.exp(1, 5).rescale(-2).coeffs == RootSeries.exp(-2, 5).coeffs


polys = st.dictionaries(st.tuples(st.integers(0, 4)), small, max_size=5).map(Poly)


@given(polys, small)
def test_expansion_at_minus_one(p, y):
    # coefficients in s = 1 + y reproduce the same function
    assert p.expand_at_minus_one().evaluate([y + 1]) == p.evaluate([y])


def test_poly_text():
    p = Poly({(0,): 2, (1,): -20, (2,): 2})
    assert p.to_text(compact=True) == "2 - 20y + 2y^2"
    assert str(p) == "2 - 20*y + 2*y^2"
    assert format_terms([]) == "0"
    assert format_terms([(Fraction(-1), [("q", 1), ("y", Fraction(-1, 2))])]) == "-q*y^(-1/2)"


def test_exponent_grid_enforced():
    with pytest.raises(InvalidArgumentError):
        QYSeries.from_terms({(Fraction(1, 3), 0): 1})
