from fractions import Fraction
from itertools import combinations
from math import factorial, prod

import pytest
from hypothesis import given, strategies as st

from genus_forge.cohomology import (
    BundleContext,
    ChernForm,
    CohClass,
    additive_class,
    apply_relations,
    elementary_in_roots,
    format_monomial,
    make_monomial,
    monomial_to_elementary,
    multiplicative_class,
    parse_monomial,
    partitions,
    pontryagin_from_chern,
    roots_to_elementary,
    todd_series,
)
from genus_forge.errors import (
    InsufficientTruncationError,
    InvalidArgumentError,
    NonUnitError,
    SymmetryViolationError,
    UnsatisfiableRelationError,
)
from genus_forge.series import RootSeries

small = st.fractions(min_value=-3, max_value=3, max_denominator=3)


def elementary_values(xs):
    return [sum((prod(s) for s in combinations(xs, k)), Fraction(0)) for k in range(len(xs) + 1)]


def evaluate(cls, values):
    """Numerically evaluate a class given ``{(kind, i): value}``."""
    total = Fraction(0)
    for mono, c in cls.terms.items():
        total += c * prod((values.get(g, Fraction(0)) ** e for g, e in mono), start=Fraction(1))
    return total


def chern_values(xs, kind="c"):
    e = elementary_values(xs)
    return {(kind, k): e[k] for k in range(1, len(xs) + 1)}


def degree_parts_of_product(q, xs, cap):
    # coefficients of t^0..t^cap in prod_i Q(t x_i)
    acc = [Fraction(1)] + [Fraction(0)] * cap
    for x in xs:
        factor = [q[k] * x**k for k in range(cap + 1)]
        acc = [sum(acc[i] * factor[k - i] for i in range(k + 1)) for k in range(cap + 1)]
    return acc


def test_partition_counts():
    assert [len(partitions(k)) for k in range(11)] == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]
    assert partitions(4, max_len=2) == ((4,), (3, 1), (2, 2))


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(
    st.lists(small, min_size=n, max_size=n),
    st.sampled_from([lam for k in range(1, 6) for lam in partitions(k) if len(lam) <= n]))))
def test_monomial_to_elementary_numerically(args):
    xs, lam = args
    n = len(xs)
    # brute-force m_lambda: sum over distinct permutations of the exponent vector
    exps = list(lam) + [0] * (n - len(lam))
    from itertools import permutations
    m_val = sum(prod(x**e for x, e in zip(xs, perm)) for perm in set(permutations(exps)))
    e = elementary_values(xs)
    got = sum(c * prod(e[p] for p in mu) for mu, c in monomial_to_elementary(lam, n).items())
    assert got == m_val


@given(st.lists(small, min_size=1, max_size=4), st.lists(small, min_size=4, max_size=4))
def test_multiplicative_class_against_roots(xs, tail):
    q = [Fraction(1)] + tail
    n, cap = len(xs), 4
    cls = multiplicative_class(RootSeries(q + [0]), n, cap)
    want = degree_parts_of_product(q, xs, cap)
    values = chern_values(xs)
    for k in range(cap + 1):
        assert evaluate(cls.homogeneous(k), values) == want[k]


@given(st.lists(small, min_size=1, max_size=3), small)
def test_multiplicative_class_nonunit_constant(xs, q0):
    # a constant term other than 1 is handled without inversion
    if q0 == 0:
        return
    q = [q0, Fraction(1), Fraction(-1, 2)]
    cls = multiplicative_class(RootSeries(q), len(xs), 2)
    want = degree_parts_of_product(q, xs, 2)
    values = chern_values(xs)
    for k in range(3):
        assert evaluate(cls.homogeneous(k), values) == want[k]


def test_even_series_give_pontryagin_classes():
    xs = [Fraction(1), Fraction(2), Fraction(-1, 2)]
    q = [Fraction(1), Fraction(1, 3), Fraction(-1, 45)]  # the L-series in x^2
    cls = multiplicative_class(RootSeries(q), 3, 4, kind="p", root_degree=2)
    squares = [x * x for x in xs]
    want = degree_parts_of_product(q, squares, 2)
    values = chern_values(squares, "p")
    assert evaluate(cls.homogeneous(2), values) == want[1]
    assert evaluate(cls.homogeneous(4), values) == want[2]


@given(st.lists(small, min_size=1, max_size=4))
def test_additive_class_against_roots(xs):
    cap = 4
    cls = additive_class(RootSeries.exp(1, cap + 1), len(xs), cap)
    values = chern_values(xs)
    for k in range(cap + 1):
        want = sum((x**k for x in xs), Fraction(0)) / factorial(k)
        assert evaluate(cls.homogeneous(k), values) == want


@given(st.lists(small, min_size=1, max_size=4))
def test_pontryagin_from_chern(xs):
    d = len(xs)
    values = chern_values(xs)
    e_sq = elementary_values([x * x for x in xs])
    for k, p in enumerate(pontryagin_from_chern(d), start=1):
        assert evaluate(p, values) == e_sq[k]


def test_roots_to_elementary_explicit():
    v = [CohClass.gen("v", i, 3) for i in (1, 2, 3)]
    power_sum = v[0] ** 2 + v[1] ** 2 + v[2] ** 2
    got = roots_to_elementary(power_sum, "v", 3)
    c1, c2 = CohClass.gen("c", 1, 3), CohClass.gen("c", 2, 3)
    assert got == c1 * c1 - c2.scale(2)
    assert roots_to_elementary(elementary_in_roots(2, 3, "r"), "r", 3) == CohClass.gen("w", 2, 3)


def test_roots_to_elementary_rejects_asymmetry():
    x = CohClass.gen("v", 1, 2) * CohClass.gen("v", 1, 2) + CohClass.gen("v", 2, 2)
    with pytest.raises(SymmetryViolationError):
        roots_to_elementary(x, "v", 2)


def test_multiplicative_class_errors():
    with pytest.raises(NonUnitError):
        multiplicative_class(RootSeries([0, 1, 1]), 2, 2)
    with pytest.raises(InsufficientTruncationError):
        multiplicative_class(RootSeries([1, 1]), 2, 3)


def test_todd_series_values():
    assert todd_series(6).coeffs == [1, Fraction(1, 2), Fraction(1, 12), 0, Fraction(-1, 720), 0]


classes = st.dictionaries(
    st.sampled_from([(), make_monomial([(("c", 1), 1)]), make_monomial([(("c", 2), 1)]),
                     make_monomial([(("c", 1), 2)]), make_monomial([(("w", 1), 1)])]),
    small, max_size=4).map(lambda t: CohClass(t, 3))


@given(classes, classes, classes)
def test_ring_laws(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(classes)
def test_exp_inverse(a):
    a = a - CohClass.constant(a.constant_term(), 3)
    assert a.exp() * (-a).exp() == CohClass.one(3)


def test_truncation_drops_high_degree():
    c1 = CohClass.gen("c", 1, 2)
    assert (c1 ** 3).is_zero()
    assert c1.mul(c1, 1).is_zero()


def test_relations_substitution():
    ctx = BundleContext(4, 2, relations=True)
    w2 = CohClass.gen("w", 2, 4)
    got = apply_relations(w2 + CohClass.gen("w", 1, 4), ctx)
    c1, c2 = CohClass.gen("c", 1, 4), CohClass.gen("c", 2, 4)
    assert got == c2 - (c1 * c1).scale(Fraction(1, 2))
    with pytest.raises(UnsatisfiableRelationError):
        apply_relations(CohClass.gen("w", 3, 4), ctx)


def test_relations_preserve_p1_match():
    # with relations, p1(W) = w1^2 - 2 w2 equals p1(M) = c1^2 - 2 c2
    for ctx in (BundleContext(3, 2, relations=True), BundleContext(5, 4, relations=True),
                BundleContext(3, 1, relations=True), BundleContext(4, 2, relations=True, c1_vanishes=True)):
        w1, w2 = CohClass.gen("w", 1, 4), CohClass.gen("w", 2, 4) if ctx.l >= 2 else CohClass({}, 4)
        c1, c2 = CohClass.gen("c", 1, 4), CohClass.gen("c", 2, 4)
        lhs = apply_relations(w1 * w1 - w2.scale(2), ctx)
        rhs = apply_relations(c1 * c1 - c2.scale(2), ctx)
        assert lhs == rhs, ctx
        assert apply_relations(w1, ctx).is_zero()


def test_tangent_context_identifies_generators():
    ctx = BundleContext.for_tangent(3)
    assert apply_relations(CohClass.gen("w", 2, 3), ctx) == CohClass.gen("c", 2, 3)
    with pytest.raises(InvalidArgumentError):
        BundleContext(3, 2, tangent=True)


def test_chern_form_arithmetic():
    c2 = make_monomial([(("c", 2), 1)])
    c11 = make_monomial([(("c", 1), 2)])
    f = ChernForm({c11: Fraction(3, 2), c2: -1})
    assert str(f) == "3/2*[c1^2] - [c2]"
    assert f - f == 0
    assert (f + 2) - 2 == f
    assert f.evaluate({c11: 4, c2: 6}.__getitem__) == 0


@given(st.lists(st.tuples(st.sampled_from("cwp"), st.integers(1, 4), st.integers(1, 3)), max_size=3))
def test_monomial_text_round_trip(powers):
    mono = make_monomial(((k, i), e) for k, i, e in powers)
    assert parse_monomial(format_monomial(mono)) == mono
