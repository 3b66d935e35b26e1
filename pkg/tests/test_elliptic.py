from fractions import Fraction

import pytest

from genus_forge.cohomology import BundleContext, ChernForm
from genus_forge.elliptic import (
    a0_relation_factor,
    ell,
    ell_bundle,
    ell_theta,
    exterior_indices,
    modular_coefficients,
    quasi_periodicity_check,
    s_transform_numeric_check,
    twisted_b1_index,
    verify_a0_relations,
    verify_a1_vanishing,
    verify_a2_identity,
    verify_a2_tangent_chain,
    verify_route_agreement,
)
from genus_forge.errors import ContractNotApplicableError, InvalidArgumentError, UnsatisfiableRelationError
from genus_forge.genus import chi_y
from genus_forge.manifolds import catalog, projective_space, symbolic_manifold
from genus_forge.series import QYSeries, series_invert


def jacobi_thetas(cap):
    """theta_2, theta_3, theta_4 as q-y series (q^(n^2/2) convention)."""
    t2, t3, t4 = {}, {}, {}
    for n in range(-12, 13):
        h = Fraction(2 * n + 1, 2)
        if h * h / 2 < cap:
            t2[(h * h / 2, h)] = 1
        if Fraction(n * n, 2) < cap:
            t3[(Fraction(n * n, 2), n)] = 1
            t4[(Fraction(n * n, 2), n)] = (-1) ** (n % 2)
    return [QYSeries.from_terms(t, cap) for t in (t2, t3, t4)]


def at_zero(s):
    out = {}
    for (qe, _), c in s.items():
        out[(qe, 0)] = out.get((qe, 0), 0) + c
    return QYSeries.from_terms(out, s.cap)


def phi01(n):
    total = None
    for th in jacobi_thetas(n + 2):
        term = th * th * series_invert(at_zero(th) * at_zero(th))
        total = term if total is None else total + term
    return total.scale(4).truncate(n)


def test_k3_is_twice_phi01():
    e = ell_bundle(catalog("k3"), BundleContext.for_tangent(2, relations=True), 6)
    assert e.series == phi01(6).scale(2)


@pytest.mark.parametrize("m", [catalog("k3"), catalog("quintic"), symbolic_manifold(3)])
def test_q0_term_is_chi_y(m):
    # for W = T the q^0 slice is y^(-d/2) chi_{-y}(M)
    e = ell_bundle(m, BundleContext.for_tangent(m.d), 2)
    poly = chi_y(m)
    want = {Fraction(p) - Fraction(m.d, 2): c * (-1) ** p for (p,), c in poly.terms.items()}
    assert e.series.q_slice(0) == want


@pytest.mark.parametrize("d, l", [(2, 1), (3, 2), (4, 2)])
def test_q0_term_is_exterior_indices(d, l):
    ctx = BundleContext(d, l)
    e = ell_bundle(symbolic_manifold(d), ctx, 2)
    chi = exterior_indices(symbolic_manifold(d), ctx)
    want = {Fraction(p) - Fraction(l, 2): chi[p] * (-1) ** p for p in range(l + 1) if chi[p] != 0}
    assert e.series.q_slice(0) == want


@pytest.mark.parametrize("m, ctx", [
    (catalog("k3"), BundleContext.for_tangent(2, relations=True)),
    (catalog("quintic"), BundleContext.for_tangent(3, relations=True)),
    (symbolic_manifold(2), BundleContext(2, 2, relations=True)),
    (symbolic_manifold(3), BundleContext(3, 1, relations=True)),
    (symbolic_manifold(3), BundleContext(3, 2)),
    (symbolic_manifold(4), BundleContext(4, 3, relations=True, c1_vanishes=True)),
])
def test_routes_agree(m, ctx):
    assert ell_bundle(m, ctx, 4).series == ell_theta(m, ctx, 4).series
    assert verify_route_agreement(m, ctx, 4).verdict == "pass"


@pytest.mark.parametrize("ctx", [BundleContext(2, 2, relations=True), BundleContext(3, 1, relations=True),
                                 BundleContext(4, 2, relations=True)])
def test_transformation_laws(ctx):
    reports = quasi_periodicity_check(ell_bundle(symbolic_manifold(ctx.d), ctx, 4))
    assert [r.verdict for r in reports] == ["pass"] * 3


def test_transformation_law_detects_corruption():
    e = ell_bundle(catalog("k3"), BundleContext.for_tangent(2, relations=True), 4)
    e.series = e.series + QYSeries.from_terms({(1, 2): 1}, 4)
    reports = quasi_periodicity_check(e)
    assert reports[1].verdict == "fail"


def test_input_validation():
    with pytest.raises(UnsatisfiableRelationError):
        ell_bundle(projective_space(2), BundleContext.for_tangent(2, relations=True), 3)
    with pytest.raises(InvalidArgumentError):
        ell_bundle(catalog("k3"), BundleContext(2, 1), 3)
    with pytest.raises(InvalidArgumentError):
        ell_bundle(catalog("k3"), BundleContext.for_tangent(3), 3)
    with pytest.raises(InvalidArgumentError):
        ell(catalog("k3"), BundleContext.for_tangent(2), 3, route="other")


def test_cp2_tangent_without_relations():
    # no relations needed for W = T; both routes still agree
    ctx = BundleContext.for_tangent(2)
    assert ell_bundle(projective_space(2), ctx, 3).series == ell_theta(projective_space(2), ctx, 3).series


def test_k3_modular_coefficients():
    e = ell_bundle(catalog("k3"), BundleContext.for_tangent(2, relations=True), 5)
    (a0, c0), (a1, c1), (a2, c2) = modular_coefficients(e, 2)
    assert a0 == QYSeries.from_q_list([24], 5)
    assert c0.verdict == "member" and c1.verdict == "zero"
    # a2 has weight 2, where no holomorphic form lives
    assert c2.verdict == "zero"


def test_s_transform_on_k3():
    e = ell_bundle(catalog("k3"), BundleContext.for_tangent(2, relations=True), 20)
    report = s_transform_numeric_check(e)
    assert report.verdict == "pass"


def ctx_full(d, l):
    return BundleContext(d, l, relations=True, c1_vanishes=True)


@pytest.mark.parametrize("d, l", [(5, 1), (3, 2), (7, 1), (3, 3)])
def test_a1_vanishing(d, l):
    assert verify_a1_vanishing(ctx_full(d, l), 4).verdict == "pass"


def test_a1_vanishing_outside_hypotheses():
    with pytest.raises(ContractNotApplicableError):
        verify_a1_vanishing(ctx_full(5, 2))


@pytest.mark.parametrize("d, l", [(5, 1), (7, 1), (6, 2), (8, 2), (3, 2), (4, 3)])
def test_a0_relations(d, l):
    assert verify_a0_relations(ctx_full(d, l), 5).verdict == "pass"


def test_a0_relation_factors():
    assert [a0_relation_factor(k) for k in (4, 6, 8, 10)] == [240, -504, 480, None]
    with pytest.raises(ContractNotApplicableError):
        verify_a0_relations(ctx_full(12, 2))


def test_degenerate_rank_one_indices_vanish():
    # wedge_{-1} of a line bundle with c1 = 0 is zero in K-theory
    ctx = ctx_full(5, 1)
    m = symbolic_manifold(5)
    chi = exterior_indices(m, ctx)
    assert chi[0] - chi[1] == 0
    assert twisted_b1_index(m, ctx) == 0


def test_nondegenerate_240_relation_values():
    ctx = ctx_full(6, 2)
    m = symbolic_manifold(6)
    chi = exterior_indices(m, ctx)
    euler = chi[0] - chi[1] + chi[2]
    assert isinstance(euler, ChernForm) and euler != 0
    assert twisted_b1_index(m, ctx) == euler * 240


def test_a2_identity():
    assert verify_a2_identity(ctx_full(3, 2), 4).verdict == "pass"
    with pytest.raises(ContractNotApplicableError):
        verify_a2_identity(ctx_full(4, 2))


@pytest.mark.parametrize("d", range(1, 7))
def test_a2_tangent_chain(d):
    assert verify_a2_tangent_chain(d).verdict == "pass"


def test_modular_identities_need_c1_of_m_to_vanish():
    # with only c1(W) = 0 and p1(W) = p1(M), a1 (odd weight 5) does not vanish
    report = verify_a1_vanishing(BundleContext(5, 1, relations=True), 4)
    assert report.verdict == "fail"


def test_vanishing_series_is_vacuously_periodic():
    # rank 1 with c1(W) = 0 makes wedge_{-1} W* and hence Ell vanish
    e = ell_bundle(symbolic_manifold(3), ctx_full(3, 1), 3)
    assert e.series.is_zero()
    assert [r.verdict for r in quasi_periodicity_check(e)] == ["pass"] * 3
