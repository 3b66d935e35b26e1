"""The identity suite behind ``genus-forge verify``.

Each group returns a list of :class:`Report`; a failing report makes the
whole run fail.  Modular statements are checked under the full hypothesis
set c1(W) = 0, p1(W) = p1(M) and c1(M) = 0.
"""
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as tuples
import time

from .arith import format_rat
from .cohomology import BundleContext, CohClass, format_monomial, make_monomial, partitions
from .elliptic import (
    ell_bundle,
    quasi_periodicity_check,
    s_transform_numeric_check,
    verify_a0_relations,
    verify_a1_vanishing,
    verify_a2_identity,
    verify_a2_tangent_chain,
    verify_route_agreement,
)
from .errors import GenusForgeError
from .genus import (
    chern_number_index_formula,
    chi_y_taylor_minus1,
    closed_form_a,
    index_vector,
    pluri_chi,
    pontryagin_number_index_formula,
    reconstruct,
    signature_index_vector,
    signature_pluri,
    signature_pluri_coefficient,
)
from .manifolds import catalog, symbolic_manifold
from .qforms import eisenstein, theta, theta_product
from .reports import Report
from .series import is_zero

__all__ = ["GROUPS", "SuiteItem", "run_suite"]


def _text(x):
    return format_rat(x) if isinstance(x, (int, Fraction)) else str(x)


def _report(identity, context, order, failures, details=()):
    return Report(identity, context, order, "fail" if failures else "pass", list(details), list(failures))


def check_closed_forms(max_d=6):
    out = []
    for d in range(1, max_d + 1):
        m = symbolic_manifold(d)
        computed = chi_y_taylor_minus1(m) + [Fraction(0)] * 3
        failures = []
        for i in range(4):
            expected = m.integrate(closed_form_a(i, d))
            if not is_zero(computed[i] - expected):
                failures.append(f"a_{i}: {_text(computed[i])} vs {_text(expected)}")
        out.append(_report("closed forms a_0..a_3", f"symbolic d={d}", "exact", failures))
    return out


def _product_number(m, qs, kind="c", factor=1):
    mono = make_monomial(((kind, q), 1) for q in qs if q)
    return m.integrate(CohClass({mono: Fraction(factor)}, m.d))


def check_chern_coefficient_theorem(max_n=4, max_g=3):
    out = []
    for n in range(1, max_n + 1):
        m = symbolic_manifold(n)
        for g in range(1, max_g + 1):
            shifted = pluri_chi(m, g).expand_at_minus_one()
            failures, checked = [], 0
            for qs in tuples(range(n + 1), repeat=g):
                total = sum(qs)
                if total < n:
                    continue
                value = shifted.coefficient(tuple(n - q for q in qs))
                expected = Fraction(0) if total > n else _product_number(m, qs)
                checked += 1
                if not is_zero(value - expected):
                    failures.append(f"q={qs}: {_text(value)} vs {_text(expected)}")
            out.append(_report("pluri coefficient theorem", f"symbolic n={n} g={g}", "exact", failures,
                               [f"{checked} tuples at or above the top degree"]))
    return out


def check_signature_coefficient_theorem():
    out = []
    for n in (2, 4):
        m = symbolic_manifold(n, kind="p")
        factor = (-1) ** (n // 2) * 2**n
        for g in (1, 2):
            shifted = signature_pluri(m, g).expand_at_minus_one()
            failures, checked = [], 0
            for qs in tuples(range(n + 1), repeat=g):
                total = sum(qs)
                if 2 * total < n:
                    continue
                value = shifted.coefficient(tuple(2 * (n - q) for q in qs))
                expected = Fraction(0) if 2 * total > n else _product_number(m, qs, "p", factor)
                checked += 1
                if not is_zero(value - expected):
                    failures.append(f"q={qs}: {_text(value)} vs {_text(expected)}")
            out.append(_report("signature coefficient theorem", f"symbolic n={n} g={g}", "exact", failures,
                               [f"{checked} tuples at or above the top degree"]))
    cp2 = signature_pluri_coefficient(catalog("cp2"), (1,), assert_contract=False)
    out.append(_report("signature coefficient on CP2", "cp2 q=(1)", "exact",
                       [] if cp2 == -12 else [f"got {_text(cp2)}, expected -12"], [f"value {_text(cp2)}"]))
    return out


def check_index_reconstruction(names=("cp1", "cp2", "cp3", "k3")):
    out = []
    for name in names:
        m = catalog(name)
        failures, lines = [], []
        vectors = {}
        for lam in partitions(m.d):
            g = len(lam)
            if g not in vectors:
                vectors[g] = index_vector(m, g)
            value = reconstruct(chern_number_index_formula(m.d, lam), vectors[g])
            mono = make_monomial((("c", q), 1) for q in lam)
            lines.append(f"{format_monomial(mono)} = {_text(value)}")
            if value != m.numbers[mono]:
                failures.append(f"{format_monomial(mono)}: {_text(value)} vs {_text(m.numbers[mono])}")
        if m.d % 2 == 0:
            pvec = {}
            for lam in partitions(m.d // 2):
                g = len(lam)
                if g not in pvec:
                    pvec[g] = signature_index_vector(m, g)
                value = reconstruct(pontryagin_number_index_formula(m.d, lam), pvec[g])
                mono = make_monomial((("p", q), 1) for q in lam)
                expected = m.integrate(CohClass({mono: Fraction(1)}, m.d))
                lines.append(f"{format_monomial(mono)} = {_text(value)}")
                if value != expected:
                    failures.append(f"{format_monomial(mono)}: {_text(value)} vs {_text(expected)}")
        out.append(_report("index-formula reconstruction", name, "exact", failures, lines))
    return out


def elliptic_contexts():
    """(manifold, context) pairs for the route and transformation checks."""
    return [
        (catalog("k3"), BundleContext.for_tangent(2, relations=True)),
        (symbolic_manifold(2), BundleContext(2, 2, relations=True)),
        (symbolic_manifold(3), BundleContext(3, 1, relations=True)),
    ]


def check_routes(qorder=4):
    return [verify_route_agreement(m, ctx, qorder) for m, ctx in elliptic_contexts()]


def check_quasi_periodicity(qorder=4):
    out = []
    for m, ctx in elliptic_contexts():
        for r in quasi_periodicity_check(ell_bundle(m, ctx, qorder)):
            r.context = f"{m.name} {r.context}"
            out.append(r)
    return out


def modular_context(d, l):
    return BundleContext(d, l, relations=True, c1_vanishes=True)


def check_modular(qorder=5):
    out = [verify_a1_vanishing(modular_context(5, 1), qorder)]
    for d, l in ((5, 1), (7, 1), (6, 2), (8, 2)):
        out.append(verify_a0_relations(modular_context(d, l), qorder))
    out.append(verify_a1_vanishing(modular_context(4, 2), qorder))
    return out


def check_a2(qorder=4):
    out = [verify_a2_identity(modular_context(3, 2), qorder)]
    out += [verify_a2_tangent_chain(d) for d in range(1, 7)]
    return out


def check_qforms(order=6):
    failures = []
    for weight, constant in ((2, Fraction(-1, 24)), (4, Fraction(1, 240)), (6, Fraction(-1, 504))):
        got = eisenstein(weight, order).coefficient(0)
        if got != constant:
            failures.append(f"G{weight} constant {_text(got)} vs {_text(constant)}")
    if theta(order) != theta_product(order):
        failures.append("theta sum and triple product differ")
    return [_report("Eisenstein constants and theta triple product", "q-forms", f"q^{order}", failures)]


def check_extended(qorder=5):
    k3 = catalog("k3")
    out = [s_transform_numeric_check(ell_bundle(k3, BundleContext.for_tangent(2, relations=True), 20))]
    out.append(verify_a0_relations(modular_context(10, 2), qorder))
    out.append(verify_a0_relations(modular_context(9, 1), qorder))
    return out


@dataclass
class SuiteItem:
    key: str
    title: str
    group: str
    run: object
    extended: bool = False


def _items(qorder):
    q5 = max(qorder, 5)
    return [
        SuiteItem("closed-forms", "closed forms of a_0..a_3", "genus", check_closed_forms),
        SuiteItem("pluri", "pluri coefficient theorem", "genus", check_chern_coefficient_theorem),
        SuiteItem("signature", "signature coefficient theorem", "genus", check_signature_coefficient_theorem),
        SuiteItem("index-formula", "index-formula reconstruction", "genus", check_index_reconstruction),
        SuiteItem("routes", "elliptic route agreement", "elliptic", lambda: check_routes(qorder)),
        SuiteItem("quasi-periodicity", "transformation laws", "elliptic", lambda: check_quasi_periodicity(qorder)),
        SuiteItem("modular", "modular coefficient relations", "modular", lambda: check_modular(q5)),
        SuiteItem("a2", "a_2 identity and chain", "modular", lambda: check_a2(qorder)),
        SuiteItem("qforms", "Eisenstein and theta anchors", "qforms", lambda: check_qforms(6)),
        SuiteItem("extended", "S-transform and the 480 relation", "extended", lambda: check_extended(q5), True),
    ]


GROUPS = ("all", "genus", "elliptic", "modular", "qforms")


def run_suite(suite="all", qorder=4, extended=False):
    """Run the selected group; returns ``[(item, reports, seconds)]``."""
    if suite not in GROUPS:
        raise ValueError(f"unknown suite {suite!r}")
    results = []
    for item in _items(qorder):
        if item.extended and not extended:
            continue
        if not item.extended and suite != "all" and item.group != suite:
            continue
        start = time.perf_counter()
        try:
            reports = item.run()
        except GenusForgeError as exc:
            reports = [Report(item.title, "-", "-", "fail", [], [f"{type(exc).__name__}: {exc}"])]
        results.append((item, reports, time.perf_counter() - start))
    return results
