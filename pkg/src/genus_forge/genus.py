"""chi_y-genus, pluri-genera, their Taylor data at y = -1, and index inversion.

All genera come from one recipe: build the per-root characteristic series
(with polynomial coefficients in the y variables), form the multiplicative
class over the d roots and integrate it against the manifold.
"""
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as tuples
from math import factorial

from .arith import binomial
from .cohomology import CohClass, make_monomial, multiplicative_class, todd_series
from .errors import ContractNotApplicableError, InvalidArgumentError, UnsupportedError
from .series import Poly, RootSeries

__all__ = [
    "IndexVector",
    "chern_number_index_formula",
    "chi_y",
    "chi_y_taylor_minus1",
    "closed_form_a",
    "index_vector",
    "pluri_chi",
    "pluri_coefficient",
    "pontryagin_number_index_formula",
    "reconstruct",
    "signature_index_vector",
    "signature_pluri",
    "signature_pluri_coefficient",
    "theorem_contract",
]


def y_names(g):
    return ("y",) if g == 1 else tuple(f"y{j}" for j in range(1, g + 1))


def _as_poly(value, names):
    return value if isinstance(value, Poly) else Poly.constant(value, names)


def _lambda_factor(names, j, length, sign):
    # 1 + y_j e^{sign v} as a root series with polynomial coefficients
    out = []
    for k in range(length):
        c = Fraction(sign**k, factorial(k))
        term = Poly.variable(j, names, c)
        out.append(term + Fraction(1) if k == 0 else term)
    return RootSeries(out)


def pluri_integrand(n, g, cap=None):
    """td(M) * prod_j prod_i (1 + y_j e^{-v_i}) reduced to Chern classes."""
    cap = n if cap is None else cap
    names = y_names(g)
    length = cap + 1
    q = RootSeries([Poly.constant(c, names) for c in todd_series(length).coeffs])
    for j in range(g):
        q = q * _lambda_factor(names, j, length, -1)
    return multiplicative_class(q, n, cap)


def pluri_chi(m, g=1):
    """sum over tuples of chi(M, wedge^{p_1} T* x ... ) y_1^{p_1} ... y_g^{p_g}."""
    if g < 1:
        raise InvalidArgumentError("g must be at least 1")
    return _as_poly(m.integrate(pluri_integrand(m.d, g)), y_names(g))


def chi_y(m):
    return pluri_chi(m, 1)


def chi_y_taylor_minus1(m):
    """[a_0, ..., a_d] with chi_y = sum a_i (1 + y)^i."""
    shifted = chi_y(m).expand_at_minus_one()
    return [shifted.coefficient((i,)) for i in range(m.d + 1)]


def closed_form_a(i, d):
    """Closed Chern polynomials for a_0..a_3 (with c_0 = 1)."""
    if not 0 <= i <= 3:
        raise UnsupportedError("closed forms are known for a_0..a_3 only")
    if d < 1:
        raise InvalidArgumentError("d must be at least 1")

    def c(k):
        return CohClass.one(d) if k == 0 else CohClass.gen("c", k, d)

    cd, c1cd1 = c(d), c(1) * c(d - 1)
    if i == 0:
        return cd
    if i == 1:
        return cd.scale(Fraction(-d, 2))
    if i == 2:
        return (cd.scale(Fraction(d * (3 * d - 5), 2)) + c1cd1).scale(Fraction(1, 12))
    return (cd.scale(Fraction(d * (d - 2) * (d - 3), 2)) + c1cd1.scale(d - 2)).scale(Fraction(-1, 24))


def _check_qs(qs, top):
    qs = tuple(qs)
    if not qs or any(not 0 <= q <= top for q in qs):
        raise InvalidArgumentError(f"need a nonempty tuple with 0 <= q_i <= {top}, got {qs}")
    return qs


def pluri_coefficient(m, qs):
    """Coefficient of prod (1 + y_i)^(n - q_i) in the pluri-genus."""
    qs = _check_qs(qs, m.d)
    shifted = pluri_chi(m, len(qs)).expand_at_minus_one()
    return shifted.coefficient(tuple(m.d - q for q in qs))


def signature_integrand(n, g, cap=None):
    """prod_i v_i/tanh(v_i/2) * prod_j (1 + y_j e^{-v_i})(1 + y_j e^{v_i}) in Pontrjagin classes."""
    cap = n if cap is None else cap
    names = y_names(g)
    length = 2 * (cap // 2) + 1
    todd = todd_series(length)
    base = todd * RootSeries([Fraction(1) + Fraction((-1) ** k, factorial(k)) if k == 0
                              else Fraction((-1) ** k, factorial(k)) for k in range(length)])
    q = RootSeries([Poly.constant(c, names) for c in base.coeffs])
    for j in range(g):
        q = q * _lambda_factor(names, j, length, -1) * _lambda_factor(names, j, length, 1)
    odd = [q[k] for k in range(1, length, 2)]
    if any(not c.is_zero() for c in odd):
        raise AssertionError("signature integrand is not even in the root")
    even = RootSeries([q[k] for k in range(0, length, 2)])
    return multiplicative_class(even, n, cap, kind="p", root_degree=2)


def signature_pluri(x, g=1):
    """Twisted signature indices sum over p in [0, 2n]^g, as a polynomial in y."""
    if g < 1:
        raise InvalidArgumentError("g must be at least 1")
    return _as_poly(x.integrate(signature_integrand(x.d, g)), y_names(g))


def signature_pluri_coefficient(x, qs, assert_contract=False):
    """Coefficient of prod (1 + y_i)^(2(n - q_i)); optionally checked against the contract."""
    qs = _check_qs(qs, x.d)
    if assert_contract and x.d % 2:
        raise ContractNotApplicableError(f"the signature contract needs even n, got n={x.d}")
    shifted = signature_pluri(x, len(qs)).expand_at_minus_one()
    value = shifted.coefficient(tuple(2 * (x.d - q) for q in qs))
    if assert_contract:
        expected = theorem_contract(x, qs, signature=True)
        if expected is not None and value != expected:
            raise AssertionError(f"coefficient {value} differs from contract value {expected}")
    return value


def theorem_contract(m, qs, signature=False):
    """Value the coefficient theorems predict, or ``None`` below the top degree."""
    n = m.d
    total = sum(qs)
    if signature:
        if n % 2:
            raise ContractNotApplicableError(f"the signature contract needs even n, got n={n}")
        top, kind = n // 2, "p"
        factor = (-1) ** (n // 2) * 2**n
    else:
        top, kind, factor = n, "c", 1
    if total > top:
        return Fraction(0) if not m.symbolic else m.integrate(CohClass.constant(Fraction(0), n))
    if total < top:
        return None
    mono = make_monomial(((kind, q), 1) for q in qs if q)
    return m.integrate(CohClass({mono: Fraction(factor)}, n))


# -- index vectors and inversion ----------------------------------------------

@dataclass
class IndexVector:
    """chi(M, wedge^{p_1} x ... x wedge^{p_g}) for every tuple p."""

    g: int
    entries: dict

    def __getitem__(self, p):
        return self.entries[tuple(p)]


def _poly_to_index_vector(poly, g, top):
    return IndexVector(g, {p: poly.coefficient(p) for p in tuples(range(top + 1), repeat=g)})


def index_vector(m, g):
    return _poly_to_index_vector(pluri_chi(m, g), g, m.d)


def signature_index_vector(x, g):
    return _poly_to_index_vector(signature_pluri(x, g), g, 2 * x.d)


def _weights(n, ks, top, scale):
    out = []
    for p in tuples(range(top + 1), repeat=len(ks)):
        w = Fraction(1)
        for pi, k in zip(p, ks):
            w *= (-1) ** (pi - k) * binomial(pi, k)
            if w == 0:
                break
        if w:
            out.append((p, w / scale))
    return out


def chern_number_index_formula(n, qs):
    """Weights with integral of prod c_{q_i} = sum_p weight_p * chi(M, wedge^{p_1} T* x ...)."""
    qs = tuple(qs)
    if n < 1 or not qs or any(q < 0 for q in qs) or sum(qs) != n:
        raise InvalidArgumentError(f"need q_i >= 0 summing to n={n}, got {qs}")
    return [(p, int(w)) for p, w in _weights(n, [n - q for q in qs], n, 1)]


def pontryagin_number_index_formula(n, qs):
    """Weights with integral of prod p_{q_i} = sum_p weight_p * (twisted signature index)."""
    qs = tuple(qs)
    if n % 2:
        raise ContractNotApplicableError(f"Pontrjagin-number formula needs even n, got n={n}")
    if n < 2 or not qs or any(q < 0 for q in qs) or 2 * sum(qs) != n:
        raise InvalidArgumentError(f"need q_i >= 0 summing to n/2={n // 2}, got {qs}")
    scale = (-1) ** (n // 2) * 2**n
    return _weights(n, [2 * (n - q) for q in qs], 2 * n, scale)


def reconstruct(weights, vector):
    """Apply index weights to an index vector."""
    total = Fraction(0)
    for p, w in weights:
        total = total + vector[p] * w
    return total
