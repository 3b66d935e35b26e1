"""Eisenstein series, the odd Jacobi theta function, eta powers and a
membership test for the ring of level-one modular forms C[G4, G6]."""
from dataclasses import dataclass, field
from fractions import Fraction
import re

from .arith import bernoulli, divisor_power_sum, format_rat
from .errors import InsufficientTruncationError, InvalidArgumentError
from .series import Q_DEN, QYSeries, RootSeries, is_zero, series_invert

__all__ = [
    "ModularCertificate",
    "eisenstein",
    "eta_cubed_power",
    "euler_product",
    "modular_basis",
    "modular_membership",
    "theta",
    "theta_at_root",
    "theta_hat_constant",
    "theta_product",
]


def _check_order(n):
    if not isinstance(n, int) or n < 1:
        raise InvalidArgumentError(f"q-order must be a positive integer, got {n!r}")


def eisenstein(weight, n):
    """G_weight = -B_weight/(2 weight) + sum sigma_{weight-1}(m) q^m, exponents < n."""
    _check_order(n)
    if weight < 2 or weight % 2:
        raise InvalidArgumentError(f"Eisenstein series need even weight >= 2, got {weight}")
    coeffs = [-bernoulli(weight) / (2 * weight)]
    coeffs += [Fraction(divisor_power_sum(weight - 1, m)) for m in range(1, n)]
    return QYSeries.from_q_list(coeffs, n)


def euler_product(n, power=1):
    """prod_{m >= 1} (1 - q^m)^power truncated below q^n."""
    _check_order(n)
    one = QYSeries.from_q_list([1], n)
    base = one
    for m in range(1, n):
        base = base * QYSeries.from_terms({(0, 0): 1, (m, 0): -1}, n)
    if power >= 0:
        return base**power if power else one
    return series_invert(base) ** (-power)


def theta(n):
    """sum_k (-1)^k q^((k+1/2)^2/2) y^(k+1/2), q-exponents below n."""
    _check_order(n)
    terms = {}
    k = 0
    while (2 * k + 1) ** 2 < Q_DEN * n:
        for j in (k, -k - 1):  # j and -j-1 share the q-exponent
            terms[((2 * j + 1) ** 2, 2 * j + 1)] = Fraction(-1 if j % 2 else 1)
        k += 1
    return QYSeries(terms, Q_DEN * n)


def theta_product(n):
    """Triple-product form q^(1/8)(y^(1/2) - y^(-1/2)) prod (1-q^m)(1-q^m y)(1-q^m/y)."""
    _check_order(n)
    acc = QYSeries.from_q_list([1], n)
    for m in range(1, n):
        for ye in (0, 1, -1):
            acc = acc * QYSeries.from_terms({(0, 0): 1, (m, ye): -1}, n)
    lead = QYSeries.from_terms({(Fraction(1, 8), Fraction(1, 2)): 1, (Fraction(1, 8), Fraction(-1, 2)): -1})
    return (lead * acc).truncate(n)


_ARG = re.compile(r"^(?:(-)?([vr]))?(?:([+-])?(u))?$")


def _parse_argument(arg):
    text = arg.replace(" ", "")
    m = _ARG.match(text)
    if not text or not m or (m.group(2) and m.group(4) and not m.group(3)):
        raise InvalidArgumentError(f"theta argument must be linear in one root and u, got {arg!r}")
    root = m.group(2)
    root_coef = 0 if not root else (-1 if m.group(1) else 1)
    u_coef = 0
    if m.group(4):
        u_coef = -1 if (m.group(3) == "-" or (not root and m.group(1))) else 1
    return root_coef, u_coef


def theta_at_root(arg, n, degree_cap):
    """Theta-hat(q, a) = sum_k (-1)^k q^(k(k+1)/2) e^((k+1/2) a) as a root series.

    ``arg`` is ``"v"``, ``"r-u"``, ``"u"``, ``"-u"`` and the like; ``e^(u)`` is
    written as ``y``.  The q^(1/8) prefactor of theta is left out.  The result
    has ``degree_cap + 1`` coefficients, each a q-y series.
    """
    _check_order(n)
    root_coef, u_coef = _parse_argument(arg)
    length = degree_cap + 1 if root_coef else 1
    coeffs = [dict() for _ in range(length)]
    k = 0
    while k * (k + 1) // 2 < n:
        for j in (k, -k - 1):
            half = Fraction(2 * j + 1, 2)
            qe = Q_DEN * (j * (j + 1) // 2)
            ye = int(2 * half * u_coef)
            sign = -1 if j % 2 else 1
            weight = Fraction(1)
            for deg in range(length):
                if deg:
                    weight = weight * half * root_coef / deg
                coeffs[deg][(qe, ye)] = coeffs[deg].get((qe, ye), 0) + sign * weight
        k += 1
    return RootSeries([QYSeries(c, Q_DEN * n) for c in coeffs])


def theta_hat_constant(n):
    """sum (-1)^k (2k+1) q^(k(k+1)/2), the v-linear coefficient of Theta-hat(q, v)."""
    return theta_at_root("v", n, 1)[1]


def eta_cubed_power(m, n):
    """(q^(1/8) prod (1-q^k)^3)^m with the product truncated below q^n."""
    base = euler_product(n, 3 * m)
    return base * QYSeries.monomial(1, Fraction(m, 8), 0)


# -- modular forms ------------------------------------------------------------

def modular_basis(weight):
    """Exponent pairs (a, b) with 4a + 6b = weight."""
    if weight < 0 or weight % 2:
        return []
    return [((weight - 6 * b) // 4, b) for b in range(weight // 6 + 1) if (weight - 6 * b) % 4 == 0]


@dataclass
class ModularCertificate:
    weight: int
    basis: list
    coefficients: dict
    verified_order: int
    verdict: str  # member | zero | fail
    mismatches: list = field(default_factory=list)

    @property
    def ok(self):
        return self.verdict in ("member", "zero")

    def to_text(self):
        lines = [f"weight: {self.weight}",
                 "basis: " + (", ".join(f"G4^{a} G6^{b}" for a, b in self.basis) or "(empty)"),
                 f"verified order: q^{self.verified_order}",
                 f"verdict: {self.verdict}"]
        for (a, b) in self.basis:
            c = self.coefficients.get((a, b), 0)
            lines.append(f"coefficient G4^{a} G6^{b}: {_text(c)}")
        for q, expected, actual in self.mismatches:
            lines.append(f"mismatch at q^{q}: expected {_text(expected)}, series has {_text(actual)}")
        return "\n".join(lines)


def _text(x):
    return format_rat(x) if isinstance(x, (int, Fraction)) else str(x)


def _q_coefficients(s, n):
    if s.has_y():
        raise InvalidArgumentError("modular membership needs a series without y")
    out = [0] * n
    for (qe, _), c in s.items():
        if qe < 0:
            raise InvalidArgumentError("series has negative q-powers")
        if qe.denominator != 1:
            raise InvalidArgumentError(f"series has the fractional q-exponent {qe}")
        if qe < n:
            out[int(qe)] = c
    return out


def modular_membership(s, weight, n=None):
    """Certify ``s`` as an element of M_weight(SL2(Z)) up to q^n (exclusive)."""
    if n is None:
        if s.cap is None or s.cap.denominator != 1:
            raise InvalidArgumentError("give an integral q-order for exact or fractional-cap series")
        n = int(s.cap)
    _check_order(n)
    if s.cap is not None and s.cap < n:
        raise InsufficientTruncationError(f"series known only below q^{s.cap}, asked for q^{n}")
    values = _q_coefficients(s, n)
    basis = modular_basis(weight)
    columns = []
    if basis:
        g4, g6 = eisenstein(4, n), eisenstein(6, n)
        for a, b in basis:
            col = _q_coefficients((g4**a) * (g6**b) * QYSeries.from_q_list([1], n), n)
            columns.append(col)
    pivots = _pivot_rows(columns, n)
    if len(pivots) < len(basis):
        raise InsufficientTruncationError(
            f"q-order {n} cannot separate the {len(basis)} basis forms of weight {weight}")
    coefficients = {}
    if basis:
        square = [[columns[j][r] for j in range(len(basis))] for r in pivots]
        inv = _invert(square)
        for j, key in enumerate(basis):
            acc = 0
            for i, r in enumerate(pivots):
                if inv[j][i] and not is_zero(values[r]):
                    acc = acc + values[r] * inv[j][i]
            coefficients[key] = acc
    mismatches = []
    for r in range(n):
        predicted = 0
        for j, key in enumerate(basis):
            if columns[j][r] and not is_zero(coefficients[key]):
                predicted = predicted + coefficients[key] * columns[j][r]
        if not is_zero(predicted - values[r]):
            mismatches.append((r, predicted, values[r]))
    if mismatches:
        verdict = "fail"
    elif all(is_zero(c) for c in coefficients.values()):
        verdict = "zero"
    else:
        verdict = "member"
    return ModularCertificate(weight, basis, coefficients, n, verdict, mismatches)


def _pivot_rows(columns, n):
    # greedy choice of independent rows of the n x dim matrix
    dim = len(columns)
    if not dim:
        return []
    chosen, reduced = [], []
    for r in range(n):
        row = [Fraction(columns[j][r]) for j in range(dim)]
        for piv_col, prow in reduced:
            if row[piv_col]:
                f = row[piv_col] / prow[piv_col]
                row = [x - f * y for x, y in zip(row, prow)]
        lead = next((j for j, x in enumerate(row) if x), None)
        if lead is not None:
            reduced.append((lead, row))
            chosen.append(r)
            if len(chosen) == dim:
                break
    return chosen


def _invert(matrix):
    size = len(matrix)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(size)]
           for i, row in enumerate(matrix)]
    for col in range(size):
        pivot = next(r for r in range(col, size) if aug[r][col] != 0)
        aug[col], aug[pivot] = aug[pivot], aug[col]
        scale = 1 / aug[col][col]
        aug[col] = [x * scale for x in aug[col]]
        for r in range(size):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[size:] for row in aug]
