"""Truncated series rings used by the genus computations.

Four containers live here, all generic in their coefficient ring (``Fraction``,
``ChernForm`` or another container, as long as ``+`` and ``*`` make sense):

* :class:`QYSeries` -- Laurent-Puiseux series in ``q`` (exponents in 1/8 Z) and
  ``y`` (exponents in 1/2 Z), truncated in ``q``.
* :class:`Poly` -- exact multivariate polynomial in named variables.
* :class:`RootSeries` -- truncated power series in a single root variable.
* :class:`ZSeries` -- power series in ``u = 2 pi i z`` with q-series coefficients.
"""
from fractions import Fraction
from math import factorial

from .arith import binomial, format_rat
from .errors import InvalidArgumentError, NonUnitError, InsufficientTruncationError

__all__ = [
    "QYSeries",
    "Poly",
    "RootSeries",
    "ZSeries",
    "is_zero",
    "series_exp",
    "series_invert",
    "shift_y_by_q",
    "y_to_z",
]

Q_DEN = 8
Y_DEN = 2


def is_zero(c):
    if isinstance(c, (int, Fraction)):
        return c == 0
    return c.is_zero()


def _scaled(value, den, what):
    value = Fraction(value)
    scaled = value * den
    if scaled.denominator != 1:
        raise InvalidArgumentError(f"{what} exponent {value} is not a multiple of 1/{den}")
    return int(scaled)


def _exp_text(e):
    e = Fraction(e)
    if e.denominator == 1:
        return "" if e == 1 else f"^{e.numerator}"
    return f"^({e.numerator}/{e.denominator})"


def _coeff_text(c, has_vars):
    """Split a coefficient into (sign, body) for pretty-printing."""
    if isinstance(c, (int, Fraction)):
        sign = "-" if c < 0 else "+"
        mag = abs(Fraction(c))
        if has_vars and mag == 1:
            return sign, ""
        return sign, format_rat(mag)
    return "+", f"({c})"


def format_terms(items, compact=False):
    """Render ``[(coeff, [(name, exponent), ...]), ...]`` as a signed sum.

    ``compact`` glues numeric coefficients to the variables ("20y" rather
    than "20*y").
    """
    glue = "" if compact else "*"
    pieces = []
    for coeff, powers in items:
        mono = "*".join(f"{name}{_exp_text(e)}" for name, e in powers if e != 0)
        sign, body = _coeff_text(coeff, bool(mono))
        text = body + (mono if not body else (glue + mono if mono else ""))
        if not text:
            text = "1"
        pieces.append((sign, text))
    if not pieces:
        return "0"
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, text in pieces[1:]:
        out += f" {sign} {text}"
    return out


class QYSeries:
    """Truncated series in q and y.

    ``terms`` maps ``(8*q_exponent, 2*y_exponent)`` to a coefficient and
    ``cap8`` is the exclusive q-cap in eighths (``None`` means exact).
    Arithmetic never extends the truncation: the product cap follows the
    valuation rule ``min(capA + val(B), capB + val(A))``.
    """

    __slots__ = ("terms", "cap8")

    def __init__(self, terms=None, cap8=None):
        clean = {}
        if terms:
            for key, c in terms.items():
                if cap8 is not None and key[0] >= cap8:
                    continue
                if not is_zero(c):
                    clean[key] = c
        self.terms = clean
        self.cap8 = cap8

    # -- construction -------------------------------------------------
    @classmethod
    def from_terms(cls, terms, cap=None):
        """Build from ``{(q_exp, y_exp): coeff}`` with rational exponents."""
        raw = {}
        for (qe, ye), c in terms.items():
            key = (_scaled(qe, Q_DEN, "q"), _scaled(ye, Y_DEN, "y"))
            raw[key] = raw.get(key, 0) + c
        return cls(raw, None if cap is None else _scaled(cap, Q_DEN, "q cap"))

    @classmethod
    def monomial(cls, coeff=1, q=0, y=0, cap=None):
        return cls.from_terms({(q, y): Fraction(coeff) if isinstance(coeff, int) else coeff}, cap)

    @classmethod
    def from_q_list(cls, coeffs, cap=None):
        """Integral q-series from a coefficient list, capped at ``len(coeffs)`` by default."""
        cap = len(coeffs) if cap is None else cap
        return cls({(Q_DEN * i, 0): Fraction(c) if isinstance(c, int) else c
                    for i, c in enumerate(coeffs)}, Q_DEN * cap)

    @classmethod
    def zero(cls, cap=None):
        return cls({}, None if cap is None else _scaled(cap, Q_DEN, "q cap"))

    # -- inspection ---------------------------------------------------
    @property
    def cap(self):
        return None if self.cap8 is None else Fraction(self.cap8, Q_DEN)

    def is_zero(self):
        return not self.terms

    def valuation8(self):
        """Lowest stored q-exponent (eighths); the cap for a truncated zero."""
        if self.terms:
            return min(k[0] for k in self.terms)
        return self.cap8

    def coefficient(self, q=0, y=0):
        key = (_scaled(q, Q_DEN, "q"), _scaled(y, Y_DEN, "y"))
        if self.cap8 is not None and key[0] >= self.cap8:
            raise InsufficientTruncationError(f"q^{q} lies beyond the truncation O(q^{self.cap})")
        return self.terms.get(key, 0)

    def q_slice(self, q):
        """``{y_exponent: coeff}`` of the q^q slice."""
        q8 = _scaled(q, Q_DEN, "q")
        if self.cap8 is not None and q8 >= self.cap8:
            raise InsufficientTruncationError(f"q^{q} lies beyond the truncation O(q^{self.cap})")
        return {Fraction(b, Y_DEN): c for (a, b), c in self.terms.items() if a == q8}

    def items(self):
        """Terms as ``((q_exp, y_exp), coeff)`` in canonical (q, y) order."""
        for (a, b) in sorted(self.terms):
            yield (Fraction(a, Q_DEN), Fraction(b, Y_DEN)), self.terms[(a, b)]

    def has_y(self):
        return any(b for _, b in self.terms)

    def truncate(self, cap):
        cap8 = _scaled(cap, Q_DEN, "q cap")
        if self.cap8 is not None and self.cap8 < cap8:
            raise InsufficientTruncationError(
                f"cannot truncate O(q^{self.cap}) to the larger cap q^{cap}")
        return QYSeries(self.terms, cap8)

    def map_coefficients(self, fn):
        return QYSeries({k: fn(c) for k, c in self.terms.items()}, self.cap8)

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, QYSeries):
            return other
        return QYSeries({(0, 0): other}, None)

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        other = self._coerce(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return QYSeries(out, _min_cap(self.cap8, other.cap8))

    __radd__ = __add__

    def __neg__(self):
        return QYSeries({k: -c for k, c in self.terms.items()}, self.cap8)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, x):
        return QYSeries({k: c * x for k, c in self.terms.items()}, self.cap8)

    def __mul__(self, other):
        if not isinstance(other, QYSeries):
            return self.scale(other)
        cap8 = _product_cap(self, other)
        if not self.terms or not other.terms:
            return QYSeries({}, cap8)
        right = sorted(other.terms.items())
        out = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in right:
                a = a1 + a2
                if cap8 is not None and a >= cap8:
                    break
                key = (a, b1 + b2)
                prod = c1 * c2
                out[key] = out[key] + prod if key in out else prod
        return QYSeries(out, cap8)

    def __rmul__(self, other):
        return QYSeries({k: other * c for k, c in self.terms.items()}, self.cap8)

    def __pow__(self, n):
        if not isinstance(n, int):
            raise InvalidArgumentError("only integer powers are supported")
        if n < 0:
            return series_invert(self) ** (-n)
        result = QYSeries({(0, 0): Fraction(1)}, None)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return (self - other).is_zero()
        if isinstance(other, QYSeries):
            return (self - other).is_zero()
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"QYSeries({self})"

    def __str__(self):
        items = []
        for (qe, ye), c in self.items():
            items.append((c, [("q", qe), ("y", ye)]))
        text = format_terms(items)
        if self.cap8 is not None:
            text += f" + O(q{_exp_text(self.cap) if self.cap != 1 else ''})"
        return text


def _min_cap(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _product_cap(s, t):
    if (not s.terms and s.cap8 is None) or (not t.terms and t.cap8 is None):
        return None
    caps = []
    if s.cap8 is not None:
        caps.append(s.cap8 + t.valuation8())
    if t.cap8 is not None:
        caps.append(t.cap8 + s.valuation8())
    return min(caps) if caps else None


def series_invert(s):
    """Multiplicative inverse of a q-y series whose lowest q-slice is a single unit term."""
    if not isinstance(s, QYSeries):
        raise InvalidArgumentError("series_invert expects a QYSeries")
    if not s.terms:
        raise NonUnitError("cannot invert a zero series")
    v = s.valuation8()
    lead = {k: c for k, c in s.terms.items() if k[0] == v}
    if len(lead) != 1:
        raise NonUnitError("leading q-slice is not a single monomial in y")
    (lead_key, lead_c), = lead.items()
    if not isinstance(lead_c, (int, Fraction)) or lead_c == 0:
        raise NonUnitError("leading coefficient is not a unit scalar")
    inv_lead = QYSeries({(-lead_key[0], -lead_key[1]): 1 / Fraction(lead_c)}, None)
    rest = s * inv_lead - 1  # positive q-valuation
    if s.cap8 is None and not rest.terms:
        return inv_lead
    if s.cap8 is None:
        raise InvalidArgumentError("inverse of an exact non-monomial series needs a truncation")
    cap8 = s.cap8 - v
    rest = QYSeries(rest.terms, cap8)
    result = QYSeries({(0, 0): Fraction(1)}, cap8)
    power = QYSeries({(0, 0): Fraction(1)}, cap8)
    while True:
        power = -(power * rest)
        power = QYSeries(power.terms, cap8)
        if not power.terms:
            break
        result = result + power
    return result * inv_lead


class Poly:
    """Exact multivariate polynomial; ``terms`` maps exponent tuples to coefficients."""

    __slots__ = ("terms", "names")

    def __init__(self, terms=None, names=("y",)):
        self.names = tuple(names)
        self.terms = {k: c for k, c in (terms or {}).items() if not is_zero(c)}

    @classmethod
    def constant(cls, c, names=("y",)):
        return cls({(0,) * len(names): c}, names)

    @classmethod
    def variable(cls, i, names=("y",), coeff=Fraction(1)):
        exps = [0] * len(names)
        exps[i] = 1
        return cls({tuple(exps): coeff}, names)

    @property
    def nvars(self):
        return len(self.names)

    def is_zero(self):
        return not self.terms

    def coefficient(self, exps):
        return self.terms.get(tuple(exps), 0)

    def degree(self, i=None):
        if not self.terms:
            return -1
        if i is None:
            return max(sum(k) for k in self.terms)
        return max(k[i] for k in self.terms)

    def map_coefficients(self, fn):
        return Poly({k: fn(c) for k, c in self.terms.items()}, self.names)

    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        return Poly.constant(other, self.names)

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        other = self._coerce(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return Poly(out, self.names)

    __radd__ = __add__

    def __neg__(self):
        return Poly({k: -c for k, c in self.terms.items()}, self.names)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, x):
        return Poly({k: c * x for k, c in self.terms.items()}, self.names)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        out = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                prod = c1 * c2
                out[k] = out[k] + prod if k in out else prod
        return Poly(out, self.names)

    def __rmul__(self, other):
        return Poly({k: other * c for k, c in self.terms.items()}, self.names)

    def __pow__(self, n):
        result = Poly.constant(Fraction(1), self.names)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            return (self - other).is_zero()
        return NotImplemented

    __hash__ = None

    def expand_at_minus_one(self):
        """Re-expand in s_j = 1 + y_j: the result's s-coefficients are the (1+y)-coefficients."""
        out = {}
        for exps, c in self.terms.items():
            partial = [((), c)]
            for e in exps:
                nxt = []
                for prefix, acc in partial:
                    for k in range(e + 1):
                        w = binomial(e, k) * (-1) ** (e - k)
                        nxt.append((prefix + (k,), acc * w))
                partial = nxt
            for key, val in partial:
                out[key] = out[key] + val if key in out else val
        return Poly(out, self.names)

    def evaluate(self, values):
        total = 0
        for exps, c in self.terms.items():
            w = Fraction(1)
            for v, e in zip(values, exps):
                w *= Fraction(v) ** e
            total = total + c * w
        return total

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        return self.to_text()

    def to_text(self, compact=False):
        keys = sorted(self.terms, key=lambda k: (sum(k), tuple(-e for e in k)))
        return format_terms([(self.terms[k], list(zip(self.names, k))) for k in keys], compact)


class RootSeries:
    """Power series in one root variable, truncated below ``len(coeffs)``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = list(coeffs)

    @classmethod
    def exp(cls, a, length):
        """e^{a v} with rational ``a``."""
        a = Fraction(a)
        return cls([a**k / factorial(k) for k in range(length)])

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k] if k < len(self.coeffs) else 0

    def __add__(self, other):
        n = min(len(self), len(other))
        return RootSeries([self.coeffs[i] + other.coeffs[i] for i in range(n)])

    def __neg__(self):
        return RootSeries([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, x):
        return RootSeries([c * x for c in self.coeffs])

    def __mul__(self, other):
        if not isinstance(other, RootSeries):
            return self.scale(other)
        n = min(len(self), len(other))
        out = []
        for k in range(n):
            acc = 0
            for i in range(k + 1):
                a, b = self.coeffs[i], other.coeffs[k - i]
                if is_zero(a) or is_zero(b):
                    continue
                acc = acc + a * b
            out.append(acc)
        return RootSeries(out)

    __rmul__ = scale

    def rescale(self, a):
        """Substitute v -> a*v."""
        a = Fraction(a)
        return RootSeries([c * a**k for k, c in enumerate(self.coeffs)])

    def shift_down(self):
        """Divide by v; the constant coefficient must vanish."""
        if self.coeffs and not is_zero(self.coeffs[0]):
            raise InvalidArgumentError("series has a nonzero constant term; cannot divide by v")
        return RootSeries(self.coeffs[1:])

    def invert(self):
        if not self.coeffs:
            raise NonUnitError("empty series")
        lead = self.coeffs[0]
        if isinstance(lead, (int, Fraction)):
            if lead == 0:
                raise NonUnitError("constant term is zero")
            lead_inv = 1 / Fraction(lead)
        else:
            lead_inv = series_invert(lead)
        out = [lead_inv]
        for k in range(1, len(self.coeffs)):
            acc = 0
            for i in range(1, k + 1):
                if is_zero(self.coeffs[i]):
                    continue
                acc = acc + self.coeffs[i] * out[k - i]
            out.append(-(acc * lead_inv))
        return RootSeries(out)

    def map_coefficients(self, fn):
        return RootSeries([fn(c) for c in self.coeffs])

    def __repr__(self):
        return f"RootSeries({self.coeffs!r})"


class ZSeries:
    """Power series in u = 2*pi*i*z whose coefficients are q-series."""

    __slots__ = ("coeffs", "ucap")

    def __init__(self, coeffs, ucap):
        self.ucap = ucap
        self.coeffs = {m: c for m, c in coeffs.items() if m < ucap and not is_zero(c)}

    def coefficient(self, m):
        if m >= self.ucap:
            raise InsufficientTruncationError(f"u^{m} lies beyond the truncation O(u^{self.ucap})")
        return self.coeffs.get(m, 0)

    def is_zero(self):
        return not self.coeffs

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        if not isinstance(other, ZSeries):
            other = ZSeries({0: other}, self.ucap)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out[m] + c if m in out else c
        return ZSeries(out, min(self.ucap, other.ucap))

    __radd__ = __add__

    def __neg__(self):
        return ZSeries({m: -c for m, c in self.coeffs.items()}, self.ucap)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, x):
        return ZSeries({m: c * x for m, c in self.coeffs.items()}, self.ucap)

    def __mul__(self, other):
        if not isinstance(other, ZSeries):
            return self.scale(other)
        ucap = min(self.ucap, other.ucap)
        out = {}
        for m1, c1 in self.coeffs.items():
            for m2, c2 in other.coeffs.items():
                m = m1 + m2
                if m >= ucap:
                    continue
                prod = c1 * c2
                out[m] = out[m] + prod if m in out else prod
        return ZSeries(out, ucap)

    def __repr__(self):
        body = ", ".join(f"u^{m}: {self.coeffs[m]}" for m in sorted(self.coeffs))
        return f"ZSeries({{{body}}}, ucap={self.ucap})"


def series_exp(s):
    """exp(s) for a QYSeries of positive q-valuation or a ZSeries without u^0 term."""
    if isinstance(s, ZSeries):
        if 0 in s.coeffs:
            raise InvalidArgumentError("exp needs a series without constant term")
        one = ZSeries({0: Fraction(1)}, s.ucap)
        result, power = one, one
        for k in range(1, s.ucap):
            power = (power * s).scale(Fraction(1, k))
            if power.is_zero():
                break
            result = result + power
        return result
    if isinstance(s, QYSeries):
        if any(a <= 0 for a, _ in s.terms):
            raise InvalidArgumentError("exp needs a series of positive q-valuation (no constant term)")
        if not s.terms:
            return QYSeries({(0, 0): Fraction(1)}, s.cap8)
        if s.cap8 is None:
            raise InvalidArgumentError("exp of an exact non-zero series needs a truncation")
        result = QYSeries({(0, 0): Fraction(1)}, s.cap8)
        power = QYSeries({(0, 0): Fraction(1)}, s.cap8)
        k = 0
        while True:
            k += 1
            power = QYSeries((power * s).terms, s.cap8).scale(Fraction(1, k))
            if not power.terms:
                break
            result = result + power
        return result
    raise InvalidArgumentError(f"series_exp does not support {type(s).__name__}")


def shift_y_by_q(s):
    """Realise z -> z + tau: every term q^a y^b becomes q^(a+b) y^b.

    Returns ``(shifted, dropped)``.  Terms pushed to or beyond the cap are dropped
    and flagged.  Only coefficients at (a, b) with a - b below the source cap
    are complete in the result.
    """
    out = {}
    dropped = False
    for (a, b), c in s.terms.items():
        a_new = a + b * (Q_DEN // Y_DEN)
        if s.cap8 is not None and a_new >= s.cap8:
            dropped = True
            continue
        out[(a_new, b)] = c
    return QYSeries(out, s.cap8), dropped


def y_to_z(s, ucap):
    """Substitute y^k -> exp(k u) and collect by powers of u."""
    coeffs = {}
    for (a, b), c in s.terms.items():
        k = Fraction(b, Y_DEN)
        for m in range(ucap):
            w = k**m / factorial(m)
            if w == 0:
                continue
            term = QYSeries({(a, 0): c * w}, None)
            coeffs[m] = coeffs[m] + term if m in coeffs else term
    return ZSeries({m: QYSeries(c.terms, s.cap8) for m, c in coeffs.items()}, ucap)
