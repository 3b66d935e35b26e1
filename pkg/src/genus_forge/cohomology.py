"""Graded polynomial ring in Chern generators, with formal-root reduction.

Generators are ``(kind, index)`` pairs:

==========  =====================================  ===============
kind        meaning                                degree
==========  =====================================  ===============
``c``       Chern classes of M                     index
``w``       Chern classes of the twisting bundle W index
``p``       Pontrjagin classes                     2 * index
``v``       normalized Chern roots of M            1
``r``       normalized Chern roots of W            1
==========  =====================================  ===============

Root variables stand for ``2*pi*i*x`` so every characteristic series has
rational coefficients.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial
import re

from .arith import format_rat
from .errors import (
    InsufficientTruncationError,
    InvalidArgumentError,
    NonUnitError,
    SymmetryViolationError,
    UnsatisfiableRelationError,
)
from .series import RootSeries, is_zero

__all__ = [
    "BundleContext",
    "ChernForm",
    "CohClass",
    "additive_class",
    "apply_relations",
    "elementary_in_roots",
    "expand_pontryagin",
    "format_monomial",
    "integrate",
    "make_monomial",
    "monomial_degree",
    "monomial_to_elementary",
    "multiplicative_class",
    "parse_monomial",
    "partitions",
    "pontryagin_from_chern",
    "roots_to_elementary",
    "signed_root_chern",
]

KIND_ORDER = {"c": 0, "w": 1, "p": 2, "v": 3, "r": 4}
ROOT_KINDS = {"v": "c", "r": "w"}


# -- monomials ---------------------------------------------------------------

def gen_degree(gen):
    kind, i = gen
    if kind in ROOT_KINDS:
        return 1
    if kind == "p":
        return 2 * i
    return i


def _gen_key(item):
    (kind, i), _ = item
    return KIND_ORDER.get(kind, 9), kind, i


def make_monomial(powers):
    """Canonical monomial from ``(generator, exponent)`` pairs (repeats are merged)."""
    acc = {}
    for gen, e in powers:
        acc[gen] = acc.get(gen, 0) + e
    return tuple(sorted(((g, e) for g, e in acc.items() if e), key=_gen_key))


def monomial_degree(mono):
    return sum(gen_degree(g) * e for g, e in mono)


def mono_from_partition(parts, kind):
    return make_monomial(((kind, p), 1) for p in parts if p)


def format_monomial(mono):
    if not mono:
        return "1"
    return " ".join(f"{k}{i}" + (f"^{e}" if e != 1 else "") for (k, i), e in mono)


_MONO_TOKEN = re.compile(r"([a-z])(\d+)(?:\^(\d+))?$")


def parse_monomial(text):
    """Inverse of :func:`format_monomial`, e.g. ``"c1^2 c2"``."""
    text = text.strip()
    if text == "1":
        return ()
    powers = []
    for token in text.split():
        m = _MONO_TOKEN.match(token)
        if not m or m.group(1) not in KIND_ORDER or int(m.group(2)) < 1:
            raise InvalidArgumentError(f"bad monomial token {token!r}")
        powers.append(((m.group(1), int(m.group(2))), int(m.group(3) or 1)))
    return make_monomial(powers)


# -- partitions and the monomial -> elementary transition ---------------------

@lru_cache(maxsize=None)
def partitions(k, max_part=None, max_len=None):
    """Partitions of ``k`` as descending tuples, optionally bounded."""
    if max_part is None:
        max_part = k
    if max_len is None:
        max_len = k
    if k == 0:
        return ((),)
    if max_len == 0:
        return ()
    out = []
    for first in range(min(k, max_part), 0, -1):
        for rest in partitions(k - first, first, max_len - 1):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def _zero_one_count(rows, cols):
    # number of 0-1 matrices with the given row and column sums
    if not rows:
        return 1 if not any(cols) else 0
    if sum(rows) != sum(cols):
        return 0
    r, rest = rows[0], rows[1:]
    total = 0
    for subset in combinations(range(len(cols)), r):
        if any(cols[i] == 0 for i in subset):
            continue
        new = list(cols)
        for i in subset:
            new[i] -= 1
        total += _zero_one_count(rest, tuple(sorted(new, reverse=True)))
    return total


def _invert(matrix):
    n = len(matrix)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


@lru_cache(maxsize=None)
def _m_to_e_table(k, n):
    mons = partitions(k, max_len=n)
    elems = partitions(k, max_part=n)
    # e_mu = sum_lam A[mu][lam] m_lam, so m = A^{-1} e
    a = [[_zero_one_count(mu, lam + (0,) * (k - len(lam))) for lam in mons] for mu in elems]
    inv = _invert(a)
    table = {}
    for j, lam in enumerate(mons):
        table[lam] = {mu: inv[j][i] for i, mu in enumerate(elems) if inv[j][i] != 0}
    return table


def monomial_to_elementary(lam, n):
    """Express m_lam(x_1..x_n) as ``{mu: coeff}`` meaning sum coeff * e_mu."""
    lam = tuple(sorted((p for p in lam if p), reverse=True))
    if len(lam) > n:
        return {}
    k = sum(lam)
    return _m_to_e_table(k, min(n, k))[lam]


# -- characteristic numbers as formal symbols --------------------------------

class ChernForm:
    """Rational linear combination of characteristic-number symbols ``[m]``.

    The empty monomial stands for the constant 1, so scalars mix in freely.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {m: Fraction(c) for m, c in (terms or {}).items() if c != 0}

    @classmethod
    def symbol(cls, mono, coeff=1):
        return cls({mono: coeff})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return self
            other = ChernForm({(): other})
        if not isinstance(other, ChernForm):
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return ChernForm(out)

    __radd__ = __add__

    def __neg__(self):
        return ChernForm({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            return self + (-Fraction(other))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return ChernForm({m: c * other for m, c in self.terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * (1 / Fraction(other))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ChernForm({(): other})
        if isinstance(other, ChernForm):
            return self.terms == other.terms
        return NotImplemented

    __hash__ = None

    def items(self):
        for m in sorted(self.terms, key=_mono_sort_key):
            yield m, self.terms[m]

    def evaluate(self, lookup):
        """Substitute numbers via ``lookup(monomial) -> Fraction``."""
        return sum((c * (Fraction(1) if not m else Fraction(lookup(m))) for m, c in self.terms.items()),
                   Fraction(0))

    def __repr__(self):
        return f"ChernForm({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        out = ""
        for i, (m, c) in enumerate(self.items()):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if not m:
                body = format_rat(mag)
            else:
                body = ("" if mag == 1 else format_rat(mag) + "*") + f"[{format_monomial(m)}]"
            if i == 0:
                out = ("-" if sign == "-" else "") + body
            else:
                out += f" {sign} {body}"
        return out


def _mono_sort_key(mono):
    return monomial_degree(mono), tuple((KIND_ORDER.get(k, 9), i, -e) for (k, i), e in mono)


# -- the graded ring ---------------------------------------------------------

class CohClass:
    """Sparse polynomial in characteristic-class generators, truncated above ``cap``.

    Coefficients may be rationals or any ring element (series, polynomials).
    """

    __slots__ = ("terms", "cap")

    def __init__(self, terms=None, cap=None):
        clean = {}
        for m, c in (terms or {}).items():
            if cap is not None and monomial_degree(m) > cap:
                continue
            if not is_zero(c):
                clean[m] = c
        self.terms = clean
        self.cap = cap

    @classmethod
    def gen(cls, kind, i, cap=None, coeff=Fraction(1)):
        return cls({make_monomial([((kind, i), 1)]): coeff}, cap)

    @classmethod
    def constant(cls, c, cap=None):
        return cls({(): c}, cap)

    @classmethod
    def one(cls, cap=None):
        return cls.constant(Fraction(1), cap)

    def is_zero(self):
        return not self.terms

    def generators(self):
        return {g for m in self.terms for g, _ in m}

    def homogeneous(self, k):
        return CohClass({m: c for m, c in self.terms.items() if monomial_degree(m) == k}, self.cap)

    def constant_term(self):
        return self.terms.get((), 0)

    def truncate(self, cap):
        if self.cap is not None and cap > self.cap:
            raise InsufficientTruncationError(f"class known only up to degree {self.cap}")
        return CohClass(self.terms, cap)

    def map_coefficients(self, fn):
        return CohClass({m: fn(c) for m, c in self.terms.items()}, self.cap)

    def _coerce(self, other):
        if isinstance(other, CohClass):
            return other
        return CohClass.constant(other)

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return CohClass(out, _min(self.cap, other.cap))

    __radd__ = __add__

    def __neg__(self):
        return CohClass({m: -c for m, c in self.terms.items()}, self.cap)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, x):
        return CohClass({m: c * x for m, c in self.terms.items()}, self.cap)

    def mul(self, other, degree=None):
        """Product; with ``degree`` only that homogeneous component is formed."""
        cap = _min(self.cap, other.cap)
        right = [(m, monomial_degree(m), c) for m, c in other.terms.items()]
        out = {}
        for m1, c1 in self.terms.items():
            d1 = monomial_degree(m1)
            for m2, d2, c2 in right:
                dd = d1 + d2
                if (cap is not None and dd > cap) or (degree is not None and dd != degree):
                    continue
                m = make_monomial(m1 + m2)
                prod = c1 * c2
                out[m] = out[m] + prod if m in out else prod
        return CohClass(out, cap)

    def __mul__(self, other):
        if isinstance(other, CohClass):
            return self.mul(other)
        return self.scale(other)

    def __rmul__(self, other):
        return CohClass({m: other * c for m, c in self.terms.items()}, self.cap)

    def __pow__(self, n):
        result = CohClass.one(self.cap)
        for _ in range(n):
            result = result * self
        return result

    def __truediv__(self, x):
        return self.scale(1 / Fraction(x))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, CohClass)):
            return (self - other).is_zero()
        return NotImplemented

    __hash__ = None

    def substitute(self, images):
        """Simultaneously replace generators by classes (``{gen: CohClass}``)."""
        powers = {}

        def power(gen, e):
            key = (gen, e)
            if key not in powers:
                img = images[gen]
                acc = CohClass.one(self.cap)
                for _ in range(e):
                    acc = acc * img
                powers[key] = acc
            return powers[key]

        out = CohClass({}, self.cap)
        for m, c in self.terms.items():
            kept = []
            term = CohClass.one(self.cap)
            for g, e in m:
                if g in images:
                    term = term * power(g, e)
                else:
                    kept.append((g, e))
            term = term * CohClass({make_monomial(kept): Fraction(1)}, self.cap)
            out = out + term.scale(c) if not term.is_zero() else out
        return out

    def exp(self):
        """exp of a class without constant term (nilpotent by degree)."""
        if not is_zero(self.constant_term()):
            raise InvalidArgumentError("exp needs a class without constant term")
        if self.cap is None:
            raise InvalidArgumentError("exp needs a truncation degree")
        result = CohClass.one(self.cap)
        power = CohClass.one(self.cap)
        for k in range(1, self.cap + 1):
            power = (power * self) / k
            result = result + power
        return result

    def __repr__(self):
        return f"CohClass({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=_mono_sort_key):
            c = self.terms[m]
            mono = "" if not m else format_monomial(m)
            if isinstance(c, (int, Fraction)):
                sign = "-" if c < 0 else "+"
                mag = abs(Fraction(c))
                if mono:
                    body = mono if mag == 1 else f"{format_rat(mag)} {mono}"
                else:
                    body = format_rat(mag)
            else:
                sign, body = "+", f"({c})" + (f" {mono}" if mono else "")
            parts.append((sign, body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


def _min(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


# -- explicit roots ----------------------------------------------------------

def elementary_in_roots(k, n, kind="v", cap=None):
    """e_k(root_1, ..., root_n) written out in explicit root variables."""
    terms = {}
    for subset in combinations(range(1, n + 1), k):
        terms[make_monomial(((kind, i), 1) for i in subset)] = Fraction(1)
    return CohClass(terms, cap)


def _swap_roots(x, kind, i, j):
    def rename(g):
        if g[0] != kind:
            return g
        if g[1] == i:
            return (kind, j)
        if g[1] == j:
            return (kind, i)
        return g

    return CohClass({make_monomial((rename(g), e) for g, e in m): c for m, c in x.terms.items()}, x.cap)


def roots_to_elementary(s, which="v", n=None):
    """Rewrite a class symmetric in the ``which`` roots via elementary classes.

    ``which`` is ``"v"`` (roots of M, giving ``c_i``) or ``"r"`` (roots of W,
    giving ``w_j``).  Other generators present are carried through unchanged.
    """
    if which not in ROOT_KINDS:
        raise InvalidArgumentError(f"unknown root set {which!r}")
    target = ROOT_KINDS[which]
    present = [g[1] for g in s.generators() if g[0] == which]
    if n is None:
        n = max(present, default=0)
    if present and max(present) > n:
        raise InvalidArgumentError(f"root index {max(present)} exceeds root count {n}")
    for i in range(1, n):
        if _swap_roots(s, which, i, i + 1) != s:
            raise SymmetryViolationError(f"class is not symmetric under swapping roots {i} and {i + 1}")
    out = CohClass({}, s.cap)
    for m, c in s.terms.items():
        exps = [0] * n
        rest = []
        for (kind, i), e in m:
            if kind == which:
                exps[i - 1] = e
            else:
                rest.append(((kind, i), e))
        if any(exps[t] < exps[t + 1] for t in range(n - 1)):
            continue  # only the sorted representative of each orbit is read
        for mu, r in monomial_to_elementary(tuple(exps), n).items():
            mono = make_monomial(rest + [((target, p), 1) for p in mu])
            out = out + CohClass({mono: c * r}, s.cap)
    return out


# -- characteristic classes --------------------------------------------------

def multiplicative_class(q_series, n, cap, kind="c", root_degree=1):
    """prod_{i=1..n} Q(root_i) reduced to elementary classes of ``kind``.

    ``q_series`` is a :class:`RootSeries` (or coefficient list) in the root
    variable.  With ``root_degree=2`` the variable is a squared root and the
    output is in Pontrjagin-type generators.  Uses
    ``prod Q(x_i) = sum_lam Q_lam * Q_0^(n - len lam) * m_lam`` so the constant
    coefficient never has to be inverted.
    """
    q_series = q_series if isinstance(q_series, RootSeries) else RootSeries(q_series)
    top = cap // root_degree
    if len(q_series) <= top and n > 0:
        raise InsufficientTruncationError(
            f"characteristic series known to order {len(q_series) - 1}, need {top}")
    q0 = q_series[0]
    if is_zero(q0):
        raise NonUnitError("characteristic series has zero constant term")
    q0_powers = [Fraction(1)]
    for _ in range(n):
        q0_powers.append(q0 if len(q0_powers) == 1 else q0_powers[-1] * q0)
    terms = {}
    for k in range(top + 1):
        for lam in partitions(k, max_len=n):
            coef = None
            for p in lam:
                f = q_series[p]
                coef = f if coef is None else coef * f
                if is_zero(coef):
                    break
            if coef is not None and is_zero(coef):
                continue
            pw = q0_powers[n - len(lam)]
            coef = pw if coef is None else (coef if len(lam) == n else coef * pw)
            for mu, r in monomial_to_elementary(lam, n).items():
                mono = mono_from_partition(mu, kind)
                val = coef * r
                terms[mono] = terms[mono] + val if mono in terms else val
    return CohClass(terms, cap)


def additive_class(f_series, n, cap, kind="c", root_degree=1):
    """sum_{i=1..n} f(root_i) reduced to elementary classes (Newton's identities)."""
    f_series = f_series if isinstance(f_series, RootSeries) else RootSeries(f_series)
    top = cap // root_degree
    terms = {(): f_series[0] * n} if n and not is_zero(f_series[0]) else {}
    for k in range(1, top + 1):
        fk = f_series[k]
        if is_zero(fk):
            continue
        for mu, r in monomial_to_elementary((k,), n).items():
            mono = mono_from_partition(mu, kind)
            val = fk * r
            terms[mono] = terms[mono] + val if mono in terms else val
    return CohClass(terms, cap)


def _total_chern(d, signed=False):
    terms = {(): Fraction(1)}
    for i in range(1, d + 1):
        terms[make_monomial([(("c", i), 1)])] = Fraction((-1) ** i if signed else 1)
    return CohClass(terms, d)


def signed_root_chern(q, d):
    """c_q of the doubled root multiset {v_i, -v_i} as a polynomial in c."""
    return (_total_chern(d) * _total_chern(d, signed=True)).homogeneous(q)


def pontryagin_from_chern(d):
    """[p_1, ..., p_{d//2}] with p_k = (-1)^k c_{2k}(v, -v)."""
    product = _total_chern(d) * _total_chern(d, signed=True)
    return [product.homogeneous(2 * k).scale((-1) ** k) for k in range(1, d // 2 + 1)]


def expand_pontryagin(x, d):
    """Replace Pontrjagin generators by their Chern-class expressions."""
    ps = pontryagin_from_chern(d)
    images = {}
    for g in x.generators():
        if g[0] == "p":
            images[g] = ps[g[1] - 1] if g[1] <= len(ps) else CohClass({}, x.cap)
    return x.substitute(images) if images else x


# -- bundle relations --------------------------------------------------------

@dataclass(frozen=True)
class BundleContext:
    """Complex dimension ``d`` of M, rank ``l`` of W and which relations hold.

    ``relations`` imposes c_1(W) = 0 and p_1(W) = p_1(M); ``c1_vanishes``
    additionally imposes c_1(M) = 0; ``tangent`` means W = TM.
    """

    d: int
    l: int
    relations: bool = False
    tangent: bool = False
    c1_vanishes: bool = False

    def __post_init__(self):
        if self.d < 1 or self.l < 0:
            raise InvalidArgumentError(f"need d >= 1 and l >= 0, got d={self.d}, l={self.l}")
        if self.tangent and self.l != self.d:
            raise InvalidArgumentError("W = T forces rank l = d")

    @classmethod
    def for_tangent(cls, d, relations=False):
        return cls(d, d, relations=relations, tangent=True)

    def label(self):
        tags = ["W=T" if self.tangent else f"rank {self.l}"]
        if self.relations:
            tags.append("relations")
        if self.c1_vanishes:
            tags.append("c1(M)=0")
        return f"(d,l)=({self.d},{self.l}) " + ", ".join(tags)


def relation_images(ctx, cap=None):
    """The substitution realising ``ctx``'s relations, as ``{gen: CohClass}``."""
    def c(i):
        return CohClass.gen("c", i, cap) if i <= ctx.d else CohClass({}, cap)

    zero = CohClass({}, cap)
    images = {}
    if ctx.tangent:
        for j in range(1, ctx.l + 1):
            images[("w", j)] = c(j)
        if ctx.relations or ctx.c1_vanishes:
            images[("c", 1)] = zero
            images[("w", 1)] = zero
        return images
    c1 = zero if ctx.c1_vanishes else c(1)
    if ctx.c1_vanishes:
        images[("c", 1)] = zero
    if ctx.relations:
        if ctx.l >= 1:
            images[("w", 1)] = zero
        if ctx.l >= 2:
            images[("w", 2)] = c(2) - c1 * c1 / 2
        elif ctx.d >= 2:
            # p_1(W) = 0 for rank < 2, so p_1(M) = c_1^2 - 2 c_2 must vanish
            images[("c", 2)] = c1 * c1 / 2
    return images


def apply_relations(x, ctx):
    """Impose ``ctx`` on a root-free class by canonical substitution."""
    for kind, j in x.generators():
        if kind in ROOT_KINDS:
            raise InvalidArgumentError("apply_relations expects a class without root variables")
        if kind == "w" and j > ctx.l:
            raise UnsatisfiableRelationError(f"w_{j} demanded but W has rank {ctx.l}")
    images = relation_images(ctx, x.cap)
    return x.substitute(images) if images else x


def integrate(x, manifold):
    """Pair the degree-d part of ``x`` with ``manifold``'s characteristic numbers."""
    return manifold.integrate(x)


def todd_series(length):
    """v / (1 - e^{-v}) by series division."""
    denom = RootSeries([Fraction((-1) ** k, factorial(k + 1)) for k in range(length)])
    return denom.invert()
