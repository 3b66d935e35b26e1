"""Manifolds as Chern-number functionals, plus the line-oriented spec format.

A spec file looks like::

    # degree-4 hypersurface in CP^3
    name = k3
    dimension = 2
    c1^2 = 0
    c2 = 24

``symbolic = true`` replaces the table by free symbols.
"""
from fractions import Fraction
from math import prod

from .arith import binomial, format_rat
from .cohomology import (
    ChernForm,
    CohClass,
    apply_relations,
    expand_pontryagin,
    format_monomial,
    make_monomial,
    mono_from_partition,
    monomial_degree,
    parse_monomial,
    partitions,
    _mono_sort_key,
)
from .errors import (
    InvalidArgumentError,
    ManifoldSpecError,
    MissingChernNumberError,
    UnsupportedError,
)
from .series import is_zero

__all__ = [
    "CATALOG",
    "ManifoldData",
    "abstract_manifold",
    "catalog",
    "hypersurface",
    "load_manifold",
    "parse_spec",
    "point",
    "product",
    "projective_space",
    "satisfies_relations",
    "serialize_spec",
    "symbolic_manifold",
]


def _pair(coeff, value):
    # coeff * value where coeff may be a nested container of rationals
    if isinstance(coeff, (int, Fraction)):
        return value * coeff
    return coeff.map_coefficients(lambda c: _pair(c, value))


class ManifoldData:
    """Complex dimension plus the integration functional on degree-d classes.

    ``numbers`` maps monomials to rationals; ``None`` makes the manifold
    symbolic, in which case integrals are :class:`ChernForm` values.
    ``kind`` is ``"c"`` (Chern data) or ``"p"`` (Pontrjagin data, symbolic only).
    """

    def __init__(self, name, d, numbers=None, kind="c"):
        if d < 0:
            raise InvalidArgumentError("dimension must be nonnegative")
        if kind not in ("c", "p"):
            raise InvalidArgumentError(f"unknown generator kind {kind!r}")
        if kind == "p" and numbers is not None:
            raise UnsupportedError("Pontrjagin-kind manifolds are symbolic only")
        self.name = name
        self.d = d
        self.kind = kind
        if numbers is not None:
            clean = {}
            for m, v in numbers.items():
                if monomial_degree(m) != d:
                    raise InvalidArgumentError(
                        f"monomial {format_monomial(m)} has degree {monomial_degree(m)}, expected {d}")
                clean[m] = Fraction(v)
            numbers = clean
        self.numbers = numbers

    @property
    def symbolic(self):
        return self.numbers is None

    def monomials(self):
        """Degree-d monomials in the manifold's generators, canonically ordered."""
        if self.kind == "p":
            if self.d % 2:
                return []
            return [mono_from_partition(lam, "p") for lam in partitions(self.d // 2)]
        return [mono_from_partition(lam, "c") for lam in reversed(partitions(self.d))]

    def number(self, mono):
        if self.numbers is None:
            return ChernForm.symbol(mono)
        if mono not in self.numbers:
            raise MissingChernNumberError(f"{self.name}: no value for [{format_monomial(mono)}]")
        return self.numbers[mono]

    def integrate(self, x):
        """Pair the degree-d component of ``x`` with this manifold."""
        if isinstance(x, (int, Fraction)):
            x = CohClass.constant(Fraction(x))
        top = x.homogeneous(self.d)
        gens = top.generators()
        kinds = {k for k, _ in gens}
        if kinds & {"v", "r"}:
            raise InvalidArgumentError("cannot integrate a class containing root variables")
        if self.kind == "c" and "p" in kinds:
            top = expand_pontryagin(top, self.d).homogeneous(self.d)
        elif self.kind == "p" and kinds - {"p"}:
            raise InvalidArgumentError("Pontrjagin-kind manifold integrates only Pontrjagin classes")
        total = None
        for m, c in top.terms.items():
            if self.numbers is not None and any(k == "w" for (k, _), _ in m):
                raise MissingChernNumberError(
                    f"{self.name}: class involves the free bundle W via [{format_monomial(m)}]")
            val = self.number(m)
            if val == 0:
                continue
            term = _pair(c, val)
            total = term if total is None else total + term
        if total is None:
            return ChernForm() if self.symbolic else Fraction(0)
        return total

    def euler_number(self):
        return self.number(mono_from_partition((self.d,), "c")) if self.d else Fraction(1)

    def pontryagin_numbers(self):
        """Pontrjagin numbers of a Chern-kind manifold (real dimension divisible by 4)."""
        if self.kind != "c":
            raise UnsupportedError("already Pontrjagin data")
        if self.d % 2:
            return {}
        out = {}
        for lam in partitions(self.d // 2):
            m = mono_from_partition(lam, "p")
            out[m] = self.integrate(CohClass({m: Fraction(1)}, self.d))
        return out

    def __eq__(self, other):
        if not isinstance(other, ManifoldData):
            return NotImplemented
        return (self.d, self.kind, self.numbers) == (other.d, other.kind, other.numbers)

    __hash__ = None

    def __repr__(self):
        return f"ManifoldData({self.name!r}, d={self.d}{', symbolic' if self.symbolic else ''})"


# -- constructors --------------------------------------------------------------

def point():
    return ManifoldData("point", 0, {(): 1})


def projective_space(n):
    """CP^n: c = (1+h)^(n+1), integral of h^n is 1."""
    if n < 1:
        raise InvalidArgumentError("projective space needs n >= 1")
    numbers = {}
    for lam in partitions(n):
        numbers[mono_from_partition(lam, "c")] = prod(binomial(n + 1, k) for k in lam)
    return ManifoldData(f"cp{n}", n, numbers)


def hypersurface(n, a):
    """Degree-a hypersurface in CP^n: c = (1+h)^(n+1)/(1+a h), integral of h^(n-1) is a."""
    if n < 2 or a < 1:
        raise InvalidArgumentError("hypersurface needs n >= 2 and a >= 1")
    d = n - 1
    gamma = [sum(binomial(n + 1, j) * (-a) ** (k - j) for j in range(k + 1)) for k in range(d + 1)]
    numbers = {}
    for lam in partitions(d):
        numbers[mono_from_partition(lam, "c")] = a * prod(gamma[k] for k in lam)
    return ManifoldData(f"hypersurface({n},{a})", d, numbers)


def product(m1, m2):
    """Chern numbers of M1 x M2 by Kunneth splitting of c(M1) c(M2)."""
    if m1.symbolic or m2.symbolic or m1.kind != "c" or m2.kind != "c":
        raise UnsupportedError("product needs two concrete Chern-kind manifolds")
    d = m1.d + m2.d
    # c for the first factor, w (as a second generator set) for the second
    total = []
    for k in range(d + 1):
        terms = {}
        for i in range(max(0, k - m2.d), min(k, m1.d) + 1):
            mono = make_monomial([(("c", i), 1)] * (i > 0) + [(("w", k - i), 1)] * (k - i > 0))
            terms[mono] = Fraction(1)
        total.append(CohClass(terms, d))
    numbers = {}
    for lam in partitions(d):
        cls = CohClass.one(d)
        for k in lam:
            cls = cls * total[k]
        value = Fraction(0)
        for m, coeff in cls.terms.items():
            first = make_monomial(((k, i), e) for (k, i), e in m if k == "c")
            second = make_monomial((("c", i), e) for (k, i), e in m if k == "w")
            if monomial_degree(first) == m1.d:
                value += coeff * m1.number(first) * m2.number(second)
        numbers[mono_from_partition(lam, "c")] = value
    return ManifoldData(f"{m1.name}x{m2.name}", d, numbers)


def symbolic_manifold(d, kind="c"):
    return ManifoldData(f"symbolic{d}" + ("p" if kind == "p" else ""), d, None, kind)


def abstract_manifold(d, table, name="abstract"):
    """Concrete manifold from ``{monomial or text: value}``."""
    numbers = {}
    for key, value in table.items():
        mono = parse_monomial(key) if isinstance(key, str) else key
        if any(k != "c" for (k, _), _ in mono):
            raise InvalidArgumentError("tables hold Chern numbers of M only")
        numbers[mono] = value
    return ManifoldData(name, d, numbers)


def _cp1xcp1():
    m = product(projective_space(1), projective_space(1))
    m.name = "cp1xcp1"
    return m


def _named(m, name):
    m.name = name
    return m


CATALOG = {
    "cp1": lambda: projective_space(1),
    "cp2": lambda: projective_space(2),
    "cp3": lambda: projective_space(3),
    "k3": lambda: _named(hypersurface(3, 4), "k3"),
    "quintic": lambda: _named(hypersurface(4, 5), "quintic"),
    "cp1xcp1": _cp1xcp1,
}


def catalog(name):
    try:
        return CATALOG[name]()
    except KeyError:
        raise InvalidArgumentError(f"unknown catalog manifold {name!r}; known: {', '.join(CATALOG)}") from None


def satisfies_relations(m, ctx):
    """Whether a concrete manifold is consistent with ``ctx``'s substitution.

    Checks that integrating any degree-d Chern monomial gives the same number
    before and after the relations are imposed.
    """
    if m.symbolic:
        return True
    for mono in m.monomials():
        x = CohClass({mono: Fraction(1)}, m.d)
        if m.integrate(x) != m.integrate(apply_relations(x, ctx)):
            return False
    return True


# -- spec files ----------------------------------------------------------------

_TRUE = {"true": True, "yes": True, "1": True, "false": False, "no": False, "0": False}


def parse_spec(text):
    """Parse the spec format into :class:`ManifoldData`."""
    name, d, symbolic = None, None, False
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if "=" not in line:
            col = len(line) - len(line.lstrip()) + 1
            raise ManifoldSpecError("expected 'key = value'", lineno, col)
        key_part, value_part = line.split("=", 1)
        key = key_part.strip()
        value = value_part.strip()
        key_col = len(key_part) - len(key_part.lstrip()) + 1
        value_col = len(key_part) + 2 + len(value_part) - len(value_part.lstrip())
        if not key:
            raise ManifoldSpecError("missing key", lineno, key_col)
        if not value:
            raise ManifoldSpecError("missing value", lineno, value_col)
        if key == "name":
            name = value
        elif key == "dimension":
            if not value.isdigit():
                raise ManifoldSpecError(f"dimension must be a nonnegative integer, got {value!r}", lineno, value_col)
            d = int(value)
        elif key == "symbolic":
            if value.lower() not in _TRUE:
                raise ManifoldSpecError(f"expected true or false, got {value!r}", lineno, value_col)
            symbolic = _TRUE[value.lower()]
        else:
            try:
                mono = parse_monomial(key)
            except InvalidArgumentError as exc:
                raise ManifoldSpecError(str(exc), lineno, key_col) from None
            if any(k != "c" for (k, _), _ in mono) or not mono:
                raise ManifoldSpecError(f"expected a Chern monomial, got {key!r}", lineno, key_col)
            try:
                val = Fraction(value)
            except (ValueError, ZeroDivisionError):
                raise ManifoldSpecError(f"bad number {value!r}", lineno, value_col) from None
            if any(m == mono for m, *_ in entries):
                raise ManifoldSpecError(f"duplicate entry for {key}", lineno, key_col)
            entries.append((mono, val, lineno, key_col))
    if d is None:
        raise ManifoldSpecError("missing 'dimension'", max(1, len(text.splitlines())), 1)
    for mono, _, lineno, col in entries:
        if monomial_degree(mono) != d:
            raise ManifoldSpecError(
                f"monomial {format_monomial(mono)} has degree {monomial_degree(mono)}, expected {d}", lineno, col)
    name = name or "unnamed"
    if symbolic:
        if entries:
            raise ManifoldSpecError("a symbolic manifold takes no number entries", entries[0][2], entries[0][3])
        m = symbolic_manifold(d)
        m.name = name
        return m
    return ManifoldData(name, d, {m: v for m, v, *_ in entries})


def serialize_spec(m):
    """Canonical text form; ``parse_spec`` inverts it exactly."""
    if m.kind != "c":
        raise UnsupportedError("only Chern-kind manifolds have a spec form")
    lines = [f"name = {m.name}", f"dimension = {m.d}"]
    if m.symbolic:
        lines.append("symbolic = true")
    else:
        for mono in sorted(m.numbers, key=_mono_sort_key):
            lines.append(f"{format_monomial(mono)} = {format_rat(m.numbers[mono])}")
    return "\n".join(lines) + "\n"


def load_manifold(source):
    """Catalog name or path to a spec file."""
    if source in CATALOG:
        return catalog(source)
    try:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InvalidArgumentError(f"cannot read manifold {source!r}: {exc.strerror}") from None
    return parse_spec(text)
