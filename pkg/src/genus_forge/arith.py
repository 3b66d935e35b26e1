"""Exact scalar helpers: Bernoulli numbers, binomials, divisor sums.

Rationals are plain :class:`fractions.Fraction` values throughout the package.
"""
from fractions import Fraction
from functools import lru_cache
from math import comb, isqrt

from .errors import InvalidArgumentError

__all__ = [
    "Fraction",
    "bernoulli",
    "binomial",
    "divisor_power_sum",
    "format_rat",
    "parse_rat",
]


@lru_cache(maxsize=None)
def _bernoulli_plus(n):
    # Akiyama-Tanigawa; yields B_1 = +1/2, which is irrelevant for even n.
    row = [Fraction(1, m + 1) for m in range(n + 1)]
    for j in range(n, 0, -1):
        for m in range(j):
            row[m] = (m + 1) * (row[m] - row[m + 1])
    return row[0]


def bernoulli(k):
    """Bernoulli number B_k for even k >= 2 (B_2 = 1/6, B_4 = -1/30)."""
    if not isinstance(k, int) or k < 2 or k % 2:
        raise InvalidArgumentError(f"bernoulli expects an even integer >= 2, got {k!r}")
    return _bernoulli_plus(k)


def binomial(n, k):
    """C(n, k), zero outside 0 <= k <= n."""
    if n < 0:
        raise InvalidArgumentError(f"binomial needs n >= 0, got {n}")
    if k < 0 or k > n:
        return 0
    return comb(n, k)


@lru_cache(maxsize=4096)
def divisor_power_sum(k, n):
    """sigma_k(n) = sum of m**k over the positive divisors m of n."""
    if n <= 0:
        raise InvalidArgumentError(f"divisor_power_sum needs n >= 1, got {n}")
    if k < 0:
        raise InvalidArgumentError(f"divisor_power_sum needs k >= 0, got {k}")
    total = 0
    for m in range(1, isqrt(n) + 1):
        if n % m == 0:
            total += m**k
            other = n // m
            if other != m:
                total += other**k
    return total


def format_rat(x):
    """Exact text form: "p/q", or "p" when the denominator is 1."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rat(text):
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidArgumentError(f"not a rational: {text!r}") from exc
