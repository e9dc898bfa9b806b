"""Exact assignment moments under sampling without replacement.

Centered product moments E[prod_k (T_{i_k} - pi)^{a_k}] over mutually
distinct units, where exactly n1 of n units are treated and pi = n1/n.
These closed forms are the combinatorial backbone of every unbiasedness
argument in the toolkit, so everything here runs in exact rational
arithmetic; the enumeration twin averages over all C(n, n1) assignments
and must agree to the last digit.

Patterns are described by their exponent multiset, e.g. ``(2, 1)`` means
E[(T_i - pi)^2 (T_j - pi)] for distinct i, j. Supported patterns cover
every multiset of total order at most six that the downstream variance
expansions consume.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Sequence

from .errors import InvalidDesign, TooLarge, Unsupported

ENUMERATION_CAP = 10**6

# Exponent multisets (sorted descending) with registered closed forms.
SUPPORTED_PATTERNS: tuple[tuple[int, ...], ...] = (
    (1,),
    (2,),
    (1, 1),
    (3,),
    (2, 1),
    (1, 1, 1),
    (4,),
    (2, 2),
    (2, 1, 1),
    (1, 1, 1, 1),
    (3, 3),
    (4, 2),
    (5, 1),
    (4, 1, 1),
    (2, 2, 1, 1),
    (3, 1, 1, 1),
    (2, 1, 1, 1, 1),
    (1, 1, 1, 1, 1, 1),
)


def canonical_pattern(exponents: Sequence[int]) -> tuple[int, ...]:
    """Sort an exponent multiset into its canonical descending form."""
    pat = tuple(sorted((int(a) for a in exponents), reverse=True))
    if any(a < 1 for a in pat):
        raise ValueError("exponents must be positive integers")
    return pat


def _validate(exponents: Sequence[int], n: int, n1: int) -> tuple[int, ...]:
    pat = canonical_pattern(exponents)
    if not 1 <= n1 <= n - 1:
        raise InvalidDesign(f"need 1 <= n1 <= n-1, got n={n}, n1={n1}")
    if len(pat) > n:
        raise InvalidDesign(f"pattern uses {len(pat)} distinct units but n={n}")
    return pat


def _raw_product_moment(k: int, n: int, n1: int) -> Fraction:
    """E[T_{i_1} ... T_{i_k}] for distinct units: falling-factorial ratio."""
    if k == 0:
        return Fraction(1)
    if k > n1:
        return Fraction(0)
    num = math.perm(n1, k)
    den = math.perm(n, k)
    return Fraction(num, den)


def expanded_moment(exponents: Sequence[int], n: int, n1: int) -> Fraction:
    """Exact centered moment by expansion into raw indicator moments.

    Since T^2 = T for an indicator, (T - pi)^a = A_a T + B_a with
    A_a = (1-pi)^a - (-pi)^a and B_a = (-pi)^a; multiplying out over the
    slots leaves only products of distinct indicators, whose expectations
    are falling-factorial ratios.
    """
    pat = _validate(exponents, n, n1)
    pi = Fraction(n1, n)
    A = [(1 - pi) ** a - (-pi) ** a for a in pat]
    B = [(-pi) ** a for a in pat]
    total = Fraction(0)
    m = len(pat)
    for mask in range(1 << m):
        coef = Fraction(1)
        k = 0
        for slot in range(m):
            if mask >> slot & 1:
                coef *= A[slot]
                k += 1
            else:
                coef *= B[slot]
        total += coef * _raw_product_moment(k, n, n1)
    return total


def closed_form_moment(exponents: Sequence[int], n: int, n1: int) -> Fraction:
    """Exact rational value of a supported centered moment pattern.

    Low-order patterns use their explicit closed forms; the patterns whose
    published statements are only order bounds are expanded mechanically
    into raw moments, which is exact.

    Raises
    ------
    Unsupported
        If the exponent multiset is outside the registered pattern set.
    """
    pat = _validate(exponents, n, n1)
    if pat not in SUPPORTED_PATTERNS:
        raise Unsupported(f"no closed form registered for pattern {pat}")
    pi = Fraction(n1, n)
    q = 1 - pi
    if pat == (1,):
        return Fraction(0)
    if pat == (2,):
        return pi * q
    if pat == (1, 1):
        return -pi * q / (n - 1)
    if pat == (3,):
        return pi * q * (1 - 2 * pi)
    if pat == (2, 1):
        return -pi * q * (1 - 2 * pi) / (n - 1)
    if pat == (1, 1, 1):
        return 2 * pi * q * (1 - 2 * pi) / ((n - 1) * (n - 2))
    if pat == (4,):
        return pi * q * (1 - 3 * pi * q)
    return expanded_moment(pat, n, n1)


def enumerated_moment(
    exponents: Sequence[int], n: int, n1: int, cap: int = ENUMERATION_CAP
) -> Fraction:
    """Exact centered moment by averaging over every assignment.

    Runs entirely in integer/rational arithmetic: pi enters as the
    fraction n1/n and each assignment contributes a rational product.
    """
    pat = _validate(exponents, n, n1)
    total_assignments = math.comb(n, n1)
    if total_assignments > cap:
        raise TooLarge(f"C({n},{n1}) = {total_assignments} exceeds cap {cap}")
    pi = Fraction(n1, n)
    m = len(pat)
    # Only membership of the m slot units matters; slots occupy units 0..m-1.
    total = Fraction(0)
    for treated in itertools.combinations(range(n), n1):
        treated_set = set(treated)
        term = Fraction(1)
        for slot in range(m):
            base = (1 if slot in treated_set else 0) - pi
            term *= base ** pat[slot]
        total += term
    return total / total_assignments
