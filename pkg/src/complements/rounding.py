"""The n-complement rounding operator ``a -> a^[n]``.

For a boundary multiplicity ``a`` in [0, 1] and a positive integer ``n``::

    a^[n] = 1                     if a == 1
    a^[n] = floor((n + 1) a) / n  otherwise

A multiplicity ``d_plus`` of a candidate complement is acceptable at a prime
divisor with multiplicity ``d`` exactly when ``d_plus >= d^[n]``.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable

from .core import DomainError, RationalLike, as_rational

__all__ = ["check_index", "check_coefficient", "round_coeff", "round_vector", "complement_coeff_ok"]

# operations exposed one-to-one through the CLI
OPERATIONS = ("round_coeff", "round_vector", "complement_coeff_ok")


def check_index(n) -> int:
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise DomainError(f"index n must be a positive integer, got {n!r}")
    return n


def check_coefficient(a: RationalLike) -> Fraction:
    a = as_rational(a)
    if not 0 <= a <= 1:
        raise DomainError(f"boundary coefficient {a} is outside [0, 1]")
    return a


def round_coeff(a: RationalLike, n: int) -> Fraction:
    """Return ``a^[n]``.

    >>> round_coeff(Fraction(1, 2), 2)
    Fraction(1, 2)
    >>> round_coeff(Fraction(2, 5), 1)
    Fraction(0, 1)
    """
    a = check_coefficient(a)
    n = check_index(n)
    if a == 1:
        return Fraction(1)
    return Fraction(math.floor((n + 1) * a), n)


def round_vector(b: Iterable[RationalLike], n: int) -> tuple:
    return tuple(round_coeff(x, n) for x in b)


def complement_coeff_ok(d: RationalLike, d_plus: RationalLike, n: int) -> bool:
    return as_rational(d_plus) >= round_coeff(d, n)
