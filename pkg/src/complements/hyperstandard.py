"""Hyperstandard sets and their lower approximations.

For a finite set R of rationals in [0, 1] containing 0 and 1,

    Phi(R) = {1 - r/l : r in R, l >= 1} & [0, 1]

and for a finite index set N,

    Gamma(N, Phi) = {1 - r/l + s/l : r in R, l >= 1, s in S(N)} & [0, 1],
    S(N) = {sum_n m_n / (n + 1) : m_n >= 0}.

Writing an element ``g < 1`` as ``1 - (r - s)/l`` forces ``0 < r - s <= 1``,
hence ``s <= 1`` and ``l <= 1/(1 - g)``. Everything below is a finite search
over those bounds. Gamma is dcc with 1 as its only accumulation point, so the
largest element not exceeding a given ``b`` always exists.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .core import DomainError, RationalLike, as_rational
from .rounding import check_coefficient

__all__ = [
    "GammaSpec",
    "make_rset",
    "residues",
    "phi_contains",
    "gamma_contains",
    "gamma_enumerate_upto",
    "low_approx",
]

# operations exposed one-to-one through the CLI
OPERATIONS = ("phi_contains", "gamma_contains", "gamma_enumerate_upto", "low_approx")

STANDARD_RSET = frozenset({Fraction(0), Fraction(1)})


def make_rset(values: Iterable[RationalLike] = (0, 1)) -> frozenset:
    """Validate a set R: entries in [0, 1], and both 0 and 1 present."""
    rset = frozenset(as_rational(v) for v in values)
    for r in rset:
        if not 0 <= r <= 1:
            raise DomainError(f"R-set element {r} is outside [0, 1]")
    if not STANDARD_RSET <= rset:
        raise DomainError("R-set must contain 0 and 1")
    return rset


@dataclass(frozen=True)
class GammaSpec:
    """Descriptor of Gamma(N, Phi(R)).

    An empty ``n_set`` is allowed and describes Phi(R) itself.
    """

    r_set: frozenset = STANDARD_RSET
    n_set: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "r_set", make_rset(self.r_set))
        ns = frozenset(self.n_set)
        for n in ns:
            if isinstance(n, bool) or not isinstance(n, int) or n < 1:
                raise DomainError(f"index set entries must be positive integers, got {n!r}")
        object.__setattr__(self, "n_set", ns)

    @classmethod
    def of(cls, n_set: Iterable[int] = (), r_set: Iterable[RationalLike] = (0, 1)) -> "GammaSpec":
        return cls(make_rset(r_set), frozenset(n_set))


@lru_cache(maxsize=None)
def _residues(n_set: frozenset) -> tuple:
    sums = {Fraction(0)}
    for n in sorted(n_set):
        step = Fraction(1, n + 1)
        grown = set()
        for s in sums:
            k = 0
            while s + k * step <= 1:
                grown.add(s + k * step)
                k += 1
        sums = grown
    return tuple(sorted(sums))


def residues(spec: GammaSpec) -> tuple:
    """Sorted values of ``sum m_n/(n+1)`` not exceeding 1."""
    return _residues(spec.n_set)


def phi_contains(b: RationalLike, r_set: Iterable[RationalLike] = STANDARD_RSET) -> bool:
    b = check_coefficient(b)
    rset = make_rset(r_set)
    if b == 1:
        return True
    gap = 1 - b
    for r in rset:
        l = r / gap
        if l.denominator == 1 and l >= 1:
            return True
    return False


def gamma_contains(b: RationalLike, spec: GammaSpec) -> bool:
    b = check_coefficient(b)
    if b == 1:
        return True
    gap = 1 - b
    sums = set(residues(spec))
    for l in range(1, math.floor(1 / gap) + 1):
        t = l * gap
        if any((r - t) in sums for r in spec.r_set):
            return True
    return False


@lru_cache(maxsize=256)
def _enumerate(spec: GammaSpec, cutoff: Fraction) -> tuple:
    found = set()
    sums = residues(spec)
    for l in range(1, math.floor(1 / (1 - cutoff)) + 1):
        for r in spec.r_set:
            for s in sums:
                if s > r:
                    break
                g = 1 - (r - s) / l
                if g <= cutoff:
                    found.add(g)
    return tuple(sorted(found))


def gamma_enumerate_upto(cutoff: RationalLike, spec: GammaSpec) -> list:
    """All elements of Gamma(N, Phi) in ``[0, cutoff]``, sorted.

    Raises DomainError for ``cutoff >= 1``: the set is infinite near 1.
    """
    cutoff = as_rational(cutoff)
    if not 0 <= cutoff < 1:
        raise DomainError(f"cutoff must lie in [0, 1), got {cutoff}")
    return list(_enumerate(spec, cutoff))


def low_approx(b: RationalLike, spec: GammaSpec) -> Fraction:
    """Largest element of Gamma(N, Phi) that does not exceed ``b``.

    For each ``l`` and ``r`` the best residue is the largest
    ``s <= r - l(1 - b)``, found by bisection on the sorted residue list.
    """
    b = check_coefficient(b)
    if b == 1:
        return Fraction(1)
    sums = residues(spec)
    gap = 1 - b
    best = Fraction(0)
    for l in range(1, math.floor(1 / gap) + 1):
        for r in spec.r_set:
            bound = r - l * gap
            if bound < 0:
                continue
            i = bisect.bisect_right(sums, bound) - 1
            g = 1 - (r - sums[i]) / l
            if g > best:
                best = g
    return best
