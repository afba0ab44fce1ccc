"""Kodaira fibre types of minimal elliptic fibrations.

For a minimal elliptic fibration ``f: X -> Z`` near ``P``, ``K_X = f^*(K_Z + d_P P)``
where the divisorial coefficient ``d_P`` depends only on the type of ``f^*P``:

    ======  ========  ====  ====  ====  =====  =====  =====  =====
    type    mI_n      II    III   IV    I*_b   II*    III*   IV*
    d_P     1 - 1/m   1/6   1/4   1/3   1/2    5/6    3/4    2/3
    ======  ========  ====  ====  ====  =====  =====  =====  =====

With ``p`` chosen so that ``K_X + p f^*P`` is maximally log canonical, that divisor
has index 1, 2, 6, 4, 3 for the families mI_n, I*_b, II/II*, III/III*,
IV/IV*. Every elliptic 0-contraction has adjunction index 12.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .core import DomainError, MalformedInput

__all__ = [
    "KodairaType",
    "parse_kodaira",
    "divisorial_coeff",
    "complement_index",
    "adjunction_index_elliptic",
    "ALL_FIXED_KINDS",
]

# operations exposed one-to-one through the CLI
OPERATIONS = ("divisorial_coeff", "complement_index", "adjunction_index_elliptic")

ADJUNCTION_INDEX = 12

_FIXED = {
    "II": (Fraction(1, 6), 6),
    "III": (Fraction(1, 4), 4),
    "IV": (Fraction(1, 3), 3),
    "II*": (Fraction(5, 6), 6),
    "III*": (Fraction(3, 4), 4),
    "IV*": (Fraction(2, 3), 3),
}
ALL_FIXED_KINDS = tuple(_FIXED)


@dataclass(frozen=True)
class KodairaType:
    """``kind`` is ``"mI"``, ``"I*"`` or one of II, III, IV, II*, III*, IV*."""

    kind: str
    m: int = 1
    n: int = 0
    b: int = 0

    def __post_init__(self):
        if self.kind not in _FIXED and self.kind not in ("mI", "I*"):
            raise DomainError(f"unknown Kodaira kind {self.kind!r}")
        for name in ("m", "n", "b"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                raise DomainError(f"{name} must be an integer")
        if self.m < 1 or self.n < 0 or self.b < 0:
            raise DomainError("need m >= 1, n >= 0, b >= 0")

    def __str__(self) -> str:
        if self.kind == "mI":
            return f"{self.m if self.m > 1 else ''}I{self.n}"
        if self.kind == "I*":
            return f"I*{self.b}"
        return self.kind


_MI = re.compile(r"^(\d*)I_?(\d+)$")
_ISTAR = re.compile(r"^I(?:\*_?(\d+)|_?(\d+)\*|star_?(\d+))$", re.IGNORECASE)


def parse_kodaira(text: str) -> KodairaType:
    """Parse labels such as ``II``, ``IV*``, ``I3``, ``2I_5``, ``I*0``, ``I0*``.

    >>> parse_kodaira("2I_5")
    KodairaType(kind='mI', m=2, n=5, b=0)
    """
    s = text.strip().replace("^", "")
    if re.fullmatch(r"(?i)(II|III|IV)star", s):
        s = s[:-4] + "*"
    if s.upper() in _FIXED:
        return KodairaType(s.upper())
    m = _MI.match(s)
    if m:
        return KodairaType("mI", m=int(m.group(1) or 1), n=int(m.group(2)))
    m = _ISTAR.match(s)
    if m:
        return KodairaType("I*", b=int(next(g for g in m.groups() if g is not None)))
    raise MalformedInput(f"unrecognized Kodaira type {text!r}")


def divisorial_coeff(t: KodairaType) -> Fraction:
    if t.kind == "mI":
        return 1 - Fraction(1, t.m)
    if t.kind == "I*":
        return Fraction(1, 2)
    return _FIXED[t.kind][0]


def complement_index(t: KodairaType) -> int:
    if t.kind == "mI":
        return 1
    if t.kind == "I*":
        return 2
    return _FIXED[t.kind][1]


def adjunction_index_elliptic() -> int:
    return ADJUNCTION_INDEX
