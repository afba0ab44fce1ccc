"""Exact rational scalars and vectors shared by every module.

Scalars are :class:`fractions.Fraction` values (always in lowest terms with the
sign carried by the numerator). Vectors are plain tuples of fractions.
Nothing here ever touches a float.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction
RationalVector = tuple  # tuple[Fraction, ...]
RationalLike = Union[Fraction, int, str]

__all__ = [
    "ComplementsError",
    "DomainError",
    "MalformedInput",
    "NoDecomposition",
    "CoveringFailure",
    "Rational",
    "RationalVector",
    "as_rational",
    "as_vector",
    "parse_rational",
    "parse_vector",
    "format_rational",
    "linf_norm",
    "floor_rational",
]

# operations exposed one-to-one through the CLI
OPERATIONS = ("linf_norm", "floor_rational")


class ComplementsError(Exception):
    """Base class for every error raised by this package."""


class DomainError(ComplementsError, ValueError):
    """An argument lies outside the domain of the operation."""


class MalformedInput(ComplementsError, ValueError):
    """Text or JSON input could not be parsed."""


class NoDecomposition(ComplementsError):
    """Zariski decomposition does not exist on the given model."""


class CoveringFailure(ComplementsError):
    """A grid tuple admits no index up to the search bound.

    The offending tuple is kept on ``witness``.
    """

    def __init__(self, message: str, witness):
        super().__init__(message)
        self.witness = witness


_INT_RE = re.compile(r"^-?\d+(?:/\d+)?$")
_DEC_RE = re.compile(r"^-?(?:\d+\.\d*|\.\d+)$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p"``, ``"p/q"`` or a decimal literal into an exact fraction.

    Whitespace anywhere is ignored and a Unicode minus sign is accepted.
    Decimal input is converted exactly, so ``"0.6"`` gives ``3/5``.

    >>> parse_rational(" -3 / 4 ")
    Fraction(-3, 4)
    >>> parse_rational("0.6")
    Fraction(3, 5)
    """
    if not isinstance(text, str):
        raise MalformedInput(f"expected a string, got {type(text).__name__}")
    s = "".join(text.split()).replace("−", "-")
    if _INT_RE.match(s):
        if "/" in s and int(s.split("/")[1]) == 0:
            raise MalformedInput(f"zero denominator in {text!r}")
        return Fraction(s)
    if _DEC_RE.match(s):
        return Fraction(s)
    raise MalformedInput(f"not a rational number: {text!r}")


def format_rational(q: Fraction) -> str:
    """Render as ``"p/q"``, or ``"p"`` when the value is an integer."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def as_rational(value: RationalLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise DomainError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise DomainError(f"cannot interpret {value!r} exactly as a rational")


def as_vector(values: Iterable[RationalLike]) -> tuple:
    vec = tuple(as_rational(v) for v in values)
    if not vec:
        raise DomainError("vector must have dimension >= 1")
    return vec


def parse_vector(text: str) -> tuple:
    """Comma-separated rationals, e.g. ``"1/2,-3/4"``."""
    parts = [p for p in text.split(",")]
    if not text.strip() or any(not p.strip() for p in parts):
        raise MalformedInput(f"bad vector literal {text!r}")
    return tuple(parse_rational(p) for p in parts)


def linf_norm(v: Sequence[RationalLike]) -> Fraction:
    """Maximum absolute value of the entries."""
    vec = as_vector(v)
    return max(abs(x) for x in vec)


def floor_rational(a: RationalLike) -> int:
    return math.floor(as_rational(a))
