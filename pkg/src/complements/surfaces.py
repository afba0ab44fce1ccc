"""Zariski decomposition on intersection-matrix models of relative surfaces.

A :class:`SurfaceModel` lists vertical curve classes ``D_1..D_k`` with their
exact intersection matrix. A :class:`DivisorExpr` is ``sum a_j D_j + H`` where
only the numbers ``H.D_i`` (the ``ambient`` vector) are known for the part ``H``
not supported on the classes. Nefness over the base is modeled as
nonnegative intersection with every listed class; the model is a finite
intersection-theoretic abstraction, and whether the classes really are
vertical prime divisors is the caller's responsibility.

The decomposition ``D = M + F`` satisfies

1. ``F = sum f_i D_i`` with every ``f_i > 0`` on its support;
2. ``M . D_i >= 0`` for all ``i``;
3. the intersection matrix of the support of ``F`` is negative definite;
4. ``M . D_i = 0`` for ``D_i`` in the support of ``F``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .core import DomainError, MalformedInput, NoDecomposition, as_rational, format_rational

__all__ = [
    "SurfaceModel",
    "DivisorExpr",
    "ZariskiResult",
    "is_negative_definite",
    "solve",
    "zariski_decompose",
    "check_nef",
    "check_maximality",
]

# operations exposed one-to-one through the CLI
OPERATIONS = ("is_negative_definite", "zariski_decompose", "check_nef", "check_maximality")


def _matrix(rows) -> tuple:
    return tuple(tuple(as_rational(x) for x in row) for row in rows)


def _check_symmetric(q) -> None:
    k = len(q)
    if any(len(row) != k for row in q):
        raise DomainError("intersection matrix must be square")
    for i in range(k):
        for j in range(i):
            if q[i][j] != q[j][i]:
                raise DomainError(f"intersection matrix is not symmetric at ({i}, {j})")


@dataclass(frozen=True)
class SurfaceModel:
    classes: tuple
    q: tuple

    def __post_init__(self):
        classes = tuple(str(c) for c in self.classes)
        q = _matrix(self.q)
        if len(set(classes)) != len(classes):
            raise DomainError("class ids must be unique")
        if len(q) != len(classes):
            raise DomainError(f"{len(classes)} classes but a {len(q)}x{len(q)} matrix")
        _check_symmetric(q)
        object.__setattr__(self, "classes", classes)
        object.__setattr__(self, "q", q)

    def index(self, cls: str) -> int:
        try:
            return self.classes.index(cls)
        except ValueError:
            raise DomainError(f"unknown class {cls!r}") from None

    def permuted(self, order: Sequence[int]) -> "SurfaceModel":
        return SurfaceModel(
            tuple(self.classes[i] for i in order),
            tuple(tuple(self.q[i][j] for j in order) for i in order),
        )

    @classmethod
    def from_json(cls, obj) -> "SurfaceModel":
        try:
            q = tuple(tuple(as_rational(str(x)) for x in row) for row in obj["q"])
            return cls(tuple(obj["classes"]), q)
        except (KeyError, TypeError, AttributeError) as exc:
            raise MalformedInput(f"bad model JSON: {exc}") from exc

    def to_json(self) -> dict:
        return {"classes": list(self.classes), "q": [[format_rational(x) for x in row] for row in self.q]}


@dataclass(frozen=True)
class DivisorExpr:
    """``coeffs`` maps class ids to coefficients; ``ambient[i]`` is ``H . D_i``."""

    coeffs: Mapping = field(default_factory=dict)
    ambient: tuple = ()

    def __post_init__(self):
        coeffs = {str(k): as_rational(v) for k, v in dict(self.coeffs).items()}
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "ambient", tuple(as_rational(x) for x in self.ambient))

    def coeff(self, cls: str) -> Fraction:
        return self.coeffs.get(cls, Fraction(0))

    def check_on(self, model: SurfaceModel) -> None:
        if len(self.ambient) != len(model.classes):
            raise DomainError(f"ambient vector has length {len(self.ambient)}, model has {len(model.classes)} classes")
        for cls in self.coeffs:
            model.index(cls)

    def intersections(self, model: SurfaceModel) -> tuple:
        """``(D . D_1, ..., D . D_k)``."""
        self.check_on(model)
        out = list(self.ambient)
        for cls, a in self.coeffs.items():
            if a:
                row = model.q[model.index(cls)]
                for i in range(len(out)):
                    out[i] += a * row[i]
        return tuple(out)

    def permuted(self, order: Sequence[int]) -> "DivisorExpr":
        return DivisorExpr(self.coeffs, tuple(self.ambient[i] for i in order))

    def normalized(self, model: SurfaceModel) -> dict:
        return {c: self.coeff(c) for c in model.classes}

    @classmethod
    def from_json(cls, obj) -> "DivisorExpr":
        try:
            coeffs = {str(k): as_rational(str(v)) for k, v in obj.get("coeffs", {}).items()}
            ambient = tuple(as_rational(str(x)) for x in obj["ambient"])
        except (KeyError, TypeError, AttributeError) as exc:
            raise MalformedInput(f"bad divisor JSON: {exc}") from exc
        return cls(coeffs, ambient)

    def to_json(self) -> dict:
        return {
            "coeffs": {k: format_rational(v) for k, v in sorted(self.coeffs.items()) if v},
            "ambient": [format_rational(x) for x in self.ambient],
        }


@dataclass(frozen=True)
class ZariskiResult:
    mobile: DivisorExpr
    fixed: dict
    support: tuple

    def to_json(self) -> dict:
        return {
            "mobile": self.mobile.to_json(),
            "fixed": {k: format_rational(v) for k, v in self.fixed.items()},
            "support": list(self.support),
        }


def is_negative_definite(q) -> bool:
    """Sylvester's criterion on ``-q`` with Bareiss fraction-free elimination.

    Entries are scaled to integers first; without pivoting, the k-th Bareiss
    pivot is exactly the k-th leading principal minor.
    """
    q = _matrix(q)
    _check_symmetric(q)
    k = len(q)
    if k == 0:
        return True
    scale = math.lcm(*(x.denominator for row in q for x in row))
    a = [[int(-x * scale) for x in row] for row in q]
    prev = 1
    for p in range(k):
        if a[p][p] <= 0:
            return False
        for i in range(p + 1, k):
            for j in range(p + 1, k):
                a[i][j] = (a[i][j] * a[p][p] - a[i][p] * a[p][j]) // prev
        prev = a[p][p]
    return True


def solve(a, b) -> tuple:
    """Exact solution of ``a x = b`` for a nonsingular square rational matrix."""
    k = len(a)
    m = [list(row) + [rhs] for row, rhs in zip(_matrix(a), (as_rational(x) for x in b))]
    for col in range(k):
        piv = next((r for r in range(col, k) if m[r][col] != 0), None)
        if piv is None:
            raise DomainError("singular system")
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(k):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return tuple(row[k] for row in m)


def zariski_decompose(model: SurfaceModel, d: DivisorExpr) -> ZariskiResult:
    """Decompose ``d = M + F`` by growing the support of ``F``.

    Start from the classes meeting ``d`` negatively, solve
    ``(d - F) . D_i = 0`` on the current support, add every class that
    ``d - F`` now meets negatively, and repeat. Each round adds at least one
    class, so at most ``k`` rounds are needed. Raises NoDecomposition when the
    support stops being negative definite or a coefficient of ``F`` is not
    positive; both mean ``d`` is not pseudo-effective on this model.
    """
    dot = d.intersections(model)
    k = len(model.classes)
    support: list = []
    f = [Fraction(0)] * k
    residual = list(dot)
    while True:
        new = [i for i in range(k) if i not in support and residual[i] < 0]
        if not new:
            break
        support = sorted(support + new)
        sub = [[model.q[i][j] for j in support] for i in support]
        if not is_negative_definite(sub):
            names = [model.classes[i] for i in support]
            raise NoDecomposition(f"intersection matrix on {names} is not negative definite")
        coeffs = solve(sub, [dot[i] for i in support])
        f = [Fraction(0)] * k
        for i, c in zip(support, coeffs):
            if c <= 0:
                raise NoDecomposition(f"fixed part has coefficient {c} on {model.classes[i]}")
            f[i] = c
        residual = [dot[i] - sum(f[j] * model.q[j][i] for j in support) for i in range(k)]
    coeffs = dict(d.coeffs)
    for i in support:
        cls = model.classes[i]
        coeffs[cls] = coeffs.get(cls, Fraction(0)) - f[i]
    # keyed by class id so the output does not depend on the class order
    fixed = {model.classes[i]: f[i] for i in sorted(support, key=lambda i: model.classes[i])}
    return ZariskiResult(DivisorExpr(coeffs, d.ambient), fixed, tuple(fixed))


def check_nef(model: SurfaceModel, d: DivisorExpr) -> bool:
    return all(x >= 0 for x in d.intersections(model))


def check_maximality(model: SurfaceModel, d: DivisorExpr, l: DivisorExpr) -> bool:
    """Verify that a nef ``l <= d`` stays below the mobile part of ``d``.

    ``l`` either shares the ambient part of ``d`` or has none (all-zero
    ambient vector); the ambient part of ``d`` counts as effective. Precondition
    failures raise DomainError with distinct messages.
    """
    l.check_on(model)
    d.check_on(model)
    if l.ambient != d.ambient and any(l.ambient):
        raise DomainError("precondition: l must share the ambient part of d or have none")
    if any(l.coeff(c) > d.coeff(c) for c in model.classes):
        raise DomainError("precondition: l is not <= d coefficientwise")
    if not check_nef(model, l):
        raise DomainError("precondition: l is not nef on the model")
    mobile = zariski_decompose(model, d).mobile
    return all(l.coeff(c) <= mobile.coeff(c) for c in model.classes)
