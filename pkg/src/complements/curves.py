"""Connected nodal curve pairs ``(C, B)``: classification and complements.

A curve is recorded through its dual multigraph: one vertex per irreducible
component (with the geometric genus of its normalization) and one edge per
node, self-nodes being loops. The boundary ``B`` is a list of symbolic smooth
points with multiplicities in [0, 1].

On the normalization of a component ``C_i`` the canonical class of ``C`` pulls
back to ``K + (preimages of nodes)``, so ``K_C`` has degree ``2 g_i - 2 + l_i`` on
``C_i`` where ``l_i`` counts node preimages (a self-node counts twice). A
complement ``B+`` therefore needs degree ``2 - 2 g_i - l_i`` on ``C_i``. Working
this through for connected curves leaves exactly five shapes: a smooth
rational curve, a smooth elliptic curve, a rational curve with one node, a
cycle of smooth rational curves and a chain of smooth rational curves.

Points are identifiers only; no embedded geometry is modeled.
"""
from __future__ import annotations

import enum
from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .core import DomainError, MalformedInput, RationalLike, as_rational, format_rational
from .rounding import check_coefficient, check_index, round_coeff

__all__ = [
    "Component",
    "BoundaryPoint",
    "CurvePair",
    "CurveTag",
    "CurveClass",
    "ComponentData",
    "Complement",
    "component_degree_data",
    "classify",
    "has_r_complement",
    "r_complement",
    "merge_small_multiplicities",
    "find_n_complement",
    "is_n_complement",
]

# operations exposed one-to-one through the CLI
OPERATIONS = (
    "component_degree_data",
    "classify",
    "has_r_complement",
    "r_complement",
    "merge_small_multiplicities",
    "find_n_complement",
    "is_n_complement",
)

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class Component:
    id: str
    genus: int = 0


@dataclass(frozen=True)
class BoundaryPoint:
    component: str
    point: str
    mult: Fraction

    def __post_init__(self):
        object.__setattr__(self, "mult", as_rational(self.mult))

    def to_json(self) -> dict:
        return {"component": self.component, "point": self.point, "mult": format_rational(self.mult)}


@dataclass(frozen=True)
class ComponentData:
    id: str
    genus: int
    nodes: int  # preimages of nodes on the normalization
    degree: Fraction

    @property
    def canonical_degree(self) -> int:
        return 2 * self.genus - 2 + self.nodes


@dataclass(frozen=True, eq=False)
class CurvePair:
    """A connected nodal curve with a boundary on its smooth locus.

    Construction validates: unique component ids, nodes on known components,
    connected dual graph, distinct boundary points, multiplicities in [0, 1].
    """

    components: tuple
    nodes: tuple = ()
    boundary: tuple = ()

    def __post_init__(self):
        comps = tuple(c if isinstance(c, Component) else Component(*c) for c in self.components)
        nodes = tuple(tuple(pair) for pair in self.nodes)
        bnd = tuple(b if isinstance(b, BoundaryPoint) else BoundaryPoint(*b) for b in self.boundary)
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "boundary", bnd)
        self._validate()

    def _validate(self):
        if not self.components:
            raise DomainError("a curve needs at least one component")
        ids = [c.id for c in self.components]
        if len(set(ids)) != len(ids):
            raise DomainError("component ids must be unique")
        for c in self.components:
            if isinstance(c.genus, bool) or not isinstance(c.genus, int) or c.genus < 0:
                raise DomainError(f"genus of {c.id} must be a nonnegative integer")
        known = set(ids)
        for pair in self.nodes:
            if len(pair) != 2 or not set(pair) <= known:
                raise DomainError(f"node {pair!r} does not join known components")
        if not self._connected():
            raise DomainError("dual graph is not connected")
        seen = set()
        for b in self.boundary:
            if b.component not in known:
                raise DomainError(f"boundary point {b.point} lies on unknown component {b.component}")
            if b.point in seen:
                raise DomainError(f"boundary point {b.point} listed twice")
            seen.add(b.point)
            check_coefficient(b.mult)

    def _connected(self) -> bool:
        adj = self.adjacency
        start = self.components[0].id
        stack, reached = [start], {start}
        while stack:
            for nxt in adj[stack.pop()]:
                if nxt not in reached:
                    reached.add(nxt)
                    stack.append(nxt)
        return len(reached) == len(self.components)

    @cached_property
    def adjacency(self) -> dict:
        """Neighbour multisets, excluding self-nodes."""
        adj = {c.id: Counter() for c in self.components}
        for a, b in self.nodes:
            if a != b:
                adj[a][b] += 1
                adj[b][a] += 1
        return adj

    @cached_property
    def node_preimages(self) -> dict:
        count = {c.id: 0 for c in self.components}
        for a, b in self.nodes:
            count[a] += 1
            count[b] += 1
        return count

    @cached_property
    def self_nodes(self) -> dict:
        count = {c.id: 0 for c in self.components}
        for a, b in self.nodes:
            if a == b:
                count[a] += 1
        return count

    def with_boundary(self, boundary: Iterable) -> "CurvePair":
        return CurvePair(self.components, self.nodes, tuple(boundary))

    def degree(self, component: str) -> Fraction:
        return sum((b.mult for b in self.boundary if b.component == component), Fraction(0))

    @classmethod
    def from_json(cls, obj) -> "CurvePair":
        try:
            comps = tuple(Component(str(c["id"]), c.get("genus", 0)) for c in obj["components"])
            nodes = tuple((str(a), str(b)) for a, b in obj.get("nodes", []))
            bnd = tuple(
                BoundaryPoint(str(b["component"]), str(b["point"]), as_rational(str(b["mult"])))
                for b in obj.get("boundary", [])
            )
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            if isinstance(exc, DomainError):
                raise
            raise MalformedInput(f"bad curve JSON: {exc}") from exc
        return cls(comps, nodes, bnd)

    def to_json(self) -> dict:
        return {
            "components": [{"id": c.id, "genus": c.genus} for c in self.components],
            "nodes": [list(p) for p in self.nodes],
            "boundary": [b.to_json() for b in self.boundary],
        }


class CurveTag(str, enum.Enum):
    SMOOTH_RATIONAL = "SmoothRational"
    SMOOTH_ELLIPTIC = "SmoothElliptic"
    IRREDUCIBLE_NODAL = "IrreducibleNodal"
    CYCLE = "Cycle"
    CHAIN = "Chain"
    NO_R_COMPLEMENT = "NoRComplement"


@dataclass(frozen=True)
class CurveClass:
    tag: CurveTag
    chain_order: Optional[tuple] = None


@dataclass(frozen=True)
class Complement:
    """A complement ``B+`` on ``C``; ``n`` is None for an R-complement."""

    n: Optional[int]
    boundary: tuple
    supports_extended: bool = False

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "boundary": [b.to_json() for b in self.boundary],
            "supports_extended": self.supports_extended,
        }


def component_degree_data(curve: CurvePair) -> list:
    pre = curve.node_preimages
    return [ComponentData(c.id, c.genus, pre[c.id], curve.degree(c.id)) for c in curve.components]


def _walk(curve: CurvePair, start: str, first: Optional[str]) -> tuple:
    order = [start]
    prev, cur = None, start
    nxt = first
    while nxt is not None and nxt != start:
        order.append(nxt)
        prev, cur = cur, nxt
        options = sorted(set(curve.adjacency[cur]) - {prev})
        nxt = options[0] if options else None
    return tuple(order)


def classify(curve: CurvePair) -> CurveClass:
    data = component_degree_data(curve)
    zero = {d.id: all(b.mult == 0 for b in curve.boundary if b.component == d.id) for d in data}

    if len(data) == 1:
        (c,) = data
        if c.nodes == 0 and c.genus == 0 and c.degree <= 2:
            return CurveClass(CurveTag.SMOOTH_RATIONAL)
        if c.nodes == 0 and c.genus == 1 and zero[c.id]:
            return CurveClass(CurveTag.SMOOTH_ELLIPTIC)
        if c.nodes == 2 and c.genus == 0 and zero[c.id]:
            return CurveClass(CurveTag.IRREDUCIBLE_NODAL)
        return CurveClass(CurveTag.NO_R_COMPLEMENT)

    if any(d.genus or d.nodes > 2 or curve.self_nodes[d.id] for d in data):
        return CurveClass(CurveTag.NO_R_COMPLEMENT)

    # connected, loop-free, every vertex of degree 1 or 2: a path or a cycle
    ends = sorted(d.id for d in data if d.nodes == 1)
    if not ends:
        if not all(zero.values()):
            return CurveClass(CurveTag.NO_R_COMPLEMENT)
        start = min(d.id for d in data)
        order = _walk(curve, start, min(curve.adjacency[start]))
        return CurveClass(CurveTag.CYCLE, order)

    order = _walk(curve, ends[0], min(curve.adjacency[ends[0]]))
    by_id = {d.id: d for d in data}
    if any(not zero[i] for i in order[1:-1]):
        return CurveClass(CurveTag.NO_R_COMPLEMENT)
    if by_id[order[0]].degree > 1 or by_id[order[-1]].degree > 1:
        return CurveClass(CurveTag.NO_R_COMPLEMENT)
    return CurveClass(CurveTag.CHAIN, order)


def _targets(curve: CurvePair, cls: CurveClass) -> dict:
    """Required degree of ``B+`` on each component."""
    if cls.tag is CurveTag.SMOOTH_RATIONAL:
        return {curve.components[0].id: 2}
    if cls.tag is CurveTag.CHAIN:
        ends = {cls.chain_order[0], cls.chain_order[-1]}
        return {c.id: (1 if c.id in ends else 0) for c in curve.components}
    return {c.id: 0 for c in curve.components}


class _FreshIds:
    def __init__(self, curve: CurvePair):
        self.used = {b.point for b in curve.boundary}
        self.k = 0

    def __call__(self, component: str) -> str:
        while True:
            self.k += 1
            pid = f"{component}:new{self.k}"
            if pid not in self.used:
                self.used.add(pid)
                return pid


def _top_up(points: list, component: str, target: Fraction, fresh: _FreshIds) -> bool:
    """Raise multiplicities on ``component`` (in list order, each at most to 1)
    until the degree there equals ``target``; add fresh points if needed.
    Mutates ``points``; returns True when fresh points were added."""
    deficit = target - sum((p.mult for p in points if p.component == component), Fraction(0))
    for i, p in enumerate(points):
        if deficit <= 0:
            break
        if p.component == component and p.mult < 1:
            raise_by = min(1 - p.mult, deficit)
            points[i] = BoundaryPoint(p.component, p.point, p.mult + raise_by)
            deficit -= raise_by
    extended = False
    while deficit > 0:
        add = min(Fraction(1), deficit)
        points.append(BoundaryPoint(component, fresh(component), add))
        deficit -= add
        extended = True
    return extended


def r_complement(curve: CurvePair) -> Optional[Complement]:
    """An R-complement ``B+ >= B``, or None when the pair has none."""
    cls = classify(curve)
    if cls.tag is CurveTag.NO_R_COMPLEMENT:
        return None
    points = list(curve.boundary)
    fresh = _FreshIds(curve)
    extended = False
    for comp, target in _targets(curve, cls).items():
        if target:
            extended |= _top_up(points, comp, Fraction(target), fresh)
    return Complement(None, tuple(points), extended)


def has_r_complement(curve: CurvePair) -> bool:
    return classify(curve).tag is not CurveTag.NO_R_COMPLEMENT


def merge_small_multiplicities(mults: Sequence[RationalLike], threshold: RationalLike = HALF) -> tuple:
    """Join multiplicities below ``threshold`` pairwise.

    The two smallest entries below the threshold are replaced by their sum
    (appended at the end) while that sum stays at most 1. Since
    ``floor(x) + floor(y) <= floor(x + y)``, merging never raises the total of
    the rounded multiplicities.

    >>> merge_small_multiplicities([Fraction(1, 4)] * 4)
    (Fraction(1, 2), Fraction(1, 2))
    """
    threshold = as_rational(threshold)
    if not 0 < threshold <= 1:
        raise DomainError("threshold must lie in (0, 1]")
    out = [check_coefficient(m) for m in mults]
    while True:
        small = sorted((m, i) for i, m in enumerate(out) if m < threshold)
        if len(small) < 2 or small[0][0] + small[1][0] > 1:
            return tuple(out)
        (a, i), (b, j) = small[0], small[1]
        out = [m for k, m in enumerate(out) if k not in (i, j)]
        out.append(a + b)


def _capacity_ok(mults, cap: int, n: int) -> bool:
    return sum((round_coeff(m, n) for m in merge_small_multiplicities(mults)), Fraction(0)) <= cap


def find_n_complement(curve: CurvePair, candidates: Iterable[int]) -> Optional[Complement]:
    """Smallest candidate ``n`` with an n-complement, and that complement.

    Cases with ``B = 0`` take the smallest candidate and ``B+ = B``. On a smooth
    rational curve (capacity 2) and on the two ends of a chain (capacity 1
    each) the merged multiplicities must round within capacity; ``B+`` is then
    the rounded boundary raised to the exact degree in steps of ``1/n``.
    Returns None when no candidate qualifies.
    """
    ns = sorted({check_index(n) for n in candidates})
    if not ns:
        raise DomainError("candidate set must be nonempty")
    cls = classify(curve)
    if cls.tag is CurveTag.NO_R_COMPLEMENT:
        raise DomainError("the pair has no R-complement")
    targets = _targets(curve, cls)
    if not any(targets.values()):
        return Complement(ns[0], curve.boundary, False)

    by_comp = defaultdict(list)
    for b in curve.boundary:
        by_comp[b.component].append(b.mult)
    active = {comp: cap for comp, cap in targets.items() if cap}
    for n in ns:
        if all(_capacity_ok(by_comp[comp], cap, n) for comp, cap in active.items()):
            points = [BoundaryPoint(b.component, b.point, round_coeff(b.mult, n)) for b in curve.boundary]
            fresh = _FreshIds(curve)
            extended = False
            for comp, cap in active.items():
                extended |= _top_up(points, comp, Fraction(cap), fresh)
            return Complement(n, tuple(points), extended)
    return None


def is_n_complement(curve: CurvePair, b_plus: Sequence[BoundaryPoint], n: int) -> bool:
    """Check the n-complement conditions for ``B+`` on ``C``.

    1. ``B+ >= B^[n]`` at every boundary point of ``B``;
    2. every multiplicity of ``B+`` lies in [0, 1] (log canonical);
    3. ``n B+`` is integral and ``deg B+ = 2 - 2 g_i - l_i`` on each component.
    """
    n = check_index(n)
    known = {c.id for c in curve.components}
    plus = {}
    for p in b_plus:
        if p.component not in known or p.point in plus:
            return False
        plus[p.point] = p
    for b in curve.boundary:
        p = plus.get(b.point)
        got = Fraction(0) if p is None else p.mult
        if p is not None and p.component != b.component:
            return False
        if got < round_coeff(b.mult, n):
            return False
    if any(not 0 <= p.mult <= 1 or (n * p.mult).denominator != 1 for p in plus.values()):
        return False
    degree = defaultdict(Fraction)
    for p in plus.values():
        degree[p.component] += p.mult
    for d in component_degree_data(curve):
        need = -d.canonical_degree
        if need < 0 or degree[d.id] != need:
            return False
    return True
