"""Complementary indices: Diophantine restrictions and simultaneous rounding.

An integer ``n`` is under complementary restrictions for data ``(I, v, e, eps)``
when some ``v_n`` satisfies

1. ``I | n``;
2. ``n * v_n`` is an integer vector;
3. ``|v_n - v| < eps / n``;
4. ``|(v_n - v)/|v_n - v| - e| < eps``,

all norms being max-norms. The intended ``v`` is irrational; here it is an exact
rational surrogate, and ``v_n == v`` is rejected because condition 4 is then
undefined.

The covering routines certify the simultaneous-rounding statement on
denominator-bounded grids: every tuple of boundary vectors ``B_1..B_m`` with
``sum_j b_ij <= c_i`` gets some index ``n`` from a finite set with
``sum_j b_ij^[n] <= c_i``.
"""
from __future__ import annotations

import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .core import CoveringFailure, DomainError, RationalLike, as_rational, as_vector, linf_norm
from .rounding import check_index, round_coeff

__all__ = [
    "RestrictionData",
    "RestrictionWitness",
    "CoveringProblem",
    "check_restriction",
    "candidate_points",
    "witness_for",
    "find_complementary_n",
    "continuity_delta",
    "find_simultaneous_n",
    "farey_values",
    "construct_covering_set",
    "verify_covering",
]

# operations exposed one-to-one through the CLI
OPERATIONS = (
    "check_restriction",
    "find_complementary_n",
    "continuity_delta",
    "find_simultaneous_n",
    "construct_covering_set",
    "verify_covering",
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class RestrictionData:
    divisor_i: int
    v: tuple
    e: tuple
    epsilon: Fraction

    def __post_init__(self):
        check_index(self.divisor_i)
        object.__setattr__(self, "v", as_vector(self.v))
        object.__setattr__(self, "e", as_vector(self.e))
        object.__setattr__(self, "epsilon", as_rational(self.epsilon))
        if len(self.v) != len(self.e):
            raise DomainError(f"dim(v)={len(self.v)} differs from dim(e)={len(self.e)}")
        if not any(self.e):
            raise DomainError("direction e must be nonzero")
        if self.epsilon <= 0:
            raise DomainError("epsilon must be positive")

    @classmethod
    def trivial(cls, divisor_i: int = 1) -> "RestrictionData":
        """Data under which every multiple of ``divisor_i`` is admissible
        (``v = 0``, ``e = 1``, ``eps = 2``; the witness is ``v_n = 1/n``)."""
        return cls(divisor_i, (Fraction(0),), (Fraction(1),), Fraction(2))

    def with_divisor(self, divisor_i: int) -> "RestrictionData":
        return RestrictionData(divisor_i, self.v, self.e, self.epsilon)


@dataclass(frozen=True)
class RestrictionWitness:
    n: int
    v_n: tuple


@dataclass(frozen=True)
class CoveringProblem:
    data: RestrictionData
    d: int
    capacities: tuple

    def __post_init__(self):
        check_index(self.d)
        caps = tuple(as_rational(c) for c in self.capacities)
        if not caps:
            raise DomainError("at least one capacity is required")
        if any(c <= 0 for c in caps):
            raise DomainError("capacities must be positive")
        object.__setattr__(self, "capacities", caps)

    @property
    def m(self) -> int:
        return len(self.capacities)

    @property
    def divisor(self) -> int:
        """lcm of I and the denominators of all capacities."""
        return math.lcm(self.data.divisor_i, *(c.denominator for c in self.capacities))


def check_restriction(w: RestrictionWitness, data: RestrictionData) -> bool:
    n = w.n
    v_n = as_vector(w.v_n)
    if len(v_n) != len(data.v):
        raise DomainError(f"dim(v_n)={len(v_n)} differs from dim(v)={len(data.v)}")
    if n < 1 or n % data.divisor_i:
        return False
    if any((n * x).denominator != 1 for x in v_n):
        return False
    diff = tuple(a - b for a, b in zip(v_n, data.v))
    size = linf_norm(diff)
    if size == 0 or size >= data.epsilon / n:
        return False
    return linf_norm(tuple(x / size - c for x, c in zip(diff, data.e))) < data.epsilon


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def candidate_points(n: int, data: RestrictionData):
    """Candidate ``v_n`` for one ``n``.

    Start from the componentwise nearest point of ``(1/n)Z^l`` to ``v`` (ties
    round down) and optionally shift coordinate ``i`` by ``sign(e_i)/n``.
    Shift patterns are produced in lexicographic order, the zero shift first.
    """
    base = [math.floor(n * x + Fraction(1, 2)) for x in data.v]
    signs = [_sign(c) for c in data.e]
    choices = [(0, s) if s else (0,) for s in signs]
    for pattern in itertools.product(*choices):
        yield tuple(Fraction(k + p, n) for k, p in zip(base, pattern))


def witness_for(n: int, data: RestrictionData) -> Optional[RestrictionWitness]:
    if n % data.divisor_i:
        return None
    for v_n in candidate_points(n, data):
        w = RestrictionWitness(n, v_n)
        if check_restriction(w, data):
            return w
    return None


def find_complementary_n(data: RestrictionData, n_max: int) -> Optional[RestrictionWitness]:
    """Smallest admissible ``n <= n_max`` with its witness, or None."""
    check_index(n_max)
    for n in range(data.divisor_i, n_max + 1, data.divisor_i):
        w = witness_for(n, data)
        if w is not None:
            return w
    return None


def continuity_delta(e_prime: Sequence[RationalLike], l: int, epsilon: RationalLike) -> Fraction:
    """Explicit radius for the continuity of ``x -> p(x)/|p(x)|``.

    ``p`` is the projection onto the first ``l`` coordinates. With
    ``a = |p(e')|``, any ``x`` with ``|x - e'| < delta`` has ``|p(x)| > a/2`` and
    the normalized projections differ by at most ``2 delta / a``, so
    ``delta = min(a/2, eps a/4)`` works.
    """
    e_prime = as_vector(e_prime)
    epsilon = as_rational(epsilon)
    check_index(l)
    if l > len(e_prime):
        raise DomainError(f"l={l} exceeds dimension {len(e_prime)}")
    if epsilon <= 0:
        raise DomainError("epsilon must be positive")
    a = linf_norm(e_prime[:l])
    if a == 0:
        raise DomainError("projection of e' onto the first l coordinates is zero")
    return min(a / 2, epsilon * a / 4)


def _check_boundaries(problem: CoveringProblem, boundaries) -> tuple:
    rows = tuple(tuple(as_rational(x) for x in row) for row in boundaries)
    if len(rows) != problem.m:
        raise DomainError(f"expected {problem.m} boundary vectors, got {len(rows)}")
    for i, (row, cap) in enumerate(zip(rows, problem.capacities)):
        if len(row) != problem.d:
            raise DomainError(f"boundary {i} has length {len(row)}, expected d={problem.d}")
        for j, x in enumerate(row):
            if not 0 <= x <= 1:
                raise DomainError(f"boundary {i} entry {j} = {x} is outside [0, 1]")
        if sum(row) > cap:
            raise DomainError(f"boundary {i} has sum {sum(row)} > capacity {cap}")
    return rows


def _fits(rows, capacities, n: int) -> bool:
    return all(sum(round_coeff(x, n) for x in row) <= cap for row, cap in zip(rows, capacities))


def find_simultaneous_n(problem: CoveringProblem, boundaries, n_max: int) -> Optional[int]:
    """Smallest ``n <= n_max`` that is admissible for the data with divisor
    ``lcm(I, denominators of c_i)`` and rounds every boundary within capacity."""
    rows = _check_boundaries(problem, boundaries)
    step = problem.divisor
    data = problem.data.with_divisor(step)
    for n in range(step, n_max + 1, step):
        if _fits(rows, problem.capacities, n) and witness_for(n, data) is not None:
            return n
    return None


def farey_values(denom_bound: int) -> list:
    """Sorted rationals in [0, 1] with denominator at most ``denom_bound``."""
    check_index(denom_bound)
    return sorted({Fraction(a, q) for q in range(1, denom_bound + 1) for a in range(q + 1)})


def _vector_grid(values, d: int, cap: Fraction) -> list:
    # sorted d-tuples suffice: the rounding sums are symmetric in the entries
    return [t for t in itertools.combinations_with_replacement(values, d) if sum(t) <= cap]


def _grids(problem: CoveringProblem, denom_bound: int) -> list:
    values = farey_values(denom_bound)
    return [_vector_grid(values, problem.d, cap) for cap in problem.capacities]


def _mask(vec, cap, n_list, table) -> int:
    bits = 0
    for k, n in enumerate(n_list):
        if sum(table[n][x] for x in vec) <= cap:
            bits |= 1 << k
    return bits


def _round_table(values, n_list) -> dict:
    return {n: {x: round_coeff(x, n) for x in values} for n in n_list}


def _first_uncovered(masks_per_vector, start: int, stop: int):
    """Scan tuples whose first vector index lies in ``[start, stop)``."""
    rest = masks_per_vector[1:]
    for i0 in range(start, stop):
        m0 = masks_per_vector[0][i0]
        for idx in itertools.product(*(range(len(ms)) for ms in rest)):
            bits = m0
            for ms, k in zip(rest, idx):
                bits &= ms[k]
                if not bits:
                    break
            if not bits:
                return (i0,) + idx
    return None


def _scan_chunk(args):
    return _first_uncovered(*args)


def verify_covering(n_set: Iterable[int], problem: CoveringProblem, denom_bound: int, jobs: int = 1):
    """Exhaustive check of a candidate index set on the grid.

    Boundary vectors range over nondecreasing ``d``-tuples of rationals with
    denominator at most ``denom_bound`` and sum at most ``c_i``. Returns None when
    every tuple has an ``n`` in ``n_set`` with all rounded sums within capacity,
    otherwise the first uncovered tuple in grid order. Only the rounding
    inequalities are checked here, not the Diophantine restrictions.
    """
    n_list = sorted(set(n_set))
    if not n_list:
        raise DomainError("n_set must be nonempty")
    for n in n_list:
        check_index(n)
    grids = _grids(problem, denom_bound)
    table = _round_table(farey_values(denom_bound), n_list)
    masks = [[_mask(vec, cap, n_list, table) for vec in grid]
             for grid, cap in zip(grids, problem.capacities)]
    total = len(grids[0])
    if jobs > 1 and total > 1:
        size = -(-total // jobs)
        chunks = [(masks, s, min(s + size, total)) for s in range(0, total, size)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for hit in pool.map(_scan_chunk, chunks):
                if hit is not None:
                    return tuple(g[k] for g, k in zip(grids, hit))
        return None
    hit = _first_uncovered(masks, 0, total)
    if hit is None:
        return None
    return tuple(g[k] for g, k in zip(grids, hit))


def construct_covering_set(problem: CoveringProblem, denom_bound: int, n_max: int) -> frozenset:
    """Greedy finite index set covering the grid.

    Grid tuples are visited in order; each one not yet covered by the current
    set contributes ``find_simultaneous_n`` for itself. Raises CoveringFailure
    with the tuple when no admissible ``n <= n_max`` exists.
    """
    grids = _grids(problem, denom_bound)
    values = farey_values(denom_bound)
    masks = [[0] * len(grid) for grid in grids]
    chosen: list = []
    for idx in itertools.product(*(range(len(g)) for g in grids)):
        bits = ~0
        for ms, k in zip(masks, idx):
            bits &= ms[k]
            if not bits:
                break
        if bits:
            continue
        combo = tuple(g[k] for g, k in zip(grids, idx))
        n = find_simultaneous_n(problem, combo, n_max)
        if n is None:
            raise CoveringFailure(f"no admissible n <= {n_max} for {combo}", combo)
        log.debug("covering: added n=%d for %s", n, combo)
        bit = 1 << len(chosen)
        chosen.append(n)
        table = {x: round_coeff(x, n) for x in values}
        for ms, grid, cap in zip(masks, grids, problem.capacities):
            for k, vec in enumerate(grid):
                if sum(table[x] for x in vec) <= cap:
                    ms[k] |= bit
    return frozenset(chosen)
