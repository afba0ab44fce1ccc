"""Generators of nodal curve pairs for the curve tests."""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations_with_replacement, permutations, product

from complements.curves import BoundaryPoint, Component, CurvePair


def dual_graphs(k: int, max_genus: int = 1, max_nodes=None):
    """Connected multigraphs with loops on ``k`` genus-labelled vertices, one
    per isomorphism class. Vertices are ``0..k-1``; edges are sorted pairs."""
    if max_nodes is None:
        max_nodes = k + 1
    slots = [(i, j) for i in range(k) for j in range(i, k)]
    seen = set()
    for count in range(k - 1, max_nodes + 1):
        for edges in combinations_with_replacement(slots, count):
            if not _connected(k, edges):
                continue
            for genera in product(range(max_genus + 1), repeat=k):
                key = _canonical(k, edges, genera)
                if key in seen:
                    continue
                seen.add(key)
                yield genera, edges


def _connected(k, edges) -> bool:
    reach, stack = {0}, [0]
    while stack:
        v = stack.pop()
        for a, b in edges:
            for x, y in ((a, b), (b, a)):
                if x == v and y not in reach:
                    reach.add(y)
                    stack.append(y)
    return len(reach) == k


def _canonical(k, edges, genera):
    best = None
    for perm in permutations(range(k)):
        g = tuple(genera[perm.index(i)] for i in range(k))
        e = tuple(sorted(tuple(sorted((perm[a], perm[b]))) for a, b in edges))
        key = (g, e)
        if best is None or key < best:
            best = key
    return best


def build_pair(genera, edges, boundary) -> CurvePair:
    """``boundary`` is a sequence of ``(vertex, mult)``."""
    comps = tuple(Component(f"C{i}", g) for i, g in enumerate(genera))
    nodes = tuple((f"C{a}", f"C{b}") for a, b in edges)
    pts = tuple(BoundaryPoint(f"C{v}", f"P{j}", m) for j, (v, m) in enumerate(boundary))
    return CurvePair(comps, nodes, pts)


def _random_mults(rng: random.Random, total: Fraction, denom: int, max_points: int) -> list:
    """Random multiplicities in (0, 1], multiples of ``1/denom``, sum <= total."""
    budget = int(total * denom)
    out = []
    while budget > 0 and len(out) < max_points and rng.random() < 0.85:
        step = rng.randint(1, min(denom, budget))
        out.append(Fraction(step, denom))
        budget -= step
    return out


def random_complementary_pair(rng: random.Random, denom: int = 12, max_points: int = 8) -> CurvePair:
    """A random pair that has an R-complement, drawn from all five shapes."""
    shape = rng.choice(["rational", "elliptic", "nodal", "cycle", "chain"])
    if shape == "rational":
        mults = _random_mults(rng, Fraction(2), denom, max_points)
        return build_pair((0,), (), [(0, m) for m in mults])
    if shape == "elliptic":
        return build_pair((1,), (), [(0, Fraction(0))] * rng.randint(0, 1))
    if shape == "nodal":
        return build_pair((0,), ((0, 0),), [])
    k = rng.randint(2, 6)
    order = list(range(k))
    rng.shuffle(order)
    if shape == "cycle":
        edges = tuple((order[i], order[(i + 1) % k]) for i in range(k))
        return build_pair((0,) * k, edges, [])
    edges = tuple((order[i], order[i + 1]) for i in range(k - 1))
    pts = [(order[0], m) for m in _random_mults(rng, Fraction(1), denom, max_points // 2)]
    pts += [(order[-1], m) for m in _random_mults(rng, Fraction(1), denom, max_points // 2)]
    rng.shuffle(pts)
    return build_pair((0,) * k, edges, pts)
