import json
import random
from fractions import Fraction as F
from itertools import combinations_with_replacement
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from complements.core import DomainError, MalformedInput
from complements.curves import (
    BoundaryPoint,
    Component,
    CurvePair,
    CurveTag,
    classify,
    component_degree_data,
    find_n_complement,
    has_r_complement,
    is_n_complement,
    merge_small_multiplicities,
    r_complement,
)
from complements.rounding import round_coeff
from curve_gen import build_pair, dual_graphs, random_complementary_pair
from oracles import r_complement_ref

DATA = Path(__file__).resolve().parents[1] / "src" / "complements" / "data"
HALF, THIRD = F(1, 2), F(1, 3)


def rational(*mults):
    return build_pair((0,), (), [(0, m) for m in mults])


def chain(k, boundary=()):
    return build_pair((0,) * k, tuple((i, i + 1) for i in range(k - 1)), boundary)


def cycle(k):
    return build_pair((0,) * k, tuple((i, (i + 1) % k) for i in range(k)), ())


ELLIPTIC = build_pair((1,), (), ())
NODAL = build_pair((0,), ((0, 0),), ())


def test_degree_data():
    (c,) = component_degree_data(NODAL)
    assert (c.genus, c.nodes) == (0, 2)
    a, b = component_degree_data(chain(2))
    assert a.nodes == b.nodes == 1
    (s,) = component_degree_data(rational(HALF))
    assert (s.nodes, s.degree) == (0, HALF)


@pytest.mark.parametrize("curve, tag", [
    (ELLIPTIC, CurveTag.SMOOTH_ELLIPTIC),
    (rational(HALF, HALF, HALF, HALF), CurveTag.SMOOTH_RATIONAL),
    (chain(3, [(1, HALF)]), CurveTag.NO_R_COMPLEMENT),
    (NODAL, CurveTag.IRREDUCIBLE_NODAL),
    (cycle(3), CurveTag.CYCLE),
    (cycle(2), CurveTag.CYCLE),
    (chain(4, [(0, HALF), (3, F(1))]), CurveTag.CHAIN),
    (rational(F(1), F(1), F(1, 6)), CurveTag.NO_R_COMPLEMENT),
    (build_pair((1,), (), [(0, THIRD)]), CurveTag.NO_R_COMPLEMENT),
    (build_pair((2,), (), ()), CurveTag.NO_R_COMPLEMENT),
])
def test_classify_examples(curve, tag):
    assert classify(curve).tag is tag


def test_chain_order_follows_the_path():
    curve = build_pair((0,) * 4, ((2, 0), (0, 3), (3, 1)), ())
    assert classify(curve).chain_order == ("C1", "C3", "C0", "C2")


def test_zero_multiplicity_points_count_as_empty_boundary():
    assert classify(build_pair((1,), (), [(0, F(0))])).tag is CurveTag.SMOOTH_ELLIPTIC


def test_r_complement_examples():
    comp = r_complement(rational(HALF, HALF))
    assert [p.mult for p in comp.boundary] == [1, 1]
    assert not comp.supports_extended
    assert r_complement(build_pair((1,), (), [(0, THIRD)])) is None
    assert r_complement(cycle(4)).boundary == ()


def test_r_complement_adds_points_when_needed():
    comp = r_complement(rational(HALF))
    assert comp.supports_extended
    assert sum(p.mult for p in comp.boundary) == 2
    assert all(0 <= p.mult <= 1 for p in comp.boundary)


@pytest.mark.parametrize("mults, expected", [
    ((F(1, 4),) * 4, (HALF, HALF)),
    ((F(1), F(1)), (F(1), F(1))),
    ((THIRD,), (THIRD,)),
])
def test_merge_examples(mults, expected):
    assert merge_small_multiplicities(mults) == expected


@settings(max_examples=200, deadline=None)
@given(st.lists(st.fractions(min_value=0, max_value=1, max_denominator=24), max_size=8),
       st.integers(min_value=1, max_value=30))
def test_merge_keeps_mass_and_does_not_raise_rounding(mults, n):
    merged = merge_small_multiplicities(mults)
    assert sum(merged) == sum(mults)
    assert all(0 <= m <= 1 for m in merged)
    assert sum(round_coeff(m, n) for m in mults) <= sum(round_coeff(m, n) for m in merged)
    assert sum(1 for m in merged if m < HALF) <= 1


def test_find_n_complement_examples():
    comp = find_n_complement(rational(HALF, HALF, HALF, HALF), {1, 2})
    assert comp.n == 2
    assert [p.mult for p in comp.boundary] == [HALF] * 4

    two = chain(2, [(0, THIRD)])
    comp = find_n_complement(two, {2})
    assert comp.n == 2
    assert is_n_complement(two, comp.boundary, 2)
    assert sum(p.mult for p in comp.boundary if p.component == "C0") == 1
    assert sum(p.mult for p in comp.boundary if p.component == "C1") == 1

    comp = find_n_complement(cycle(3), {7})
    assert (comp.n, comp.boundary) == (7, ())


def test_find_n_complement_none_and_errors():
    assert find_n_complement(rational(F(2, 3), F(2, 3), F(2, 3)), {1}) is None
    with pytest.raises(DomainError):
        find_n_complement(build_pair((1,), (), [(0, THIRD)]), {1, 2})
    with pytest.raises(DomainError):
        find_n_complement(rational(), set())


def test_is_n_complement_examples():
    curve = rational(HALF, HALF)
    plus = [BoundaryPoint("C0", "P0", F(1)), BoundaryPoint("C0", "P1", F(1))]
    assert is_n_complement(curve, plus, 1)
    assert is_n_complement(ELLIPTIC, [], 5)
    short = [BoundaryPoint("C0", "P0", HALF), BoundaryPoint("C0", "P1", F(1))]
    assert not is_n_complement(curve, short, 2)


def test_is_n_complement_rejections():
    curve = rational(HALF)
    ok = [BoundaryPoint("C0", "P0", F(1)), BoundaryPoint("C0", "Q", F(1))]
    assert is_n_complement(curve, ok, 3)
    # below the rounded multiplicity
    assert not is_n_complement(curve, [BoundaryPoint("C0", "Q", F(1)), BoundaryPoint("C0", "R", F(1))], 3)
    # not integral after scaling by n
    frac = [BoundaryPoint("C0", "P0", F(2, 3)), BoundaryPoint("C0", "Q", F(4, 3) - F(1, 3)),
            BoundaryPoint("C0", "R", THIRD)]
    assert not is_n_complement(curve, frac, 2)
    # multiplicity above 1
    assert not is_n_complement(curve, [BoundaryPoint("C0", "P0", F(2))], 1)
    # no complement on a component with negative target
    assert not is_n_complement(build_pair((2,), (), ()), [], 1)


def test_validation():
    with pytest.raises(DomainError):
        CurvePair((Component("A"), Component("B")), (), ())
    with pytest.raises(DomainError):
        CurvePair((Component("A"), Component("A")), (("A", "A"),), ())
    with pytest.raises(DomainError):
        CurvePair((Component("A"),), (), (BoundaryPoint("A", "P", F(3, 2)),))
    with pytest.raises(DomainError):
        CurvePair((Component("A"),), (), (BoundaryPoint("A", "P", HALF), BoundaryPoint("A", "P", HALF)))
    with pytest.raises(DomainError):
        CurvePair((Component("A"),), (("A", "Z"),), ())


def test_json_round_trip_and_errors():
    curve = chain(3, [(0, HALF), (2, F(1))])
    assert CurvePair.from_json(json.loads(json.dumps(curve.to_json()))).to_json() == curve.to_json()
    with pytest.raises(MalformedInput):
        CurvePair.from_json({"nodes": []})
    with pytest.raises(MalformedInput):
        CurvePair.from_json({"components": [{"id": "A"}], "boundary": [{"component": "A", "point": "P", "mult": "x"}]})


def test_shipped_fixtures_load():
    files = sorted((DATA / "curves").glob("*.json"))
    assert files
    tags = {classify(CurvePair.from_json(json.loads(f.read_text()))).tag for f in files}
    assert tags == set(CurveTag)


def _raw(curve):
    comps = [(c.id, c.genus) for c in curve.components]
    return comps, list(curve.nodes), [(b.component, b.mult) for b in curve.boundary]


@pytest.mark.parametrize("k", [1, 2, 3])
def test_classify_matches_oracle_on_small_domain(k):
    # every graph with genus <= 1, at most k+1 nodes, and up to two boundary points of denominator <= 2
    values = [F(0), HALF, F(1)]
    for genera, edges in dual_graphs(k):
        for placed in range(3):
            for pts in combinations_with_replacement([(v, m) for v in range(k) for m in values], placed):
                curve = build_pair(genera, edges, pts)
                assert has_r_complement(curve) == r_complement_ref(*_raw(curve)), curve.to_json()


graphs = st.sampled_from([g for k in (1, 2, 3, 4) for g in dual_graphs(k)])
mult = st.fractions(min_value=0, max_value=1, max_denominator=6)


@settings(max_examples=300, deadline=None)
@given(graphs, st.lists(st.tuples(st.integers(min_value=0, max_value=3), mult), max_size=5))
def test_classify_matches_oracle(graph, pts):
    genera, edges = graph
    pts = [(v % len(genera), m) for v, m in pts]
    curve = build_pair(genera, edges, pts)
    assert has_r_complement(curve) == r_complement_ref(*_raw(curve))
    comp = r_complement(curve)
    if comp is not None:
        degrees = {c.id: F(0) for c in curve.components}
        for p in comp.boundary:
            degrees[p.component] += p.mult
        for d in component_degree_data(curve):
            assert degrees[d.id] == -d.canonical_degree
        original = {b.point: b.mult for b in curve.boundary}
        assert all(p.mult >= original.get(p.point, 0) for p in comp.boundary)


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=2**32))
def test_classification_ignores_labels(seed):
    rng = random.Random(seed)
    curve = random_complementary_pair(rng)
    ids = [c.id for c in curve.components]
    shuffled = ids[:]
    rng.shuffle(shuffled)
    rename = dict(zip(ids, (f"X{s}" for s in shuffled)))
    renamed = CurvePair(
        tuple(Component(rename[c.id], c.genus) for c in reversed(curve.components)),
        tuple((rename[b], rename[a]) for a, b in curve.nodes),
        tuple(BoundaryPoint(rename[b.component], "Q" + b.point, b.mult) for b in curve.boundary),
    )
    assert classify(renamed).tag is classify(curve).tag


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=0, max_value=2**32))
def test_found_complements_validate(seed):
    curve = random_complementary_pair(random.Random(seed))
    comp = find_n_complement(curve, range(1, 13))
    if comp is not None:
        assert is_n_complement(curve, comp.boundary, comp.n)
