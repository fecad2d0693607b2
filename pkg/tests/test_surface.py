from fractions import Fraction as F
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from hjtoric.errors import Degenerate, HypothesisViolation, UnsupportedDegree, UsageError
from hjtoric.surface import (BundleSpec, ConstructionReport, OrbifoldPoint, OrbifoldRiemannSurface,
                             ParabolicMark, ParabolicRuledSurface, Section, euler_orb,
                             instability_report, realize_degree, slope, theoremB_construction)
from hjtoric.toric import SingularType


@pytest.mark.parametrize("genus,orders,expected", [
    (1, [], F(0)),
    (1, [3], F(-2, 3)),
    (0, [3, 3, 3, 3], F(-2, 3)),
    (2, [2, 5], F(-2) - F(1, 2) - F(4, 5)),
])
def test_euler_orb(genus, orders, expected):
    assert euler_orb(OrbifoldRiemannSurface.with_orders(genus, orders)) == expected


def test_surface_validation():
    with pytest.raises(UsageError):
        OrbifoldRiemannSurface(0, (OrbifoldPoint("A", 3), OrbifoldPoint("A", 5)))
    with pytest.raises(UsageError):
        OrbifoldRiemannSurface(0, (OrbifoldPoint("A", 1),))
    with pytest.raises(UsageError):
        ParabolicMark("A", Section.ZERO, F(1))
    with pytest.raises(UsageError):
        ParabolicRuledSurface(0, 1, (ParabolicMark("A", "zero", F(1, 2)),
                                     ParabolicMark("A", "infinity", F(1, 3))))
    with pytest.raises(UsageError):
        ParabolicRuledSurface(1, 5, (), BundleSpec(1, ()))


def test_construction_torus_one_point():
    rep = theoremB_construction(1, 1, [3])
    (pt,) = rep.points
    assert (pt.p, pt.n, pt.weight) == (2, 1, F(2, 3))
    assert rep.bundle_degree == 0 and rep.euler_orb == F(-2, 3)
    assert pt.singularities == (SingularType(2, 3), SingularType(1, 3))
    assert pt.chain.self_ints == [-2, -2, -1, -3]


def test_construction_sphere_four_points():
    rep = theoremB_construction(0, 2, [3, 3, 3, 3])
    assert [pt.p for pt in rep.points] == [1] * 4
    assert [pt.n for pt in rep.points] == [1] * 4
    assert rep.bundle_degree == 0 and rep.euler_orb == F(-2, 3)


@pytest.mark.parametrize("args,which", [
    ((1, 1, [2]), "order"),
    ((1, 2, [3, 4]), "gcd"),
    ((0, 1, [3, 3]), "euler"),
    ((0, 0, [3]), "r"),
])
def test_construction_hypotheses(args, which):
    with pytest.raises(HypothesisViolation) as info:
        theoremB_construction(*args)
    assert info.value.which == which


def test_slope_examples():
    assert slope(ParabolicRuledSurface(0, 1), Section.INFINITY) == -1
    m = theoremB_construction(1, 1, [3]).surface
    assert slope(m, Section.INFINITY) == F(-2, 3)
    assert slope(m, "zero") == F(2, 3)


def test_instability_examples():
    assert instability_report(theoremB_construction(1, 1, [3]).surface) == {Section.INFINITY: F(-2, 3)}
    assert instability_report(ParabolicRuledSurface(0, 0)) == {Section.ZERO: 0, Section.INFINITY: 0}
    assert instability_report(ParabolicRuledSurface(0, -2)) == {Section.ZERO: -2}
    assert instability_report(ParabolicRuledSurface(0, 1, (ParabolicMark("A", "zero", F(1, 2)),))) == {
        Section.INFINITY: F(-1, 2)}


@pytest.mark.parametrize("g,d,r,s", [(0, 2, 2, 6), (1, 3, 2, 3), (2, 2, 1, 1), (2, 5, 2, 1), (3, 12, 2, 4)])
def test_realize_examples(g, d, r, s):
    rep = realize_degree(g, d)
    assert (rep.r, len(rep.points), rep.bundle_degree) == (r, s, d)
    assert set(rep.orders) == {3}


def test_realize_errors():
    with pytest.raises(UnsupportedDegree):
        realize_degree(2, 3)
    with pytest.raises(UnsupportedDegree):
        realize_degree(0, -1)
    with pytest.raises(Degenerate):
        realize_degree(1, 0)


def _independent_degree(g, r, orders):
    # deg L = -r chi + sum(r - n_j) with chi = 2 - 2g and n_j = (p_j + r)/q_j,
    # p_j taken as the least positive solution of p = -r mod q found by search
    total = -r * (2 - 2 * g)
    for q in orders:
        p = next(x for x in range(1, q) if (x + r) % q == 0)
        total += r - (p + r) // q
    return total


construction_inputs = st.integers(0, 3).flatmap(lambda g: st.integers(1, 7).flatmap(
    lambda r: st.tuples(st.just(g), st.just(r), st.lists(
        st.integers(3, 11).filter(lambda q: gcd(q, r) == 1), max_size=6))))


@settings(max_examples=200)
@given(construction_inputs)
def test_construction_invariants(data):
    g, r, orders = data
    chi = euler_orb(OrbifoldRiemannSurface.with_orders(g, orders))
    if chi >= 0:
        with pytest.raises(HypothesisViolation):
            theoremB_construction(g, r, orders)
        return
    rep = theoremB_construction(g, r, orders)
    for pt in rep.points:
        assert (pt.p + r) % pt.q == 0 and 0 < pt.p < pt.q and gcd(pt.p, pt.q) == 1
    assert rep.bundle_degree == _independent_degree(g, r, orders)
    m = rep.surface
    assert slope(m, Section.INFINITY) == r * chi
    total = sum((pt.weight for pt in rep.points), F(0))
    assert slope(m, Section.ZERO) - total == rep.bundle_degree
    assert slope(m, Section.INFINITY) + total == -rep.bundle_degree
    assert ConstructionReport.from_dict(rep.to_dict()) == rep


@given(st.integers(0, 5), st.integers(0, 30))
def test_realize_invariants(g, d):
    try:
        rep = realize_degree(g, d)
    except (UnsupportedDegree, Degenerate):
        admissible = (g == 0) or (g == 1 and d >= 1) or (g >= 2 and (d == 2 * g - 2 or d >= 4 * g - 3))
        assert not admissible
        return
    assert rep.euler_orb < 0 and rep.bundle_degree == d


def test_surface_document_roundtrip():
    m = theoremB_construction(2, 3, [4, 5, 7]).surface
    doc = m.to_dict()
    assert doc["marks"][0] == {"base": "A1", "section": "infinity", "weight": "1/4"}
    back = ParabolicRuledSurface.from_dict(doc)
    assert back.marks == m.marks and back.degree == m.degree
    with pytest.raises(UsageError):
        ParabolicRuledSurface.from_dict({"genus": 0})
