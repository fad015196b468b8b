"""Slope arithmetic, arcs, and the unimodular action."""

from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, strategies as st

from tautfol import (
    GluingMatrix,
    IDENTITY,
    Slope,
    SlopeArc,
    SlopeError,
    VERTICAL,
    act,
    act_arc,
    arc_intersect,
    delta,
    simplest_slope,
    slope_from_pair,
    slope_from_string,
    slope_of_tau,
    tau_of_slope,
)
from conftest import rand_unimodular


def test_canonical_pairs():
    assert slope_from_pair(2, 4) == Slope(1, 2)
    assert slope_from_pair(-3, 0) == Slope(1, 0) == VERTICAL
    assert slope_from_pair(5, -10) == Slope(-1, 2)


def test_zero_rejected():
    with pytest.raises(SlopeError):
        slope_from_pair(0, 0)


def test_canonicalization_idempotent(rng):
    for _ in range(200):
        p, q = rng.randint(-30, 30), rng.randint(-30, 30)
        if (p, q) == (0, 0):
            continue
        s = slope_from_pair(p, q)
        again = slope_from_pair(s.p, s.q)
        assert again == s
        assert gcd(s.p, s.q) == 1 and s.q >= 0


def test_tau_round_trip():
    assert tau_of_slope(Slope(-3, 2)) == Fraction(3, 2)
    assert tau_of_slope(VERTICAL) is None
    assert slope_of_tau(-2) == Slope(2, 1)
    for p, q in [(1, 2), (-7, 3), (5, 1), (1, 0)]:
        s = Slope(p, q)
        assert slope_of_tau(tau_of_slope(s)) == s


def test_slope_strings():
    assert str(Slope(-3, 2)) == "-3/2"
    assert slope_from_string("-3/2") == Slope(-3, 2)
    assert slope_from_string("1/0") == VERTICAL


def test_delta():
    s = Slope(4, 7)
    assert delta(s, s) == 0
    assert delta(Slope(1, 0), Slope(0, 1)) == 1
    assert delta(Slope(2, 3), Slope(1, 1)) == 1


def test_delta_symmetric_vanishing(rng):
    for _ in range(100):
        s1 = slope_from_pair(rng.randint(-9, 9) or 1, rng.randint(0, 9))
        s2 = slope_from_pair(rng.randint(-9, 9) or 1, rng.randint(0, 9))
        assert delta(s1, s2) == delta(s2, s1)
        assert (delta(s1, s2) == 0) == (s1 == s2)


def test_act_examples():
    assert act(IDENTITY, Slope(1, 2)) == Slope(1, 2)
    assert act(GluingMatrix(0, -1, 1, 0), Slope(1, 0)) == Slope(0, 1)


def test_act_rejects_non_unimodular():
    with pytest.raises(SlopeError):
        GluingMatrix(2, 0, 0, 1)


def test_act_preserves_primitivity(rng):
    for _ in range(100):
        g = rand_unimodular(rng)
        s = slope_from_pair(rng.randint(-20, 20) or 3, rng.randint(-20, 20))
        image = act(g, s)
        assert gcd(image.p, image.q) == 1


def test_act_is_group_action(rng):
    for _ in range(100):
        g = rand_unimodular(rng)
        h = rand_unimodular(rng)
        s = slope_from_pair(rng.randint(-9, 9) or 1, rng.randint(-9, 9))
        assert act(g.compose(h), s) == act(g, act(h, s))


def _grid_slopes(den=8, span=4):
    out = [VERTICAL]
    for q in range(1, den + 1):
        for p in range(-span * q, span * q + 1):
            if gcd(p, q) == 1:
                out.append(Slope(p, q))
    return out


GRID = _grid_slopes()


def test_act_arc_identity_and_point(rng):
    arc = SlopeArc.from_tau_interval(Fraction(-1, 2), Fraction(3, 2))
    assert act_arc(IDENTITY, arc) == arc
    g = rand_unimodular(rng)
    s = Slope(3, 5)
    assert act_arc(g, SlopeArc.point(s)) == SlopeArc.point(act(g, s))


def test_act_arc_membership_equivariance(rng):
    for _ in range(30):
        g = rand_unimodular(rng)
        start = slope_from_pair(rng.randint(-6, 6) or 1, rng.randint(-6, 6))
        end = slope_from_pair(rng.randint(-6, 6) or 2, rng.randint(-6, 6))
        if start == end:
            continue
        arc = SlopeArc.arc(start, end)
        image = act_arc(g, arc)
        for x in GRID[::7]:
            assert arc.contains(x) == image.contains(act(g, x))


def test_arc_intersect_trivia():
    full = SlopeArc.full()
    assert list(arc_intersect(full, full)) == [full]
    a = SlopeArc.from_tau_interval(0, 1)
    b = SlopeArc.from_tau_interval(1, 2)
    meet = arc_intersect(a, b)
    assert list(meet) == [SlopeArc.point(slope_of_tau(1))]
    assert arc_intersect(a, SlopeArc.empty()).is_empty


def test_arc_intersect_two_components():
    # Two arcs through the vertical slope overlapping on both sides.
    a = SlopeArc.arc(slope_of_tau(1), slope_of_tau(-1))      # [1, oo] u [-oo, -1]
    b = SlopeArc.arc(slope_of_tau(Fraction(3, 2)), slope_of_tau(Fraction(-1, 2)))
    meet = arc_intersect(a, b)
    assert len(meet) == 1  # both pass through the vertical slope: one arc
    c = SlopeArc.from_tau_interval(-3, 3)                    # avoids vertical
    meet2 = arc_intersect(a, c)
    assert len(meet2) == 2
    for x in GRID:
        assert meet2.contains(x) == (a.contains(x) and c.contains(x))


def test_arc_intersect_grid_oracle(rng):
    slopes = [VERTICAL] + [slope_of_tau(Fraction(n, 4)) for n in range(-10, 11)]

    def rand_arc():
        kind = rng.random()
        if kind < 0.1:
            return SlopeArc.full()
        if kind < 0.25:
            return SlopeArc.point(rng.choice(slopes))
        s, e = rng.sample(slopes, 2)
        return SlopeArc.arc(s, e)

    for _ in range(150):
        a, b = rand_arc(), rand_arc()
        meet = arc_intersect(a, b)
        assert len(meet) <= 2
        for x in GRID:
            assert meet.contains(x) == (a.contains(x) and b.contains(x)), (a, b, x)
        # commutativity
        meet2 = arc_intersect(b, a)
        for x in slopes:
            assert meet.contains(x) == meet2.contains(x)


@given(st.integers(-40, 40), st.integers(-40, 40), st.integers(-40, 40),
       st.integers(-40, 40))
def test_arc_membership_against_cyclic_order(p1, q1, p2, q2):
    if (p1, q1) == (0, 0) or (p2, q2) == (0, 0):
        return
    s, e = slope_from_pair(p1, q1), slope_from_pair(p2, q2)
    if s == e:
        return
    arc = SlopeArc.arc(s, e)
    comp = SlopeArc.arc(e, s)
    for x in GRID[::11]:
        # The two closed arcs cover the circle and meet only at endpoints.
        both = arc.contains(x) and comp.contains(x)
        assert arc.contains(x) or comp.contains(x)
        assert both == (x in (s, e))


def test_simplest_slope():
    assert simplest_slope(SlopeArc.full()) == VERTICAL
    assert simplest_slope(SlopeArc.full(), allow_vertical=False) == Slope(0, 1)
    arc = SlopeArc.from_tau_interval(Fraction(5, 3), Fraction(7, 3))
    assert simplest_slope(arc) == Slope(-2, 1)  # tau = 2
    arc2 = SlopeArc.from_tau_interval(Fraction(-7, 3), Fraction(-5, 3))
    assert simplest_slope(arc2) == Slope(2, 1)  # tau = -2
    # Positive tau preferred between +2 and -2:
    arc3 = SlopeArc.from_tau_interval(-2, 2)
    assert simplest_slope(arc3, allow_vertical=False) == Slope(0, 1)
    arc4 = SlopeArc.arc(slope_of_tau(2), slope_of_tau(-2))  # through vertical
    assert simplest_slope(arc4, allow_vertical=False) == Slope(-2, 1)


def test_simplest_slope_in_members(rng):
    for _ in range(60):
        lo = Fraction(rng.randint(-20, 20), rng.randint(1, 9))
        hi = lo + Fraction(rng.randint(0, 20), rng.randint(1, 9))
        arc = SlopeArc.from_tau_interval(lo, hi)
        s = simplest_slope(arc)
        assert arc.contains(s)
