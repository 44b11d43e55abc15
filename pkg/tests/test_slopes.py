from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gmlspace.slopes import (ARC, EMPTY, FULL, POINT, IDENTITY, GluingMap, Slope, SlopeArc,
                             SlopeError, apply_map, arc_complement, arc_contains, arc_image,
                             arc_interior, arc_intersection, circular_between, circular_sort,
                             compose_maps, invert_map, normalize_slope, parse_slope,
                             simplest_slope_in, slope_between)

S = normalize_slope


# -- strategies --------------------------------------------------------------------

@st.composite
def slopes(draw, size=30):
    p = draw(st.integers(-size, size))
    q = draw(st.integers(-size, size))
    if (p, q) == (0, 0):
        q = 1
    return S(p, q)


GENERATORS = [GluingMap(0, -1, 1, 0), GluingMap(1, 1, 0, 1), GluingMap(1, -1, 0, 1)]
REFLECT = GluingMap(1, 0, 0, -1)


@st.composite
def maps(draw):
    m = IDENTITY
    for g in draw(st.lists(st.sampled_from(GENERATORS), max_size=5)):
        m = compose_maps(g, m)
    if draw(st.booleans()):
        m = compose_maps(REFLECT, m)
    return m


@st.composite
def arcs(draw):
    kind = draw(st.sampled_from([EMPTY, FULL, POINT, ARC, ARC, ARC]))
    if kind in (EMPTY, FULL):
        return SlopeArc(kind)
    a = draw(slopes(12))
    if kind == POINT:
        return SlopeArc.point(a)
    b = draw(slopes(12))
    if a == b:
        return SlopeArc.arc(a, a, False, False)
    return SlopeArc.arc(a, b, draw(st.booleans()), draw(st.booleans()))


PROBES = sorted({S(p, q) for p in range(-9, 10) for q in range(0, 7) if (p, q) != (0, 0)},
                key=lambda s: s.sort_key())


def members(arc):
    return {s for s in PROBES if arc_contains(arc, s)}


def union_members(parts):
    if isinstance(parts, SlopeArc):
        parts = [parts]
    out = set()
    for a in parts:
        out |= members(a)
    return out


# -- examples ------------------------------------------------------------------------

@pytest.mark.parametrize("vec,want", [((-2, 4), (-1, 2)), ((3, -6), (-1, 2)), ((5, 0), (1, 0)),
                                      ((0, -3), (0, 1)), ((-7, 0), (1, 0))])
def test_normalize_examples(vec, want):
    assert S(*vec) == Slope(*want)


def test_zero_vector_rejected():
    with pytest.raises(SlopeError):
        S(0, 0)
    with pytest.raises(SlopeError):
        Slope(2, 4)


def test_apply_map_examples():
    assert apply_map(GluingMap(0, 1, 1, 0), S(1, 0)) == S(0, 1)
    assert apply_map(GluingMap(1, 1, 0, -1), S(1, 1)) == S(-2, 1)
    assert apply_map(IDENTITY, S(3, 7)) == S(3, 7)


def test_compose_and_invert_examples():
    swap = GluingMap(0, 1, 1, 0)
    m = GluingMap(2, 1, 1, 1)
    assert compose_maps(IDENTITY, m) == m
    assert invert_map(swap) == swap
    assert compose_maps(m, invert_map(m)) == IDENTITY


def test_circular_between_examples():
    assert circular_between(S(0, 1), S(1, 0), S(1, 1))
    assert not circular_between(S(1, 0), S(0, 1), S(1, 1))
    assert circular_between(S(1, 3), S(1, 2), S(2, 5))
    with pytest.raises(SlopeError):
        circular_between(S(1, 2), S(1, 2), S(0, 1))


def test_circular_order_of_the_compactified_line():
    ring = [S(0, 1), S(1, 1), S(1, 0), S(-1, 1)]
    # without a start point the walk begins just after 1/0
    assert circular_sort(reversed(ring)) == ring[3:] + ring[:3]
    # with a start point the walk begins just after it
    assert circular_sort(ring, start=S(0, 1)) == ring[1:] + ring[:1]


def test_slope_between_examples():
    assert slope_between(S(0, 1), S(1, 1)) == S(1, 2)
    assert slope_between(S(1, 3), S(1, 2)) == S(2, 5)
    assert slope_between(S(0, 1), S(1, 0)) == S(1, 1)


def test_slope_between_matches_denominator_scan():
    # the simplest slope strictly between 1/3 and 1/2, found by listing
    # every fraction with denominator up to 5
    inside = [Fraction(p, q) for q in range(1, 6) for p in range(q + 1)
              if Fraction(1, 3) < Fraction(p, q) < Fraction(1, 2)]
    best = min(inside, key=lambda x: (x.denominator, abs(x.numerator)))
    assert slope_between(S(1, 3), S(1, 2)) == S(best.numerator, best.denominator)


def test_arc_examples():
    closed = SlopeArc.arc(S(0, 1), S(1, 1))
    assert arc_interior(closed) == SlopeArc.arc(S(0, 1), S(1, 1), False, False)
    punctured = arc_complement(SlopeArc.point(S(1, 0)))
    assert arc_contains(punctured, S(0, 1)) and not arc_contains(punctured, S(1, 0))
    image = arc_image(GluingMap(0, 1, 1, 0), closed)
    # 0/1 -> 1/0 and 1/1 -> 1/1 with the orientation reversed
    assert image.endpoints() == {S(1, 0), S(1, 1)}
    for s in [S(1, 2), S(1, 3), S(2, 1), S(-1, 1), S(5, 2)]:
        assert arc_contains(image, apply_map(GluingMap(0, 1, 1, 0), s)) == arc_contains(closed, s)


def test_arc_intersection_can_have_two_components():
    a = SlopeArc.arc(S(0, 1), S(-1, 2))      # 0 -> 1 -> inf -> -1 -> -1/2
    b = SlopeArc.arc(S(-1, 1), S(1, 1))      # -1 -> 0 -> 1
    parts = arc_intersection(a, b)
    assert len(parts) == 2
    assert union_members(parts) == members(a) & members(b)


def test_arc_json_round_trip():
    for arc in [SlopeArc.empty(), SlopeArc.full(), SlopeArc.point(S(2, 3)),
                SlopeArc.arc(S(-1, 2), S(3, 1), True, False)]:
        assert SlopeArc.from_json(arc.to_json()) == arc


def test_parse_slope():
    assert parse_slope(" -4/6 ") == S(-2, 3)
    assert parse_slope("3") == S(3, 1)
    assert parse_slope("1/0") == S(1, 0)
    assert str(S(3, -6)) == "-1/2"


# -- properties ------------------------------------------------------------------------

@given(st.integers(-50, 50), st.integers(-50, 50))
def test_normalize_idempotent(p, q):
    if (p, q) == (0, 0):
        return
    s = S(p, q)
    assert S(s.p, s.q) == s
    assert S(-p, -q) == s


@given(maps(), maps(), slopes())
def test_apply_compose(m1, m2, s):
    assert apply_map(compose_maps(m1, m2), s) == apply_map(m1, apply_map(m2, s))
    assert apply_map(invert_map(m1), apply_map(m1, s)) == s


@settings(max_examples=150)
@given(maps(), arcs())
def test_arc_image_equivariant(m, arc):
    image = arc_image(m, arc)
    for s in PROBES[:60]:
        assert arc_contains(image, apply_map(m, s)) == arc_contains(arc, s)


@given(arcs())
def test_complement_involution_interior_idempotent(arc):
    assert members(arc_complement(arc_complement(arc))) == members(arc)
    assert members(arc_complement(arc)) == set(PROBES) - members(arc)
    inner = arc_interior(arc)
    assert members(arc_interior(inner)) == members(inner)
    assert members(inner) <= members(arc)


@settings(max_examples=150)
@given(arcs(), arcs())
def test_intersection_is_set_intersection(a, b):
    assert union_members(arc_intersection(a, b)) == members(a) & members(b)


@given(slopes(), slopes(), slopes(), maps())
def test_circular_between_under_maps(a, b, c, m):
    if a == b or c in (a, b):
        return
    ma, mb, mc = (apply_map(m, x) for x in (a, b, c))
    if m.det() == 1:
        assert circular_between(ma, mb, mc) == circular_between(a, b, c)
    else:
        assert circular_between(mb, ma, mc) == circular_between(a, b, c)


@given(slopes(), slopes())
def test_slope_between_lies_between(a, b):
    if a == b:
        return
    s = slope_between(a, b)
    assert circular_between(a, b, s)


@given(arcs())
def test_simplest_slope_in_is_member(arc):
    s = simplest_slope_in(arc)
    if arc.kind == EMPTY:
        assert s is None
    else:
        assert arc_contains(arc, s)
        for t in PROBES:
            if t.sort_key() < s.sort_key():
                assert not arc_contains(arc, t)
