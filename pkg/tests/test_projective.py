import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from quadconics.errors import (
    CoincidentLines,
    CoincidentPoints,
    DegeneratePosition,
    NotCollinear,
)
from quadconics.projective import (
    HLine,
    HPoint,
    ProjMap,
    collinear,
    concurrent,
    cross_ratio,
    incident,
    join,
    map_from_correspondence,
    meet,
    proportional,
)

F = Fraction


def pt(x, y, z=1):
    return HPoint((F(x), F(y), F(z)))


def ln(a, b, c):
    return HLine((F(a), F(b), F(c)))


def rand_point(rng):
    while True:
        coords = tuple(F(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(3))
        if any(c != 0 for c in coords):
            return HPoint(coords)


def test_join_examples():
    l = join(pt(1, 0), pt(0, 1))
    assert proportional(l, ln(-1, -1, 1))  # x + y = 1
    assert proportional(join(pt(1, 0, 0), pt(0, 1, 0)), ln(0, 0, 1))
    with pytest.raises(CoincidentPoints):
        join(pt(2, 3), pt(4, 6, 2))


def test_meet_examples():
    assert proportional(meet(ln(1, 0, 0), ln(0, 1, 0)), pt(0, 0, 1))
    # parallel lines x=1 and x=-1 meet at vertical infinity
    p = meet(ln(1, 0, -1), ln(1, 0, 1))
    assert proportional(p, pt(0, 1, 0))
    with pytest.raises(CoincidentLines):
        meet(ln(1, 2, 3), ln(2, 4, 6))


def test_incident():
    ok, res = incident(pt(1, 1), ln(1, 1, -2))
    assert ok and res == 0
    ok, _ = incident(pt(1, 0), ln(0, 1, 0))
    assert ok
    ok, _ = incident(pt(1, 1), ln(0, 1, 0))
    assert not ok


def test_collinear_and_concurrent():
    ok, res = collinear([pt(0, 0), pt(1, 1), pt(2, 2)])
    assert ok and res == 0
    ok, _ = collinear([pt(0, 0), pt(1, 0), pt(0, 1)])
    assert not ok
    ok, _ = concurrent([ln(1, 0, 0), ln(0, 1, 0), ln(1, 1, 0)])
    assert ok
    ok, _ = concurrent([ln(1, 0, 0), ln(0, 1, 0), ln(1, 1, -1)])
    assert not ok


def test_collinear_float():
    pts = [HPoint((float(i), float(i) * 0.5 + 1.0, 1.0)) for i in range(5)]
    ok, res = collinear(pts)
    assert ok and res < 1e-12
    pts[2] = HPoint((2.0, 2.001 * 0.5 + 1.0, 1.0))
    ok, res = collinear(pts)
    assert not ok and res > 1e-6


def test_cross_ratio_parameters():
    a, b, c, d = (pt(k, 0) for k in (0, 1, 2, 3))
    assert cross_ratio(a, b, c, d) == F(4, 3)


def test_cross_ratio_harmonic():
    a = pt(0, 0)
    b = HPoint((F(1), F(0), F(0)))  # infinity on the x-axis
    c = pt(1, 0)
    d = pt(-1, 0)
    assert cross_ratio(a, b, c, d) == F(-1)


def test_cross_ratio_requires_collinear():
    with pytest.raises(NotCollinear):
        cross_ratio(pt(0, 0), pt(1, 0), pt(0, 1), pt(1, 1))


def test_cross_ratio_projective_invariance():
    rng = random.Random(7)
    pts = [pt(k, 2 * k + 1) for k in (0, 1, 3, 4)]
    cr = cross_ratio(*pts)
    m = ProjMap([[F(2), F(1), F(0)], [F(0), F(1), F(1)], [F(1), F(0), F(3)]])
    images = [m.apply(p) for p in pts]
    assert cross_ratio(*images) == cr


def test_map_from_correspondence_identity():
    quad = [pt(1, 0, 0), pt(0, 1, 0), pt(0, 0, 1), pt(1, 1, 1)]
    m = map_from_correspondence(quad, quad)
    for p in quad:
        assert proportional(m.apply(p), p)


def test_map_from_correspondence_square():
    src = [pt(1, 0, 0), pt(0, 1, 0), pt(0, 0, 1), pt(1, 1, 1)]
    dst = [pt(1, 1), pt(1, -1), pt(-1, -1), pt(-1, 1)]
    m = map_from_correspondence(src, dst)
    for s, d in zip(src, dst):
        assert proportional(m.apply(s), d)


def test_map_from_correspondence_degenerate():
    src = [pt(0, 0), pt(1, 1), pt(2, 2), pt(1, 0)]  # three collinear
    dst = [pt(1, 0, 0), pt(0, 1, 0), pt(0, 0, 1), pt(1, 1, 1)]
    with pytest.raises(DegeneratePosition):
        map_from_correspondence(src, dst)


def test_apply_preserves_incidence():
    rng = random.Random(3)
    m = ProjMap([[F(1), F(2), F(0)], [F(0), F(1), F(0)], [F(3), F(0), F(1)]])
    for _ in range(25):
        p, q = rand_point(rng), rand_point(rng)
        if proportional(p, q):
            continue
        l = join(p, q)
        ok, _ = incident(m.apply(p), m.apply_line(l))
        assert ok


def test_scaled_map_is_same_projective_map():
    m = ProjMap([[F(2), F(0), F(0)], [F(0), F(2), F(0)], [F(0), F(0), F(2)]])
    p = pt(5, -3)
    assert proportional(m.apply(p), p)


def test_duality_meet_of_joins():
    rng = random.Random(11)
    for _ in range(30):
        p, q, r = (rand_point(rng) for _ in range(3))
        try:
            l1, l2 = join(p, q), join(p, r)
            if proportional(l1, l2):
                continue
        except CoincidentPoints:
            continue
        assert proportional(meet(l1, l2), p)


def test_join_antisymmetric_up_to_scale():
    p, q = pt(2, 5), pt(-1, 4)
    assert proportional(join(p, q), join(q, p))


@given(st.integers(-20, 20), st.integers(-20, 20), st.integers(1, 20))
def test_canonical_form_is_projective_invariant(x, y, s):
    p = HPoint((F(x), F(y), F(1)))
    q = HPoint((F(x * s), F(y * s), F(s)))
    assert p.canonical() == q.canonical()


def test_inverse_composition_is_identity():
    m = ProjMap([[F(1), F(2), F(3)], [F(0), F(1), F(4)], [F(5), F(6), F(1)]])
    comp = m.compose(m.inverse())
    p = pt(3, 7)
    assert proportional(comp.apply(p), p)
