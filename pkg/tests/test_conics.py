import random
from fractions import Fraction

import pytest

from quadconics.conics import (
    Conic,
    ConicParam,
    conconic,
    conic_through_5,
    fit_conic,
    line_conic_intersect,
    on_conic,
    polar,
    pole,
    tangency_points_from,
    tangent_at,
    transform_conic,
)
from quadconics.errors import (
    DegenerateConic,
    InsidePoint,
    NonSquareDiscriminant,
    NoUniqueConic,
    PointNotOnConic,
)
from quadconics.projective import HLine, HPoint, ProjMap, incident, join, proportional
from quadconics.scalars import Tolerance

F = Fraction


def pt(x, y, z=1):
    return HPoint((F(x), F(y), F(z)))


def ln(a, b, c):
    return HLine((F(a), F(b), F(c)))


UNIT = Conic.unit_circle()


def test_conic_through_5_unit_circle():
    pts = [pt(1, 0), pt(0, 1), pt(-1, 0), pt(0, -1), pt(F(3, 5), F(4, 5))]
    c = conic_through_5(pts)
    # expected x^2 + y^2 - z^2 = 0, derived independently of the fit path
    assert proportional_conic(c, UNIT)
    for p in pts:
        ok, res = on_conic(c, p)
        assert ok and res == 0


def proportional_conic(c1, c2):
    return c1.canonical() == c2.canonical()


def test_conic_through_5_degenerate_factorization():
    # three points on y=0 plus two more: the fit must be the line pair
    # y * (line through the other two) with determinant zero
    pts = [pt(0, 0), pt(1, 0), pt(2, 0), pt(0, 1), pt(1, 1)]
    c = conic_through_5(pts)
    assert c.det() == 0
    for p in pts:
        assert on_conic(c, p)[0]


def test_conic_through_5_no_unique():
    pts = [pt(0, 0), pt(1, 0), pt(2, 0), pt(3, 0), pt(0, 1)]
    with pytest.raises(NoUniqueConic):
        conic_through_5(pts)


def test_on_conic_examples():
    ok, res = on_conic(UNIT, pt(F(3, 5), F(4, 5)))
    assert ok and res == 0
    assert not on_conic(UNIT, pt(1, 1))[0]
    lam = F(2, 7)
    pencil_outer = Conic.from_coeffs(lam, 0, 1 - lam, 0, 0, -1)
    assert on_conic(pencil_outer, pt(1, 1))[0]
    assert on_conic(pencil_outer, pt(-1, 1))[0]


def test_tangent_at():
    t = tangent_at(UNIT, pt(1, 0))
    assert proportional(t, ln(1, 0, -1))  # x = 1
    t = tangent_at(UNIT, pt(0, 1))
    assert proportional(t, ln(0, 1, -1))  # y = 1
    with pytest.raises(PointNotOnConic):
        tangent_at(UNIT, pt(2, 0))


def test_tangent_meets_conic_once():
    t = tangent_at(UNIT, pt(F(3, 5), F(4, 5)))
    pts = line_conic_intersect(UNIT, t)
    assert len(pts) == 1
    assert proportional(pts[0], pt(F(3, 5), F(4, 5)))


def test_polar_pole_examples():
    # center's polar is the line at infinity
    assert proportional(polar(UNIT, pt(0, 0)), ln(0, 0, 1))
    assert proportional(polar(UNIT, pt(2, 0)), ln(2, 0, -1))  # x = 1/2
    p = pt(F(3, 5), F(4, 5))
    assert proportional(tangent_at(UNIT, p), polar(UNIT, p))


def test_polar_pole_inverse():
    rng = random.Random(5)
    for _ in range(20):
        p = pt(rng.randint(-5, 5), rng.randint(-5, 5), rng.randint(1, 3))
        l = polar(UNIT, p)
        assert proportional(pole(UNIT, l), p)


def test_la_hire():
    rng = random.Random(9)
    for _ in range(20):
        p = pt(rng.randint(-5, 5), rng.randint(-5, 5), 1)
        q = pt(rng.randint(-5, 5), rng.randint(-5, 5), 1)
        on_pq, _ = incident(p, polar(UNIT, q))
        on_qp, _ = incident(q, polar(UNIT, p))
        assert on_pq == on_qp


def test_line_conic_intersections():
    two = line_conic_intersect(UNIT, ln(0, 1, 0))  # y = 0
    assert len(two) == 2
    assert {p.canonical() for p in two} == {pt(1, 0).canonical(), pt(-1, 0).canonical()}
    one = line_conic_intersect(UNIT, ln(1, 0, -1))  # x = 1
    assert len(one) == 1 and proportional(one[0], pt(1, 0))
    zero = line_conic_intersect(UNIT, ln(1, 0, -2))  # x = 2
    assert zero == []


def test_line_conic_irrational_exact():
    with pytest.raises(NonSquareDiscriminant):
        line_conic_intersect(UNIT, ln(1, 0, F(-1, 2)))  # x = 1/2


def test_tangency_points():
    # from vertical infinity the tangents touch at (+-1, 0)
    pts = tangency_points_from(UNIT, HPoint((F(0), F(1), F(0))))
    assert {p.canonical() for p in pts} == {pt(1, 0).canonical(), pt(-1, 0).canonical()}
    for p in pts:
        t = join(HPoint((F(0), F(1), F(0))), p)
        hits = line_conic_intersect(UNIT, t)
        assert len(hits) == 1 and proportional(hits[0], p)


def test_tangency_points_irrational_and_inside():
    with pytest.raises(NonSquareDiscriminant):
        tangency_points_from(UNIT, pt(2, 0))
    with pytest.raises(InsidePoint):
        tangency_points_from(UNIT, pt(0, 0))
    got = tangency_points_from(Conic.unit_circle("float"), HPoint((2.0, 0.0, 1.0)))
    assert len(got) == 2
    for p in got:
        assert abs(p.affine()[0] - 0.5) < 1e-12


def test_transform_conic():
    ident = ProjMap.identity()
    assert proportional_conic(transform_conic(ident, UNIT), UNIT)
    # rotation by 90 degrees maps x^2/4 + y^2 = 1 to x^2 + y^2/4 = 1
    rot = ProjMap([[F(0), F(-1), F(0)], [F(1), F(0), F(0)], [F(0), F(0), F(1)]])
    ell = Conic.from_coeffs(F(1, 4), 0, 1, 0, 0, -1)
    out = transform_conic(rot, ell)
    assert proportional_conic(out, Conic.from_coeffs(1, 0, F(1, 4), 0, 0, -1))


def test_transform_preserves_membership_and_tangency():
    m = ProjMap([[F(1), F(2), F(0)], [F(0), F(1), F(1)], [F(1), F(0), F(3)]])
    p = pt(F(3, 5), F(4, 5))
    c2 = transform_conic(m, UNIT)
    assert on_conic(c2, m.apply(p))[0]
    t1 = tangent_at(UNIT, p)
    t2 = tangent_at(c2, m.apply(p))
    assert proportional(m.apply_line(t1), t2)


def test_conconic():
    param = ConicParam(UNIT, pt(-1, 0))
    pts = [param.point_at(F(k, 3)) for k in range(8)]
    ok, res, witness = conconic(pts)
    assert ok and res == 0
    assert proportional_conic(witness, UNIT)

    bad = pts[:-1] + [pt(F(101, 100), 0)]
    ok, res, _ = conconic(bad)
    assert not ok and res > 0


def test_conconic_float_with_perturbation():
    param = ConicParam(Conic.unit_circle("float"), HPoint((-1.0, 0.0, 1.0)))
    pts = [param.point_at(0.21 * k - 0.9) for k in range(8)]
    ok, res, _ = conconic(pts, Tolerance(epsilon=1e-9))
    assert ok and res < 1e-12
    x, y = pts[-1].affine()
    pts[-1] = HPoint((x * (1 + 1e-3), y, 1.0))
    ok, res, _ = conconic(pts, Tolerance(epsilon=1e-9))
    assert not ok and res > 1e-6


def test_rational_param():
    param = ConicParam(UNIT, pt(-1, 0))
    p = param.point_at(F(1, 2))
    # classical stereographic image of t = 1/2
    assert on_conic(UNIT, p)[0]
    seen = set()
    for k in range(-6, 7):
        q = param.point_at(F(k, 4))
        ok, res = on_conic(UNIT, q)
        assert ok and res == 0
        seen.add(q.canonical())
    assert len(seen) == 13  # distinct parameters give distinct points
    inf = param.point_at("inf")
    assert on_conic(UNIT, inf)[0]


def test_param_roundtrip():
    param = ConicParam(UNIT, pt(-1, 0))
    for t in (F(0), F(1, 2), F(-3), F(7, 5)):
        q = param.point_at(t)
        assert param.param_of(q) == t


def test_degenerate_conic_guards():
    pair = Conic.from_coeffs(0, 0, 1, 0, 0, 0)  # y^2 = 0
    assert pair.is_degenerate()
    with pytest.raises(DegenerateConic):
        polar(pair, pt(1, 1))
