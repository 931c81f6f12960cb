"""Closure dynamics for nested conic pairs.

The canonical pencil puts the outer conic in the form lam*x^2+(1-lam)*y^2=1
through the corners (+-1,+-1) of a square whose sides are tangent to the inner
conic x^2+mu*xy+y^2+c=0.  The inner constant is c=(mu^2-4)/4: the brute-force
tangency discriminant of the inner conic against y=kx+n factors as
(mu^2-4)*(n^2-k^2-mu*k-1), which reproduces the slope/intercept tangency
identity only for that constant (a printed variant with (mu^2-1)/4 does not;
the test suite carries the discriminant oracle).

All chord steps use Vieta's formulas, so exact orbits never need square roots
once the tangent lines themselves are rational.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .conics import Conic, ConicParam, line_conic_intersect, on_conic, polar, tangency_points_from, tangent_at
from .errors import (
    DegeneratePencil,
    GeometryError,
    InsideInner,
    InsidePoint,
    NotCircumscribed,
    NotInscribed,
    PencilMismatch,
    PointNotOnConic,
    SequenceDegenerated,
    TangentFromOnConic,
)
from .projective import HLine, HPoint, ProjMap, join, map_from_correspondence, meet, proportional
from .quadconfig import QuadConfig, build
from .scalars import DEFAULT_TOLERANCE, EXACT, FLOAT, Scalar, Tolerance, sqrt


def inner_constant(mu: Scalar) -> Scalar:
    """The constant term of the inner conic forced by the tangency identity."""
    return (mu * mu - 4) / 4


def inner_line_discriminant(k: Scalar, n: Scalar, mu: Scalar, c: Scalar) -> Scalar:
    """Discriminant of (inner conic with constant c) meeting y = k*x + n.

    Expanding x^2 + mu*x*(kx+n) + (kx+n)^2 + c gives a quadratic in x;
    this is its discriminant, the brute-force tangency oracle.
    """
    return (mu * n + 2 * k * n) ** 2 - 4 * (1 + mu * k + k * k) * (n * n + c)


def tangency_condition(k: Scalar, n: Scalar, mu: Scalar) -> Scalar:
    """Residual of the slope/intercept tangency identity n^2 = k^2 + mu*k + 1."""
    return n * n - k * k - mu * k - 1


def chord_discriminant(lam: Scalar, k: Scalar, n: Scalar) -> Scalar:
    """Discriminant of the outer conic against y = k*x + n (times 4)."""
    return 4 * (lam - lam * (1 - lam) * n * n + (1 - lam) * k * k)


@dataclass(frozen=True)
class TangentLine:
    """A tangent of the inner conic in slope/intercept form (or vertical x=x0)."""

    line: HLine
    touch: HPoint
    vertical: bool
    k: Optional[Scalar] = None
    n: Optional[Scalar] = None
    x0: Optional[Scalar] = None

    def to_json(self) -> dict:
        from .scalars import scalar_to_json

        out = {"line": self.line.to_json()["line"], "touch": self.touch.to_json()}
        if self.vertical:
            out["x"] = scalar_to_json(self.x0)
        else:
            out["k"] = scalar_to_json(self.k)
            out["n"] = scalar_to_json(self.n)
        return out


@dataclass(frozen=True)
class PonceletPencil:
    lam: Scalar
    mu: Scalar
    outer: Conic
    inner: Conic

    @property
    def backend(self) -> str:
        return self.outer.backend

    def swap_chart(self) -> "PonceletPencil":
        """Exchange the x and y axes; the inner form is symmetric, the outer
        swaps lam with 1-lam.  Used to dodge vertical tangent lines."""
        return make_pencil(1 - self.lam, self.mu)

    def to_json(self) -> dict:
        from .scalars import scalar_to_json

        return {"canonical": {"lambda": scalar_to_json(self.lam), "mu": scalar_to_json(self.mu)}}


def make_pencil(lam: Scalar, mu: Scalar) -> PonceletPencil:
    """Build the canonical pair and verify its defining contacts."""
    exact = isinstance(lam, Fraction) and not isinstance(mu, float)
    if not exact:
        lam, mu = float(lam), float(mu)
    one = Fraction(1) if exact else 1.0
    zero = Fraction(0) if exact else 0.0
    if lam == 0 or lam == 1:
        raise DegeneratePencil("outer conic degenerates for lambda in {0, 1}")
    if mu == 2 or mu == -2:
        raise DegeneratePencil("inner conic factors for |mu| = 2")
    c = inner_constant(mu if exact else float(mu))
    outer = Conic(((lam, zero, zero), (zero, one - lam, zero), (zero, zero, -one)))
    inner = Conic(((one, mu / 2, zero), (mu / 2, one, zero), (zero, zero, c)))
    if outer.is_degenerate() or inner.is_degenerate():
        raise DegeneratePencil("conic pair is degenerate")
    pencil = PonceletPencil(lam, mu, outer, inner)
    tol = DEFAULT_TOLERANCE
    for sx in (one, -one):
        for sy in (one, -one):
            ok, res = on_conic(outer, HPoint((sx, sy, one)), tol)
            if not ok:
                raise DegeneratePencil(f"square corner off the outer conic (residual {res})")
    for line in (HLine((one, zero, -one)), HLine((one, zero, one)),
                 HLine((zero, one, -one)), HLine((zero, one, one))):
        if exact:
            hits = line_conic_intersect(inner, line)
            if len(hits) != 1:
                raise DegeneratePencil("square side not tangent to the inner conic")
        else:
            pts = line_conic_intersect(inner, line, Tolerance(epsilon=1e-7))
            if len(pts) != 1:
                raise DegeneratePencil("square side not tangent to the inner conic")
    return pencil


def _inner_param(pencil: PonceletPencil) -> ConicParam:
    # the touch point of the side x=1 is a ready-made rational base point
    one = Fraction(1) if pencil.backend == EXACT else 1.0
    base = HPoint((one, -pencil.mu / 2, one))
    return ConicParam(pencil.inner, base)


def _tangent_line_through(pencil: PonceletPencil, a: HPoint, touch: HPoint) -> TangentLine:
    line = tangent_at(pencil.inner, touch)
    lx, ly, lz = line.coords
    backend = pencil.backend
    if (backend == EXACT and ly == 0) or (backend == FLOAT and abs(float(ly)) <= 1e-12 * max(abs(float(lx)), abs(float(lz)))):
        return TangentLine(line=line, touch=touch, vertical=True, x0=-lz / lx)
    return TangentLine(line=line, touch=touch, vertical=False, k=-lx / ly, n=-lz / ly)


def tangent_lines_from(pencil: PonceletPencil, a: HPoint, tol: Tolerance = DEFAULT_TOLERANCE) -> list[TangentLine]:
    """Both tangents of the inner conic through a point of the outer one.

    Ordered by the touch-point parameter on the inner conic's rational
    parametrization, which makes the first-step branch choice reproducible.
    """
    ok, res = on_conic(pencil.outer, a, tol)
    if not ok:
        raise PointNotOnConic(f"start point off the outer conic (residual {res})")
    on_inner, _ = on_conic(pencil.inner, a, tol)
    if on_inner:
        raise TangentFromOnConic("start point lies on the inner conic")
    try:
        touches = tangency_points_from(pencil.inner, a, tol)
    except InsidePoint:
        raise InsideInner("start point inside the inner conic: no real tangents")
    try:
        param = _inner_param(pencil)

        def key(t: HPoint):
            p = param.param_of(t, tol)
            return (0, 0.0) if p == "inf" else (1, float(p))

    except PointNotOnConic:
        # perturbed inner conics lose the canonical base point; fall back to
        # an ordering that is still deterministic
        def key(t: HPoint):
            return (1, t.canonical())

    touches = sorted(touches, key=key)
    return [_tangent_line_through(pencil, a, t) for t in touches]


def second_intersection(pencil: PonceletPencil, a: HPoint, tl: TangentLine) -> HPoint:
    """Other intersection of a tangent line with the outer conic, via Vieta.

    Knowing one root exactly makes the chord step radical-free: the second
    root is (sum of roots) minus the first.
    """
    lam = pencil.lam
    one = Fraction(1) if pencil.backend == EXACT else 1.0
    ax, ay = a.coords[0] / a.coords[2], a.coords[1] / a.coords[2]
    if tl.vertical:
        # lam*x0^2 + (1-lam)*y^2 = 1 has roots +-y: the other root is -ay
        return HPoint((tl.x0, -ay, one))
    k, n = tl.k, tl.n
    denom = lam + (1 - lam) * k * k
    bx = -2 * (1 - lam) * k * n / denom - ax
    return HPoint((bx, k * bx + n, one))


def step(
    pencil: PonceletPencil,
    a: HPoint,
    branch: str = "first",
    avoid: Optional[HLine] = None,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> tuple[HPoint, TangentLine]:
    """One tangent-chord step: pick a tangent from `a`, return its far end.

    The first step picks by `branch` ("first"/"second" in touch-parameter
    order); later steps pass the arriving line as `avoid` so the chain never
    backtracks.
    """
    lines = tangent_lines_from(pencil, a, tol)
    if avoid is not None:
        remaining = [t for t in lines if not proportional(t.line, avoid, tol)]
        chosen = remaining[0] if remaining else lines[0]
    else:
        chosen = lines[0] if branch == "first" else lines[-1]
    return second_intersection(pencil, a, chosen), chosen


def canonical_distance(p: HPoint, q: HPoint) -> Scalar:
    """Distance between canonical representatives (exactly zero iff equal)."""
    cp, cq = p.canonical(), q.canonical()
    if p.backend == EXACT and q.backend == EXACT:
        return max(abs(u - v) for u, v in zip(cp, cq))
    d1 = math.sqrt(sum((float(u) - float(v)) ** 2 for u, v in zip(cp, cq)))
    d2 = math.sqrt(sum((float(u) + float(v)) ** 2 for u, v in zip(cp, cq)))
    return min(d1, d2)


def antipode(p: HPoint) -> HPoint:
    x, y, z = p.coords
    return HPoint((-x, -y, z))


def symmetric_pair_check(pencil: PonceletPencil, a: HPoint, tol: Tolerance = DEFAULT_TOLERANCE) -> dict:
    """Verify that the two tangent chords from a point end at antipodal points,
    and that the reflected chord reproduces the slope/intercept transformation
    (k, n) -> (-lam/((1-lam)k), sqrt(D)/(2k(1-lam))) together with its
    tangency identity."""
    b1, t1 = step(pencil, a, branch="first", tol=tol)
    b2, t2 = step(pencil, a, branch="second", tol=tol)
    residual = canonical_distance(b2, antipode(b1))
    report = {
        "antipodal_residual": residual,
        "b": b1,
        "b_prime": b2,
        "eq2_slope_residual": None,
        "eq2_intercept_residual": None,
        "eq2_tangency_residual": None,
    }
    # the reflected-slope formulas divide by k, so hunt for a chord with
    # finite nonzero slope, swapping the chart if necessary
    def swap4(p: HPoint) -> HPoint:
        return HPoint((p.coords[1], p.coords[0], p.coords[2]))

    work, start, line = pencil, a, None
    for cand_pencil, cand_start in ((pencil, a), (pencil.swap_chart(), swap4(a))):
        for t in tangent_lines_from(cand_pencil, cand_start, tol):
            if not t.vertical and t.k != 0:
                work, start, line = cand_pencil, cand_start, t
                break
        if line is not None:
            break
    if line is None:
        # square-corner case: both chords are axis-parallel in every chart;
        # verify the reflection geometrically instead of via the slope map
        reflected = join(antipode(a), b1)
        hits = line_conic_intersect(pencil.inner, reflected, tol)
        zero = Fraction(0) if pencil.backend == EXACT else 0.0
        ok = len(hits) == 1
        report["eq2_slope_residual"] = zero if ok else zero + 1
        report["eq2_intercept_residual"] = zero if ok else zero + 1
        report["eq2_tangency_residual"] = zero if ok else zero + 1
        return report
    lam, k, n = work.lam, line.k, line.n
    d = chord_discriminant(lam, k, n)
    sd = sqrt(d if work.backend == EXACT else float(d))
    denom = 2 * (lam + (1 - lam) * k * k)
    x1 = (-2 * (1 - lam) * k * n - sd) / denom
    x2 = (-2 * (1 - lam) * k * n + sd) / denom
    k_t = -lam / ((1 - lam) * k)
    n_t = sd / (2 * k * (1 - lam))
    one = Fraction(1) if work.backend == EXACT else 1.0
    p1 = HPoint((-x1, -(k * x1 + n), one))
    p2 = HPoint((x2, k * x2 + n, one))
    reflected = join(p1, p2)
    lx, ly, lz = reflected.coords
    slope = -lx / ly
    intercept = -lz / ly
    def norm(v):
        return abs(v) if work.backend == EXACT else abs(float(v)) / max(1.0, abs(float(k_t)), abs(float(n_t)))
    report["eq2_slope_residual"] = norm(slope - k_t)
    report["eq2_intercept_residual"] = norm(intercept - n_t)
    report["eq2_tangency_residual"] = norm(tangency_condition(k_t, n_t, work.mu))
    return report


@dataclass
class PonceletOrbit:
    start: HPoint
    vertices: list[HPoint]
    lines: list[TangentLine]
    closure_residual: Scalar
    closed: bool
    diagonal_point: Optional[HPoint] = None
    common_line: Optional[HLine] = None

    def to_json(self) -> dict:
        return {
            "start": self.start.to_json(),
            "vertices": [v.to_json() for v in self.vertices],
            "lines": [t.to_json() for t in self.lines],
            "closure_residual": _res_json(self.closure_residual),
            "closed": self.closed,
            "diagonal_point": None if self.diagonal_point is None else self.diagonal_point.to_json(),
            "common_line": None if self.common_line is None else self.common_line.to_json()["line"],
        }


def _res_json(r: Scalar):
    from .scalars import scalar_to_json

    return scalar_to_json(r)


def closure_check(pencil: PonceletPencil, a: HPoint, tol: Tolerance = DEFAULT_TOLERANCE) -> PonceletOrbit:
    """Run four tangent-chord steps and report closure plus the shared
    invariants: the diagonal intersection point and the line through the
    meets of opposite sides."""
    vertices = [a]
    lines: list[TangentLine] = []
    current, arriving = a, None
    for _ in range(4):
        nxt, tl = step(pencil, current, avoid=arriving, tol=tol)
        vertices.append(nxt)
        lines.append(tl)
        current, arriving = nxt, tl.line
    residual = canonical_distance(vertices[4], vertices[0])
    closed = residual == 0 if pencil.backend == EXACT else float(residual) <= tol.epsilon
    orbit = PonceletOrbit(a, vertices, lines, residual, closed)
    if closed:
        v = vertices
        try:
            orbit.diagonal_point = meet(join(v[0], v[2]), join(v[1], v[3]))
            orbit.common_line = join(
                meet(join(v[0], v[1]), join(v[2], v[3])),
                meet(join(v[1], v[2]), join(v[3], v[0])),
            )
        except GeometryError:
            pass
    return orbit


def perturbed_inner(pencil: PonceletPencil, delta: float = 1e-3) -> PonceletPencil:
    """Negative control: shift the inner constant so the pair loses closure."""
    inner = pencil.inner
    m = [[float(v) for v in row] for row in inner.m]
    m[2][2] += delta
    return PonceletPencil(float(pencil.lam), float(pencil.mu),
                          pencil.outer.to_float(), Conic(m))


def generic_step(outer: Conic, inner: Conic, a: HPoint, avoid: Optional[HLine], tol: Tolerance) -> tuple[HPoint, HLine]:
    """Tangent-chord step for an arbitrary conic pair (float workhorse)."""
    try:
        touches = tangency_points_from(inner, a, tol)
    except InsidePoint:
        raise InsideInner("chain start inside the inner conic")
    lines = sorted((join(a, t) for t in touches), key=lambda l: l.canonical())
    if avoid is not None:
        remaining = [l for l in lines if not proportional(l, avoid, tol)]
        lines = remaining if remaining else lines
    line = lines[0]
    hits = line_conic_intersect(outer, line, tol)
    if not hits:
        raise SequenceDegenerated("tangent chord misses the outer conic")
    far = max(hits, key=lambda p: float(canonical_distance(p, a)))
    return far.reduced(), line.reduced()


def connectivity_test(
    outer: Conic,
    inner: Conic,
    k: int,
    starts: int = 16,
    tol: Tolerance = DEFAULT_TOLERANCE,
    seed: int = 0,
) -> dict:
    """Empirical k-step closure verdict for a conic pair over sampled starts."""
    if outer.is_degenerate() or inner.is_degenerate():
        raise DegeneratePencil("degenerate conic in connectivity test")
    outer_f, inner_f = outer.to_float(), inner.to_float()
    rng = random.Random(seed)
    base = _any_point_on(outer_f, rng)
    param = ConicParam(outer_f, base, Tolerance(epsilon=1e-6))
    residuals = []
    failures = []
    tried = 0
    while len(residuals) < starts and tried < starts * 8:
        tried += 1
        t = math.tan(rng.uniform(-1.4, 1.4))
        try:
            v0 = param.point_at(t)
            v, arriving = v0, None
            for _ in range(k):
                v, line = generic_step(outer_f, inner_f, v, arriving, tol)
                arriving = line
            residuals.append(float(canonical_distance(v, v0)))
        except GeometryError as exc:
            failures.append(f"{type(exc).__name__}")
            continue
    connected = len(residuals) >= starts and all(r <= tol.epsilon for r in residuals)
    return {
        "k": k,
        "starts": len(residuals),
        "max_residual": max(residuals) if residuals else None,
        "connected": connected,
        "failures": failures,
    }


def _any_point_on(conic: Conic, rng: random.Random) -> HPoint:
    """A float point on a nonempty real conic, by probing pencil lines."""
    center = None
    try:
        center = pole_point(conic)
    except GeometryError:
        center = HPoint((0.0, 0.0, 1.0))
    for _ in range(200):
        ang = rng.uniform(0.0, math.pi)
        direction = HPoint((math.cos(ang), math.sin(ang), 0.0))
        line = join(center, direction)
        hits = line_conic_intersect(conic, line, Tolerance(epsilon=1e-7))
        if hits:
            return hits[0]
    raise SequenceDegenerated("found no real point on the conic")


def pole_point(conic: Conic) -> HPoint:
    from .conics import pole

    return pole(conic, HLine((0.0, 0.0, 1.0)))


def poristic_invariants(cfg: QuadConfig, tol: Tolerance) -> tuple[bool, Scalar, HPoint]:
    """Closure corollary on a configuration: the (E, C) pair's quadrilaterals
    share the diagonal point M3 and the opposite-side line M1M2.

    The Z quadrilateral is itself an orbit of the pair, so the exact backend
    can certify the invariants radical-free; the float backend additionally
    samples fresh starts on E and compares their diagonal points.
    """
    z = [cfg.point(f"Z{i}") for i in range(1, 5)]
    m3 = cfg.point("M3")
    diag = meet(join(z[0], z[2]), join(z[1], z[3]))
    residuals: list[Scalar] = [canonical_distance(diag, m3)]
    side_a = meet(join(z[0], z[1]), join(z[2], z[3]))
    side_b = meet(join(z[1], z[2]), join(z[3], z[0]))
    residuals.append(canonical_distance(side_a, cfg.point("M1")))
    residuals.append(canonical_distance(side_b, cfg.point("M2")))
    # every Z side must touch the base conic (tangency to C at U/V points)
    for i in range(4):
        line = join(z[i], z[(i + 1) % 4])
        hits = line_conic_intersect(cfg.conic, line, tol)
        if len(hits) != 1:
            return False, max(residuals), diag
    if cfg.backend == FLOAT:
        outer = cfg.conic_named("E")
        report = connectivity_test(outer, cfg.conic, k=4, starts=6, tol=Tolerance(epsilon=max(tol.epsilon, 1e-8)), seed=17)
        if not report["connected"]:
            return False, max(residuals), diag
        rng = random.Random(23)
        param = ConicParam(outer.to_float(), _any_point_on(outer.to_float(), rng), Tolerance(epsilon=1e-6))
        for t in (0.3, -0.7, 1.9):
            v0 = param.point_at(t)
            v, arriving = v0, None
            pts = [v0]
            try:
                for _ in range(4):
                    v, line = generic_step(outer.to_float(), cfg.conic.to_float(), v, arriving, tol)
                    arriving = line
                    pts.append(v)
                other_diag = meet(join(pts[0], pts[2]), join(pts[1], pts[3]))
                residuals.append(canonical_distance(other_diag, m3.to_float()))
            except GeometryError:
                continue
    worst = max(residuals)
    ok = worst == 0 if cfg.backend == EXACT else float(worst) <= tol.epsilon
    return ok, worst, diag


def conic_sequence(cfg: QuadConfig, depth: int, rule: str = "z-quad") -> list[tuple[Conic, QuadConfig]]:
    """Iterate the derived-conic construction: each level's eight-point conic E
    hosts the next quadrilateral (the Z points by default, the N/P points under
    the alternative rule), producing the nested chain of closure pairs."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if rule not in ("z-quad", "np-quad"):
        raise ValueError(f"unknown successor rule {rule!r}")
    levels: list[tuple[Conic, QuadConfig]] = []
    current = cfg
    for level in range(depth):
        names = ("Z1", "Z2", "Z3", "Z4") if rule == "z-quad" else ("N1", "N2", "P1", "P2")
        try:
            if not all(current.has_point(n) for n in names) or not current.has_conic("E"):
                raise SequenceDegenerated(
                    f"level {level}: successor family unavailable "
                    f"({current.absence_cause('Z') or current.absence_cause('E')})"
                )
            outer = current.conic_named("E")
            quad = [current.point(n) for n in names]
            nxt = build(outer, quad, current.tol, current.y_rule, current.e1_rule,
                        fingerprint=f"{cfg.fingerprint};level={level + 1}")
        except GeometryError as exc:
            raise SequenceDegenerated(f"level {level}: {type(exc).__name__}: {exc}") from exc
        levels.append((outer, nxt))
        current = nxt
    return levels


def sequence_connectivity(
    cfg: QuadConfig,
    depth: int,
    starts: int = 16,
    tol: Tolerance = DEFAULT_TOLERANCE,
    rule: str = "z-quad",
    seed: int = 0,
) -> list[dict]:
    """Closure verdicts for every consecutive pair of the derived-conic chain.

    The nested conics grow doubly exponentially in any fixed chart, which
    destroys float conditioning by the third level, so each pair is first
    mapped to its canonical frame through the quadrilateral that witnesses
    the closure; the verdict is projectively invariant.
    """
    levels = conic_sequence(cfg, depth, rule)
    rng = random.Random(seed)
    reports = []
    inner_cfg = cfg
    for idx, (outer, nxt) in enumerate(levels):
        names = ("Z1", "Z2", "Z3", "Z4") if rule == "z-quad" else ("N1", "N2", "P1", "P2")
        quad = [inner_cfg.point(n) for n in names]
        _, pencil = canonicalize_porism(outer, quad, inner_cfg.conic_named("C"), tol)
        pencil_f = make_pencil(float(pencil.lam), float(pencil.mu))
        param = ConicParam(pencil_f.outer, HPoint((1.0, 1.0, 1.0)))
        residuals = []
        for _ in range(starts):
            t = math.tan(rng.uniform(-1.45, 1.45))
            orbit = closure_check(pencil_f, param.point_at(t), tol)
            residuals.append(float(orbit.closure_residual))
        reports.append({
            "level": idx + 1,
            "k": 4,
            "lambda": float(pencil.lam),
            "mu": float(pencil.mu),
            "starts": starts,
            "max_residual": max(residuals),
            "connected": all(r <= tol.epsilon for r in residuals),
        })
        inner_cfg = nxt
    return reports


def canonicalize_porism(
    conic_c: Conic,
    quad: Sequence[HPoint],
    conic_d: Conic,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> tuple[ProjMap, PonceletPencil]:
    """Map an inscribed/circumscribed pair to the canonical pencil frame.

    The returned map sends the quadrilateral to the square (+-1,+-1) in vertex
    order; the transformed conics must then match the pencil template, which
    recovers (lambda, mu)."""
    from .conics import transform_conic

    quad = list(quad)
    if len(quad) != 4:
        raise NotInscribed("need a quadrilateral")
    for i, p in enumerate(quad):
        ok, res = on_conic(conic_c, p, tol)
        if not ok:
            raise NotInscribed(f"vertex {i + 1} off the outer conic (residual {res})")
    for i in range(4):
        line = join(quad[i], quad[(i + 1) % 4])
        hits = line_conic_intersect(conic_d, line, tol)
        if len(hits) != 1:
            raise NotCircumscribed(f"side {i + 1} is not tangent to the inner conic")
    backend = quad[0].backend
    one = Fraction(1) if backend == EXACT else 1.0
    square = [HPoint((one, one, one)), HPoint((one, -one, one)),
              HPoint((-one, -one, one)), HPoint((-one, one, one))]
    g = map_from_correspondence(quad, square)
    c_t = transform_conic(g, conic_c)
    d_t = transform_conic(g, conic_d)

    def normalized(conic: Conic, pivot_rc) -> list[list[float]]:
        pv = conic.m[pivot_rc[0]][pivot_rc[1]]
        if pv == 0:
            raise PencilMismatch("transformed conic has unexpected shape")
        if backend == EXACT:
            from .scalars import safe_float

            return [[safe_float(Fraction(v) / pv) for v in row] for row in conic.m]
        p = float(pv)
        return [[float(v) / p for v in row] for row in conic.m]

    cn = normalized(c_t, (2, 2))
    off = max(abs(cn[0][1]), abs(cn[0][2]), abs(cn[1][2]))
    if off > max(tol.epsilon * 1e3, 1e-7) or abs(cn[0][0] + cn[1][1] + 1) > 1e-6:
        raise PencilMismatch("outer conic does not match the canonical pencil")
    lam = -cn[0][0] if backend == FLOAT else -Fraction(c_t.m[0][0], 1) / c_t.m[2][2]
    if backend == EXACT:
        lam = c_t.m[0][0] / -c_t.m[2][2]
    dn = normalized(d_t, (0, 0))
    if abs(dn[1][1] - 1) > 1e-6 or max(abs(dn[0][2]), abs(dn[1][2])) > 1e-6:
        raise PencilMismatch("inner conic does not match the canonical pencil")
    mu = 2 * d_t.m[0][1] / d_t.m[0][0] if backend == EXACT else 2.0 * dn[0][1]
    c_val = dn[2][2]
    expected = float(inner_constant(float(mu)))
    if abs(c_val - expected) > 1e-6 * max(1.0, abs(expected)):
        raise PencilMismatch("inner constant is not in the poristic position")
    if backend == EXACT:
        pencil = make_pencil(Fraction(lam), Fraction(mu))
    else:
        pencil = make_pencil(float(lam), float(mu))
    return g, pencil


# --- exact sampling -----------------------------------------------------------


def exact_poristic_sample(seed: int) -> tuple[PonceletPencil, HPoint, HPoint]:
    """A rational pencil together with a rational non-square orbit on it.

    Drawn backwards: pick lambda and two rational points A, B on the outer
    conic, then choose mu so that the chord AB satisfies the tangency
    identity.  The full orbit is then A, B, -A, -B with rational tangent
    lines and perfect-square step discriminants."""
    rng = random.Random(seed)
    for _ in range(500):
        lam = Fraction(rng.randint(1, 19), 20)
        if lam in (0, 1):
            continue
        outer = Conic(((lam, Fraction(0), Fraction(0)),
                       (Fraction(0), 1 - lam, Fraction(0)),
                       (Fraction(0), Fraction(0), Fraction(-1))))
        param = ConicParam(outer, HPoint((Fraction(1), Fraction(1), Fraction(1))))
        ta = Fraction(rng.randint(-40, 40), rng.randint(1, 9))
        tb = Fraction(rng.randint(-40, 40), rng.randint(1, 9))
        if ta == tb:
            continue
        a, b = param.point_at(ta), param.point_at(tb)
        if proportional(a, b) or proportional(a, antipode(b)):
            continue
        ax, ay = a.coords[0] / a.coords[2], a.coords[1] / a.coords[2]
        bx, by = b.coords[0] / b.coords[2], b.coords[1] / b.coords[2]
        if ax == bx:
            continue
        k = (by - ay) / (bx - ax)
        if k == 0:
            continue
        n = ay - k * ax
        mu = (n * n - k * k - 1) / k
        if mu == 2 or mu == -2:
            continue
        try:
            pencil = make_pencil(lam, mu)
            for p in (a, b):
                tangent_lines_from(pencil, p)
        except GeometryError:
            continue
        return pencil, a, b
    raise SequenceDegenerated("exact poristic sampler exhausted its retries")
