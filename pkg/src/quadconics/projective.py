"""Homogeneous points, lines and projective maps of the real plane.

Points and lines are triples up to nonzero scale; points at infinity (z = 0)
are first-class and no affine special-casing happens here.  All operations are
pure and work identically over the exact and float backends.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from . import exact_linalg as xl
from .errors import (
    CoincidentLines,
    CoincidentPoints,
    DegenerateInput,
    DegeneratePosition,
    NotCollinear,
    SingularMap,
)
from .scalars import (
    DEFAULT_TOLERANCE,
    EXACT,
    FLOAT,
    Scalar,
    Tolerance,
    backend_of,
    coerce_tuple,
    safe_float,
)

Triple = tuple[Scalar, Scalar, Scalar]


def primitive_exact(values: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Smallest integer representative of a rational tuple (up to sign)."""
    denom_lcm = 1
    for v in values:
        denom_lcm = denom_lcm * v.denominator // math.gcd(denom_lcm, v.denominator)
    ints = [int(v * denom_lcm) for v in values]
    g = 0
    for n in ints:
        g = math.gcd(g, n)
    if g == 0:
        g = 1
    return tuple(Fraction(n // g) for n in ints)


def _cross(p: Triple, q: Triple) -> Triple:
    return (
        p[1] * q[2] - p[2] * q[1],
        p[2] * q[0] - p[0] * q[2],
        p[0] * q[1] - p[1] * q[0],
    )


def _dot(p: Triple, q: Triple) -> Scalar:
    return p[0] * q[0] + p[1] * q[1] + p[2] * q[2]


def _norm_f(p: Sequence[Scalar]) -> float:
    return math.sqrt(sum(safe_float(c) * safe_float(c) for c in p))


class _HomogeneousTriple:
    """Shared behaviour of HPoint and HLine (duality makes them twins)."""

    __slots__ = ("coords",)
    coords: Triple

    def __init__(self, a: Scalar, b: Scalar = None, c: Scalar = None):
        if b is None and c is None and isinstance(a, (tuple, list)):
            vals = a
        else:
            vals = (a, b, c)
        coords = coerce_tuple(vals, what=type(self).__name__)
        if len(coords) != 3:
            raise DegenerateInput("homogeneous coordinates need exactly 3 entries")
        if all(v == 0 for v in coords):
            raise DegenerateInput("homogeneous coordinates cannot all vanish")
        object.__setattr__(self, "coords", coords)

    def __setattr__(self, *a):  # immutable
        raise AttributeError(f"{type(self).__name__} is immutable")

    @property
    def backend(self) -> str:
        return backend_of(self.coords[0])

    def canonical(self) -> Triple:
        """Canonical representative used for equality and serialization.

        Exact: scale so the last nonzero coordinate is 1.  Float: scale to
        unit Euclidean norm with the first significantly-nonzero coordinate
        positive.
        """
        c = self.coords
        if self.backend == EXACT:
            for k in (2, 1, 0):
                if c[k] != 0:
                    return tuple(v / c[k] for v in c)
        n = _norm_f(c)
        out = [safe_float(v) / n for v in c]
        big = max(abs(v) for v in out)
        for v in out:
            if abs(v) > 1e-13 * big:
                if v < 0:
                    out = [-w for w in out]
                break
        return tuple(out)

    def unit(self) -> Triple:
        """Float representative of unit Euclidean norm (sign unconstrained)."""
        ref = self.coords
        if self.backend == EXACT:
            ref = primitive_exact(ref)
        n = _norm_f(ref)
        return tuple(safe_float(v) / n for v in ref)

    def reduced(self):
        """Cheapest well-scaled representative: primitive integers (exact) or
        unit norm (float).  Applied between construction stages to keep
        coordinate growth in check."""
        if self.backend == EXACT:
            return type(self)(primitive_exact(self.coords))
        return type(self)(self.unit())

    def __repr__(self) -> str:
        return f"{type(self).__name__}{self.coords}"

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self.coords == other.coords

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.coords))


class HPoint(_HomogeneousTriple):
    """Projective point (x : y : z)."""

    @property
    def is_infinite(self) -> bool:
        z = self.coords[2]
        if self.backend == EXACT:
            return z == 0
        u = self.unit()
        return abs(u[2]) <= 1e-12

    def to_float(self) -> "HPoint":
        return HPoint(self.unit()) if self.backend == EXACT else self

    def affine(self) -> tuple[float, float]:
        x, y, z = self.coords
        if self.backend == EXACT:
            return safe_float(Fraction(x) / z), safe_float(Fraction(y) / z)
        return float(x) / float(z), float(y) / float(z)

    def to_json(self):
        from .scalars import scalar_to_json

        return [scalar_to_json(c) for c in self.coords]


class HLine(_HomogeneousTriple):
    """Projective line a*x + b*y + c*z = 0 with coefficients (a : b : c)."""

    def to_float(self) -> "HLine":
        return HLine(self.unit()) if self.backend == EXACT else self

    def to_json(self):
        from .scalars import scalar_to_json

        return {"line": [scalar_to_json(c) for c in self.coords]}


def proportional(a: _HomogeneousTriple, b: _HomogeneousTriple, tol: Tolerance = DEFAULT_TOLERANCE) -> bool:
    """Projective equality: the cross product of representatives vanishes."""
    cr = _cross(a.coords, b.coords)
    if a.backend == EXACT and b.backend == EXACT:
        return all(v == 0 for v in cr)
    res = _norm_f(cr) / (_norm_f(a.coords) * _norm_f(b.coords))
    return res <= tol.epsilon


def join(p: HPoint, q: HPoint) -> HLine:
    """Line through two distinct points (cross product)."""
    cr = _cross(p.coords, q.coords)
    if all(v == 0 for v in cr):
        raise CoincidentPoints(f"join of coincident points {p}")
    if p.backend == FLOAT and _norm_f(cr) <= 1e-14 * _norm_f(p.coords) * _norm_f(q.coords):
        raise CoincidentPoints("join of numerically coincident points")
    return HLine(cr)


def meet(l: HLine, m: HLine) -> HPoint:
    """Intersection point of two distinct lines (dual of join)."""
    cr = _cross(l.coords, m.coords)
    if all(v == 0 for v in cr):
        raise CoincidentLines(f"meet of coincident lines {l}")
    if l.backend == FLOAT and _norm_f(cr) <= 1e-14 * _norm_f(l.coords) * _norm_f(m.coords):
        raise CoincidentLines("meet of numerically coincident lines")
    return HPoint(cr)


def incident(p: HPoint, l: HLine, tol: Tolerance = DEFAULT_TOLERANCE) -> tuple[bool, Scalar]:
    """Incidence test with its normalized residual |<p,l>| / (|p||l|)."""
    v = _dot(p.coords, l.coords)
    if p.backend == EXACT and l.backend == EXACT:
        return v == 0, abs(v)
    res = abs(float(v)) / (_norm_f(p.coords) * _norm_f(l.coords))
    return res <= tol.epsilon, res


def _triple_dets(items: Sequence[_HomogeneousTriple]):
    for a, b, c in combinations(items, 3):
        yield xl.det3((a.coords, b.coords, c.coords))


def _collinear_generic(items, tol: Tolerance):
    if len(items) < 3:
        raise DegenerateInput("need at least 3 elements")
    backend = items[0].backend
    if backend == EXACT:
        worst = Fraction(0)
        for d in _triple_dets(items):
            worst = max(worst, abs(d))
        if all(proportional(items[0], x) for x in items[1:]):
            raise DegenerateInput("all elements coincide")
        return worst == 0, worst
    # float: fit a witness through the two most-separated representatives
    units = [x.unit() for x in items]
    best, pair = -1.0, (0, 1)
    for i, j in combinations(range(len(items)), 2):
        d = min(
            sum((a - b) ** 2 for a, b in zip(units[i], units[j])),
            sum((a + b) ** 2 for a, b in zip(units[i], units[j])),
        )
        if d > best:
            best, pair = d, (i, j)
    if best <= 1e-24:
        raise DegenerateInput("all elements coincide")
    witness = _cross(units[pair[0]], units[pair[1]])
    wn = _norm_f(witness)
    worst = 0.0
    for u in units:
        worst = max(worst, abs(_dot(u, witness)) / wn)
    return worst <= tol.epsilon, worst


def collinear(points: Sequence[HPoint], tol: Tolerance = DEFAULT_TOLERANCE) -> tuple[bool, Scalar]:
    """Are all points on one line?  Exact mode certifies every 3x3 determinant."""
    return _collinear_generic(list(points), tol)


def concurrent(lines: Sequence[HLine], tol: Tolerance = DEFAULT_TOLERANCE) -> tuple[bool, Scalar]:
    """Do all lines pass through one point?  Dual of `collinear`."""
    return _collinear_generic(list(lines), tol)


def collinear_witness(points: Sequence[HPoint]) -> HLine:
    """Line through the two most-separated points of a (near-)collinear set."""
    pts = list(points)
    if pts[0].backend == EXACT:
        for p, q in combinations(pts, 2):
            if not proportional(p, q):
                return join(p, q)
        raise DegenerateInput("all points coincide")
    units = [x.unit() for x in pts]
    best, pair = -1.0, None
    for i, j in combinations(range(len(pts)), 2):
        d = min(
            sum((a - b) ** 2 for a, b in zip(units[i], units[j])),
            sum((a + b) ** 2 for a, b in zip(units[i], units[j])),
        )
        if d > best:
            best, pair = d, (i, j)
    if pair is None or best <= 1e-24:
        raise DegenerateInput("all points coincide")
    return join(pts[pair[0]], pts[pair[1]])


def cross_ratio(a: HPoint, b: HPoint, c: HPoint, d: HPoint, tol: Tolerance = DEFAULT_TOLERANCE) -> Scalar:
    """Cross ratio (a,b;c,d) of four distinct collinear points."""
    pts = [a, b, c, d]
    for p, q in combinations(pts, 2):
        if proportional(p, q, tol):
            raise CoincidentPoints("cross ratio needs distinct points")
    ok, _ = collinear(pts, tol)
    if not ok:
        raise NotCollinear("cross ratio of non-collinear points")
    line = collinear_witness(pts)
    # drop the dominant line coefficient; the remaining two coordinates embed
    # the line into P^1 injectively
    coeffs = [abs(v) for v in line.unit()]
    k = coeffs.index(max(coeffs))
    i, j = [t for t in range(3) if t != k]

    def det2(p: HPoint, q: HPoint) -> Scalar:
        return p.coords[i] * q.coords[j] - p.coords[j] * q.coords[i]

    num = det2(a, c) * det2(b, d)
    den = det2(a, d) * det2(b, c)
    if den == 0:
        raise CoincidentPoints("degenerate cross ratio")
    return num / den


class ProjMap:
    """Invertible projective transformation stored as a 3x3 matrix."""

    __slots__ = ("matrix",)

    def __init__(self, matrix: Iterable[Iterable[Scalar]]):
        rows = [coerce_tuple(r, what="map row") for r in matrix]
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise DegenerateInput("projective map needs a 3x3 matrix")
        flat = coerce_tuple([v for r in rows for v in r], what="map entries")
        m = (flat[0:3], flat[3:6], flat[6:9])
        d = xl.det3(m)
        if backend_of(flat[0]) == EXACT:
            if d == 0:
                raise SingularMap("matrix has zero determinant")
        else:
            scale = 1.0
            for r in m:
                scale *= _norm_f(r)
            if scale == 0 or abs(float(d)) / scale <= 1e-14:
                raise SingularMap("matrix is numerically singular")
        object.__setattr__(self, "matrix", m)

    def __setattr__(self, *a):
        raise AttributeError("ProjMap is immutable")

    @property
    def backend(self) -> str:
        return backend_of(self.matrix[0][0])

    def det(self) -> Scalar:
        return xl.det3(self.matrix)

    def apply(self, p: HPoint) -> HPoint:
        return HPoint(xl.mat_vec3(self.matrix, p.coords))

    def apply_line(self, l: HLine) -> HLine:
        # lines transform by the inverse transpose; the adjugate transpose is
        # proportional to it and stays in the ground field
        return HLine(xl.mat_vec3(xl.transpose3(xl.adj3(self.matrix)), l.coords))

    def inverse(self) -> "ProjMap":
        return ProjMap(xl.adj3(self.matrix))

    def compose(self, other: "ProjMap") -> "ProjMap":
        """self after other: (self.compose(other)).apply(p) == self(other(p))."""
        return ProjMap(xl.mat_mul3(self.matrix, other.matrix))

    def to_json(self):
        from .scalars import scalar_to_json

        return [[scalar_to_json(v) for v in row] for row in self.matrix]

    @staticmethod
    def identity(backend: str = EXACT) -> "ProjMap":
        one = Fraction(1) if backend == EXACT else 1.0
        zero = Fraction(0) if backend == EXACT else 0.0
        return ProjMap([[one, zero, zero], [zero, one, zero], [zero, zero, one]])

    def __repr__(self) -> str:
        return f"ProjMap{self.matrix}"


def map_from_correspondence(src: Sequence[HPoint], dst: Sequence[HPoint]) -> ProjMap:
    """Unique projective map sending four source points to four targets.

    Both quadruples must be in general position (no three collinear).  Uses
    the classical factorization through the standard basis: scale the first
    three points so their sum is the fourth.
    """
    if len(src) != 4 or len(dst) != 4:
        raise DegenerateInput("correspondence needs 4 + 4 points")

    def basis_map(pts: Sequence[HPoint]) -> tuple:
        cols = [p.coords for p in pts[:3]]
        m = tuple(zip(*cols))  # columns are the first three points
        scales = xl.solve3(m, pts[3].coords)
        if scales is None or any(s == 0 for s in scales):
            raise DegeneratePosition("three of the four points are collinear")
        if backend_of(pts[0].coords[0]) == FLOAT:
            norms = [_norm_f(c) for c in cols]
            if any(abs(float(s)) * n <= 1e-12 * _norm_f(pts[3].coords) for s, n in zip(scales, norms)):
                raise DegeneratePosition("three of the four points are nearly collinear")
        return tuple(
            tuple(scales[c] * cols[c][r] for c in range(3)) for r in range(3)
        )

    m_src = basis_map(src)
    m_dst = basis_map(dst)
    return ProjMap(xl.mat_mul3(m_dst, xl.adj3(m_src)))
