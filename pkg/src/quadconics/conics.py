"""Conics as quadratic forms: fitting, incidence, tangency, polarity.

A conic is a symmetric 3x3 matrix up to scale; membership is linearized via
the degree-2 Veronese embedding (x^2, xy, y^2, xz, yz, z^2) so that fitting a
conic through points is a nullspace computation: exact Gaussian elimination on
the exact backend, SVD on the float backend.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence

import numpy as np

from . import exact_linalg as xl
from .errors import (
    DegenerateConic,
    DegeneratePosition,
    InsidePoint,
    NonSquareDiscriminant,
    NoUniqueConic,
    PointNotOnConic,
    SingularMap,
)
from .projective import HLine, HPoint, ProjMap, join, primitive_exact, proportional
from .scalars import (
    DEFAULT_TOLERANCE,
    EXACT,
    FLOAT,
    Scalar,
    Tolerance,
    backend_of,
    coerce_tuple,
    is_square,
    safe_float,
    sqrt,
)

# float-mode threshold below which a normalized determinant counts as zero
DEGENERACY_EPS = 1e-12


class Conic:
    """Symmetric 3x3 matrix up to scale."""

    __slots__ = ("m",)

    def __init__(self, matrix: Iterable[Iterable[Scalar]]):
        rows = [list(r) for r in matrix]
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise DegeneratePosition("conic needs a 3x3 matrix")
        flat = coerce_tuple([v for r in rows for v in r], what="conic entries")
        m = (flat[0:3], flat[3:6], flat[6:9])
        for i in range(3):
            for j in range(i + 1, 3):
                if m[i][j] != m[j][i]:
                    if backend_of(flat[0]) == EXACT or abs(float(m[i][j] - m[j][i])) > 1e-9 * self._scale_of(m):
                        raise DegeneratePosition("conic matrix must be symmetric")
        if all(v == 0 for v in flat):
            raise DegeneratePosition("conic matrix cannot vanish")
        object.__setattr__(self, "m", m)

    @staticmethod
    def _scale_of(m) -> float:
        return max(abs(float(v)) for row in m for v in row)

    def __setattr__(self, *a):
        raise AttributeError("Conic is immutable")

    @classmethod
    def from_coeffs(cls, a: Scalar, b: Scalar, c: Scalar, d: Scalar, e: Scalar, f: Scalar) -> "Conic":
        """Conic a*x^2 + b*xy + c*y^2 + d*xz + e*yz + f*z^2 = 0."""
        vals = coerce_tuple((a, b, c, d, e, f), what="conic coefficients")
        a, b, c, d, e, f = vals
        two = Fraction(2) if backend_of(a) == EXACT else 2.0
        return cls(((a, b / two, d / two), (b / two, c, e / two), (d / two, e / two, f)))

    @classmethod
    def unit_circle(cls, backend: str = EXACT) -> "Conic":
        one = Fraction(1) if backend == EXACT else 1.0
        zero = Fraction(0) if backend == EXACT else 0.0
        return cls(((one, zero, zero), (zero, one, zero), (zero, zero, -one)))

    @property
    def backend(self) -> str:
        return backend_of(self.m[0][0])

    def coeffs(self) -> tuple:
        """(a, b, c, d, e, f) of a*x^2+b*xy+c*y^2+d*xz+e*yz+f*z^2."""
        m = self.m
        return (m[0][0], 2 * m[0][1], m[1][1], 2 * m[0][2], 2 * m[1][2], m[2][2])

    def value(self, p: HPoint) -> Scalar:
        mv = xl.mat_vec3(self.m, p.coords)
        v = p.coords
        return mv[0] * v[0] + mv[1] * v[1] + mv[2] * v[2]

    def bilinear(self, p: HPoint, q: HPoint) -> Scalar:
        mv = xl.mat_vec3(self.m, q.coords)
        u = p.coords
        return u[0] * mv[0] + u[1] * mv[1] + u[2] * mv[2]

    def det(self) -> Scalar:
        return xl.det3(self.m)

    def frobenius(self) -> float:
        vals = [safe_float(v) for row in self.m for v in row]
        big = max(abs(v) for v in vals)
        if big == 0 or math.isinf(big):
            return big
        return big * math.sqrt(sum((v / big) ** 2 for v in vals))

    def is_degenerate(self) -> bool:
        d = self.det()
        if self.backend == EXACT:
            return d == 0
        n = self.frobenius() / math.sqrt(3.0)
        return abs(float(d)) / n**3 < DEGENERACY_EPS

    def adjugate(self) -> tuple:
        return xl.adj3(self.m)

    def canonical(self) -> tuple:
        """Deterministic representative: exact divides by the first nonzero
        entry; float scales to unit Frobenius norm with a fixed sign."""
        flat = [v for row in self.m for v in row]
        if self.backend == EXACT:
            pivot = next(v for v in flat if v != 0)
            return tuple(tuple(v / pivot for v in row) for row in self.m)
        n = self.frobenius()
        out = [[float(v) / n for v in row] for row in self.m]
        big = max(abs(v) for row in out for v in row)
        for row in out:
            done = False
            for v in row:
                if abs(v) > 1e-13 * big:
                    if v < 0:
                        out = [[-w for w in r] for r in out]
                    done = True
                    break
            if done:
                break
        return tuple(tuple(row) for row in out)

    def to_float(self) -> "Conic":
        if self.backend == FLOAT:
            return self
        flat = primitive_exact([v for row in self.m for v in row])
        n = math.sqrt(sum(safe_float(v) ** 2 for v in flat))
        vals = [safe_float(v) / n for v in flat]
        return Conic([vals[0:3], vals[3:6], vals[6:9]])

    def reduced(self) -> "Conic":
        """Well-scaled representative (primitive integers / unit Frobenius)."""
        if self.backend == EXACT:
            flat = primitive_exact([v for row in self.m for v in row])
            return Conic((flat[0:3], flat[3:6], flat[6:9]))
        n = self.frobenius()
        return Conic([[float(v) / n for v in row] for row in self.m])

    def to_json(self):
        from .scalars import scalar_to_json

        return {"conic": [[scalar_to_json(v) for v in row] for row in self.m]}

    def __repr__(self) -> str:
        return f"Conic{self.m}"

    def __eq__(self, other) -> bool:
        return isinstance(other, Conic) and self.m == other.m

    def __hash__(self) -> int:
        return hash(self.m)


def _veronese(p: HPoint) -> list:
    x, y, z = p.coords
    return [x * x, x * y, y * y, x * z, y * z, z * z]


def _conic_from_vec(vec: Sequence[Scalar]) -> Conic:
    a, b, c, d, e, f = vec
    return Conic.from_coeffs(a, b, c, d, e, f)


@dataclass(frozen=True)
class FitDiagnostics:
    """Conditioning report for a float conic fit.

    `separation` is the ratio of the two smallest singular values of the
    Veronese design matrix; large values mean a well-isolated nullvector.
    """

    separation: Optional[float]

    def well_posed(self, threshold: float = 1e3) -> bool:
        return self.separation is None or self.separation >= threshold


def fit_conic(points: Sequence[HPoint]) -> tuple[Conic, FitDiagnostics]:
    """Least-squares conic through >= 5 points (exact nullspace when rational)."""
    pts = list(points)
    if len(pts) < 5:
        raise NoUniqueConic("need at least 5 points")
    backend = pts[0].backend
    if backend == EXACT:
        rows = [[Fraction(v) for v in _veronese(p)] for p in pts]
        basis = xl.nullspace(rows, 6)
        if len(basis) == 0:
            raise NoUniqueConic("no conic through the given points")
        if len(basis) > 1:
            raise NoUniqueConic("points in degenerate position: conic not unique")
        return _conic_from_vec(basis[0]), FitDiagnostics(separation=None)
    a = np.array([[float(v) for v in _veronese(p.__class__(p.unit()))] for p in pts])
    _, s, vt = np.linalg.svd(a, full_matrices=True)
    if s[0] == 0:
        raise NoUniqueConic("degenerate input")
    svals = list(s) + [0.0] * (6 - len(s))
    if svals[4] / svals[0] < 1e-12:
        raise NoUniqueConic("points in degenerate position: conic not unique")
    smallest = svals[5]
    separation = math.inf if smallest == 0 else svals[4] / smallest
    return _conic_from_vec([float(v) for v in vt[-1]]), FitDiagnostics(separation=separation)


def conic_through_5(points: Sequence[HPoint]) -> Conic:
    """The unique conic through five points in general position."""
    pts = list(points)
    if len(pts) != 5:
        raise NoUniqueConic("exactly 5 points required")
    conic, _ = fit_conic(pts)
    return conic


def on_conic(conic: Conic, p: HPoint, tol: Tolerance = DEFAULT_TOLERANCE) -> tuple[bool, Scalar]:
    """Membership test with normalized residual |p^T C p| / (|C| |p|^2)."""
    v = conic.bilinear(p, p)
    if conic.backend == EXACT and p.backend == EXACT:
        return v == 0, abs(v)
    u = p.unit()
    cn = conic.frobenius()
    res = abs(float(conic.bilinear(HPoint(u), HPoint(u)))) / cn if cn else math.inf
    return res <= tol.epsilon, res


def tangent_at(conic: Conic, p: HPoint, tol: Tolerance = DEFAULT_TOLERANCE) -> HLine:
    """Tangent line to the conic at a point of the conic (= its polar)."""
    if conic.is_degenerate():
        raise DegenerateConic("tangent of a degenerate conic")
    ok, res = on_conic(conic, p, tol)
    if not ok:
        raise PointNotOnConic(f"point {p} not on conic (residual {res})")
    return polar(conic, p)


def polar(conic: Conic, p: HPoint) -> HLine:
    """Polar line of a point: C * p."""
    if conic.is_degenerate():
        raise DegenerateConic("polar w.r.t. a degenerate conic")
    coords = xl.mat_vec3(conic.m, p.coords)
    return HLine(coords)


def pole(conic: Conic, l: HLine) -> HPoint:
    """Pole of a line: adj(C) * l; inverse of `polar` up to scale."""
    if conic.is_degenerate():
        raise DegenerateConic("pole w.r.t. a degenerate conic")
    return HPoint(xl.mat_vec3(conic.adjugate(), l.coords))


def _span_points(l: HLine) -> tuple[HPoint, HPoint]:
    """Two independent points on a line, from the standard basis."""
    a, b, c = l.coords
    # l x e_i for the three basis vectors
    opts = [
        (0 * a, c, -b),
        (-c, 0 * a, a),
        (b, -a, 0 * a),
    ]
    live = [opt for opt in opts if any(v != 0 for v in opt)]
    if l.backend == FLOAT:
        # conditioning matters only for floats; exact picks in fixed order
        live.sort(key=lambda o: -sum(float(v) ** 2 for v in o))
    p0 = HPoint(live[0]).reduced()
    for opt in live[1:]:
        q = HPoint(opt)
        if not proportional(p0, q):
            return p0, q.reduced()
    raise DegeneratePosition("could not span line")  # pragma: no cover


def line_conic_intersect(conic: Conic, l: HLine, tol: Tolerance = DEFAULT_TOLERANCE) -> list[HPoint]:
    """Real intersections of a line and a conic: 0, 1 (tangency) or 2 points.

    Exact backend raises NonSquareDiscriminant for irrational intersection
    points; a negative discriminant simply returns no points.
    """
    if conic.is_degenerate():
        raise DegenerateConic("intersection with a degenerate conic")
    p0, p1 = _span_points(l)
    a = conic.bilinear(p1, p1)
    b = conic.bilinear(p0, p1)
    c = conic.bilinear(p0, p0)
    backend = conic.backend
    scale = None
    if backend == FLOAT:
        scale = conic.frobenius() * max(
            sum(float(v) ** 2 for v in p0.coords), sum(float(v) ** 2 for v in p1.coords)
        )
        if scale == 0:
            scale = 1.0

    def near_zero(v) -> bool:
        if backend == EXACT:
            return v == 0
        return abs(float(v)) <= tol.epsilon * scale

    def pt(s, t) -> HPoint:
        return HPoint(tuple(s * u + t * v for u, v in zip(p0.coords, p1.coords)))

    if near_zero(a):
        # p1 lies on the conic; the pencil s*p0 + t*p1 has the root at s=0
        if near_zero(b):
            return [p1]  # tangency at p1
        one = Fraction(1) if backend == EXACT else 1.0
        return sorted([p1, pt(one, -c / (2 * b))], key=lambda q: q.canonical())
    disc = b * b - a * c
    if near_zero(disc):
        return [pt(Fraction(1) if backend == EXACT else 1.0, -b / a)]
    if disc < 0:
        return []
    if backend == EXACT and not is_square(Fraction(disc)):
        raise NonSquareDiscriminant(f"irrational intersection: discriminant {disc}")
    r = sqrt(disc if backend == EXACT else float(disc))
    one = Fraction(1) if backend == EXACT else 1.0
    out = [pt(one, (-b + r) / a), pt(one, (-b - r) / a)]
    return sorted(out, key=lambda q: q.canonical())


def tangency_points_from(conic: Conic, p: HPoint, tol: Tolerance = DEFAULT_TOLERANCE) -> list[HPoint]:
    """Points where the two tangents from an exterior point touch the conic."""
    pol = polar(conic, p)
    pts = line_conic_intersect(conic, pol, tol)
    if len(pts) < 2:
        raise InsidePoint("no two real tangents from the given point")
    return pts


def transform_conic(m: ProjMap, conic: Conic) -> Conic:
    """Image conic under a projective map: congruence by the inverse."""
    inv = xl.adj3(m.matrix)  # proportional to the true inverse
    invt = xl.transpose3(inv)
    return Conic(xl.mat_mul3(xl.mat_mul3(invt, conic.m), inv))


def _greedy_five(points: Sequence[HPoint]) -> list[int]:
    """Indices of 5 pairwise well-separated points (deterministic greedy)."""
    units = [p.unit() for p in points]

    def d2(i: int, j: int) -> float:
        s = sum((a - b) ** 2 for a, b in zip(units[i], units[j]))
        t = sum((a + b) ** 2 for a, b in zip(units[i], units[j]))
        return min(s, t)

    n = len(points)
    best_pair = max(combinations(range(n), 2), key=lambda ij: d2(*ij))
    chosen = list(best_pair)
    while len(chosen) < 5:
        rest = [i for i in range(n) if i not in chosen]
        nxt = max(rest, key=lambda i: (min(d2(i, j) for j in chosen), -i))
        chosen.append(nxt)
    return sorted(chosen)


def conconic(points: Sequence[HPoint], tol: Tolerance = DEFAULT_TOLERANCE) -> tuple[bool, Scalar, Conic]:
    """Do >= 6 points lie on one conic?

    Float mode fits a witness conic through five well-separated points and
    reports the worst membership residual of the rest.  Exact mode certifies
    by the rank of the full Veronese matrix.
    """
    pts = list(points)
    if len(pts) < 6:
        raise DegeneratePosition("conconic needs at least 6 points")
    backend = pts[0].backend
    if backend == EXACT:
        rows = [[Fraction(v) for v in _veronese(p)] for p in pts]
        rk = xl.rank(rows)
        if rk <= 4:
            raise DegeneratePosition("no 5-subset in conic-general position")
        if rk == 5:
            witness = _conic_from_vec(xl.nullspace(rows, 6)[0])
            return True, Fraction(0), witness
        # rank 6: fit through a well-separated 5-subset and report the worst
        # exact residual on the others
        idx = _greedy_five([p.to_float() for p in pts])
        witness, _ = fit_conic([pts[i] for i in idx])
        worst = Fraction(0)
        for p in pts:
            worst = max(worst, abs(Fraction(witness.bilinear(p, p))))
        return False, worst, witness
    idx = _greedy_five(pts)
    five = [pts[i] for i in idx]
    witness, diag = fit_conic(five)
    if not diag.well_posed(threshold=10.0):
        raise DegeneratePosition("chosen 5-subset is numerically degenerate")
    worst = 0.0
    for p in pts:
        _, res = on_conic(witness, p, tol)
        worst = max(worst, res)
    return worst <= tol.epsilon, worst, witness


INFINITY_PARAM = "inf"


class ConicParam:
    """Rational parametrization of a conic from a base point on it.

    point_at(t) is the second intersection of the conic with the line through
    the base point and u + t*v, for two fixed auxiliary points u, v; t = the
    "inf" tag selects the direction v.  Rational t on a rational conic yields
    rational points, which is what makes exact sampling possible.
    """

    __slots__ = ("conic", "base", "u", "v")

    def __init__(self, conic: Conic, base: HPoint, tol: Tolerance = DEFAULT_TOLERANCE):
        ok, res = on_conic(conic, base, tol)
        if not ok:
            raise PointNotOnConic(f"base point not on conic (residual {res})")
        if conic.is_degenerate():
            raise DegenerateConic("cannot parametrize a degenerate conic")
        object.__setattr__(self, "conic", conic)
        object.__setattr__(self, "base", base)
        backend = base.backend
        one = Fraction(1) if backend == EXACT else 1.0
        zero = Fraction(0) if backend == EXACT else 0.0
        basis = [
            HPoint((one, zero, zero)),
            HPoint((zero, one, zero)),
            HPoint((zero, zero, one)),
        ]
        # pick the two basis points spanning the plane with the base most robustly
        bu = base.unit()
        best, pair = None, None
        for i, j in combinations(range(3), 2):
            ei = tuple(float(c) for c in basis[i].coords)
            ej = tuple(float(c) for c in basis[j].coords)
            score = abs(float(xl.det3((bu, ei, ej))))
            if best is None or score > best:
                best, pair = score, (i, j)
        object.__setattr__(self, "u", basis[pair[0]])
        object.__setattr__(self, "v", basis[pair[1]])

    def __setattr__(self, *a):
        raise AttributeError("ConicParam is immutable")

    def point_at(self, t) -> HPoint:
        """Conic point for parameter t (a Scalar or the "inf" tag)."""
        base = self.base
        if t == INFINITY_PARAM:
            w = self.v
        else:
            tt = t if not isinstance(t, int) else (Fraction(t) if base.backend == EXACT else float(t))
            w = HPoint(tuple(a + tt * b for a, b in zip(self.u.coords, self.v.coords)))
        qw = self.conic.bilinear(w, w)
        bw = self.conic.bilinear(base, w)
        coords = tuple(qw * a - 2 * bw * b for a, b in zip(base.coords, w.coords))
        if all(v == 0 for v in coords):
            # w on the conic and on the tangent at base: the parameter of the
            # base point itself
            return base
        return HPoint(coords)

    def param_of(self, q: HPoint, tol: Tolerance = DEFAULT_TOLERANCE):
        """Inverse of point_at for a point on the conic."""
        ok, res = on_conic(self.conic, q, tol)
        if not ok:
            raise PointNotOnConic(f"point not on conic (residual {res})")
        if proportional(q, self.base, tol):
            # the base is hit by the tangent direction: solve B(base, u+t v)=0
            bu = self.conic.bilinear(self.base, self.u)
            bv = self.conic.bilinear(self.base, self.v)
            if bv == 0:
                return INFINITY_PARAM
            return -bu / bv
        line = join(self.base, q)
        aux = join(self.u, self.v)
        w = meet_lines(line, aux)
        # w = u + t*v up to scale: recover t from the strongest u-component
        den_idx = max(range(3), key=lambda k: abs(float(self.u.coords[k])))
        su = w.coords[den_idx] / self.u.coords[den_idx]
        if su == 0:
            return INFINITY_PARAM
        vi = max(range(3), key=lambda k: abs(float(self.v.coords[k])))
        return (w.coords[vi] / su - self.u.coords[vi]) / self.v.coords[vi]


def meet_lines(l: HLine, m: HLine) -> HPoint:
    from .projective import meet

    return meet(l, m)


def circle_points_param(backend: str = EXACT) -> ConicParam:
    """Standard rational parametrization of the unit circle from (-1, 0)."""
    one = Fraction(1) if backend == EXACT else 1.0
    zero = Fraction(0) if backend == EXACT else 0.0
    return ConicParam(Conic.unit_circle(backend), HPoint((-one, zero, one)))
