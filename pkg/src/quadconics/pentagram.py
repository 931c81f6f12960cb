"""Dodecagon dynamics: the diagonal map and numerical evidence gathering.

The map sends vertex i of a 12-gon to the intersection of the short diagonals
(i, i+3) and (i+1, i+4); those diagonals are precisely the sides of the three
embedded quadrilaterals (1,4,7,10), (2,5,8,11), (3,6,9,12).  For a 12-gon
inscribed in a conic the third iterate empirically lands on a conic again,
with exactly-zero rational certificates per instance; the universal statement
is an open conjecture, so the experiment reports evidence and never a proof.

A printed variant of the formula with spacings (i, i+4), (i+1, i+5) fails the
experiment at every iterate (residuals around 1e-1); both spacings are kept so
the erratum oracle can adjudicate between them.
"""
from __future__ import annotations

import math
import random
import statistics
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .conics import Conic, ConicParam, conconic, fit_conic, on_conic, transform_conic
from .errors import DegenerateDiagonals, GeometryError
from .projective import HPoint, ProjMap, join, meet, proportional
from .quadconfig import random_rational_map
from .scalars import DEFAULT_TOLERANCE, EXACT, FLOAT, Scalar, Tolerance

CONDITION_QUARANTINE = 1e6


@dataclass(frozen=True)
class Polygon12:
    """Twelve cyclically indexed projective points."""

    vertices: tuple[HPoint, ...]

    def __post_init__(self):
        if len(self.vertices) != 12:
            raise DegenerateDiagonals("a 12-gon needs exactly 12 vertices")
        for i in range(12):
            if proportional(self.vertices[i], self.vertices[(i + 1) % 12]):
                raise DegenerateDiagonals(f"consecutive vertices {i + 1} coincide")

    def vertex(self, i: int) -> HPoint:
        return self.vertices[(i - 1) % 12]

    def rotate(self, k: int) -> "Polygon12":
        return Polygon12(tuple(self.vertices[(i + k) % 12] for i in range(12)))

    def to_json(self):
        return [v.to_json() for v in self.vertices]


CORRECTED_SPACING = 3
PRINTED_SPACING = 4


def diagonal_map(p: Polygon12, spacing: int = CORRECTED_SPACING) -> Polygon12:
    """Image 12-gon: vertex i becomes (i, i+spacing) x (i+1, i+1+spacing)."""
    out = []
    for i in range(1, 13):
        a, b = p.vertex(i), p.vertex(i + spacing)
        c, d = p.vertex(i + 1), p.vertex(i + 1 + spacing)
        try:
            l1, l2 = join(a, b), join(c, d)
            if proportional(l1, l2):
                raise DegenerateDiagonals(f"diagonals at index {i} coincide")
            out.append(meet(l1, l2).reduced())
        except GeometryError as exc:
            raise DegenerateDiagonals(f"index {i}: {exc}") from exc
    return Polygon12(tuple(out))


def iterate_map(p: Polygon12, times: int, spacing: int = CORRECTED_SPACING) -> Polygon12:
    for _ in range(times):
        p = diagonal_map(p, spacing)
    return p


def embedded_quads(p: Polygon12) -> list[tuple[HPoint, HPoint, HPoint, HPoint]]:
    """The three index-arithmetic quadrilaterals (1,4,7,10), (2,5,8,11), (3,6,9,12)."""
    return [tuple(p.vertex(k) for k in range(start, start + 12, 3)) for start in (1, 2, 3)]


def conconic_residual(p: Polygon12, tol: Tolerance = DEFAULT_TOLERANCE) -> Scalar:
    """Worst membership residual of the 12 vertices against a fitted conic."""
    _, res, _ = conconic(list(p.vertices), tol)
    return res


def regular_12gon(backend: str = FLOAT) -> Polygon12:
    if backend == EXACT:
        raise ValueError("the regular 12-gon has irrational vertices")
    pts = tuple(
        HPoint((math.cos(2 * math.pi * k / 12), math.sin(2 * math.pi * k / 12), 1.0))
        for k in range(12)
    )
    return Polygon12(pts)


def _conic_condition(conic: Conic) -> float:
    import numpy as np

    m = np.array([[float(v) for v in row] for row in conic.to_float().m])
    s = np.linalg.svd(m, compute_uv=False)
    return float(s[0] / s[-1]) if s[-1] else math.inf


def random_inscribed_12gon(
    seed: int, backend: str = FLOAT, min_gap: float = 0.12
) -> tuple[Conic, Polygon12, ProjMap]:
    """A random conic with 12 separated points on it, via a mapped circle."""
    rng = random.Random(seed)
    if backend == EXACT:
        one = Fraction(1)
        circle = Conic.unit_circle(EXACT)
        param = ConicParam(circle, HPoint((-one, Fraction(0), one)))
        ts = set()
        while len(ts) < 12:
            ts.add(Fraction(rng.randint(-60, 60), rng.randint(1, 12)))
        g = random_rational_map(rng)
        pts = [g.apply(param.point_at(t)) for t in sorted(ts)]
        return transform_conic(g, circle), Polygon12(tuple(pts)), g
    for _ in range(400):
        angles = sorted(rng.uniform(0, 2 * math.pi) for _ in range(12))
        gaps = [b - a for a, b in zip(angles, angles[1:])]
        gaps.append(2 * math.pi - (angles[-1] - angles[0]))
        if min(gaps) < min_gap:
            continue
        g = random_rational_map(rng, max_cond=25.0)
        gf = ProjMap([[float(v) for v in row] for row in g.matrix])
        circle = Conic.unit_circle(FLOAT)
        pts = [gf.apply(HPoint((math.cos(a), math.sin(a), 1.0))) for a in angles]
        conic = transform_conic(gf, circle)
        if _conic_condition(conic) > CONDITION_QUARANTINE:
            continue
        return conic, Polygon12(tuple(p.reduced() for p in pts)), gf
    raise DegenerateDiagonals("could not sample a well-separated 12-gon")


@dataclass
class PiExperimentReport:
    seed: int
    residuals: dict[str, Optional[float]] = field(default_factory=dict)
    conic_condition: float = 0.0
    ill_conditioned: bool = False
    degenerate: Optional[str] = None

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "residuals": self.residuals,
            "conic_condition": self.conic_condition,
            "ill_conditioned": self.ill_conditioned,
            "degenerate": self.degenerate,
        }


def run_experiment(trials: int, seed: int = 0, tol: Tolerance = DEFAULT_TOLERANCE) -> list[PiExperimentReport]:
    """Residuals of the first three iterates over random inscribed 12-gons.

    The first two iterates act as controls (their images are generically off
    any conic); the third-iterate residual is the headline statistic.
    Ill-conditioned trials are flagged and excluded from summaries.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    reports = []
    for k in range(trials):
        rep = PiExperimentReport(seed=seed + k)
        try:
            conic, poly, _ = random_inscribed_12gon(seed + k)
            rep.conic_condition = _conic_condition(conic)
            rep.ill_conditioned = rep.conic_condition > CONDITION_QUARANTINE
            base_res = conconic_residual(poly, tol)
            rep.residuals["pi0"] = float(base_res)
            current = poly
            for step in (1, 2, 3):
                current = diagonal_map(current)
                rep.residuals[f"pi{step}"] = float(conconic_residual(current, tol))
        except GeometryError as exc:
            rep.degenerate = f"{type(exc).__name__}: {exc}"
        reports.append(rep)
    return reports


def summarize_experiment(reports: Sequence[PiExperimentReport]) -> dict:
    good = [r for r in reports if not r.ill_conditioned and not r.degenerate]
    pi1 = [r.residuals["pi1"] for r in good]
    pi3 = [r.residuals["pi3"] for r in good]
    return {
        "trials": len(reports),
        "well_conditioned": len(good),
        "quarantined": sum(r.ill_conditioned for r in reports),
        "degenerate": sum(1 for r in reports if r.degenerate),
        "median_pi1": statistics.median(pi1) if pi1 else None,
        "max_pi3": max(pi3) if pi3 else None,
        "median_ratio": statistics.median(
            [a / b for a, b in zip(pi1, pi3) if b > 0]
        ) if pi3 and all(b > 0 for b in pi3) else math.inf,
        "status": "evidence",
    }
