"""The named-point configuration of a quadrilateral inscribed in a conic.

Given a nondegenerate conic and four vertices on it, this module constructs
every derived object the claim registry can reference: the diagonal-triangle
points M1..M3, tangent intersections N/P, tangency pairs U/V/W, the
tangent-side intersections T/X/Y, the cross families B..I, the tangent-octagon
points J and their secondary intersections K, the Z and R grids, and the six
derived conics fitted through them.

Exactly one vertex of the diagonal triangle always lies inside the conic, so
one of the tangency families U/V/W is never real: families are therefore built
lazily and carry a present/absent status with the error that blocked them.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .conics import Conic, ConicParam, fit_conic, on_conic, tangent_at, tangency_points_from, transform_conic
from .errors import (
    DegenerateQuadrilateral,
    GeometryError,
    InsidePoint,
    MissingFamily,
    NonSquareDiscriminant,
    NoUniqueConic,
    SamplerExhausted,
    VertexNotOnConic,
)
from .projective import HLine, HPoint, ProjMap, collinear, join, meet, proportional
from .scalars import DEFAULT_TOLERANCE, EXACT, FLOAT, Scalar, Tolerance

Y_RULES = ("diagonal", "printed", "t-side")
E1_RULES = ("printed-first", "printed-second")
LABELINGS = {
    "1234": (0, 1, 2, 3),
    "1324": (0, 2, 1, 3),
    "1243": (0, 1, 3, 2),
}

POINT_FAMILIES = {
    "A": ["A1", "A2", "A3", "A4"],
    "M": ["M1", "M2", "M3"],
    "NP": ["N1", "N2", "N3", "P1", "P2", "P3"],
    "T": ["T1", "T2", "T3", "T4"],
    "X": ["X1", "X2", "X3", "X4"],
    "Y": ["Y1", "Y2", "Y3", "Y4"],
    "U": ["U1", "U2"],
    "V": ["V1", "V2"],
    "W": ["W1", "W2"],
    "Z": ["Z1", "Z2", "Z3", "Z4"],
    "BI1": ["B1", "C1", "D1", "E1", "F1", "G1", "H1", "I1"],
    "BI2": ["B2", "C2", "D2", "E2", "F2", "G2", "H2", "I2"],
    "BI3": ["B3", "C3", "D3", "E3", "F3", "G3", "H3", "I3"],
    "J": [f"J{i}" for i in range(1, 9)],
    "K": [f"K{i}" for i in range(1, 9)],
    "R": [f"R{i}" for i in range(1, 17)],
}

CONIC_FAMILIES = {
    "C1": ["X1", "X2", "X3", "X4", "T1", "T2", "T3", "T4"],
    "C2": ["Y1", "Y2", "Y3", "Y4", "X1", "X3", "T2", "T4"],
    "C3": ["T1", "T3", "X2", "X4", "Y1", "Y2", "Y3", "Y4"],
    "D1": [f"K{i}" for i in range(1, 9)],
    "E": ["N1", "N2", "P1", "P2", "Z1", "Z2", "Z3", "Z4"],
    "F": [f"R{i}" for i in range(1, 9)],
}

_FAMILY_OF_POINT = {name: fam for fam, names in POINT_FAMILIES.items() for name in names}


def family_of_point(name: str) -> str:
    try:
        return _FAMILY_OF_POINT[name]
    except KeyError:
        raise MissingFamily(f"unknown point name {name!r}") from None


def _wrap4(i: int) -> int:
    return (i - 1) % 4 + 1


def _wrap8(i: int) -> int:
    return (i - 1) % 8 + 1


class QuadConfig:
    """Immutable-after-build registry of the named points and derived conics."""

    def __init__(
        self,
        conic: Conic,
        vertices: Sequence[HPoint],
        tol: Tolerance = DEFAULT_TOLERANCE,
        y_rule: str = "diagonal",
        e1_rule: str = "printed-first",
        fingerprint: str = "",
    ):
        if y_rule not in Y_RULES:
            raise ValueError(f"unknown Y rule {y_rule!r}")
        if e1_rule not in E1_RULES:
            raise ValueError(f"unknown E1 rule {e1_rule!r}")
        vs = [v.reduced() for v in vertices]
        if len(vs) != 4:
            raise DegenerateQuadrilateral("need exactly 4 vertices")
        conic = conic.reduced()
        if conic.is_degenerate():
            raise DegenerateQuadrilateral("conic is degenerate")
        for i, p in enumerate(vs):
            ok, res = on_conic(conic, p, tol)
            if not ok:
                raise VertexNotOnConic(f"A{i + 1} is off the conic (residual {res})")
        for i in range(4):
            for j in range(i + 1, 4):
                if proportional(vs[i], vs[j], tol):
                    raise DegenerateQuadrilateral(f"A{i + 1} coincides with A{j + 1}")
        for skip in range(4):
            triple = [vs[k] for k in range(4) if k != skip]
            ok, _ = collinear(triple, tol)
            if ok:
                raise DegenerateQuadrilateral("three vertices are collinear")
        self.conic = conic
        self.tol = tol
        self.y_rule = y_rule
        self.e1_rule = e1_rule
        self.fingerprint = fingerprint
        self.backend = vs[0].backend
        self._points: dict[str, HPoint] = {f"A{i + 1}": p for i, p in enumerate(vs)}
        self._conics: dict[str, Conic] = {"C": conic}
        self._absent: dict[str, str] = {}
        self._built: set[str] = {"A"}
        self._lines: dict[str, HLine] = {}

    # -- naming ------------------------------------------------------------

    def point(self, name: str) -> HPoint:
        fam = family_of_point(name)
        self.ensure_family(fam)
        if fam in self._absent:
            raise MissingFamily(f"{name} unavailable: {self._absent[fam]}")
        return self._points[name]

    def has_point(self, name: str) -> bool:
        fam = family_of_point(name)
        self.ensure_family(fam)
        return fam not in self._absent

    def conic_named(self, key: str) -> Conic:
        if key != "C":
            self.ensure_family(key)
            if key in self._absent:
                raise MissingFamily(f"conic {key} unavailable: {self._absent[key]}")
        return self._conics[key]

    def has_conic(self, key: str) -> bool:
        if key == "C":
            return True
        self.ensure_family(key)
        return key not in self._absent

    def absence_cause(self, fam: str) -> Optional[str]:
        self.ensure_family(fam)
        return self._absent.get(fam)

    def side(self, i: int, j: int) -> HLine:
        key = f"s{min(i, j)}{max(i, j)}"
        if key not in self._lines:
            self._lines[key] = join(self._points[f"A{i}"], self._points[f"A{j}"])
        return self._lines[key]

    def tangent(self, i: int) -> HLine:
        key = f"t{i}"
        if key not in self._lines:
            self._lines[key] = tangent_at(self.conic, self._points[f"A{i}"], self.tol)
        return self._lines[key]

    # -- family construction ------------------------------------------------

    def ensure_family(self, fam: str) -> None:
        if fam in self._built:
            return
        builder = getattr(self, f"_build_{fam.lower()}", None)
        if builder is None:
            raise MissingFamily(f"unknown family {fam!r}")
        deps = _FAMILY_DEPS.get(fam, ())
        blocked = None
        for dep in deps:
            self.ensure_family(dep)
            if dep in self._absent:
                blocked = f"requires {dep}: {self._absent[dep]}"
                break
        self._built.add(fam)
        if blocked:
            self._absent[fam] = blocked
            return
        try:
            builder()
        except (InsidePoint, NonSquareDiscriminant, NoUniqueConic, GeometryError) as exc:
            self._absent[fam] = f"{type(exc).__name__}: {exc}"

    def _set(self, name: str, p: HPoint) -> None:
        self._points[name] = p.reduced()

    def _build_m(self) -> None:
        self._set("M1", meet(self.side(1, 2), self.side(3, 4)))
        self._set("M2", meet(self.side(2, 3), self.side(4, 1)))
        self._set("M3", meet(self.side(1, 3), self.side(2, 4)))

    def _build_np(self) -> None:
        t = [None] + [self.tangent(i) for i in range(1, 5)]
        self._set("N3", meet(t[1], t[3]))
        self._set("P3", meet(t[2], t[4]))
        self._set("N2", meet(t[1], t[4]))
        self._set("P2", meet(t[2], t[3]))
        self._set("N1", meet(t[1], t[2]))
        self._set("P1", meet(t[3], t[4]))

    def _build_t(self) -> None:
        for i in range(1, 5):
            side = self.side(_wrap4(i + 2), _wrap4(i + 3))
            self._set(f"T{i}", meet(side, self.tangent(i)))

    def _build_x(self) -> None:
        for i in range(1, 5):
            side = self.side(_wrap4(i + 1), _wrap4(i + 2))
            self._set(f"X{i}", meet(side, self.tangent(i)))

    def _build_y(self) -> None:
        if self.y_rule == "diagonal":
            # tangent at A_i meets the diagonal avoiding A_i
            diag = {1: self.side(2, 4), 2: self.side(1, 3), 3: self.side(2, 4), 4: self.side(1, 3)}
            for i in range(1, 5):
                self._set(f"Y{i}", meet(self.tangent(i), diag[i]))
        elif self.y_rule == "printed":
            sides = {1: self.side(2, 3), 2: self.side(1, 4), 3: self.side(1, 4), 4: self.side(2, 3)}
            for i in range(1, 5):
                self._set(f"Y{i}", meet(self.tangent(i), sides[i]))
        else:  # "t-side": the remaining side avoiding A_i, duplicating T_i
            for i in range(1, 5):
                side = self.side(_wrap4(i + 2), _wrap4(i + 3))
                self._set(f"Y{i}", meet(self.tangent(i), side))

    def _tangency_pair(self, m_name: str) -> tuple[HPoint, HPoint]:
        pts = tangency_points_from(self.conic, self._points[m_name], self.tol)
        return pts[0], pts[1]

    def _build_u(self) -> None:
        u1, u2 = self._tangency_pair("M1")
        self._set("U1", u1)
        self._set("U2", u2)

    def _build_v(self) -> None:
        v1, v2 = self._tangency_pair("M2")
        self._set("V1", v1)
        self._set("V2", v2)

    def _build_w(self) -> None:
        w1, w2 = self._tangency_pair("M3")
        self._set("W1", w1)
        self._set("W2", w2)

    def _build_z(self) -> None:
        p = self._points
        mu1 = join(p["M1"], p["U1"])
        mu2 = join(p["M1"], p["U2"])
        mv1 = join(p["M2"], p["V1"])
        mv2 = join(p["M2"], p["V2"])
        self._set("Z1", meet(mu1, mv1))
        self._set("Z2", meet(mu1, mv2))
        self._set("Z3", meet(mu2, mv2))
        self._set("Z4", meet(mu2, mv1))

    def _cross_pair(self, a: str, s: str, b: str, t: str) -> HPoint:
        p = self._points
        return meet(join(p[a], p[s]), join(p[b], p[t]))

    def _build_bi1(self) -> None:
        cp = self._cross_pair
        self._set("B1", cp("A2", "V1", "A1", "V2"))
        self._set("C1", cp("A1", "V1", "A2", "V2"))
        self._set("D1", cp("A3", "V1", "A4", "V2"))
        first = cp("A4", "V1", "A3", "V2")
        second = cp("A2", "W1", "A1", "W2")
        if self.e1_rule == "printed-first":
            self._set("E1", first)
            self._set("I1", second)
        else:
            self._set("E1", second)
            self._set("I1", first)
        self._set("F1", cp("A1", "W1", "A2", "W2"))
        self._set("G1", cp("A3", "W1", "A4", "W2"))
        self._set("H1", cp("A4", "W1", "A3", "W2"))

    def _build_bi2(self) -> None:
        cp = self._cross_pair
        self._set("D2", cp("A4", "U1", "A1", "U2"))
        self._set("E2", cp("A1", "U1", "A4", "U2"))
        self._set("B2", cp("A3", "U1", "A2", "U2"))
        self._set("C2", cp("A2", "U1", "A3", "U2"))
        self._set("H2", cp("A4", "W1", "A1", "W2"))
        self._set("I2", cp("A4", "W2", "A1", "W1"))
        self._set("F2", cp("A2", "W1", "A3", "W2"))
        self._set("G2", cp("A2", "W2", "A3", "W1"))

    def _build_bi3(self) -> None:
        cp = self._cross_pair
        self._set("B3", cp("A4", "V1", "A2", "V2"))
        self._set("C3", cp("A4", "V2", "A2", "V1"))
        self._set("D3", cp("A1", "V1", "A3", "V2"))
        self._set("E3", cp("A1", "V2", "A3", "V1"))
        self._set("F3", cp("A4", "U1", "A2", "U2"))
        self._set("H3", cp("A4", "U2", "A2", "U1"))
        self._set("G3", cp("A1", "U1", "A3", "U2"))
        self._set("I3", cp("A1", "U2", "A3", "U1"))

    def _fit_named_conic(self, key: str) -> None:
        names = CONIC_FAMILIES[key]
        pts = [self._points[n] for n in names]
        witness, _ = fit_conic(pts[:5])
        worst = Fraction(0) if self.backend == EXACT else 0.0
        for p in pts[5:]:
            ok, res = on_conic(witness, p, self.tol)
            worst = max(worst, res)
            if not ok:
                raise NoUniqueConic(
                    f"{key}: point off the fitted conic (residual {res}); "
                    "configuration too degenerate"
                )
        self._conics[key] = witness.reduced()

    def _build_c1(self) -> None:
        self._fit_named_conic("C1")

    def _build_c2(self) -> None:
        self._fit_named_conic("C2")

    def _build_c3(self) -> None:
        self._fit_named_conic("C3")

    def _build_d1(self) -> None:
        self._fit_named_conic("D1")

    def _build_e(self) -> None:
        self._fit_named_conic("E")

    def _build_f(self) -> None:
        self._fit_named_conic("F")

    def _build_j(self) -> None:
        c1 = self._conics["C1"]
        tx = {i: tangent_at(c1, self._points[f"X{i}"], self.tol) for i in range(1, 5)}
        tt = {i: tangent_at(c1, self._points[f"T{i}"], self.tol) for i in range(1, 5)}
        for i in range(1, 5):
            self._set(f"J{2 * i - 1}", meet(tx[_wrap4(i - 2)], tt[i]))
            self._set(f"J{2 * i}", meet(tx[_wrap4(i - 1)], tt[i]))

    def _build_k(self) -> None:
        p = self._points
        for i in range(1, 9):
            l1 = join(p[f"J{i}"], p[f"J{_wrap8(i + 1)}"])
            l2 = join(p[f"J{_wrap8(i + 2)}"], p[f"J{_wrap8(i + 3)}"])
            self._set(f"K{i}", meet(l1, l2))

    def _build_r(self) -> None:
        p = self._points
        z_lines = {
            "Z12": join(p["Z1"], p["Z2"]),
            "Z23": join(p["Z2"], p["Z3"]),
            "Z34": join(p["Z3"], p["Z4"]),
            "Z14": join(p["Z1"], p["Z4"]),
        }
        np_lines = {
            "NN": join(p["N1"], p["N2"]),
            "NP": join(p["N1"], p["P2"]),
            "PP": join(p["P1"], p["P2"]),
            "PN": join(p["P1"], p["N2"]),
        }
        table = [
            ("R1", "Z12", "NN"), ("R2", "Z12", "NP"), ("R3", "Z23", "NP"),
            ("R4", "Z23", "PP"), ("R5", "Z34", "PP"), ("R6", "Z34", "PN"),
            ("R7", "Z14", "PN"), ("R8", "Z14", "NN"), ("R9", "Z12", "PP"),
            ("R10", "Z34", "NP"), ("R11", "Z23", "PN"), ("R12", "Z14", "PP"),
            ("R13", "Z34", "NN"), ("R14", "Z12", "PN"), ("R15", "Z14", "NP"),
            ("R16", "Z23", "NN"),
        ]
        for name, zl, nl in table:
            self._set(name, meet(z_lines[zl], np_lines[nl]))

    # -- reporting -----------------------------------------------------------

    def families(self) -> dict[str, str]:
        """Status of every family: "present" or the blocking cause."""
        out = {}
        for fam in list(POINT_FAMILIES) + list(CONIC_FAMILIES):
            self.ensure_family(fam)
            out[fam] = self._absent.get(fam, "present")
        return out

    def to_json(self) -> dict:
        from .scalars import scalar_to_json

        self.families()
        points = {}
        for fam, names in POINT_FAMILIES.items():
            if fam in self._absent:
                continue
            for n in names:
                points[n] = self._points[n].to_json()
        conics = {"C": self.conic.to_json()["conic"]}
        for key in CONIC_FAMILIES:
            if key not in self._absent:
                conics[key] = self._conics[key].to_json()["conic"]
        absent = {fam: cause for fam, cause in sorted(self._absent.items())}
        return {
            "backend": self.backend,
            "epsilon": self.tol.epsilon,
            "fingerprint": self.fingerprint,
            "points": dict(sorted(points.items())),
            "conics": dict(sorted(conics.items())),
            "absent": absent,
        }


_FAMILY_DEPS = {
    "M": ("A",),
    "NP": ("A",),
    "T": ("A",),
    "X": ("A",),
    "Y": ("A",),
    "U": ("M",),
    "V": ("M",),
    "W": ("M",),
    "Z": ("M", "U", "V"),
    "BI1": ("A", "V", "W"),
    "BI2": ("A", "U", "W"),
    "BI3": ("A", "U", "V"),
    "C1": ("T", "X"),
    "C2": ("T", "X", "Y"),
    "C3": ("T", "X", "Y"),
    "J": ("C1",),
    "K": ("J",),
    "D1": ("K",),
    "E": ("NP", "Z"),
    "R": ("NP", "Z"),
    "F": ("R",),
}


def build(
    conic: Conic,
    vertices: Sequence[HPoint],
    tol: Tolerance = DEFAULT_TOLERANCE,
    y_rule: str = "diagonal",
    e1_rule: str = "printed-first",
    fingerprint: str = "",
) -> QuadConfig:
    """Validate the inputs and return a lazy configuration over them."""
    return QuadConfig(conic, vertices, tol, y_rule, e1_rule, fingerprint)


def polar_triangle_lines(cfg: QuadConfig) -> tuple[HLine, HLine, HLine]:
    """The sides of the diagonal triangle, certified as polars of M1, M2, M3.

    m1 joins {M2, M3, N1, P1}, m2 joins {M3, M1, N2, P2}, m3 joins
    {M1, M2, N3, P3}; each is checked against the polar of the matching M.
    """
    from .conics import polar

    cfg.ensure_family("M")
    cfg.ensure_family("NP")
    if cfg.absence_cause("M") or cfg.absence_cause("NP"):
        raise MissingFamily("M or N/P family unavailable")
    spans = {
        "m1": ("M2", "M3"),
        "m2": ("M3", "M1"),
        "m3": ("M1", "M2"),
    }
    out = []
    for key, (a, b) in spans.items():
        line = join(cfg.point(a), cfg.point(b))
        pol = polar(cfg.conic, cfg.point(f"M{key[1]}"))
        if not proportional(line, pol, cfg.tol):
            raise MissingFamily(f"{key} does not match the polar of M{key[1]}")
        out.append(line)
    return tuple(out)


# -- samplers ----------------------------------------------------------------


@dataclass(frozen=True)
class SamplerSpec:
    """Reproducible recipe for a random configuration.

    perfect_square selects the exact sampler: a square-of-tangency frame whose
    conic has Pythagorean axis ratios (so both real tangency families come out
    rational) pushed through a random well-conditioned rational map.
    """

    seed: int
    backend: str = FLOAT
    conic_source: str = "mapped-circle"  # unit-circle | mapped-circle | pencil
    params: Optional[tuple] = None
    perfect_square: bool = False
    labeling: str = "1234"
    lam: Optional[Scalar] = None
    y_rule: str = "diagonal"
    e1_rule: str = "printed-first"
    max_retries: int = 200
    epsilon: float = 1e-9

    def fingerprint(self) -> str:
        return (
            f"seed={self.seed};backend={self.backend};source={self.conic_source};"
            f"psq={int(self.perfect_square)};labeling={self.labeling};y={self.y_rule}"
        )


def pythagorean_ratio(rng: random.Random) -> Fraction:
    """A random leg/hypotenuse ratio a/c with a^2 + b^2 = c^2."""
    while True:
        m = rng.randint(2, 12)
        n = rng.randint(1, m - 1)
        if (m - n) % 2 == 0 or math.gcd(m, n) != 1:
            continue
        a, b, c = m * m - n * n, 2 * m * n, m * m + n * n
        return Fraction(rng.choice((a, b)), c)


def random_rational_map(rng: random.Random, max_cond: float = 60.0, max_entry: int = 4) -> ProjMap:
    """Random integer-matrix projective map with a bounded condition number."""
    for _ in range(500):
        rows = [[Fraction(rng.randint(-max_entry, max_entry)) for _ in range(3)] for _ in range(3)]
        fm = np.array([[float(v) for v in r] for r in rows])
        det = np.linalg.det(fm)
        if abs(det) < 0.5:
            continue
        if np.linalg.cond(fm) > max_cond:
            continue
        return ProjMap(rows)
    raise SamplerExhausted("could not draw a well-conditioned rational map")


def square_frame(lam: Scalar) -> tuple[Conic, list[HPoint]]:
    """Conic lam*x^2 + (1-lam)*y^2 = 1 with its inscribed unit square."""
    if isinstance(lam, Fraction):
        one, zero = Fraction(1), Fraction(0)
    else:
        one, zero = 1.0, 0.0
        lam = float(lam)
    conic = Conic(((lam, zero, zero), (zero, one - lam, zero), (zero, zero, -one)))
    quad = [
        HPoint((one, one, one)),
        HPoint((-one, one, one)),
        HPoint((-one, -one, one)),
        HPoint((one, -one, one)),
    ]
    return conic, quad


def _apply_labeling(vertices: list[HPoint], labeling: str) -> list[HPoint]:
    try:
        perm = LABELINGS[labeling]
    except KeyError:
        raise ValueError(f"unknown labeling {labeling!r}") from None
    return [vertices[i] for i in perm]


def _circle_params_float(rng: random.Random, min_gap: float = 0.35) -> list[float]:
    """Four sorted half-angle parameters with angular separation on the circle."""
    for _ in range(1000):
        angles = sorted(rng.uniform(-math.pi + 0.2, math.pi - 0.2) for _ in range(4))
        gaps = [b - a for a, b in zip(angles, angles[1:])]
        gaps.append(2 * math.pi - (angles[-1] - angles[0]))
        if min(gaps) >= min_gap:
            return [math.tan(a / 2) for a in angles]
    raise SamplerExhausted("could not separate circle parameters")


def sample(spec: SamplerSpec) -> QuadConfig:
    """Draw the reproducible configuration described by the spec."""
    rng = random.Random(spec.seed)
    tol = Tolerance(epsilon=spec.epsilon)
    kw = dict(
        tol=tol, y_rule=spec.y_rule, e1_rule=spec.e1_rule, fingerprint=spec.fingerprint()
    )

    if spec.perfect_square or spec.backend == EXACT:
        lam = spec.lam if spec.lam is not None else pythagorean_ratio(rng) ** 2
        conic, quad = square_frame(Fraction(lam))
        last_exc: Exception | None = None
        for _ in range(max(1, spec.max_retries)):
            g = random_rational_map(rng)
            mapped = [g.apply(p) for p in quad]
            try:
                cfg = build(transform_conic(g, conic), _apply_labeling(mapped, spec.labeling), **kw)
                cfg.ensure_family("M")
                return cfg
            except GeometryError as exc:  # e.g. mapped vertices collide
                last_exc = exc
        raise SamplerExhausted(f"exact sampler failed: {last_exc}")

    if spec.conic_source == "pencil":
        lam = float(spec.lam) if spec.lam is not None else rng.uniform(0.15, 0.85)
        conic, quad = square_frame(lam)
        return build(conic, _apply_labeling(quad, spec.labeling), **kw)

    circle = Conic.unit_circle(FLOAT)
    base = HPoint((-1.0, 0.0, 1.0))
    param = ConicParam(circle, base)
    ts = list(spec.params) if spec.params is not None else _circle_params_float(rng)
    if len(ts) != 4:
        raise DegenerateQuadrilateral("need 4 vertex parameters")
    quad = [param.point_at(float(t)) for t in ts]
    if spec.conic_source == "unit-circle":
        return build(circle, _apply_labeling(quad, spec.labeling), **kw)
    if spec.conic_source != "mapped-circle":
        raise ValueError(f"unknown conic source {spec.conic_source!r}")
    for _ in range(max(1, spec.max_retries)):
        g = random_rational_map(rng, max_cond=20.0)
        gf = ProjMap([[float(v) for v in row] for row in g.matrix])
        mapped = [gf.apply(p) for p in quad]
        try:
            return build(transform_conic(gf, circle), _apply_labeling(mapped, spec.labeling), **kw)
        except GeometryError:
            continue
    raise SamplerExhausted("float sampler failed to build a configuration")
