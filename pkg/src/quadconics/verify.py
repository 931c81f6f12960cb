"""Data-driven claim verification against quadrilateral configurations.

Claims live in a versioned JSON registry (data/claims.json); each record is an
incidence assertion over the configuration's name space.  Running a claim
yields a VerificationReport with a status, a normalized residual and a fitted
witness.  On the exact backend a claim holds iff its residual is literally
zero; failures are data, not exceptions.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Optional, Sequence

from .conics import conconic
from .errors import GeometryError, InfiniteVertex, MissingFamily, NotACircle, UnknownSubject
from .projective import HPoint, collinear, collinear_witness, concurrent, incident, join, meet
from .quadconfig import (
    LABELINGS,
    QuadConfig,
    SamplerSpec,
    family_of_point,
    sample,
)
from .scalars import EXACT, Scalar, Tolerance, scalar_to_json

REGISTRY_RESOURCE = "claims.json"
RESOLUTIONS_RESOURCE = "erratum_resolutions.json"


@dataclass(frozen=True)
class Claim:
    id: str
    kind: str
    statement: str
    provenance: str
    points: tuple = ()
    lines: tuple = ()
    point: Optional[str] = None
    line: Optional[tuple] = None
    note: Optional[str] = None
    superseded_by: Optional[str] = None

    @staticmethod
    def from_json(rec: dict) -> "Claim":
        def freeze(x):
            if isinstance(x, list):
                return tuple(freeze(v) for v in x)
            if isinstance(x, dict):
                return tuple(sorted((k, freeze(v)) for k, v in x.items()))
            return x

        return Claim(
            id=rec["id"],
            kind=rec["kind"],
            statement=rec["statement"],
            provenance=rec["provenance"],
            points=freeze(rec.get("points", [])),
            lines=freeze(rec.get("lines", [])),
            point=rec.get("point"),
            line=tuple(rec["line"]) if "line" in rec else None,
            note=rec.get("note"),
            superseded_by=rec.get("superseded_by"),
        )


@dataclass(frozen=True)
class Registry:
    version: str
    claims: tuple[Claim, ...]

    def by_id(self, claim_id: str) -> Claim:
        for c in self.claims:
            if c.id == claim_id:
                return c
        raise UnknownSubject(f"no claim {claim_id!r} in registry {self.version}")

    def select(self, ids: Optional[Sequence[str]] = None, include_superseded: bool = False):
        out = []
        for c in self.claims:
            if ids is not None and not any(c.id == i or c.id.startswith(i + "/") for i in ids):
                continue
            if c.superseded_by and not include_superseded and ids is None:
                continue
            out.append(c)
        return out


def load_registry() -> Registry:
    text = resources.files("quadconics.data").joinpath(REGISTRY_RESOURCE).read_text()
    doc = json.loads(text)
    return Registry(version=doc["version"], claims=tuple(Claim.from_json(r) for r in doc["claims"]))


def load_resolutions() -> dict:
    text = resources.files("quadconics.data").joinpath(RESOLUTIONS_RESOURCE).read_text()
    return json.loads(text)


@dataclass
class VerificationReport:
    claim_id: str
    status: str  # holds | fails | skipped
    residual: Optional[Scalar] = None
    cause: Optional[str] = None
    witness: Optional[dict] = None
    provenance: str = "as-published"
    fingerprint: str = ""

    def to_json(self) -> dict:
        return {
            "id": self.claim_id,
            "status": self.status,
            "residual": None if self.residual is None else scalar_to_json(self.residual),
            "cause": self.cause,
            "witness": self.witness,
            "provenance": self.provenance,
            "fingerprint": self.fingerprint,
        }


class PerturbedView:
    """Copy-on-read view of a configuration with selected points replaced.

    Used by the negative controls: nudging one constructed point must flip at
    least one claim that depends on it.
    """

    def __init__(self, cfg: QuadConfig, overrides: dict[str, HPoint]):
        self._cfg = cfg
        self._overrides = dict(overrides)
        self.tol = cfg.tol
        self.backend = cfg.backend
        self.conic = cfg.conic
        self.fingerprint = cfg.fingerprint + ";perturbed=" + ",".join(sorted(overrides))

    def point(self, name: str) -> HPoint:
        if name in self._overrides:
            return self._overrides[name]
        return self._cfg.point(name)

    def has_point(self, name: str) -> bool:
        return name in self._overrides or self._cfg.has_point(name)

    def conic_named(self, key: str):
        return self._cfg.conic_named(key)

    def has_conic(self, key: str) -> bool:
        return self._cfg.has_conic(key)


def perturb_point(cfg: QuadConfig, name: str, rel: float = 1e-3) -> PerturbedView:
    """Float view of cfg with one point moved by a relative offset."""
    p = cfg.point(name)
    u = list(p.unit())
    k = max(range(3), key=lambda i: abs(u[i]))
    u[k] *= 1.0 + rel
    return PerturbedView(cfg, {name: HPoint(tuple(u))})


def _resolve_point(cfg, spec) -> HPoint:
    if isinstance(spec, str):
        family_of_point(spec)  # raises UnknownSubject-adjacent on bad names
        return cfg.point(spec)
    # frozen {"meet": [[a,b],[c,d]]} records
    entries = dict(spec)
    (l1, l2) = entries["meet"]
    return meet(
        join(cfg.point(l1[0]), cfg.point(l1[1])),
        join(cfg.point(l2[0]), cfg.point(l2[1])),
    )


def _subject_names(claim: Claim) -> list[str]:
    names: list[str] = []
    for spec in claim.points:
        if isinstance(spec, str):
            names.append(spec)
        else:
            for _, lines in spec:
                for pair in lines:
                    names.extend(pair)
    for pair in claim.lines:
        names.extend(pair)
    if claim.point:
        names.append(claim.point)
    if claim.line:
        names.extend(claim.line)
    return names


def run_claim(claim: Claim, cfg, tol: Optional[Tolerance] = None) -> VerificationReport:
    """Execute one claim; missing subjects yield a skipped report, not an error."""
    tol = tol or cfg.tol
    report = VerificationReport(
        claim_id=claim.id, status="skipped", provenance=claim.provenance,
        fingerprint=getattr(cfg, "fingerprint", ""),
    )
    names = _subject_names(claim)
    for n in names:
        try:
            family_of_point(n)
        except MissingFamily:
            raise UnknownSubject(f"claim {claim.id} references unknown name {n!r}")
    try:
        missing = [n for n in names if not cfg.has_point(n)]
    except GeometryError as exc:
        report.cause = f"{type(exc).__name__}: {exc}"
        return report
    if missing:
        causes = set()
        for n in missing:
            fam = family_of_point(n)
            causes.add(f"{fam}: {cfg.absence_cause(fam) if hasattr(cfg, 'absence_cause') else 'absent'}")
        report.cause = "; ".join(sorted(causes))
        return report

    try:
        if claim.kind == "collinear":
            pts = [_resolve_point(cfg, s) for s in claim.points]
            ok, res = collinear(pts, tol)
            report.witness = collinear_witness(pts).to_json() if ok else None
        elif claim.kind == "concurrent":
            lines = [join(cfg.point(a), cfg.point(b)) for a, b in claim.lines]
            ok, res = concurrent(lines, tol)
            report.witness = meet(lines[0], lines[1]).to_json() if ok else None
        elif claim.kind == "conconic":
            pts = [cfg.point(n) for n in claim.points]
            ok, res, witness = conconic(pts, tol)
            report.witness = witness.to_json()
        elif claim.kind in ("lines-through-point", "point-on-line"):
            target = cfg.point(claim.point)
            pairs = claim.lines if claim.kind == "lines-through-point" else (claim.line,)
            res = Fraction(0) if cfg.backend == EXACT else 0.0
            ok = True
            for a, b in pairs:
                hit, r = incident(target, join(cfg.point(a), cfg.point(b)), tol)
                ok = ok and hit
                res = max(res, r)
            report.witness = target.to_json()
        elif claim.kind == "orthocenter":
            return brocard_check(cfg, tol)
        elif claim.kind == "closure":
            return poristic_invariants_check(cfg, tol)
        else:
            raise UnknownSubject(f"claim {claim.id} has unknown kind {claim.kind!r}")
    except GeometryError as exc:
        report.cause = f"{type(exc).__name__}: {exc}"
        return report
    report.status = "holds" if ok else "fails"
    report.residual = res
    return report


def run_all(
    cfg,
    tol: Optional[Tolerance] = None,
    registry: Optional[Registry] = None,
    claim_ids: Optional[Sequence[str]] = None,
    include_superseded: bool = False,
) -> list[VerificationReport]:
    registry = registry or load_registry()
    return [
        run_claim(c, cfg, tol)
        for c in registry.select(claim_ids, include_superseded=include_superseded)
    ]


def summarize(reports: Sequence[VerificationReport]) -> dict:
    failed = [r.claim_id for r in reports if r.status == "fails"]
    worst = 0.0
    for r in reports:
        if r.residual is not None:
            worst = max(worst, float(r.residual))
    return {
        "holds": sum(r.status == "holds" for r in reports),
        "fails": len(failed),
        "skipped": sum(r.status == "skipped" for r in reports),
        "failed_ids": failed,
        "max_residual": worst,
    }


def exit_code(reports: Sequence[VerificationReport]) -> int:
    return 1 if any(r.status == "fails" for r in reports) else 0


# --- the circle special case -------------------------------------------------


def _circle_center(cfg) -> HPoint:
    m = cfg.conic.m
    backend = cfg.conic.backend
    if backend == EXACT:
        if m[0][0] == 0 or m[0][1] != 0 or m[0][0] != m[1][1]:
            raise NotACircle("conic matrix is not a circle")
    else:
        scale = cfg.conic.frobenius()
        if abs(float(m[0][1])) > 1e-9 * scale or abs(float(m[0][0] - m[1][1])) > 1e-9 * scale \
                or abs(float(m[0][0])) < 1e-12 * scale:
            raise NotACircle("conic matrix is not a circle")
    return HPoint((-m[0][2], -m[1][2], m[0][0]))


def brocard_check(cfg, tol: Optional[Tolerance] = None) -> VerificationReport:
    """Altitude conditions: the circle center against the diagonal triangle.

    Euclidean perpendicularity only makes sense in the affine chart, so
    configurations with a diagonal-triangle vertex at infinity are skipped.
    """
    tol = tol or cfg.tol
    report = VerificationReport(
        claim_id="thm-2.1/brocard", status="skipped", provenance="as-published",
        fingerprint=getattr(cfg, "fingerprint", ""),
    )
    try:
        center = _circle_center(cfg)
        ms = [cfg.point(f"M{i}") for i in (1, 2, 3)]
    except (NotACircle, GeometryError) as exc:
        report.cause = f"{type(exc).__name__}: {exc}"
        return report
    pts = [center] + ms
    for p in pts:
        z = p.coords[2]
        if (cfg.backend == EXACT and z == 0) or (cfg.backend != EXACT and abs(p.unit()[2]) < 1e-12):
            report.cause = "InfiniteVertex: diagonal-triangle vertex at infinity"
            return report
    o = center.affine() if cfg.backend != EXACT else _exact_affine(center)
    affs = [m.affine() if cfg.backend != EXACT else _exact_affine(m) for m in ms]
    res = Fraction(0) if cfg.backend == EXACT else 0.0
    ok = True
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        u = (o[0] - affs[i][0], o[1] - affs[i][1])
        v = (affs[j][0] - affs[k][0], affs[j][1] - affs[k][1])
        dot = u[0] * v[0] + u[1] * v[1]
        if cfg.backend == EXACT:
            ok = ok and dot == 0
            res = max(res, abs(dot))
        else:
            nu = (u[0] ** 2 + u[1] ** 2) ** 0.5
            nv = (v[0] ** 2 + v[1] ** 2) ** 0.5
            if nu == 0 or nv == 0:
                report.cause = "InfiniteVertex: degenerate altitude"
                return report
            r = abs(dot) / (nu * nv)
            ok = ok and r <= tol.epsilon
            res = max(res, r)
    report.status = "holds" if ok else "fails"
    report.residual = res
    report.witness = center.to_json()
    return report


def _exact_affine(p: HPoint) -> tuple:
    x, y, z = p.coords
    return (Fraction(x) / z, Fraction(y) / z)


def poristic_invariants_check(cfg, tol: Optional[Tolerance] = None) -> VerificationReport:
    """Shared diagonal point / opposite-side line across poristic quadrilaterals.

    The Z quadrilateral is inscribed in the derived conic E and its sides are
    tangent to the base conic, so (E, C) is a closure pair; the invariants are
    checked over the Z orbit (exactly) and over sampled starts (float).
    """
    from .poncelet import poristic_invariants

    tol = tol or cfg.tol
    report = VerificationReport(
        claim_id="sec-5/poristic-invariants", status="skipped", provenance="as-published",
        fingerprint=getattr(cfg, "fingerprint", ""),
    )
    try:
        if not all(cfg.has_point(f"Z{i}") for i in range(1, 5)) or not cfg.has_conic("E"):
            report.cause = "Z family or conic E unavailable"
            return report
        ok, res, diag_point = poristic_invariants(cfg, tol)
    except GeometryError as exc:
        report.cause = f"{type(exc).__name__}: {exc}"
        return report
    report.status = "holds" if ok else "fails"
    report.residual = res
    report.witness = diag_point.to_json()
    return report


# --- erratum oracle ----------------------------------------------------------

Y_DEPENDENT = [
    "prop-3.1/t01", "prop-3.1/t02", "prop-3.1/t05", "prop-3.1/t06",
    "prop-3.1/t13", "prop-3.1/t14", "prop-3.1/t15", "prop-3.1/t16",
    "prop-3.2/c1", "prop-3.2/c2", "prop-3.2/c3", "prop-3.2/c4",
    "prop-3.2/c5", "prop-3.2/c6", "lemma-4.1/c2", "lemma-4.1/c3",
]


def _distinct_count(cfg, names: Sequence[str]) -> int:
    from .projective import proportional

    pts = [cfg.point(n) for n in names]
    reps: list[HPoint] = []
    for p in pts:
        if not any(proportional(p, q, cfg.tol) for q in reps):
            reps.append(p)
    return len(reps)


def resolve_errata(seeds: Sequence[int], tol: Optional[Tolerance] = None) -> dict:
    """Adjudicate the ambiguous labels across many random configurations.

    For each ambiguity every candidate reading is evaluated on all seeds; a
    candidate survives when every dependent claim holds and the required
    point counts are met.  Documented deterministic tie-breaks resolve
    label-only ambiguities where several candidates are geometrically equal.
    """
    seeds = list(seeds)
    if len(seeds) < 20:
        raise ValueError("erratum resolution needs at least 20 seeds")
    tol = tol or Tolerance(epsilon=1e-8)
    registry = load_registry()
    table: dict = {"registry_version": registry.version, "seeds": seeds, "ambiguities": {}}

    # Y family: which line does the tangent at A_i cross?
    y_stats = {}
    for rule in ("diagonal", "printed", "t-side"):
        ok_all = True
        checked = 0
        for seed in seeds:
            cfg = sample(SamplerSpec(seed=seed, y_rule=rule, epsilon=tol.epsilon))
            for cid in Y_DEPENDENT:
                rep = run_claim(registry.by_id(cid), cfg, tol)
                checked += 1
                if rep.status != "holds":
                    ok_all = False
            if _distinct_count(cfg, [str(s) for s in registry.by_id("lemma-4.1/c2").points]) != 8:
                ok_all = False
            if _distinct_count(cfg, [str(s) for s in registry.by_id("lemma-4.1/c3").points]) != 8:
                ok_all = False
            if not ok_all:
                break
        y_stats[rule] = {"all_claims_hold": ok_all, "claims_checked": checked}
    y_survivors = [r for r, s in y_stats.items() if s["all_claims_hold"]]
    table["ambiguities"]["Y-family"] = {
        "question": "the printed Y definitions duplicate X/T points; which reading is meant",
        "candidates": y_stats,
        "dependent_claims": Y_DEPENDENT,
        "survivors": y_survivors,
        "resolution": y_survivors[0] if len(y_survivors) == 1 else "unresolved",
    }

    # E1 double definition: both printed formulas land on the same line, so the
    # claims cannot separate them; the tie-break keeps the first printing.
    e1_stats = {}
    for rule in ("printed-first", "printed-second"):
        ok_all = True
        for seed in seeds:
            cfg = sample(SamplerSpec(seed=seed, labeling="1324", e1_rule=rule, epsilon=tol.epsilon))
            rep = run_claim(registry.by_id("prop-3.3/m1"), cfg, tol)
            if rep.status != "holds":
                ok_all = False
                break
            if _distinct_count(cfg, [f"{c}1" for c in "BCDEFGHI"]) != 8:
                ok_all = False
                break
        e1_stats[rule] = {"all_claims_hold": ok_all}
    e1_survivors = [r for r, s in e1_stats.items() if s["all_claims_hold"]]
    resolution = "unresolved"
    tie_break = None
    if len(e1_survivors) == 1:
        resolution = e1_survivors[0]
    elif len(e1_survivors) > 1:
        tie_break = ("label-only ambiguity: both bindings satisfy every dependent claim; "
                     "keep E1 on its first printed definition and give the re-printed "
                     "occurrence the unused label I1")
        resolution = "printed-first"
    table["ambiguities"]["E1-I1"] = {
        "question": "E1 is defined twice; which formula keeps the label",
        "candidates": e1_stats,
        "dependent_claims": ["prop-3.3/m1"],
        "survivors": e1_survivors,
        "tie_break": tie_break,
        "resolution": resolution,
    }

    # groups 5/6: printed memberships (7 and 9 points) vs the index-parity split
    group_variants = {
        "as-printed": (["R1", "R5", "R7", "R9", "R11", "R13", "R15"],
                       ["R2", "R3", "R4", "R6", "R8", "R10", "R12", "R14", "R16"]),
        "index-parity": ([f"R{i}" for i in range(1, 17, 2)],
                         [f"R{i}" for i in range(2, 17, 2)]),
    }
    g_stats = {}
    for variant, (g5, g6) in group_variants.items():
        ok_all = True
        for seed in seeds:
            cfg = sample(SamplerSpec(seed=seed, epsilon=tol.epsilon))
            for group in (g5, g6):
                try:
                    pts = [cfg.point(n) for n in group]
                    ok, _, _ = conconic(pts, tol)
                except GeometryError:
                    ok = False
                if not ok:
                    ok_all = False
            if not ok_all:
                break
        g_stats[variant] = {
            "all_claims_hold": ok_all,
            "memberships": {"group-5": g5, "group-6": g6},
        }
    g_survivors = [v for v, s in g_stats.items() if s["all_claims_hold"]]
    table["ambiguities"]["thm-5.2-groups-5-6"] = {
        "question": "printed groups 5 and 6 have 7 and 9 members; R3 is misplaced",
        "candidates": {v: {"all_claims_hold": s["all_claims_hold"]} for v, s in g_stats.items()},
        "memberships": {v: s["memberships"] for v, s in g_stats.items()},
        "survivors": g_survivors,
        "resolution": g_survivors[0] if len(g_survivors) == 1 else "unresolved",
    }

    # concurrency bullet with cyclic indices: the standard wrap is the only
    # reading defined for every i; record that it verifies
    wrap_ok = True
    for seed in seeds[:5]:
        cfg = sample(SamplerSpec(seed=seed, epsilon=tol.epsilon))
        for i in range(1, 5):
            rep = run_claim(registry.by_id(f"thm-4.1/g7-i{i}"), cfg, tol)
            if rep.status != "holds":
                wrap_ok = False
    table["ambiguities"]["thm-4.1-g7-wrap"] = {
        "question": "how the out-of-range indices in the final concurrency wrap around",
        "candidates": {"wrap-mod-8": {"all_claims_hold": wrap_ok}},
        "survivors": ["wrap-mod-8"] if wrap_ok else [],
        "resolution": "wrap-mod-8" if wrap_ok else "unresolved",
    }

    # the two printed point lists for M1/M2 in the octagon theorem are
    # shift-by-two images of each other; record the check result
    g2_ok = True
    for seed in seeds[:5]:
        cfg = sample(SamplerSpec(seed=seed, epsilon=tol.epsilon))
        for cid in ("thm-4.1/g2a", "thm-4.1/g2b"):
            if run_claim(registry.by_id(cid), cfg, tol).status != "holds":
                g2_ok = False
    table["ambiguities"]["thm-4.1-g2-symmetry"] = {
        "question": "whether the seemingly asymmetric M1/M2 line lists are typos",
        "candidates": {"as-printed": {"all_claims_hold": g2_ok}},
        "survivors": ["as-printed"] if g2_ok else [],
        "resolution": "as-printed" if g2_ok else "unresolved",
        "note": "the two lists are images of each other under the index shift k -> k+2",
    }
    return table
