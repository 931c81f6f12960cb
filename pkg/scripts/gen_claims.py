#!/usr/bin/env python3
"""Regenerate src/quadconics/data/claims.json (the versioned claim registry).

The registry is data, not code: corrected records coexist with the
as-published ones they supersede, so typographic defects in the source
statements stay visible in reports instead of being silently patched.
"""
import json
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "quadconics" / "data" / "claims.json"

claims = []


def add(id, kind, statement, provenance="as-published", **fields):
    rec = {"id": id, "kind": kind, "statement": statement, "provenance": provenance}
    rec.update(fields)
    claims.append(rec)


# --- diagonal triangle collinearities -----------------------------------

add("lemma-2.1/m3", "collinear", "M1, M2, N3, P3 lie on one line (m3)",
    points=["M1", "M2", "N3", "P3"])
add("lemma-2.1/m1", "collinear", "M2, M3, N1, P1 lie on one line (m1)",
    points=["M2", "M3", "N1", "P1"])
add("lemma-2.1/m2", "collinear", "M3, M1, N2, P2 lie on one line (m2)",
    points=["M3", "M1", "N2", "P2"])

add("lemma-2.2/tangent-quad", "concurrent",
    "diagonals of the tangent quadrilateral and of the inscribed quadrilateral concur",
    lines=[["N1", "P1"], ["N2", "P2"], ["A1", "A3"], ["A2", "A4"]])

add("lemma-2.3/u", "collinear", "U1, M2, U2, M3 are collinear",
    points=["U1", "M2", "U2", "M3"])
add("lemma-2.3/v", "collinear", "V1, M3, V2, M1 are collinear",
    points=["V1", "M3", "V2", "M1"])
add("lemma-2.3/w", "collinear", "W1, M1, W2, M2 are collinear",
    points=["W1", "M1", "W2", "M2"])

for i, others in (("1", ["M2", "M3", "N1", "P1", "U1", "U2"]),
                  ("2", ["M3", "M1", "N2", "P2", "V1", "V2"]),
                  ("3", ["M1", "M2", "N3", "P3", "W1", "W2"])):
    add(f"sec-2/polar-m{i}", "collinear",
        f"the polar of M{i} carries M/N/P and the tangency points from M{i}",
        provenance="corrected",
        note="the printed summary swaps the lines carrying U and W; "
             "the tangency points from a pole lie on its own polar",
        points=others)

add("thm-2.1/brocard", "orthocenter",
    "for a circle, the center is the orthocenter of the diagonal triangle",
    points=["M1", "M2", "M3"])

# --- collinear triples and concurrent line triples ------------------------

TRIPLES = [
    ("M1", "Y1", "Y2"), ("M1", "Y3", "Y4"), ("M1", "X3", "T4"), ("M1", "X1", "T2"),
    ("M2", "Y1", "Y4"), ("M2", "Y2", "Y3"), ("M2", "X4", "T1"), ("M2", "X2", "T3"),
    ("M3", "T1", "T3"), ("M3", "X2", "X4"), ("M3", "X1", "X3"), ("M3", "T2", "T4"),
    ("X2", "Y3", "T4"), ("X1", "Y2", "T3"), ("X3", "Y4", "T1"), ("X4", "Y1", "T2"),
]
for n, t in enumerate(TRIPLES, start=1):
    uses_y = any(name.startswith("Y") for name in t)
    add(f"prop-3.1/t{n:02d}", "collinear", f"{', '.join(t)} are collinear",
        provenance="corrected" if uses_y else "as-published",
        points=list(t),
        **({"note": "Y resolved to tangent/diagonal intersections (see erratum table)"}
           if uses_y else {}))

LINE_TRIPLES = [
    (("M2", "M3"), ("X2", "Y3"), ("X3", "Y4")),
    (("M1", "M3"), ("X1", "Y2"), ("X2", "Y3")),
    (("M1", "M2"), ("X1", "Y2"), ("X3", "Y4")),
    (("M2", "M3"), ("X1", "Y2"), ("X4", "Y1")),
    (("M1", "M3"), ("X4", "Y1"), ("X3", "Y4")),
    (("M1", "M2"), ("X4", "Y1"), ("X2", "Y3")),
]
for n, t in enumerate(LINE_TRIPLES, start=1):
    add(f"prop-3.2/c{n}", "concurrent",
        " , ".join("".join(p) for p in t) + " are concurrent",
        provenance="corrected", lines=[list(p) for p in t],
        note="Y resolved to tangent/diagonal intersections")

for k, (anchor, rest) in enumerate(
    (("m1", ["M2", "M3"]), ("m2", ["M3", "M1"]), ("m3", ["M1", "M2"])), start=1
):
    fam = [f"{ch}{k}" for ch in "BCDEFGHI"]
    add(f"prop-3.3/{anchor}", "collinear",
        f"{', '.join(fam)} lie on the line {rest[0]}{rest[1]}",
        provenance="corrected" if k == 1 else "as-published",
        points=fam + rest,
        **({"note": "the duplicated printed label E1 is kept on its first "
                    "definition; the second becomes I1 (see erratum table)"}
           if k == 1 else {}))

# --- eight points on a conic ----------------------------------------------

add("lemma-4.1/c1", "conconic", "X1..X4, T1..T4 lie on one conic (C1)",
    points=["X1", "X2", "X3", "X4", "T1", "T2", "T3", "T4"])
add("lemma-4.1/c2", "conconic", "Y1..Y4, X1, X3, T2, T4 lie on one conic (C2)",
    provenance="corrected", note="Y resolved to tangent/diagonal intersections",
    points=["Y1", "Y2", "Y3", "Y4", "X1", "X3", "T2", "T4"])
add("lemma-4.1/c3", "conconic", "T1, T3, X2, X4, Y1..Y4 lie on one conic (C3)",
    provenance="corrected", note="Y resolved to tangent/diagonal intersections",
    points=["T1", "T3", "X2", "X4", "Y1", "Y2", "Y3", "Y4"])

# --- the tangent octagon of C1 ---------------------------------------------

add("thm-4.1/g1", "lines-through-point", "the four long diagonals JiJi+4 meet at M3",
    point="M3", lines=[["J1", "J5"], ["J2", "J6"], ["J3", "J7"], ["J4", "J8"]])
add("thm-4.1/g2a", "lines-through-point", "J1J7, J2J6, J3J5 meet at M1",
    point="M1", lines=[["J1", "J7"], ["J2", "J6"], ["J3", "J5"]],
    note="lists for M1 and M2 are shift-by-two images of each other; "
         "both verified as printed")
add("thm-4.1/g2b", "lines-through-point", "J1J3, J4J8, J5J7 meet at M2",
    point="M2", lines=[["J1", "J3"], ["J4", "J8"], ["J5", "J7"]])
for claim_id, vertex, pairs in (
    ("g3a", "A1", [(1, 4), (2, 5)]),
    ("g3b", "A2", [(4, 7), (3, 6)]),
    ("g3c", "A3", [(6, 1), (5, 8)]),
    ("g3d", "A4", [(3, 8), (2, 7)]),
):
    add(f"thm-4.1/{claim_id}", "lines-through-point",
        f"{' and '.join(f'J{a}J{b}' for a, b in pairs)} meet at {vertex}",
        point=vertex, lines=[[f"J{a}", f"J{b}"] for a, b in pairs])

G4_MEETS = [((2, 4), (6, 8)), ((2, 8), (4, 6)), ((3, 6), (2, 7)), ((5, 8), (1, 4)),
            ((3, 8), (4, 7)), ((2, 5), (1, 6)),
            ((1, 2), (5, 6)), ((2, 3), (6, 7)), ((3, 4), (7, 8)), ((4, 5), (8, 1))]
add("thm-4.1/g4", "collinear",
    "ten J-chord intersections lie on the line M1M2",
    points=[{"meet": [[f"J{a}", f"J{b}"], [f"J{c}", f"J{d}"]]}
            for (a, b), (c, d) in G4_MEETS] + ["M1", "M2"])
add("thm-4.1/g5a", "collinear",
    "J4J5^J7J8 and J3J4^J1J8 lie on the line M1M3",
    points=[{"meet": [["J4", "J5"], ["J7", "J8"]]},
            {"meet": [["J3", "J4"], ["J1", "J8"]]}, "M1", "M3"])
add("thm-4.1/g5b", "collinear",
    "J2J3^J5J6 and J1J2^J6J7 lie on the line M2M3",
    points=[{"meet": [["J2", "J3"], ["J5", "J6"]]},
            {"meet": [["J1", "J2"], ["J6", "J7"]]}, "M2", "M3"])
add("thm-4.1/g6a", "point-on-line", "P3 lies on the line J3J7",
    point="P3", line=["J3", "J7"])
add("thm-4.1/g6b", "point-on-line", "N3 lies on the line J1J5",
    point="N3", line=["J1", "J5"])


def w8(k):
    return (k - 1) % 8 + 1


for i in range(1, 5):
    lines = [[f"J{w8(2 * i)}", f"J{w8(2 * i + 4)}"],
             [f"J{w8(2 * i + 1)}", f"J{w8(2 * i - 2)}"],
             [f"J{w8(2 * i - 1)}", f"J{w8(2 * i + 2)}"]]
    add(f"thm-4.1/g7-i{i}", "concurrent",
        " , ".join("".join(p) for p in lines) + " are concurrent",
        provenance="corrected", lines=lines,
        note="cyclic indices read as ((k-1) mod 8)+1; the only reading "
             "consistent for every i (see erratum table)")

add("thm-4.2/conic", "conconic", "the eight chord intersections K1..K8 lie on one conic (D1)",
    points=[f"K{i}" for i in range(1, 9)])
add("thm-4.3/conic", "conconic", "N1, N2, P1, P2, Z1..Z4 lie on one conic (E)",
    points=["N1", "N2", "P1", "P2", "Z1", "Z2", "Z3", "Z4"])

# --- the 16-point grid -----------------------------------------------------

GROUPS = {
    "group-1": list(range(1, 9)),
    "group-2": list(range(9, 17)),
    "group-3": [1, 2, 5, 6, 11, 12, 15, 16],
    "group-4": [3, 4, 7, 8, 9, 10, 13, 14],
}
for gid, idx in GROUPS.items():
    add(f"thm-5.2/{gid}", "conconic",
        f"R-points {{{', '.join('R%d' % i for i in idx)}}} lie on one conic",
        points=[f"R{i}" for i in idx])

add("thm-5.2/group-5", "conconic",
    "the odd-index R-points lie on one conic",
    provenance="corrected", points=[f"R{i}" for i in range(1, 17, 2)],
    note="printed list omits R3 (7 members); completed to the odd-index set "
         "(see erratum table)")
add("thm-5.2/group-6", "conconic",
    "the even-index R-points lie on one conic",
    provenance="corrected", points=[f"R{i}" for i in range(2, 17, 2)],
    note="printed list includes R3 among nine members; corrected to the "
         "even-index set (see erratum table)")
add("thm-5.2/group-5-as-printed", "conconic",
    "printed seven-member variant of group 5 (proper subset of the odd set)",
    points=[f"R{i}" for i in (1, 5, 7, 9, 11, 13, 15)],
    superseded_by="thm-5.2/group-5")
add("thm-5.2/group-6-as-printed", "conconic",
    "printed nine-member variant of group 6 (generically false: R3 is off the even conic)",
    points=[f"R{i}" for i in (2, 3, 4, 6, 8, 10, 12, 14, 16)],
    superseded_by="thm-5.2/group-6")

# --- closure corollary -----------------------------------------------------

add("sec-5/poristic-invariants", "closure",
    "quadrilaterals inscribed in E and tangent to C share the diagonal "
    "intersection point and the line of opposite-side intersections",
    points=["Z1", "Z2", "Z3", "Z4"])

doc = {"version": "1.0", "claims": claims}
OUT.parent.mkdir(parents=True, exist_ok=True)
OUT.write_text(json.dumps(doc, indent=1, sort_keys=False) + "\n")
print(f"wrote {OUT} ({len(claims)} claims)")
