"""Property suite behind ``hopftri selfcheck``."""

from __future__ import annotations

import math
import random

from .hopf import builtin_algebra, group_algebra, klein_four, validate_hopf
from .invariants import (
    bracket,
    cotrace_of,
    euler_signature_formula,
    invariant,
    kuperberg_invariant,
    table1_rows,
)
from .pairing import (
    builtin_triplet,
    drinfeld_double,
    h8_doublet,
    standard_doublet,
    triangle_identity_residual,
    tuv_residuals,
    validate_doublet,
    validate_triplet,
)
from .report import ValidationReport, default_tol
from .topology import (
    TrisectionDatum,
    builtin_diagram,
    connect_sum,
    reverse_curve,
    rotate_curve,
    stabilize,
    three_point,
    triangles,
    two_point_insert,
)

TRIPLETS = ("cyclic:2", "cyclic:3", "h8:A", "h8:B", "h8:C", "tautological:klein4")
PROPERTY_TOL = 1e-6

# Pseudotrisection with a triangle (1, 2, 3) whose curves carry four labels each.
SYNTHETIC_TRIANGLE = TrisectionDatum.make(
    [1, -1, 1, 1, -1, -1, 1, 1, -1],
    alpha=[[1, 3, 4, 7], [6, 9]],
    beta=[[1, 2, 5, 8], [4, 7]],
    kappa=[[2, 3, 6, 9], [5, 8]],
    name="triangle",
)


def _hom_count_cyclic(p: int, table: list[list[int]]) -> int:
    """Number of homomorphisms Z/p -> G, i.e. elements with g^p = e (identity at index 0)."""
    count = 0
    for g in range(len(table)):
        x = 0
        for _ in range(p):
            x = table[x][g]
        count += x == 0
    return count


def _rel(a: complex, b: complex) -> float:
    return abs(a - b) / max(1.0, abs(b))


def structure_checks(rep: ValidationReport) -> None:
    tol = rep.tol
    for name in ("h8", "klein4", *(f"cyclic:{n}" for n in range(1, 9))):
        rep.add(f"hopf {name}", validate_hopf(builtin_algebra(name), tol).max_residual)
    for i in range(4):
        D = h8_doublet(i)
        rep.add(f"doublet h8:M{i}", validate_doublet(D, tol).max_residual)
        rep.add(f"TUV h8:M{i}", max(tuv_residuals(D).values()))
    for name in (*TRIPLETS, *(f"cyclic:{n}" for n in range(4, 9))):
        t = builtin_triplet(name)
        rep.add(f"triplet {name}", validate_triplet(t, tol).max_residual)
        rep.add(f"identity (d) {name}", triangle_identity_residual(t, -1))
    for name in ("cyclic:2", "cyclic:3", "cyclic:4", "h8"):
        rep.add(f"double of {name}", validate_hopf(drinfeld_double(standard_doublet(builtin_algebra(name))), tol).max_residual)


def move_checks(rep: ValidationReport, seed: int = 0, triplets=TRIPLETS) -> None:
    rng = random.Random(seed)
    diagrams = {n: builtin_diagram(n) for n in ("CP2", "S2xS2", "S2twS2", "T_st", "S1xS3")}
    for tname in triplets:
        t = builtin_triplet(tname)
        base = {n: bracket(t, d) for n, d in diagrams.items()}
        worst = {"rotation": 0.0, "reversal": 0.0, "two-point": 0.0, "three-point": 0.0,
                 "connect sum": 0.0, "stabilization": 0.0, "cointegral scaling": 0.0}
        for n, d in diagrams.items():
            for color in d.color_names:
                for i, curve in enumerate(d.curves(color)):
                    if len(curve) > 1:
                        worst["rotation"] = max(worst["rotation"], _rel(bracket(t, rotate_curve(d, color, i)), base[n]))
                    worst["reversal"] = max(worst["reversal"], _rel(bracket(t, reverse_curve(d, color, i)), base[n]))
        for n in ("S2xS2", "S2twS2"):
            d = diagrams[n]
            for _ in range(3):
                ca, cb = rng.sample(list(d.color_names), 2)
                ia, ib = rng.randrange(d.genus), rng.randrange(d.genus)
                pa = rng.randrange(len(d.curves(ca)[ia]) + 1)
                pb = rng.randrange(len(d.curves(cb)[ib]) + 1)
                moved = two_point_insert(d, (ca, ia), pa, (cb, ib), pb)
                worst["two-point"] = max(worst["two-point"], _rel(bracket(t, moved), base[n]))
        for d in (diagrams["S2twS2"], SYNTHETIC_TRIANGLE):
            ref = bracket(t, d)
            for tri in triangles(d):
                worst["three-point"] = max(worst["three-point"], _rel(bracket(t, three_point(d, tri)), ref))
        worst["connect sum"] = _rel(bracket(t, connect_sum(diagrams["CP2"], diagrams["S2xS2"])),
                                    base["CP2"] * base["S2xS2"])
        for n in ("CP2", "S2xS2", "S1xS3"):
            worst["stabilization"] = max(worst["stabilization"],
                                         _rel(invariant(t, stabilize(diagrams[n])), invariant(t, diagrams[n])))
        C = cotrace_of(t.beta)
        for n in ("CP2", "S2twS2"):
            d = diagrams[n]
            scaled = bracket(t, d, {"beta": C.scaled(2.0)})
            worst["cointegral scaling"] = max(worst["cointegral scaling"], _rel(scaled, 2.0 ** d.genus * base[n]))
        for prop, r in worst.items():
            rep.add(f"{prop} {tname}", r)


def kuperberg_checks(rep: ValidationReport) -> None:
    groups = {f"Z/{n}": [[(a + b) % n for b in range(n)] for a in range(n)] for n in range(2, 7)}
    groups["Klein four"] = [[a ^ b for b in range(4)] for a in range(4)]
    for gname, table in groups.items():
        H = klein_four() if gname == "Klein four" else group_algebra(table)
        D = standard_doublet(H)
        cases = {"S3_heegaard": 1, "S1xS2_heegaard": len(table)}
        cases.update({f"lens({p},1)": _hom_count_cyclic(p, table) for p in range(1, 7)})
        cases["lens(5,2)"] = _hom_count_cyclic(5, table)
        worst = max(abs(kuperberg_invariant(D, builtin_diagram(n)) - k) for n, k in cases.items())
        rep.add(f"kuperberg {gname}", worst)


def table_checks(rep: ValidationReport, nmax: int = 8) -> None:
    rep.add(f"table1 N<={nmax}", max(r.deviation for r in table1_rows(nmax)))
    for N in (3, 5, 7):
        t = builtin_triplet(f"cyclic:{N}")
        plus = invariant(t, builtin_diagram("CP2"))
        minus = invariant(t, builtin_diagram("CP2_bar"))
        rep.add(f"euler/signature N={N}",
                abs(euler_signature_formula(plus, minus, 4, 0) - invariant(t, builtin_diagram("S2xS2"))))


def selfcheck(tol: float | None = None) -> ValidationReport:
    """Structure, move-invariance, Kuperberg and cyclic closed-form checks in one report.

    Algebraic identities use ``tol``; invariance properties use a relative 1e-6.
    """
    tol = default_tol() if tol is None else tol
    rep = ValidationReport("selfcheck", tol)
    structure_checks(rep)
    moves = ValidationReport("moves", PROPERTY_TOL)
    move_checks(moves)
    kuperberg_checks(moves)
    table_checks(moves)
    rep.extend(moves)
    if not math.isclose(tol, PROPERTY_TOL):
        rep.notes.append(f"invariance properties checked at relative tolerance {PROPERTY_TOL:g}")
    return rep
