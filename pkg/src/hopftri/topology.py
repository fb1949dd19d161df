"""Combinatorial trisection and Heegaard data with their moves and builtin catalog.

A datum records, for every curve, the cyclic list of intersection labels met
along it (labels are 1-based), plus a sign per label. Data with two colors
(alpha, beta) describe Heegaard splittings of 3-manifolds.
"""

from __future__ import annotations

import json
import re
from collections.abc import Sequence
from dataclasses import dataclass

from .errors import HopfTriError, ParseError
from .report import ValidationReport

COLORS = ("alpha", "beta", "kappa")

Curve = tuple[int, ...]


def _rotate_min(curve: Curve) -> Curve:
    if not curve:
        return curve
    k = curve.index(min(curve))
    return curve[k:] + curve[:k]


@dataclass(frozen=True)
class TrisectionDatum:
    signs: tuple[int, ...]
    alpha: tuple[Curve, ...]
    beta: tuple[Curve, ...]
    kappa: tuple[Curve, ...] | None = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "signs", tuple(int(s) for s in self.signs))
        for c in COLORS:
            curves = getattr(self, c)
            if curves is not None:
                object.__setattr__(self, c, tuple(tuple(int(x) for x in curve) for curve in curves))

    @classmethod
    def make(cls, signs, alpha, beta, kappa=None, name: str = "") -> TrisectionDatum:
        return cls(tuple(signs), tuple(map(tuple, alpha)), tuple(map(tuple, beta)),
                   None if kappa is None else tuple(map(tuple, kappa)), name)

    @property
    def N(self) -> int:
        return len(self.signs)

    @property
    def genus(self) -> int:
        return len(self.alpha)

    @property
    def colors(self) -> int:
        return 2 if self.kappa is None else 3

    @property
    def color_names(self) -> tuple[str, ...]:
        return COLORS[: self.colors]

    def curves(self, color: str) -> tuple[Curve, ...]:
        out = getattr(self, color)
        if out is None:
            raise ValueError(f"datum has no {color} curves")
        return out

    def occurrences(self) -> dict[int, list[tuple[str, int, int]]]:
        """label -> list of (color, curve index, position)."""
        occ: dict[int, list[tuple[str, int, int]]] = {}
        for c in self.color_names:
            for i, curve in enumerate(self.curves(c)):
                for pos, label in enumerate(curve):
                    occ.setdefault(label, []).append((c, i, pos))
        return occ

    def canonical(self) -> tuple:
        """Key for equality up to cyclic rotation of each curve."""
        return (
            self.signs,
            tuple(tuple(_rotate_min(cv) for cv in self.curves(c)) for c in self.color_names),
        )

    def same_as(self, other: TrisectionDatum) -> bool:
        return self.colors == other.colors and self.canonical() == other.canonical()

    def renamed(self, name: str) -> TrisectionDatum:
        return TrisectionDatum(self.signs, self.alpha, self.beta, self.kappa, name)

    def replace(self, **changes) -> TrisectionDatum:
        fields = {"signs": self.signs, "alpha": self.alpha, "beta": self.beta, "kappa": self.kappa, "name": self.name}
        fields.update(changes)
        return TrisectionDatum(**fields)

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"<TrisectionDatum{label} colors={self.colors} g={self.genus} N={self.N}>"


class InvalidDatumError(HopfTriError):
    """A datum violates the combinatorial conditions."""

    def __init__(self, report: ValidationReport):
        self.report = report
        bad = "; ".join(f"{c.name}: {c.note}" for c in report.failures())
        super().__init__(f"invalid datum: {bad}")


def validate_datum(d: TrisectionDatum) -> ValidationReport:
    rep = ValidationReport(f"datum {d.name or ''}".strip(), 0.5)
    colors = d.color_names
    counts = {c: len(d.curves(c)) for c in colors}
    rep.add_flag("genus", len(set(counts.values())) == 1,
                 "" if len(set(counts.values())) == 1 else f"curves per color {counts}")
    bad_signs = [k + 1 for k, s in enumerate(d.signs) if s not in (1, -1)]
    rep.add_flag("signs", not bad_signs, f"labels with sign not +1/-1: {bad_signs}" if bad_signs else "")
    occ = d.occurrences()
    out_of_range = sorted(lab for lab in occ if not 1 <= lab <= d.N)
    rep.add_flag("label range", not out_of_range, f"labels outside 1..{d.N}: {out_of_range}" if out_of_range else "")
    wrong_count = [lab for lab in range(1, d.N + 1) if len(occ.get(lab, [])) != 2]
    rep.add_flag(
        "two occurrences",
        not wrong_count,
        f"labels not occurring exactly twice: {wrong_count}" if wrong_count else "",
    )
    same = sorted(lab for lab, o in occ.items() if len(o) == 2 and o[0][0] == o[1][0])
    rep.add_flag("distinct colors", not same, f"labels joining curves of one color: {same}" if same else "")
    rep.notes.append("the Heegaard condition on each color pair is not checkable from the datum; "
                     "pseudotrisections are accepted")
    return rep


def require_valid(d: TrisectionDatum) -> TrisectionDatum:
    rep = validate_datum(d)
    if not rep.passed:
        raise InvalidDatumError(rep)
    return d


# catalog

def _t_st() -> TrisectionDatum:
    return TrisectionDatum.make(
        [1] * 6,
        alpha=[[1, 2], [4], [5]],
        beta=[[1], [3, 4], [6]],
        kappa=[[2], [3], [5, 6]],
        name="T_st",
    )


def _s2xs2() -> TrisectionDatum:
    return TrisectionDatum.make(
        [1] * 6,
        alpha=[[1, 5], [2, 6]],
        beta=[[1, 3], [2, 4]],
        kappa=[[3, 6], [4, 5]],
        name="S2xS2",
    )


S2TW_VARIANTS = {
    "a": ((2, 7, 4), (3, 7, 6)),
    "b": ((2, 7, 4), (3, 6, 7)),
    "c": ((2, 4, 7), (3, 7, 6)),
    "d": ((2, 4, 7), (3, 6, 7)),
}
# Cyclic order on beta_2 and kappa_1 used by the plain "S2twS2" name.
S2TW_SELECTED = "a"


def s2tws2(variant: str = S2TW_SELECTED) -> TrisectionDatum:
    beta2, kappa1 = S2TW_VARIANTS[variant]
    return TrisectionDatum.make(
        [1] * 7,
        alpha=[[1, 5], [2, 6]],
        beta=[[1, 3], beta2],
        kappa=[kappa1, [4, 5]],
        name="S2twS2" if variant == S2TW_SELECTED else f"S2twS2[{variant}]",
    )


def lens(p: int, q: int) -> TrisectionDatum:
    """Genus-1 Heegaard datum of L(p, q)."""
    if p < 1:
        raise ValueError("lens space needs p >= 1")
    beta = [1 + (k * q) % p for k in range(p)]
    if len(set(beta)) != p:
        raise ValueError(f"q = {q} is not coprime to p = {p}")
    return TrisectionDatum.make([1] * p, alpha=[list(range(1, p + 1))], beta=[beta], name=f"lens({p},{q})")


def _cp2() -> TrisectionDatum:
    return TrisectionDatum.make([1, 1, 1], alpha=[[1, 2]], beta=[[1, 3]], kappa=[[2, 3]], name="CP2")


_CATALOG = {
    "S4_g0": (lambda: TrisectionDatum.make([], [], [], [], name="S4_g0"), "genus-0 trisection of S^4 (empty)"),
    "T_st": (_t_st, "standard genus-3 stabilizing trisection of S^4"),
    "CP2": (_cp2, "genus-1 trisection of CP^2"),
    "CP2_bar": (lambda: mirror(_cp2()).renamed("CP2_bar"), "mirror of CP2"),
    "S1xS3": (lambda: TrisectionDatum.make([], [[]], [[]], [[]], name="S1xS3"),
              "genus-1 trisection of S^1 x S^3 (three parallel curves)"),
    "S2xS2": (_s2xs2, "genus-2 trisection of S^2 x S^2"),
    "S2twS2": (s2tws2, f"genus-2 trisection of the twisted S^2 bundle over S^2 (cyclic order variant "
                       f"{S2TW_SELECTED!r})"),
    "S3_heegaard": (lambda: TrisectionDatum.make([1], [[1]], [[1]], name="S3_heegaard"),
                    "genus-1 Heegaard splitting of S^3"),
    "S1xS2_heegaard": (lambda: TrisectionDatum.make([], [[]], [[]], name="S1xS2_heegaard"),
                       "genus-1 Heegaard splitting of S^1 x S^2"),
    "lens(p,q)": (None, "genus-1 Heegaard splitting of the lens space L(p,q)"),
}
# Diagrams whose curve data is only available from external datum files.
EXTERNAL_ONLY = {
    "S2xT2": "S^2 x T^2 (load from a datum file)",
    "K3": "K3 surface (load from a datum file)",
}

_LENS = re.compile(r"^lens[(:]\s*(\d+)\s*[,:]\s*(-?\d+)\s*\)?$")


def builtin_diagram(name: str) -> TrisectionDatum:
    m = _LENS.match(name)
    if m:
        return lens(int(m.group(1)), int(m.group(2)))
    if name.startswith("S2twS2[") and name.endswith("]"):
        variant = name[len("S2twS2["):-1]
        if variant in S2TW_VARIANTS:
            return s2tws2(variant)
    entry = _CATALOG.get(name)
    if entry is None or entry[0] is None:
        if name in EXTERNAL_ONLY:
            raise ParseError(f"{name} has no builtin curve data; supply a datum file", "builtin")
        raise ParseError(f"unknown diagram {name!r}", "builtin")
    return entry[0]()


def catalog() -> dict[str, str]:
    out = {name: desc for name, (_, desc) in _CATALOG.items()}
    out.update({name: desc for name, desc in EXTERNAL_ONLY.items()})
    return out


# moves

def connect_sum(d1: TrisectionDatum, d2: TrisectionDatum) -> TrisectionDatum:
    if d1.colors != d2.colors:
        raise ValueError("cannot connect-sum data with different numbers of colors")
    shift = d1.N

    def moved(c):
        return d1.curves(c) + tuple(tuple(x + shift for x in cv) for cv in d2.curves(c))

    name = f"{d1.name}#{d2.name}" if d1.name and d2.name else ""
    return TrisectionDatum(
        d1.signs + d2.signs,
        moved("alpha"),
        moved("beta"),
        moved("kappa") if d1.colors == 3 else None,
        name,
    )


def reverse_curve(d: TrisectionDatum, color: str, index: int) -> TrisectionDatum:
    curves = list(d.curves(color))
    curve = curves[index]
    curves[index] = tuple(reversed(curve))
    signs = [(-s if k + 1 in curve else s) for k, s in enumerate(d.signs)]
    return d.replace(signs=tuple(signs), **{color: tuple(curves)})


def mirror(d: TrisectionDatum) -> TrisectionDatum:
    changes = {c: tuple(tuple(reversed(cv)) for cv in d.curves(c)) for c in d.color_names}
    return d.replace(signs=tuple(-s for s in d.signs), name=f"mirror({d.name})" if d.name else "", **changes)


def _insert(d: TrisectionDatum, color: str, index: int, pos: int, items: Sequence[int]) -> dict:
    curves = list(d.curves(color))
    curve = list(curves[index])
    if not 0 <= pos <= len(curve):
        raise ValueError(f"position {pos} out of range for {color}[{index}]")
    curve[pos:pos] = items
    curves[index] = tuple(curve)
    return {color: tuple(curves)}


def two_point_insert(
    d: TrisectionDatum,
    curve_a: tuple[str, int],
    pos_a: int,
    curve_b: tuple[str, int],
    pos_b: int,
    reverse_b: bool = False,
) -> TrisectionDatum:
    """Add labels N+1 (sign +) and N+2 (sign -) adjacently on two curves.

    Both curves see the new pair in the order (N+1, N+2) unless ``reverse_b``.
    """
    (ca, ia), (cb, ib) = curve_a, curve_b
    if ca == cb:
        raise ValueError("a two-point move joins curves of different colors")
    p, q = d.N + 1, d.N + 2
    out = d.replace(signs=d.signs + (1, -1), name="")
    out = out.replace(**_insert(out, ca, ia, pos_a, [p, q]))
    out = out.replace(**_insert(out, cb, ib, pos_b, [q, p] if reverse_b else [p, q]))
    return out


def _adjacent(curve: Curve, x: int, y: int) -> int | None:
    """Index i with {curve[i], curve[i+1 mod n]} = {x, y}, else None."""
    n = len(curve)
    for i in range(n):
        if {curve[i], curve[(i + 1) % n]} == {x, y} and n >= 2:
            return i
    return None


def _relabel(d: TrisectionDatum, removed: set[int]) -> TrisectionDatum:
    keep = [lab for lab in range(1, d.N + 1) if lab not in removed]
    new = {old: k + 1 for k, old in enumerate(keep)}
    changes = {
        c: tuple(tuple(new[x] for x in cv if x not in removed) for cv in d.curves(c)) for c in d.color_names
    }
    return d.replace(signs=tuple(d.signs[old - 1] for old in keep), name="", **changes)


def two_point_remove(d: TrisectionDatum, label1: int, label2: int) -> TrisectionDatum:
    occ = d.occurrences()
    if label1 == label2 or label1 not in occ or label2 not in occ:
        raise ValueError("two distinct existing labels required")
    curves1 = {(c, i) for c, i, _ in occ[label1]}
    curves2 = {(c, i) for c, i, _ in occ[label2]}
    if curves1 != curves2:
        raise ValueError(f"labels {label1} and {label2} do not lie on the same two curves")
    for c, i in curves1:
        if _adjacent(d.curves(c)[i], label1, label2) is None:
            raise ValueError(f"labels {label1} and {label2} are not adjacent on {c}[{i}]")
    if d.signs[label1 - 1] != -d.signs[label2 - 1]:
        raise ValueError("a removable pair carries opposite signs")
    return _relabel(d, {label1, label2})


def triangles(d: TrisectionDatum) -> list[tuple[int, int, int]]:
    """Label triples forming a triangle: pairwise adjacent on three distinct curves."""
    occ = d.occurrences()
    curve_of = {lab: frozenset((c, i) for c, i, _ in o) for lab, o in occ.items()}
    found = []
    labels = sorted(occ)
    for x in labels:
        for y in labels:
            if y <= x:
                continue
            for z in labels:
                if z <= y:
                    continue
                try:
                    _triangle_sites(d, (x, y, z), curve_of)
                except ValueError:
                    continue
                found.append((x, y, z))
    return found


def _triangle_sites(d, labels, curve_of=None):
    if d.colors != 3:
        raise ValueError("three-point moves need three colors")
    if curve_of is None:
        curve_of = {lab: frozenset((c, i) for c, i, _ in o) for lab, o in d.occurrences().items()}
    x, y, z = labels
    sites = []
    for u, v in ((x, y), (y, z), (z, x)):
        common = curve_of[u] & curve_of[v]
        if len(common) != 1:
            raise ValueError(f"labels {u}, {v} do not share exactly one curve")
        (c, i), = common
        pos = _adjacent(d.curves(c)[i], u, v)
        if pos is None:
            raise ValueError(f"labels {u}, {v} are not adjacent on {c}[{i}]")
        sites.append((c, i, pos))
    if len({c for c, _, _ in sites}) != 3:
        raise ValueError("triangle sides must lie on curves of three colors")
    return sites


def three_point(d: TrisectionDatum, labels: tuple[int, int, int], flip_signs: bool = False) -> TrisectionDatum:
    """Swap the adjacent label pair on each side of a triangle.

    Signs are kept by default; ``flip_signs`` negates the three signs as well.
    """
    sites = _triangle_sites(d, tuple(labels))
    changes = {c: list(d.curves(c)) for c in d.color_names}
    for c, i, pos in sites:
        curve = list(changes[c][i])
        j = (pos + 1) % len(curve)
        curve[pos], curve[j] = curve[j], curve[pos]
        changes[c][i] = tuple(curve)
    signs = list(d.signs)
    if flip_signs:
        for lab in labels:
            signs[lab - 1] = -signs[lab - 1]
    return d.replace(signs=tuple(signs), name="", **{c: tuple(v) for c, v in changes.items()})


def stabilize(d: TrisectionDatum) -> TrisectionDatum:
    return connect_sum(d, _t_st())


def rotate_curve(d: TrisectionDatum, color: str, index: int, shift: int = 1) -> TrisectionDatum:
    curves = list(d.curves(color))
    cv = curves[index]
    if cv:
        shift %= len(cv)
        curves[index] = cv[shift:] + cv[:shift]
    return d.replace(**{color: tuple(curves)})


_MOVES = {
    "connect_sum": connect_sum,
    "reverse_curve": reverse_curve,
    "mirror": mirror,
    "two_point_insert": two_point_insert,
    "two_point_remove": two_point_remove,
    "three_point": three_point,
    "stabilize": stabilize,
    "rotate_curve": rotate_curve,
}


def transform_datum(d: TrisectionDatum, move: str, *args, **kwargs) -> TrisectionDatum:
    """Apply a named move; arguments are those of the move function."""
    try:
        fn = _MOVES[move]
    except KeyError:
        raise ValueError(f"unknown move {move!r}; choose from {sorted(_MOVES)}") from None
    return fn(d, *args, **kwargs)


# file format

def _location(text: str, key: str) -> str:
    for n, line in enumerate(text.splitlines(), 1):
        if f'"{key}"' in line:
            return f"line {n}, field {key!r}"
    return f"field {key!r}"


def parse_datum(text: str, name: str = "") -> TrisectionDatum:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None
    if not isinstance(obj, dict):
        raise ParseError("expected a JSON object", "line 1")
    colors = obj.get("colors", 3 if "kappa" in obj else 2)
    if colors not in (2, 3):
        raise ParseError("'colors' must be 2 or 3", _location(text, "colors"))
    for key in ("signs", "alpha", "beta") + (("kappa",) if colors == 3 else ()):
        if key not in obj:
            raise ParseError(f"missing field {key!r}", "top level")
    if colors == 2 and "kappa" in obj:
        raise ParseError("a 2-color datum has no kappa curves", _location(text, "kappa"))
    signs = obj["signs"]
    if not isinstance(signs, list) or not all(s in (1, -1) and not isinstance(s, bool) for s in signs):
        raise ParseError("signs must be a list of +1/-1", _location(text, "signs"))
    curves = {}
    for c in COLORS[:colors]:
        value = obj[c]
        ok = isinstance(value, list) and all(
            isinstance(cv, list) and all(isinstance(x, int) and not isinstance(x, bool) for x in cv) for cv in value
        )
        if not ok:
            raise ParseError("expected a list of integer label lists", _location(text, c))
        curves[c] = value
    genus = obj.get("genus", len(curves["alpha"]))
    for c, value in curves.items():
        if len(value) != genus:
            raise ParseError(f"{len(value)} curves but genus {genus}", _location(text, c))
    d = TrisectionDatum.make(signs, curves["alpha"], curves["beta"], curves.get("kappa"),
                             name=str(obj.get("name", name)))
    rep = validate_datum(d)
    if not rep.passed:
        raise InvalidDatumError(rep)
    return d


def serialize_datum(d: TrisectionDatum) -> str:
    lines = [
        "{",
        f'  "colors": {d.colors},',
        f'  "genus": {d.genus},',
        f'  "signs": {json.dumps(list(d.signs))},',
    ]
    keys = list(d.color_names)
    for k, c in enumerate(keys):
        comma = "," if k < len(keys) - 1 else ""
        lines.append(f'  "{c}": {json.dumps([list(cv) for cv in d.curves(c)])}{comma}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def load_datum(ref: str) -> TrisectionDatum:
    if ref.startswith("builtin:"):
        return builtin_diagram(ref[len("builtin:"):])
    try:
        with open(ref, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(str(exc), ref) from None
    try:
        return parse_datum(text, name=ref)
    except ParseError as exc:
        raise ParseError(str(exc), ref) from None
