"""Command-line front end.

Exit codes: 0 success, 1 validation failure, 2 parse or format error, 3 not admissible.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .errors import HopfTriError, NotAdmissibleError, ParseError
from .hopf import BUILTIN_ALGEBRAS, load_algebra, validate_hopf
from .invariants import (
    TABLE2_MANIFOLDS,
    heegaard_bracket,
    kuperberg_invariant,
    table1_rows,
    table2_rows,
    trisection_invariant,
    bracket as raw_bracket,
)
from .pairing import BUILTIN_DOUBLETS, BUILTIN_TRIPLETS, load_doublet, load_triplet, validate_doublet, validate_triplet
from .report import default_tol
from .selfcheck import selfcheck
from .topology import InvalidDatumError, catalog, load_datum

EXIT_OK, EXIT_INVALID, EXIT_PARSE, EXIT_INADMISSIBLE = 0, 1, 2, 3
TABLE_TOL = 1e-6


@dataclass
class CommandResult:
    exit_code: int
    payload: str | dict
    diagnostics: str = ""


def format_complex(z: complex, digits: int = 12) -> str:
    re, im = z.real + 0.0, z.imag + 0.0  # drop negative zeros
    return f"{re:.{digits}g}{im:+.{digits}g}i"


def _pair(z: complex) -> list[float]:
    return [z.real, z.imag]


def _verify(args) -> CommandResult:
    tol = args.tol if args.tol is not None else default_tol()
    if args.triplet:
        rep = validate_triplet(load_triplet(args.triplet), tol, check_algebras=True)
    elif args.doublet:
        rep = validate_doublet(load_doublet(args.doublet), tol, check_algebras=True)
    else:
        rep = validate_hopf(load_algebra(args.algebra), tol)
    payload = rep.to_dict() if args.json else str(rep)
    return CommandResult(EXIT_OK if rep.passed else EXIT_INVALID, payload)


def _check_triplet(t, tol) -> CommandResult | None:
    rep = validate_triplet(t, tol)
    if rep.passed:
        return None
    return CommandResult(EXIT_INVALID, "", str(rep))


def _invariant(args) -> CommandResult:
    t = load_triplet(args.triplet)
    d = load_datum(args.diagram)
    if args.validate and (bad := _check_triplet(t, default_tol())):
        return bad
    res = trisection_invariant(t, d, args.root)
    if args.json:
        return CommandResult(EXIT_OK, res.to_json())
    lines = [
        f"triplet  {res.triplet}",
        f"diagram  {res.diagram}  (genus {res.genus})",
        f"bracket  {format_complex(res.bracket)}",
        f"<T_st>   {format_complex(res.stabilizer_bracket)}",
        f"xi       {format_complex(res.xi)}" + ("  (principal root; convention dependent)" if res.convention_dependent else ""),
        f"tau      {format_complex(res.tau)}",
    ]
    return CommandResult(EXIT_OK, "\n".join(lines))


def _bracket(args) -> CommandResult:
    t = load_triplet(args.triplet)
    d = load_datum(args.diagram)
    if args.validate and (bad := _check_triplet(t, default_tol())):
        return bad
    b = raw_bracket(t, d)
    return CommandResult(EXIT_OK, {"bracket": _pair(b)} if args.json else format_complex(b))


def _kuperberg(args) -> CommandResult:
    D = load_doublet(args.doublet)
    d = load_datum(args.diagram)
    if args.validate:
        rep = validate_doublet(D, default_tol())
        if not rep.passed:
            return CommandResult(EXIT_INVALID, "", str(rep))
    value = kuperberg_invariant(D, d)
    if args.json:
        return CommandResult(EXIT_OK, {"invariant": _pair(value), "bracket": _pair(heegaard_bracket(D, d))})
    return CommandResult(EXIT_OK, format_complex(value))


def _list(args) -> CommandResult:
    entries = {
        "algebras": BUILTIN_ALGEBRAS,
        "triplets": BUILTIN_TRIPLETS,
        "doublets": BUILTIN_DOUBLETS,
        "diagrams": catalog(),
    }[args.what]
    if args.json:
        return CommandResult(EXIT_OK, dict(entries))
    width = max(map(len, entries))
    return CommandResult(EXIT_OK, "\n".join(f"builtin:{k:<{width}}  {v}" for k, v in entries.items()))


def _table(rows, title: str, as_json: bool) -> CommandResult:
    worst = max(r.deviation for r in rows)
    code = EXIT_OK if worst < TABLE_TOL else EXIT_INVALID
    if as_json:
        return CommandResult(code, {
            "rows": [
                {"triplet": r.triplet, "manifold": r.manifold, "computed": _pair(r.computed),
                 "expected": _pair(r.expected), "deviation": r.deviation}
                for r in rows
            ],
            "max_deviation": worst,
        })
    lines = [title, f"{'triplet':<10} {'manifold':<8} {'computed':>36} {'expected':>36} {'deviation':>10}"]
    for r in rows:
        mark = "" if r.deviation < TABLE_TOL else "  *"
        lines.append(f"{r.triplet:<10} {r.manifold:<8} {format_complex(r.computed):>36} "
                     f"{format_complex(r.expected):>36} {r.deviation:>10.2e}{mark}")
    lines.append(f"max deviation {worst:.3e}")
    return CommandResult(code, "\n".join(lines))


def _table1(args) -> CommandResult:
    if args.nmax < 2:
        raise ParseError("--nmax must be at least 2", "table1")
    return _table(table1_rows(args.nmax), "cyclic triplets, closed forms vs computed", args.json)


def _table2(args) -> CommandResult:
    return _table(table2_rows(), "H8 triplets A, B, C on " + ", ".join(TABLE2_MANIFOLDS), args.json)


def _selfcheck(args) -> CommandResult:
    rep = selfcheck(args.tol)
    return CommandResult(EXIT_OK if rep.passed else EXIT_INVALID, rep.to_dict() if args.json else str(rep))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hopftri", description="Hopf-triplet trisection and Kuperberg invariants.")
    sub = p.add_subparsers(dest="command", required=True)

    def command(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.set_defaults(fn=fn)
        return sp

    sp = command("verify", _verify, "validate an algebra, doublet or triplet")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--triplet")
    g.add_argument("--doublet")
    g.add_argument("--algebra")
    sp.add_argument("--tol", type=float)

    sp = command("invariant", _invariant, "normalized trisection invariant")
    sp.add_argument("--triplet", required=True)
    sp.add_argument("--diagram", required=True)
    sp.add_argument("--root", choices=("real", "principal"), default="real")
    sp.add_argument("--validate", action="store_true", help="validate the triplet first")

    sp = command("bracket", _bracket, "raw trisection bracket")
    sp.add_argument("--triplet", required=True)
    sp.add_argument("--diagram", required=True)
    sp.add_argument("--validate", action="store_true")

    sp = command("kuperberg", _kuperberg, "generalized Kuperberg invariant of a Heegaard datum")
    sp.add_argument("--doublet", required=True)
    sp.add_argument("--diagram", required=True)
    sp.add_argument("--validate", action="store_true")

    sp = command("list", _list, "list builtin objects")
    sp.add_argument("what", choices=("algebras", "doublets", "triplets", "diagrams"))

    sp = command("table1", _table1, "cyclic triplets against their closed forms")
    sp.add_argument("--nmax", type=int, default=8)

    command("table2", _table2, "H8 triplets A, B, C against reference values")

    sp = command("selfcheck", _selfcheck, "run the property suite")
    sp.add_argument("--tol", type=float)
    return p


def run(argv: list[str] | None = None) -> CommandResult:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return CommandResult(EXIT_OK if exc.code == 0 else EXIT_PARSE, "")
    try:
        return args.fn(args)
    except NotAdmissibleError as exc:
        return CommandResult(EXIT_INADMISSIBLE, "", f"not admissible: {exc}")
    except ParseError as exc:
        return CommandResult(EXIT_PARSE, "", f"parse error: {exc}")
    except InvalidDatumError as exc:
        return CommandResult(EXIT_INVALID, "", f"invalid diagram: {exc}")
    except HopfTriError as exc:
        return CommandResult(EXIT_INVALID, "", f"error: {exc}")


def main(argv: list[str] | None = None) -> int:
    result = run(argv)
    payload = result.payload
    if payload:
        print(json.dumps(payload, indent=2) if isinstance(payload, dict) else payload)
    if result.diagnostics:
        print(result.diagnostics, file=sys.stderr)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
