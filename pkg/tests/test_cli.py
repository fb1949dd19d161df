import json
import subprocess
import sys

import numpy as np
import pytest

from hopftri.cli import EXIT_INADMISSIBLE, EXIT_INVALID, EXIT_OK, EXIT_PARSE, format_complex, main, run
from hopftri.hopf import algebra_to_json, group_algebra
from hopftri.invariants import InvariantResult, invariant, table2_rows
from hopftri.pairing import builtin_triplet
from hopftri.topology import builtin_diagram


def test_format_complex():
    assert format_complex(5 + 0j) == "5+0i"
    assert format_complex(-0.0 - 0.0j) == "0+0i"
    assert format_complex(complex(0.5, -1 / 3)) == "0.5-0.333333333333i"


class TestInvariant:
    def test_json_round_trip(self):
        res = run(["invariant", "--triplet", "builtin:cyclic:5", "--diagram", "builtin:S1xS3", "--json"])
        assert res.exit_code == EXIT_OK
        back = InvariantResult.from_json(json.loads(json.dumps(res.payload)))
        assert back.tau == pytest.approx(5)
        assert back.to_json() == res.payload

    def test_text_output_matches_library(self):
        res = run(["invariant", "--triplet", "builtin:h8:C", "--diagram", "builtin:CP2"])
        assert res.exit_code == EXIT_OK
        tau = invariant(builtin_triplet("h8:C"), builtin_diagram("CP2"))
        assert f"tau      {format_complex(tau)}" in res.payload

    def test_zero_stabilizer_is_exit_three(self, tmp_path):
        path = tmp_path / "zero.json"
        C2 = algebra_to_json(group_algebra(2))
        zero = np.zeros((2, 2)).tolist()
        path.write_text(json.dumps({"alpha": C2, "beta": C2, "kappa": C2,
                                    "pair_ab": zero, "pair_bk": zero, "pair_ka": zero}))
        res = run(["invariant", "--triplet", str(path), "--diagram", "builtin:CP2"])
        assert res.exit_code == EXIT_INADMISSIBLE
        assert "not admissible" in res.diagnostics
        assert run(["invariant", "--triplet", str(path), "--diagram", "builtin:CP2", "--validate"]).exit_code \
            == EXIT_INVALID

    def test_principal_root_flagged(self):
        res = run(["invariant", "--triplet", "builtin:cyclic:3", "--diagram", "builtin:CP2",
                   "--root", "principal", "--json"])
        assert res.payload["convention_dependent"] is True

    def test_bracket_command(self):
        res = run(["bracket", "--triplet", "builtin:cyclic:4", "--diagram", "builtin:S1xS3", "--json"])
        assert res.payload["bracket"] == pytest.approx([64, 0])
        assert run(["bracket", "--triplet", "builtin:cyclic:4", "--diagram", "builtin:S1xS3"]).payload == "64+0i"


class TestExitCodes:
    @pytest.mark.parametrize(
        "argv",
        [
            ["invariant", "--triplet", "builtin:nope", "--diagram", "builtin:CP2"],
            ["invariant", "--triplet", "builtin:h8:A", "--diagram", "builtin:K3"],
            ["invariant", "--triplet", "builtin:h8:A", "--diagram", "/no/such/file.json"],
            ["frobnicate"],
            ["invariant", "--triplet", "builtin:h8:A"],
            ["table1", "--nmax", "1"],
        ],
    )
    def test_parse_errors(self, argv, capsys):
        assert run(argv).exit_code == EXIT_PARSE

    def test_invalid_datum_file(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"signs": [1], "alpha": [[1]], "beta": [[1]], "kappa": [[1]]}))
        res = run(["bracket", "--triplet", "builtin:h8:A", "--diagram", str(path)])
        assert res.exit_code == EXIT_INVALID
        assert "two occurrences" in res.diagnostics

    def test_help_exits_zero(self, capsys):
        assert run(["--help"]).exit_code == EXIT_OK


class TestVerify:
    @pytest.mark.parametrize(
        "flag,ref",
        [("--algebra", "builtin:h8"), ("--doublet", "builtin:h8:M2"), ("--triplet", "builtin:h8:B"),
         ("--triplet", "builtin:tautological:cyclic:3")],
    )
    def test_builtins_pass(self, flag, ref):
        res = run(["verify", flag, ref, "--json"])
        assert res.exit_code == EXIT_OK and res.payload["passed"]

    def test_failure_is_exit_one(self, tmp_path):
        H = group_algebra(3)
        obj = algebra_to_json(H)
        obj["antipode"] = [[k, k, 1.0, 0.0] for k in range(3)]
        path = tmp_path / "bad_alg.json"
        path.write_text(json.dumps(obj))
        res = run(["verify", "--algebra", str(path)])
        assert res.exit_code == EXIT_INVALID
        assert "antipode" in res.payload

    def test_tolerance_flag(self):
        res = run(["verify", "--algebra", "builtin:h8", "--tol", "1e-3", "--json"])
        assert res.payload["tol"] == 1e-3


class TestKuperbergAndList:
    def test_kuperberg(self):
        res = run(["kuperberg", "--doublet", "builtin:standard:cyclic:6", "--diagram", "builtin:lens(4,1)", "--json"])
        assert res.payload["invariant"] == pytest.approx([2, 0])
        assert run(["kuperberg", "--doublet", "builtin:standard:cyclic:6",
                    "--diagram", "builtin:lens(3,1)"]).payload == "3+0i"

    @pytest.mark.parametrize("what,key", [("algebras", "h8"), ("triplets", "h8:C"), ("doublets", "h8:M0..h8:M3"),
                                          ("diagrams", "S2twS2")])
    def test_list(self, what, key):
        assert key in run(["list", what, "--json"]).payload
        assert f"builtin:{key}" in run(["list", what]).payload


class TestTables:
    def test_table1_exit_zero(self):
        res = run(["table1", "--nmax", "8", "--json"])
        assert res.exit_code == EXIT_OK
        assert res.payload["max_deviation"] < 1e-6
        assert len(res.payload["rows"]) == 7 * 4

    def test_table2_exit_code_tracks_deviation(self):
        res = run(["table2", "--json"])
        worst = max(r.deviation for r in table2_rows())
        assert res.payload["max_deviation"] == pytest.approx(worst)
        assert res.exit_code == (EXIT_OK if worst < 1e-6 else EXIT_INVALID)

    def test_text_table_marks_deviations(self):
        text = run(["table2"]).payload
        assert text.splitlines()[-1].startswith("max deviation")


def test_main_writes_streams(capsys):
    code = main(["bracket", "--triplet", "builtin:cyclic:2", "--diagram", "builtin:S1xS3", "--json"])
    out = capsys.readouterr()
    assert code == 0 and json.loads(out.out)["bracket"] == [8.0, 0.0]
    code = main(["invariant", "--triplet", "builtin:x", "--diagram", "builtin:CP2"])
    out = capsys.readouterr()
    assert code == 2 and "parse error" in out.err and out.out == ""


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hopftri", "invariant", "--triplet", "builtin:cyclic:3",
                           "--diagram", "builtin:S2xS2", "--json"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["tau"] == pytest.approx([1 / 3, 0])


def test_selfcheck_passes():
    res = run(["selfcheck", "--json"])
    assert res.exit_code == EXIT_OK and res.payload["passed"]


def test_tolerance_env_var(monkeypatch):
    monkeypatch.setenv("HOPFTRI_TOL", "1e-4")
    assert run(["verify", "--algebra", "builtin:cyclic:3", "--json"]).payload["tol"] == 1e-4
    monkeypatch.setenv("HOPFTRI_TOL", "garbage")
    assert run(["verify", "--algebra", "builtin:cyclic:3", "--json"]).payload["tol"] == 1e-9
