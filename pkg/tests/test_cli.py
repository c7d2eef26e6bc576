import json
import subprocess
import sys

import pytest

from gpd.cli import main
from helpers import FIXTURES

AMIT = str(FIXTURES / "amit.json")
ALEX_G = str(FIXTURES / "alex_g.json")
ALEX_H = str(FIXTURES / "alex_h.json")
CURRY = str(FIXTURES / "curry_set.json")
REEB = str(FIXTURES / "reeb.json")
TIGHT_M = str(FIXTURES / "tight_m.json")
TIGHT_N = str(FIXTURES / "tight_n.json")
CRIT_M = str(FIXTURES / "criticism_m.json")
CRIT_N = str(FIXTURES / "criticism_n.json")

ALL_FIXTURES = [AMIT, ALEX_G, ALEX_H, CURRY, REEB, TIGHT_M, TIGHT_N, CRIT_M, CRIT_N]


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestValidate:
    def test_all_fixtures_ok(self, capsys):
        for path in ALL_FIXTURES:
            code, out, _ = run(capsys, "validate", path)
            assert code == 0
            assert json.loads(out) == {"ok": True}

    def test_noncommuting_square_fails(self, capsys, tmp_path):
        doc = {
            "kind": "vec", "index": "poset",
            "poset": {"elements": ["00", "01", "10", "11"],
                      "relations": [["00", "01"], ["00", "10"],
                                    ["01", "11"], ["10", "11"]]},
            "spaces": {"00": 1, "01": 1, "10": 1, "11": 1},
            "maps": {"00->01": [[1]], "00->10": [[1]],
                     "01->11": [[1]], "10->11": [[0]]},
        }
        path = tmp_path / "grid.json"
        path.write_text(json.dumps(doc))
        code, out, _ = run(capsys, "validate", str(path))
        assert code == 1
        report = json.loads(out)
        assert report["ok"] is False
        assert report["violations"] == [{"pair": ["00", "11"]}]

    def test_malformed_json_is_input_error(self, capsys, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{nope")
        code, out, err = run(capsys, "validate", str(path))
        assert code == 2
        obj = json.loads(err)
        assert obj["error"] == "InputFormatError"

    def test_partial_set_map_reported_as_violation(self, capsys, tmp_path):
        doc = {
            "kind": "set", "index": "zz", "window": [0, 1],
            "spaces": {"v0": ["x"], "e1": ["e"], "v1": ["y"]},
            "maps": {"e1->v0": {"e": "x"}, "e1->v1": {}},
        }
        path = tmp_path / "partial.json"
        path.write_text(json.dumps(doc))
        code, out, _ = run(capsys, "validate", str(path))
        assert code == 1
        assert json.loads(out)["ok"] is False


class TestRank:
    def test_single_interval(self, capsys):
        code, out, _ = run(capsys, "rank", AMIT, "--interval", "{b}")
        assert code == 0
        assert json.loads(out) == {"interval": "{b}", "rank": 2}

    def test_all_poset(self, capsys):
        code, out, _ = run(capsys, "rank", AMIT, "--all")
        assert code == 0
        table = json.loads(out)
        assert table["{b}"] == 2
        assert table["{a,b,c,d}"] == 0
        assert len(table) == 11

    def test_all_zz(self, capsys):
        code, out, _ = run(capsys, "rank", CRIT_N, "--all")
        table = json.loads(out)
        assert table["(0,1)"] == 2
        assert table["[0,2]"] == 0

    def test_set_rank(self, capsys):
        code, out, _ = run(capsys, "rank", CURRY, "--interval", "[1,4]")
        assert json.loads(out) == {"interval": "[1,4]", "rank": 0}

    def test_missing_selector_is_error(self, capsys):
        code, out, err = run(capsys, "rank", AMIT)
        assert code == 2
        assert json.loads(err)["error"] == "InputFormatError"


class TestDiagram:
    def test_amit_value(self, capsys):
        code, out, _ = run(capsys, "diagram", AMIT, "--interval", "{b}")
        assert code == 0
        assert json.loads(out) == {"interval": "{b}", "value": -1}

    def test_curry_negative_entry(self, capsys):
        code, out, _ = run(capsys, "diagram", CURRY, "--interval", "[2,3]")
        assert json.loads(out) == {"interval": "[2,3]", "value": -1}

    def test_mobius_check_passes_on_fixtures(self, capsys):
        for path in (AMIT, ALEX_G, ALEX_H, CRIT_M, CRIT_N):
            code, out, _ = run(capsys, "diagram", path, "--all", "--mobius-check")
            assert code == 0, path

    def test_unknown_element_is_input_error(self, capsys):
        code, _, err = run(capsys, "diagram", AMIT, "--interval", "{z}")
        assert code == 2
        assert json.loads(err)["error"] == "UnknownElementError"


class TestBarcode:
    def test_curry_levelset(self, capsys):
        code, out, _ = run(capsys, "barcode", CURRY)
        assert json.loads(out) == [
            {"interval": "[1,4]", "mult": 1},
            {"interval": "[2,3)", "mult": 1},
            {"interval": "(2,3]", "mult": 1},
        ]

    def test_criticism_pair_differs(self, capsys):
        _, out_m, _ = run(capsys, "barcode", CRIT_M)
        _, out_n, _ = run(capsys, "barcode", CRIT_N)
        assert json.loads(out_m) == [{"interval": "[0,2]", "mult": 1}]
        assert json.loads(out_n) == [
            {"interval": "[0,1)", "mult": 1},
            {"interval": "(0,2)", "mult": 1},
            {"interval": "(1,2]", "mult": 1},
        ]

    def test_poset_has_no_barcode_command(self, capsys):
        code, _, err = run(capsys, "barcode", AMIT)
        assert code == 2
        assert json.loads(err)["error"] == "NotZigzagError"


class TestFullUntwistedObstruction:
    def test_full(self, capsys):
        code, out, _ = run(capsys, "full", CURRY, "--interval", "[2,3)")
        assert json.loads(out) == {"interval": "[2,3)", "full": 2}

    def test_full_on_vec_rejected(self, capsys):
        code, _, err = run(capsys, "full", AMIT, "--interval", "{b}")
        assert code == 2

    def test_untwisted(self, capsys):
        code, out, _ = run(capsys, "untwisted", REEB)
        assert code == 0
        assert json.loads(out) == {"untwisted": True, "witness": None}
        code, out, _ = run(capsys, "untwisted", CURRY)
        assert code == 0
        assert json.loads(out) == {"untwisted": False, "witness": "[1,4]"}

    def test_obstruction(self, capsys):
        code, out, _ = run(capsys, "obstruction", AMIT)
        assert code == 0
        assert json.loads(out) == {"obstruction": {"interval": "{b}", "value": -1}}
        code, out, _ = run(capsys, "obstruction", ALEX_G)
        assert code == 0
        assert json.loads(out) == {"obstruction": None}

    def test_obstruction_expectation_flag(self, capsys):
        code, _, _ = run(capsys, "obstruction", AMIT, "--expect-decomposable")
        assert code == 1
        code, _, _ = run(capsys, "obstruction", ALEX_G, "--expect-decomposable")
        assert code == 0


class TestBottleneck:
    def test_tight_pair(self, capsys):
        code, out, _ = run(capsys, "bottleneck", TIGHT_M, TIGHT_N)
        assert code == 0
        assert json.loads(out) == {"bottleneck": "1/2", "decimal": 0.5}

    def test_identical_files(self, capsys):
        code, out, _ = run(capsys, "bottleneck", CRIT_M, CRIT_M)
        assert json.loads(out) == {"bottleneck": "0/1", "decimal": 0.0}

    def test_per_decoration(self, capsys):
        code, out, _ = run(capsys, "bottleneck", CRIT_M, CRIT_M, "--per-decoration")
        obj = json.loads(out)
        assert set(obj["per_decoration"]) == {"o", "co", "oc", "c"}
        assert obj["bottleneck"] == "0/1"

    def test_signed_diagram_rejected(self, capsys):
        code, _, err = run(capsys, "bottleneck", CURRY, TIGHT_M)
        assert code == 2
        assert json.loads(err)["error"] == "SignedDiagramError"


class TestDot:
    def test_reeb_dot(self, capsys):
        code, out, _ = run(capsys, "dot", REEB)
        assert code == 0
        assert out.startswith("graph reeb {")
        assert out.count(" -- ") == 4

    def test_vec_rejected(self, capsys):
        code, _, err = run(capsys, "dot", CRIT_M)
        assert code == 2


class TestDeterminismAndThreads:
    def test_repeated_runs_identical(self, capsys):
        _, first, _ = run(capsys, "rank", CURRY, "--all")
        _, second, _ = run(capsys, "rank", CURRY, "--all")
        assert first == second

    def test_thread_pool_matches_serial(self, capsys, monkeypatch):
        _, serial, _ = run(capsys, "diagram", CURRY, "--all")
        monkeypatch.setenv("GPD_THREADS", "4")
        _, pooled, _ = run(capsys, "diagram", CURRY, "--all")
        assert serial == pooled

    def test_bad_thread_count(self, capsys, monkeypatch):
        monkeypatch.setenv("GPD_THREADS", "zero")
        code, _, err = run(capsys, "rank", CURRY, "--all")
        assert code == 2

    def test_outputs_reparse(self, capsys):
        for argv in (["rank", AMIT, "--all"], ["diagram", CURRY, "--all"],
                     ["barcode", CRIT_N], ["untwisted", CURRY]):
            code, out, _ = run(capsys, *argv)
            assert code == 0
            json.loads(out)


class TestEntryPoint:
    def test_console_script_runs(self):
        proc = subprocess.run(
            [sys.executable, "-m", "gpd.cli", "diagram", AMIT, "--interval", "{b}"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        assert json.loads(proc.stdout) == {"interval": "{b}", "value": -1}

    def test_missing_file(self):
        proc = subprocess.run(
            [sys.executable, "-m", "gpd.cli", "rank", "/nonexistent.json", "--all"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 2
        assert json.loads(proc.stderr)["error"] == "InputFormatError"
