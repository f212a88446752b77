"""Command-line behavior: exit codes, report content, and determinism."""

import json
import pathlib
import subprocess
import sys

import pytest

from rupture_kit.cli import main

FIXTURES = pathlib.Path(__file__).resolve().parents[1] / "fixtures"


def run_cli(*args):
    """Run the CLI in-process, capturing stdout and the exit code."""
    import contextlib
    import io

    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main([str(a) for a in args])
    return code, buf.getvalue()


class TestValidate:
    def test_valid_documents_exit_zero(self):
        for name in ("triangle.json", "triangle_kan.json", "bank.json"):
            code, out = run_cli("validate", FIXTURES / name)
            assert code == 0 and out.startswith("valid")

    def test_exclusion_conflict_exits_one(self, tmp_path):
        conflict = {
            "format": "rupture-kit/1",
            "kind": "ruptured",
            "dim_bound": 2,
            "simplices": {"0": 3, "1": 3, "2": 1},
            "faces": {"1": [[1, 0], [2, 0], [2, 1]], "2": [[2, 1, 0]]},
            "coh": {"0": [0, 1, 2], "1": [0, 1, 2], "2": [0]},
            "gap": [{"n": 2, "k": 1, "faces": {"0": 2, "2": 0}}],
        }
        path = tmp_path / "conflict.json"
        path.write_text(json.dumps(conflict))
        code, out = run_cli("validate", path)
        assert code == 1
        assert out.count("exclusion") == 1

    def test_malformed_file_exits_two(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{]")
        code, out = run_cli("validate", path)
        assert code == 2 and out.startswith("parse error")

    def test_missing_file_exits_two(self):
        code, out = run_cli("validate", "/no/such/file.json")
        assert code == 2

    def test_max_dim_reports_kan_status(self):
        code, out = run_cli("validate", FIXTURES / "triangle.json", "--max-dim", 2)
        assert code == 0 and "kan up to 2: yes" in out
        code, out = run_cli(
            "validate", FIXTURES / "circle3_open.json", "--max-dim", 2
        )
        assert code == 1 and "kan up to 2: no" in out
        assert "n=2 k=1" in out


class TestHorns:
    def test_kan_triangle_single_coherent_line(self):
        code, out = run_cli("horns", FIXTURES / "triangle_kan.json", "--dim", 2, "--missing", 1)
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 1 and "coherent fillers 0" in lines[0]

    def test_open_circle_three_lines(self):
        code, out = run_cli("horns", FIXTURES / "circle3_open.json", "--dim", 2, "--missing", 1)
        lines = out.strip().splitlines()
        assert code == 0 and len(lines) == 3
        assert all(line.endswith("open") for line in lines)

    def test_gapped_circle_three_lines(self):
        code, out = run_cli("horns", FIXTURES / "circle3_gapped.json", "--dim", 2, "--missing", 1)
        lines = out.strip().splitlines()
        assert code == 0 and len(lines) == 3
        assert all(line.endswith("gapped") for line in lines)

    def test_out_of_range_exits_one(self):
        code, out = run_cli("horns", FIXTURES / "triangle_kan.json", "--dim", 9, "--missing", 0)
        assert code == 1 and out.startswith("error")

    def test_json_mode(self):
        code, out = run_cli(
            "horns", FIXTURES / "circle3_gapped.json", "--dim", 2, "--missing", 1, "--json"
        )
        assert code == 0
        payload = json.loads(out)
        assert len(payload) == 3 and all(p["state"] == "gapped" for p in payload)


class TestTransport:
    def test_bank_gapped_semantic(self):
        code, out = run_cli("transport", FIXTURES / "bank.json", "--term", 0, "--path", 0)
        assert code == 0 and out.strip() == "gapped (semantic)"

    def test_source_mismatch_exits_one(self):
        code, out = run_cli("transport", FIXTURES / "bank.json", "--term", 1, "--path", 0)
        assert code == 1 and out.startswith("error")

    def test_coherent_with_name(self):
        code, out = run_cli("transport", FIXTURES / "bottle.json", "--term", 0, "--path", 0)
        assert code == 0 and out.strip() == "coherent -> poured-volume (multiplicity 1)"


class TestMonodromy:
    def test_double_cover_report(self):
        code, out = run_cli(
            "monodromy", FIXTURES / "double_cover_3.json", FIXTURES / "monodromy_task_3.json"
        )
        assert code == 0
        assert "loop 0: permutation: (0 1)" in out
        assert "loop 1: permutation: ()" in out
        assert "gapped closures: 2" in out
        assert "at w0: gapped (monodromy)" in out
        assert "at w3: gapped (monodromy)" in out

    def test_json_payload(self):
        code, out = run_cli(
            "monodromy",
            FIXTURES / "double_cover_3.json",
            FIXTURES / "monodromy_task_3.json",
            "--json",
        )
        payload = json.loads(out)
        assert payload["loops"][0]["permutation"] == "(0 1)"
        assert len(payload["gapped_closures"]) == 2


class TestCoreProductCompose:
    def test_core_of_kan_triangle(self):
        code, out = run_cli("core", FIXTURES / "triangle_kan.json")
        assert code == 0
        assert "dim 0: 3 of 3 kept" in out

    def test_product_summary_and_json(self):
        code, out = run_cli(
            "product", FIXTURES / "circle3_gapped.json", FIXTURES / "circle3_open.json"
        )
        assert code == 0 and "product dim_bound 2" in out
        code, out = run_cli(
            "product",
            FIXTURES / "circle3_gapped.json",
            FIXTURES / "circle3_open.json",
            "--json",
        )
        assert code == 0
        from rupture_kit.documents import parse_document

        doc = parse_document(out)
        assert doc.kind == "ruptured"

    def test_compose_identity(self, tmp_path):
        # compose the bank fibration with the identity on its base
        from rupture_kit.documents import Document, load_document, serialize_document
        from rupture_kit.fibration import RupturedFibrationData
        from rupture_kit.simplicial import SimplicialMap

        bank = load_document(FIXTURES / "bank.json").body
        ident = RupturedFibrationData(
            bank.base, bank.base, SimplicialMap.identity(bank.base.underlying)
        )
        ident_path = tmp_path / "ident.json"
        ident_path.write_text(serialize_document(Document("fibration", ident)))
        code, out = run_cli("compose", FIXTURES / "bank.json", ident_path)
        assert code == 0 and "composite gap-marked problems: 1" in out


class TestDerive:
    def test_linear_horn_report(self):
        code, out = run_cli("derive", FIXTURES / "derive_linear_horn.json")
        assert code == 0
        assert "gamma: derivable (counts: x=2)" in out
        assert "delta: underivable (counts: y=2)" in out
        assert "horn: inhabited" in out

    def test_json_certificates(self):
        code, out = run_cli("derive", FIXTURES / "derive_linear_horn.json", "--json")
        payload = json.loads(out)
        assert payload["delta"]["certificate"]["counts"] == {"y": 2}
        assert payload["delta"]["certificate"]["verdicts"] == {"y": False}
        assert payload["horn"] is True


class TestJudgments:
    def test_script_replay(self):
        code, out = run_cli("judgments", FIXTURES / "judgment_script.json")
        assert code == 0
        assert "horn (w1, w2, w3)" in out
        assert "level 1 universe [w1,w2,w4]" in out

    def test_violating_script_exits_one(self, tmp_path):
        script = {
            "format": "rupture-kit/1",
            "kind": "judgment-script",
            "script": [
                {"op": "add", "judgment": {"atom": "J"}, "polarity": "coherent"},
                {"op": "add", "judgment": {"atom": "J"}, "polarity": "gapped"},
            ],
        }
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(script))
        code, out = run_cli("judgments", path)
        assert code == 1 and "rejected" in out


class TestDeterminism:
    COMMANDS = [
        ("validate", "bank.json"),
        ("horns", "circle3_gapped.json", "--dim", "2", "--missing", "1"),
        ("transport", "bank.json", "--term", "0", "--path", "0"),
        ("monodromy", "double_cover_3.json", "monodromy_task_3.json"),
        ("derive", "derive_linear_horn.json"),
        ("judgments", "judgment_script.json"),
    ]

    @pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: a[0])
    def test_byte_identical_across_processes(self, argv):
        cmd = [sys.executable, "-m", "rupture_kit"] + [
            str(FIXTURES / a) if a.endswith(".json") else a for a in argv
        ]
        first = subprocess.run(cmd, capture_output=True, cwd=FIXTURES.parent)
        second = subprocess.run(cmd, capture_output=True, cwd=FIXTURES.parent)
        assert first.returncode == second.returncode
        assert first.stdout == second.stdout
        assert first.stdout  # nonempty report
