import csv
import io
import json
import subprocess
import sys

import pytest

from symindex.cli import run

HALF_TURN = '{"blocks":[{"kind":"rotation","theta":{"pi_num":1,"pi_den":1}}]}'
MIXED = ('{"blocks":[{"kind":"rotation","theta":{"pi_num":2,"pi_den":3}},{"kind":"q0","d":3},'
         '{"kind":"hyperbolic","a":0.5}]}')


@pytest.fixture
def spec_file(tmp_path):
    path = tmp_path / "spec.json"
    path.write_text(MIXED)
    return str(path)


def out_json(capsys):
    return json.loads(capsys.readouterr().out)


def test_eval_reports_spectrum(capsys):
    assert run(["eval", HALF_TURN]) == 0
    out = out_json(capsys)
    assert out["matrix"] == [[-1.0, 0.0], [0.0, -1.0]]
    assert out["unit_spectrum"][0]["alg_mult"] == 2


def test_index_table_for_five_iterates(spec_file, capsys):
    assert run(["index", spec_file, "--m", "5"]) == 0
    records = out_json(capsys)["records"]
    assert [r["m"] for r in records] == [1, 2, 3, 4, 5]
    assert records[2]["nu"] == 4


def test_index_csv(spec_file, capsys):
    assert run(["index", spec_file, "--m", "3", "--format", "csv"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert list(rows[0]) == ["k", "m", "i", "nu", "mu_minus", "mu_plus", "mean"]
    assert len(rows) == 3


def test_iterate_scales_generators(capsys):
    assert run(["iterate", HALF_TURN, "--m", "4"]) == 0
    assert out_json(capsys)["blocks"][0]["mult"] == 4


def test_split_routes_agree(spec_file, capsys):
    assert run(["split", spec_file]) == 0
    table = out_json(capsys)["entries"]
    assert run(["split", spec_file, "--route", "numeric"]) == 0
    assert out_json(capsys)["entries"] == table


def test_cijt_search_returns_requested_count(spec_file, capsys):
    assert run(["cijt-search", spec_file, HALF_TURN, "--epsilon", "1e-3", "--want", "5"]) == 0
    out = out_json(capsys)
    assert len(out["certificates"]) == 5 and out["warning"] is None


def test_verify_ecijt_passes(spec_file, capsys):
    assert run(["verify-ecijt", spec_file, "--want", "2"]) == 0
    out = out_json(capsys)
    assert out["exit_code"] == 0 and len(out["reports"]) == 2


def test_verify_ir_passes(spec_file, capsys):
    assert run(["verify-ir", spec_file, "--want", "1"]) == 0


def test_verify_ir_precondition_exit(spec_file, capsys):
    assert run(["verify-ir", spec_file, "--want", "1", "--eta", "1e-9"]) == 2
    assert "precondition" in capsys.readouterr().err


def test_verify_degenerate_suite(capsys):
    assert run(["verify-prop1", "--dim-bound", "6"]) == 0
    assert out_json(capsys)["summary"]["passed"]


def test_malformed_json_reports_position(capsys):
    assert run(["index", '{"blocks": [}']) == 2
    err = capsys.readouterr().err
    assert "line 1" in err and "column" in err


def test_missing_file(capsys):
    assert run(["index", "/nonexistent/spec.json"]) == 2


def test_invalid_block_exit_two(capsys):
    assert run(["eval", '{"blocks":[{"kind":"q0","d":2}]}']) == 2


def test_gen_random_is_seeded(capsys):
    assert run(["gen-random", "--seed", "5", "--count", "3"]) == 0
    first = capsys.readouterr().out
    assert run(["gen-random", "--seed", "5", "--count", "3"]) == 0
    assert capsys.readouterr().out == first


def test_output_file(tmp_path, capsys):
    target = tmp_path / "out.json"
    assert run(["iterate", HALF_TURN, "--m", "2", "--output", str(target)]) == 0
    assert json.loads(target.read_text())["blocks"][0]["mult"] == 2


def test_environment_overrides(monkeypatch, capsys):
    monkeypatch.setenv("SYMINDEX_EPSILON", "2e-3")
    assert run(["cijt-search", HALF_TURN, "--want", "1"]) == 0
    assert out_json(capsys)["provenance"]["config"]["epsilon"] == 2e-3
    monkeypatch.setenv("SYMINDEX_EPSILON", "lots")
    assert run(["cijt-search", HALF_TURN, "--want", "1"]) == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "symindex", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip()
