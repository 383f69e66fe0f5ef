import json
import subprocess
import sys

import pytest

from entangle_cert.cli import main
from entangle_cert.examples import EXAMPLES, example_path


def run(*args):
    return main([str(a) for a in args])


def test_generate_matches_shipped_documents(capsys):
    for name, (family, params) in EXAMPLES.items():
        flags = [x for k, v in params.items() for x in (f"--{k}", v)]
        assert run("generate", "--family", family, *flags) == 0
        assert capsys.readouterr().out == example_path(name).read_text()


def test_generate_to_file_then_analyze(tmp_path, capsys):
    out = tmp_path / "u.json"
    assert run("generate", "--family", "ubb", "--out", out) == 0
    assert run("analyze", out, "--check", "strong-nonlocality,ubb") == 0
    text = capsys.readouterr().out
    assert "strong-nonlocality: holds" in text and "complement dimension: 3" in text


def test_rejected_basis_parameters(capsys):
    assert run("generate", "--family", "basis", "--a1", "-2", "--b1", "1") == 4
    assert "ParamConstraintViolated" in capsys.readouterr().err


def test_unknown_family(capsys):
    assert run("generate", "--family", "nope") > 2


def test_s0_strong_nonlocality_fails_with_witness(capsys):
    assert run("analyze", example_path("S0"), "--check", "strong-nonlocality") == 1
    text = capsys.readouterr().out
    assert "OPM witness on BC" in text and "3/4" in text and "outcome 1 eliminates: tau" in text


def test_garbage_input_is_a_parse_error(tmp_path, capsys):
    bad = tmp_path / "garbage.json"
    bad.write_text("{not json")
    assert run("analyze", bad) == 3
    assert "line 1" in capsys.readouterr().err


def test_inconclusive_exit_code(capsys):
    assert run("analyze", "--family", "set-Sz", "--z", "3", "--check", "strong-nonlocality") == 2


def test_non_orthogonal_input_reports_error(capsys):
    assert run("analyze", example_path("Omega"), "--check", "strong-nonlocality") == 3


def test_input_and_family_are_exclusive(capsys):
    assert run("analyze", example_path("U"), "--family", "ubb") > 2
    assert run("analyze") > 2


def test_json_report_is_deterministic(tmp_path, capsys):
    args = ["analyze", "--family", "omega", "--check", "ces,ges,distill", "--format", "json", "--no-timing"]
    assert run(*args) == 0
    first = capsys.readouterr().out
    assert run(*args) == 0
    assert capsys.readouterr().out == first
    doc = json.loads(first)
    assert [c["verdict"] for c in doc["checks"]] == ["holds", "holds", "holds"]


def test_json_timing_sidecar(capsys):
    run("analyze", "--family", "ubb", "--check", "orthogonality", "--format", "json")
    doc = json.loads(capsys.readouterr().out)
    assert "ms" in doc["checks"][0]


def test_tables_text_and_json(capsys):
    assert run("tables", "--family", "ubb") == 0
    text = capsys.readouterr().out
    assert "product index 6" in text and "0.207481" in text and "-5.443347" in text
    assert run("tables", "--family", "ubb", "--format", "json") == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["product_index"] == 6 and len(doc["rows"]) == 6 and len(doc["gram"]) == 6


def test_tables_for_ces_input(capsys):
    assert run("tables", "--family", "omega") == 0
    assert capsys.readouterr().out == "product index 0, no table\n"


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "entangle_cert.cli", "generate", "--family", "tau"], capture_output=True, text=True)
    assert proc.returncode == 0 and '"tau"' in proc.stdout


@pytest.mark.parametrize("check", ["orthogonality", "ces", "ges", "qces", "opm"])
def test_every_check_runs_from_cli(check, capsys):
    assert run("analyze", "--family", "set-Sz", "--z", "1+i", "--check", check) in (0, 1, 2)
