import json

import pytest

from diagkit.cli import main
from tests.test_dpi_format import DPI2_TEXT


@pytest.fixture
def dpi2_file(tmp_path):
    path = tmp_path / "dpi2.dpi"
    path.write_text(DPI2_TEXT)
    return str(path)


def test_diagnose_table(dpi2_file, capsys):
    assert main(["diagnose", dpi2_file, "--engine", "hs_tree", "--k", "all"]) == 0
    out = capsys.readouterr().out
    assert "{c1}" in out and "{c2, c3}" in out
    assert out.index("{c1}") < out.index("{c2, c3}")
    assert "oracle_calls=" in out


def test_diagnose_json(dpi2_file, capsys):
    assert main(["diagnose", dpi2_file, "--engine", "ucs_hs_tree",
                 "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["diagnoses"] == [["c2", "c3"], ["c1"]]
    assert payload["probabilities"] == pytest.approx([0.081, 0.049])
    assert payload["format_version"] == 1


def test_diagnose_k_limit(dpi2_file, capsys):
    assert main(["diagnose", dpi2_file, "--k", "1", "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["diagnoses"] == [["c1"]]


def test_diagnose_missing_file(capsys):
    assert main(["diagnose", "definitely-missing.dpi"]) == 1
    assert "cannot read" in capsys.readouterr().err


def test_diagnose_bad_document(tmp_path, capsys):
    path = tmp_path / "bad.dpi"
    path.write_text("COMPONENTS\n  c1\nBEHAVIOR\n  c1: A ->\n")
    assert main(["diagnose", str(path)]) == 1
    assert "line 4" in capsys.readouterr().err


def test_usage_error_exit_code(dpi2_file):
    with pytest.raises(SystemExit) as err:
        main(["diagnose", dpi2_file, "--engine", "nonsense"])
    assert err.value.code == 2


def test_session_simulate(dpi2_file, capsys):
    assert main(["session", dpi2_file, "--simulate", "c2,c3"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    events = [json.loads(line) for line in lines]
    assert events[0]["event"] == "init"
    assert events[-1] == {"event": "done", "final": ["c2", "c3"], "measurements": 1}


def test_session_simulate_rejects_non_diagnosis(dpi2_file, capsys):
    assert main(["session", dpi2_file, "--simulate", "c2"]) == 1
    assert "not a minimal diagnosis" in capsys.readouterr().err


def test_session_interactive(dpi2_file, capsys, monkeypatch):
    answers = iter(["y"])
    monkeypatch.setattr("builtins.input", lambda prompt="": next(answers))
    assert main(["session", dpi2_file, "--interactive"]) == 0
    out = capsys.readouterr().out
    assert "done: {c2, c3}" in out


def test_conformance_json(capsys):
    assert main(["conformance", "--corpus-size", "4", "--n-components", "4",
                 "--out", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert {row["engine"] for row in payload["engines"]} \
        == {"hs_tree", "ucs_hs_tree", "inv_hs_tree", "greedy_heuristic", "brute_force"}
    assert all(row["conforms"] for row in payload["engines"])


def test_bench_csv(capsys):
    assert main(["bench", "--corpus-size", "3", "--n-components", "4"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].startswith("engine,instances")
    assert len(lines) == 6  # header + five engines


def test_bench_backends(capsys):
    assert main(["bench", "--compare-backends"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].startswith("backend,")
    assert len(lines) >= 2
