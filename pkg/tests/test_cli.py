from __future__ import annotations

import json
import shutil
import subprocess
import sys

import pytest

from fibcat import corpus as cp
from fibcat.acceptance import corrupt_composition
from fibcat.cli import EXIT_DIVERGENT, EXIT_INPUT, EXIT_OK, main
from fibcat.textformat import parse_file, print_document


@pytest.fixture(scope="module")
def seeded(tmp_path_factory):
    root = tmp_path_factory.mktemp("seeded")
    for k, d in cp.corpus().items():
        (root / k).write_text(print_document(d), encoding="utf-8")
    return root


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    payload = json.loads(out)
    assert payload["exit_code"] == code
    return code, payload


def test_exit_code_values_are_distinct():
    assert len({EXIT_OK, EXIT_INPUT, EXIT_DIVERGENT}) == 3
    assert EXIT_DIVERGENT == 2


def test_validate_corpus_file(capsys, seeded):
    code, payload = run_json(capsys, "validate", seeded / "categories.fcat")
    assert code == EXIT_OK
    assert payload["command"]["command"] == "validate"


def test_validate_reports_corrupted_line(capsys, seeded, tmp_path):
    text, line = corrupt_composition((seeded / cp.CATEGORY_FILE).read_text(encoding="utf-8"))
    bad = tmp_path / "bad.fcat"
    bad.write_text(text, encoding="utf-8")
    code, payload = run_json(capsys, "validate", bad)
    assert code == EXIT_INPUT
    assert payload["error"]["line"] == line


def test_missing_file_exits_one(capsys):
    code, payload = run_json(capsys, "validate", "/definitely/not/here.fcat")
    assert code == EXIT_INPUT
    assert payload["error"]["type"] == "FileNotFoundError"


def test_usage_error_exits_one(capsys):
    assert main(["check", "no-such-property", "x"]) == EXIT_INPUT


def test_check_fibration_on_pmod(capsys, seeded):
    code, payload = run_json(capsys, "check", "fibration", seeded / "pmod.ffib")
    assert code == EXIT_OK
    assert payload["reports"][0]["verdict"] is True


def test_check_splittable_false_on_pmod(capsys, seeded):
    code, payload = run_json(capsys, "check", "splittable", seeded / "pmod.ffib")
    assert code == EXIT_OK
    assert payload["reports"][0]["verdict"] is False


def test_check_locally_small_on_n5_gives_counterexample(capsys, seeded):
    code, payload = run_json(capsys, "check", "locally-small", seeded / "P_N5.ffib")
    assert code == EXIT_OK
    report = payload["reports"][0]
    assert report["verdict"] is False
    assert report["counterexample"]


def test_representable_on_non_elementary_exits_one(capsys, seeded):
    code, _ = run(capsys, "check", "representable", seeded / "P_D2.ffib")
    assert code == EXIT_INPUT


def test_moens_on_glueing(capsys, seeded):
    code, payload = run_json(capsys, "moens", seeded / "gl_incl_2_D2.ffib")
    assert code == EXIT_OK
    assert payload["reports"][0]["verdict"] is True


def test_moens_on_nondisjoint_exits_one(capsys, seeded):
    code, _ = run(capsys, "moens", seeded / "nondisjoint.ffib")
    assert code == EXIT_INPUT


def test_classify_gm(capsys, seeded):
    code, payload = run_json(capsys, "classify-gm", seeded / "adjunctions.fcat", "--block", "incl_2_D2")
    assert code == EXIT_OK
    assert payload["reports"]


@pytest.mark.parametrize("kind", ["fundamental", "glueing", "opposite", "split-left", "split-right"])
def test_construct_output_parses_back(capsys, seeded, tmp_path, kind):
    source = {"fundamental": "categories.fcat", "glueing": "adjunctions.fcat"}.get(kind, "pmod.ffib")
    block = {"fundamental": ["--block", "D2"], "glueing": ["--block", "incl_2_D2.left"]}.get(kind, [])
    out = tmp_path / f"{kind}.ffib"
    code = main(["construct", kind, str(seeded / source), "--format", "text", "--out", str(out), *block])
    capsys.readouterr()
    assert code == EXIT_OK
    doc = parse_file(out)
    assert doc.of_kind("fibration") or doc.of_kind("indexed")
    assert print_document(doc) == out.read_text(encoding="utf-8")


def test_text_format_output(capsys, seeded):
    code, out = run(capsys, "check", "fibration", seeded / "pmod.ffib", "--format", "text")
    assert code == EXIT_OK
    assert "true" in out.lower()


def test_reports_are_byte_stable(capsys, seeded):
    first = run(capsys, "check", "shape", seeded / "P_D2.ffib")
    second = run(capsys, "check", "shape", seeded / "P_D2.ffib")
    assert first == second


def test_sweep_corpus_console_script(tmp_path):
    exe = shutil.which("fibcat")
    cmd = [exe] if exe else [sys.executable, "-m", "fibcat.cli"]
    proc = subprocess.run([*cmd, "sweep-corpus", "--seed-corpus", str(tmp_path), "--format", "text"], capture_output=True, text=True, timeout=100)
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert proc.stdout.count("[PASS]") == 12
    assert (tmp_path / cp.CATEGORY_FILE).exists()
