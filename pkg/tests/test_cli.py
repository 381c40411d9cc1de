from __future__ import annotations

import csv
import io
import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from kcert.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_certificate_json(capsys):
    code, out = run(capsys, "certificate", "--endpoints", "paper", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert F(doc["value"]) <= F(99, 100)
    assert doc["value_approx"].startswith("0.98011")
    assert all(g["passed"] for g in doc["gates"])
    refuted = sorted(f["id"] for f in doc["fixtures"] if f["verdict"] == "refuted")
    assert refuted == ["2a1.sw.E4.L14", "2a1.sw.E4.L24"]
    assert "none used by the certificate" in doc["verdict"]


def test_verify_surface_a2_notes_method_failure(capsys):
    code, out = run(capsys, "verify-surface", "--config", "a2")
    assert code == 0
    assert "method failure" in out
    assert "refuted" not in out.split("verdict:")[0]


def test_verify_surface_a1_passes(capsys):
    code, out = run(capsys, "verify-surface", "--config", "a1", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert all(f["verdict"] == "confirmed" for f in doc["fixtures"])
    assert doc["meta"]["samples_per_interval"] == 9


def test_verify_surface_two_a1_fails_on_refuted_forms(capsys):
    code, out = run(capsys, "verify-surface", "--config", "2a1")
    assert code == 1
    assert "2a1.sw.E4.L24" in out and "2a1.sw.E4.L14" in out
    assert "(17 + 6*u - 15*u^2 + 4*u^3)/(15 - 3*u^2)" in out


def test_samples_below_soundness_bound_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["verify-surface", "--config", "a1", "--samples", "5"])
    assert info.value.code == 2
    assert "at least 7" in capsys.readouterr().err


def test_verify_threefold(capsys):
    code, out = run(capsys, "verify-threefold", "--format", "json")
    assert code == 0
    assert json.loads(out)["value"] == "69/80"


def test_dump_csv_is_exact_and_parseable(capsys):
    code, out = run(capsys, "dump", "--table", "svalues", "--grid", "3", "--config", "a1")
    assert code == 0
    body = "\n".join(line for line in out.splitlines() if not line.startswith("#"))
    rows = list(csv.DictReader(io.StringIO(body)))
    e4 = {r["u"]: F(r["s_curve"]) for r in rows if r["flag"] == "E4"}
    assert e4["3/2"] == F(28, 33)


@pytest.mark.parametrize("table", ["chambers", "profiles"])
def test_dump_tables(capsys, table):
    code, out = run(capsys, "dump", "--table", table, "--grid", "2", "--config", "a2")
    assert code == 0 and "A2" in out


def test_output_file_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify-surface", "--config", "a2", "--format", "json", "--output", str(a)]) == 0
    assert main(["verify-surface", "--config", "a2", "--format", "json", "--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    json.loads(a.read_text())


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "kcert", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "certificate" in proc.stdout
