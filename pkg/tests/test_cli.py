import json
from pathlib import Path

import pytest

from bspec.cli import main
from bspec.report import Report, emit_report

FIXTURES = sorted(Path(__file__).resolve().parent.parent.glob("fixtures/*.bsp"))


@pytest.mark.parametrize("path", FIXTURES, ids=lambda p: p.stem)
def test_check_exits_zero_on_fixtures(path, capsys):
    assert main(["check", str(path)]) == 0
    out = capsys.readouterr().out
    assert "0 failed" in out


def test_check_reports_failure_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.bsp"
    bad.write_text("""\
setoid X2 {
  elements: p, q
}
directed D {
  elements: 0, 1
  order: 0 <= 1
}
family F {
  index: D
  carrier 0: X2
  carrier 1: X2
  map 0 -> 1: p => p, q => q
}
subbase FX {
  carrier: X2
  gen f: p => 0, q => 1
}
spectrum S {
  family: F
  space 0: FX
  space 1: FX
  witness 0 -> 1 f: (gen f)
}
cofinal BADCOF {
  directed: D
  members: 0
  cof: 0 => 0, 1 => 0
}
suite main {
  check: cofinal S BADCOF
}
""")
    assert main(["check", str(bad)]) == 1
    out = capsys.readouterr().out
    assert "FAIL" in out and "cof3" in out


def test_parse_error_exit_code(tmp_path, capsys):
    f = tmp_path / "broken.bsp"
    f.write_text("setoid A {\n  elements a b\n}\n")
    assert main(["check", str(f)]) == 2
    assert "2:" in capsys.readouterr().err


def test_missing_file_exit_code(capsys):
    assert main(["check", "/nonexistent/nope.bsp"]) == 2


def test_limit_export_direct(capsys):
    path = next(p for p in FIXTURES if p.stem == "cspec")
    assert main(["limit", str(path), "--direct", "CSPEC"]) == 0
    out = capsys.readouterr().out
    assert "classes: 1" in out
    assert "limit-export CSPEC {" in out


def test_limit_export_inverse(capsys):
    path = next(p for p in FIXTURES if p.stem == "inverse")
    assert main(["limit", str(path), "--inverse", "REV"]) == 0
    out = capsys.readouterr().out
    assert "choices: 2" in out


def test_iso_cofinal(capsys):
    path = next(p for p in FIXTURES if p.stem == "eo1")
    assert main(["iso", str(path), "--cofinal", "EVENS",
                 "--spectrum", "EOSPEC"]) == 0
    out = capsys.readouterr().out
    assert "classes=2" in out


def test_iso_duality(capsys):
    path = next(p for p in FIXTURES if p.stem == "constant")
    assert main(["iso", str(path), "--duality", "PDUAL"]) == 0


def test_json_reports_stable(tmp_path, capsys):
    path = next(p for p in FIXTURES if p.stem == "eo1")
    out1 = tmp_path / "r1.json"
    out2 = tmp_path / "r2.json"
    assert main(["report", str(path), "--json", str(out1), "--seed", "7"]) == 0
    assert main(["report", str(path), "--json", str(out2), "--seed", "7"]) == 0
    capsys.readouterr()
    assert out1.read_bytes() == out2.read_bytes()
    payload = json.loads(out1.read_text())
    assert payload["schema"] == 1
    assert payload["summary"]["fail"] == 0
    assert all(set(c) == {"suite", "law", "status", "witness"}
               for c in payload["checks"])


def test_empty_report_schema():
    text = emit_report(Report(), "json")
    assert text == (
        '{"schema":1,"checks":[],"summary":{"pass":0,"fail":0,"skipped":0}}\n')


def test_failing_law_carries_witness(tmp_path):
    from bspec.report import Finding

    r = Report()
    r.add("s", "law.x", [Finding("broken", ("a", "b"))])
    payload = json.loads(emit_report(r, "json"))
    assert payload["checks"][0]["status"] == "fail"
    assert payload["checks"][0]["witness"]


def test_color_env_toggle(capsys, monkeypatch):
    path = next(p for p in FIXTURES if p.stem == "eo2")
    monkeypatch.setenv("BSPEC_COLOR", "1")
    main(["check", str(path)])
    out = capsys.readouterr().out
    assert "\x1b[32m" in out
    monkeypatch.setenv("BSPEC_COLOR", "0")
    main(["check", str(path)])
    out = capsys.readouterr().out
    assert "\x1b[" not in out


def test_limit_json_embeds_class_count(tmp_path, capsys):
    path = next(p for p in FIXTURES if p.stem == "cspec")
    out = tmp_path / "lim.json"
    assert main(["limit", str(path), "--direct", "CSPEC",
                 "--json", str(out)]) == 0
    capsys.readouterr()
    payload = json.loads(out.read_text())
    assert payload["checks"][0]["witness"] == ["classes=1"]


def test_bad_bounds_rejected(capsys):
    path = next(p for p in FIXTURES if p.stem == "eo1")
    assert main(["check", str(path), "--thread-bound", "0"]) == 2
    assert "positive" in capsys.readouterr().err


def test_invalid_content_rejected_cleanly(tmp_path, capsys):
    doc = tmp_path / "badfam.bsp"
    doc.write_text("""\
setoid X {
  elements: p, q
}
directed D {
  elements: 0, 1, 2
  order: 0 <= 1, 1 <= 2
}
family F {
  index: D
  carrier 0: X
  carrier 1: X
  carrier 2: X
  map 0 -> 1: p => q, q => p
  map 1 -> 2: p => p, q => q
  map 0 -> 2: p => p, q => q
}
""")
    assert main(["check", str(doc)]) == 2
    assert "family-composition" in capsys.readouterr().err
