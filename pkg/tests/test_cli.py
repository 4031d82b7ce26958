import json
from importlib import resources

import pytest

from ggsflow.cli import main


def fixture_path(name):
    return str(resources.files("ggsflow").joinpath("data", f"{name}.ggs"))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_ok(capsys, tmp_path):
    dot = tmp_path / "m.dot"
    code, out, _ = run(capsys, "validate", fixture_path("example_5_1"), "--dot", str(dot))
    assert code == 0
    assert "condition H: ok" in out and "lift data: ok" in out
    assert dot.read_text().startswith('digraph "example_5_1"')


def test_validate_reports_violations(capsys, tmp_path):
    bad = tmp_path / "bad.ggs"
    bad.write_text("pair bad\nsing x kind=R nature=s\nline u src=x:1:1 dst=y:0:1 lifts=+1\n")
    code, out, _ = run(capsys, "validate", str(bad), "--format", "json")
    assert code == 1
    doc = json.loads(out)
    assert doc["condition_H"][0].startswith("[dangling-ref]") and doc["lift"] == []


def test_parse_error_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.ggs"
    bad.write_text("pair p\nsing x kind=Q nature=a\n")
    code, _, err = run(capsys, "complex", str(bad))
    assert code == 1 and "line 2, column 13" in err


def test_missing_file_is_usage_error(capsys, tmp_path):
    code, _, err = run(capsys, "homology", str(tmp_path / "nope.ggs"))
    assert code == 2 and "cannot read" in err


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["spectral", fixture_path("example_7_1"), "--rmax", "-1"])
    assert info.value.code == 2


def test_complex_json(capsys):
    code, out, _ = run(capsys, "complex", fixture_path("example_7_1"), "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["d_squared_zero"] is True and doc["witness"] is None
    assert doc["generators"][0] == "x12:0:1" and len(doc["matrix"]) == 14


def test_complex_of_empty_pair(capsys):
    code, out, _ = run(capsys, "complex", fixture_path("empty"))
    assert code == 0 and "(empty complex: 0x0 matrix)" in out and "d^2 = 0" in out


def test_complex_reports_d2_failure(capsys, tmp_path):
    text = open(fixture_path("example_7_1")).read().replace(
        "line u5  src=x9:1:1 dst=x11:0:1 lifts=-1", "line u5  src=x9:1:1 dst=x11:0:1 lifts=+1")
    bad = tmp_path / "flipped.ggs"
    bad.write_text(text)
    code, out, _ = run(capsys, "complex", str(bad))
    assert code == 1
    assert "d^2 != 0: entry 2 at (x11:0:1, x1:2:1)" in out


def test_order_file_overrides(capsys, tmp_path):
    order = tmp_path / "order.txt"
    order.write_text("order x6:0:1 x7:0:1 x8:0:1 x10:0:1 x11:0:1 x12:0:1\n"
                     "order x3:1:1 x4:1:1 x5:1:1 x5:1:2 x9:1:1\n"
                     "order x1:2:1 x2:2:1 x2:2:2\n")
    code, out, _ = run(capsys, "homology", fixture_path("example_7_1"), "--order", str(order),
                       "--format", "json")
    assert code == 0 and json.loads(out)["betti"] == [2, 0, 2]
    order.write_text("order x1:2:1\n")
    code, _, err = run(capsys, "spectral", fixture_path("example_7_1"), "--order", str(order))
    assert code == 1 and "order" in err


def test_spectral_sweep_and_oracle_agree(capsys):
    code, sweep_out, _ = run(capsys, "spectral", fixture_path("example_7_1"), "--format", "json")
    assert code == 0
    code, oracle_out, _ = run(capsys, "spectral", fixture_path("example_7_1"), "--format", "json", "--oracle")
    assert code == 0
    assert json.loads(sweep_out) == json.loads(oracle_out)
    code, text, _ = run(capsys, "spectral", fixture_path("example_7_1"), "--rmax", "2")
    assert "d^1_6: 6 -> 5  (+1)" in text and "E^inf by index" in text


def test_cancel_text_and_json(capsys, tmp_path):
    dot = tmp_path / "trace.dot"
    code, out, _ = run(capsys, "cancel", fixture_path("example_7_1"), "--dot", str(dot))
    assert code == 0
    assert out.count("\nstep ") == 5
    assert "5 cancellation(s); core flow: yes" in out and "conservation: ok" in out
    assert '"x1\'@1"' in dot.read_text()
    code, out, _ = run(capsys, "cancel", fixture_path("example_5_1"), "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["core_flow"] and doc["conservation"] == []
    assert doc["steps"][0]["event"]["successor"]["kind"] == "wedge(D2,W2)"


def test_harness(capsys):
    code, out, _ = run(capsys, "harness", "--seed", "5", "--count", "20", "--max-size", "8")
    assert code == 0 and "20/20 instances agree" in out
