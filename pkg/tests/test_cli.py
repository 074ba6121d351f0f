from __future__ import annotations

import json
from pathlib import Path

import pytest

from solvclass.cli import EXIT_INPUT, EXIT_OK, EXIT_UNRESOLVED, EXIT_VERIFY, main

ROOT = Path(__file__).resolve().parents[1]
UNRESOLVED_WITHOUT_FLAGS = ROOT / "diagrams" / "n6_c.json"


def run(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_text(capsys) -> None:
    code, out, _ = run(capsys, "classify", "--dim", "3", "4")
    assert code == EXIT_OK
    assert "# n = 3: 2 classes" in out and "# n = 4: 7 classes" in out
    assert "{13, 234}" in out


def test_classify_json_and_verify_round_trip(capsys, tmp_path) -> None:
    path = tmp_path / "n4.json"
    assert run(capsys, "classify", "--dim", "4", "--format", "json", "-o", str(path))[0] == EXIT_OK
    data = json.loads(path.read_text())
    assert data["summary"]["classes"] == 7
    code, out, _ = run(capsys, "verify", str(path))
    assert code == EXIT_OK
    assert out.count(": ok") == data["summary"]["records"]


def _diagram_file(tmp_path, n: int, arrows) -> Path:
    path = tmp_path / f"d{n}.json"
    path.write_text(json.dumps({"n": n, "arrows": arrows}))
    return path


def test_worked_example_verifies_with_constant(capsys, tmp_path) -> None:
    diagram = _diagram_file(tmp_path, 4, [[1, 2, 3], [1, 3, 4]])
    out_path = tmp_path / "rec.json"
    run(capsys, "classify", "--diagram", str(diagram), "--format", "json", "-o", str(out_path))
    code, out, _ = run(capsys, "verify", str(out_path))
    assert code == EXIT_OK and "Einstein constant -98/289" in out


def test_three_class_diagram_file_gives_one_row(capsys, tmp_path) -> None:
    diagram = _diagram_file(tmp_path, 5, [[1, 2, 3], [1, 3, 4], [2, 3, 5]])
    code, out, _ = run(capsys, "classify", "--diagram", str(diagram))
    assert code == EXIT_OK
    assert "# n = 5: 1 classes" in out and "{135, 234}" in out


@pytest.mark.parametrize("tamper", ["sign", "abs"])
def test_verify_detects_tampering(capsys, tmp_path, tamper: str) -> None:
    path = tmp_path / "n5.json"
    diagram = _diagram_file(tmp_path, 5, [[1, 2, 3], [1, 4, 5]])
    run(capsys, "classify", "--diagram", str(diagram), "--format", "json", "-o", str(path))
    data = json.loads(path.read_text())
    rec = next(r for row in data["rows"] for r in row["records"] if r["A"] == [[2, 4], [3, 5]])
    if tamper == "sign":
        rec["c"][0]["sign"] *= -1
    else:
        rec["c"][0]["abs"] = [[1, 2, 1]]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(rec))
    code, out, _ = run(capsys, "verify", str(bad))
    assert code == EXIT_VERIFY and "FAIL" in out


def test_classify_csv(capsys) -> None:
    code, out, _ = run(capsys, "classify", "--dim", "3", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == EXIT_OK and lines[0].startswith("row,n,arrows")
    assert len(lines) > 2


def test_thread_count_does_not_change_output(capsys) -> None:
    one = run(capsys, "classify", "--dim", "5", "--format", "json", "--threads", "1")[1]
    four = run(capsys, "classify", "--dim", "5", "--format", "json", "--threads", "4")[1]
    assert one == four


def test_input_errors(capsys, tmp_path) -> None:
    code, _, err = run(capsys, "classify", "--dim", "6")
    assert code == EXIT_INPUT and "--diagram" in err
    bad = tmp_path / "cyclic.json"
    bad.write_text(json.dumps({"n": 3, "arrows": [[1, 2, 3], [1, 3, 2]]}))
    code, _, err = run(capsys, "classify", "--diagram", str(bad))
    assert code == EXIT_INPUT and "acyclicity" in err
    assert run(capsys, "verify", str(tmp_path / "missing.json"))[0] == EXIT_INPUT
    garbage = tmp_path / "garbage.txt"
    garbage.write_text("0,0,e1x2 | 1\n")
    assert run(capsys, "curvature", str(garbage))[0] == EXIT_INPUT


def test_strict_flags_unresolved_branches(capsys) -> None:
    code, out, _ = run(capsys, "classify", "--diagram", str(UNRESOLVED_WITHOUT_FLAGS), "--strict")
    assert code == EXIT_UNRESOLVED and "unresolved-parametric" in out
    code, out, _ = run(capsys, "classify", "--diagram", str(UNRESOLVED_WITHOUT_FLAGS), "--strict",
                       "--require-surjective", "--require-unique-A")
    assert code == EXIT_OK and "unresolved" not in out


def test_curvature_text_and_json(capsys, tmp_path) -> None:
    src = tmp_path / "heis.txt"
    src.write_text("1/6 sqrt(3) e14, 1/6 sqrt(3) e24, 1/3 sqrt(3) e12 + 1/3 sqrt(3) e34, 0 | 23\n"
                   "6/7 e14, 8/7 e14 - 2/7 e24, 4/7 e12 + 4/7 e34, 0 | 23\n")
    code, out, _ = run(capsys, "curvature", str(src))
    assert code == EXIT_OK
    assert "diagonalizable = yes" in out and "diagonalizable = no" in out
    assert "distinguishable" in out
    code, out, _ = run(capsys, "curvature", str(src), "--format", "json")
    data = json.loads(out)
    assert data["comparison"][0]["verdict"] == "distinguishable"
    assert data["reports"][0]["a2"] == [[1, 1, 3]]  # [radicand, numerator, denominator]


def test_curvature_of_classified_records(capsys, tmp_path) -> None:
    path = tmp_path / "n3.json"
    run(capsys, "classify", "--dim", "3", "--format", "json", "-o", str(path))
    code, out, _ = run(capsys, "curvature", str(path))
    assert code == EXIT_OK and "a2 = " in out


@pytest.mark.parametrize("argv", [["--help"], ["classify", "--help"]])
def test_help(argv) -> None:
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 0
