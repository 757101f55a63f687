import json
import shutil

import pytest

from geoprover.cli import classify, main, read_manifest

from .conftest import CORPUS


def small_corpus(tmp_path, names, manifest):
    for n in names:
        shutil.copy(CORPUS / f"{n}.geo", tmp_path / f"{n}.geo")
    (tmp_path / "manifest.tsv").write_text(manifest)
    return tmp_path


def test_prove_inversion(capsys):
    assert main(["prove", str(CORPUS / "inversion.geo")]) == 0
    out, err = capsys.readouterr()
    assert out == '{true, {"AreCollinear[A,B,C]", "AreEqual[A,B]"}}\n'
    assert "Benchmarking:" in err


def test_prove_plain_inversion(capsys):
    assert main(["prove", "--plain", str(CORPUS / "inversion.geo")]) == 0
    out, _ = capsys.readouterr()
    assert out == '{true, {"AreCollinear[A,B,C]", "AreEqual[A,B]"}}\n'


def test_prove_false_control(capsys):
    assert main(["prove", str(CORPUS / "false_free_collinear.geo")]) == 0
    assert capsys.readouterr().out == "false\n"


def test_prove_true_plain_output(capsys):
    assert main(["prove", str(CORPUS / "thales.geo")]) == 0
    assert capsys.readouterr().out == "true\n"


def test_prove_details_flag(capsys):
    assert main(["prove", "--details", str(CORPUS / "false_free_collinear.geo")]) == 0
    assert capsys.readouterr().out == "{false}\n"


def test_prove_debug_log(capsys):
    assert main(["prove", "--debug", str(CORPUS / "inversion.geo")]) == 0
    err = capsys.readouterr().err
    assert "Hypotheses have been processed." in err
    assert "1. -1*v7*v6+v8*v5+v7*v4+-1*v5*v4+-1*v8*v3+v6*v3" in err


def test_prove_timeout_is_undefined(capsys):
    assert main(["prove", "--timeout", "0.3", str(CORPUS / "pascal_conic.geo")]) == 2
    assert capsys.readouterr().out == "undefined\n"


def test_prove_syntax_error(tmp_path, capsys):
    p = tmp_path / "bad.geo"
    p.write_text("M = Midpoint(A, B)\nProve(AreEqual(M, M))\n")
    assert main(["prove", str(p)]) == 1
    assert "unknown object A at line 1" in capsys.readouterr().err


def test_prove_missing_file(tmp_path, capsys):
    assert main(["prove", str(tmp_path / "none.geo")]) == 1
    assert capsys.readouterr().err.startswith("error:")


def test_bench_small_corpus(tmp_path, capsys):
    d = small_corpus(tmp_path, ["thales", "midline", "false_free_points_equal"],
                     "thales t\nmidline t\nfalse_free_points_equal f\n")
    assert main(["bench", str(d)]) == 0
    out, err = capsys.readouterr()
    assert "correct=3 incorrect=0 inconclusive=0" in err
    rows = out.strip().splitlines()
    assert rows[0].split("\t") == ["name", "expected", "obtained", "class", "ms"]
    assert len(rows) == 4


def test_bench_json_and_output(tmp_path, capsys):
    d = small_corpus(tmp_path, ["thales"], "thales t\n")
    target = tmp_path / "out.json"
    assert main(["bench", str(d), "--format", "json", "--output", str(target)]) == 0
    data = json.loads(target.read_text())
    assert data[0]["name"] == "thales" and data[0]["outcome"] == "correct"
    assert capsys.readouterr().out == ""


def test_bench_warns_on_missing_entry(tmp_path, capsys):
    d = small_corpus(tmp_path, ["thales", "midline"], "thales t\n")
    assert main(["bench", str(d)]) == 0
    err = capsys.readouterr().err
    assert "midline.geo has no manifest entry" in err
    assert "correct=1 incorrect=0" in err


def test_bench_incorrect_exit_status(tmp_path, capsys):
    d = small_corpus(tmp_path, ["thales"], "thales f\n")
    assert main(["bench", str(d)]) == 1
    assert "incorrect=1" in capsys.readouterr().err


def test_bench_parallel(tmp_path, capsys):
    d = small_corpus(tmp_path, ["thales", "midline"], "thales t\nmidline t\n")
    assert main(["bench", str(d), "--jobs", "2"]) == 0
    assert "correct=2 incorrect=0" in capsys.readouterr().err


def test_manifest_format(tmp_path):
    p = tmp_path / "manifest.tsv"
    p.write_text("# comment\na.geo t\nb F\n\n")
    assert read_manifest(p) == {"a": "TRUE", "b": "FALSE"}
    p.write_text("a maybe\n")
    with pytest.raises(ValueError, match="manifest.tsv:1"):
        read_manifest(p)


def test_classify():
    assert classify("TRUE", "TRUE") == "correct"
    assert classify("TRUE", "FALSE") == "incorrect"
    assert classify("FALSE", "UNKNOWN", "time budget exhausted") == "timeout"
    assert classify("FALSE", "UNKNOWN", "pair budget") == "inconclusive"
    assert classify("TRUE", "ERROR", "boom") == "inconclusive"
