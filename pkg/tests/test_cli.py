import json

import pytest

from siav.cli import main

OCTIC_NO_PP = "16,8,-12,-2,7,-1,-3,1,1"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_text(capsys):
    code, out, _ = run(capsys, "analyze", "--q", "2", "--poly", OCTIC_NO_PP)
    assert code == 0
    assert "Norm(pi - conj pi)   : 1" in out
    assert "middle coeff a_4     : 7" in out
    assert "pp exists            : false" in out


def test_analyze_structured(capsys):
    code, out, _ = run(capsys, "analyze", "--q", "5", "--poly", "5,-3,1", "--format", "structured")
    assert code == 0
    doc = json.loads(out)
    r = doc["result"]
    assert r["is_weil"] and r["norm_pi_diff"] == 11 and r["disc_order"] == -11
    assert r["super_isolated"]["verdict"] == "true"
    assert r["principal_polarization"]["exists"] is True
    assert len(doc["catalog"]["fingerprint"]) == 64
    assert "timing_seconds" in doc


def test_analyze_product_cites_resultant(capsys):
    code, out, _ = run(capsys, "analyze", "--q", "5", "--poly", "25,-20,13,-4,1")
    assert code == 0
    assert "super-isolated       : false" in out
    assert "|Res(x - 3, x - 1)| = 2" in out


def test_analyze_not_weil(capsys):
    code, out, _ = run(capsys, "analyze", "--q", "5", "--poly", "1,0,1")
    assert code == 0
    assert "weil polynomial      : no" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze", "--q", "6", "--poly", "1,1"],
        ["analyze", "--q", "5", "--poly", "5,-3,2"],
        ["analyze", "--q", "5", "--poly", "a,b"],
        ["enum-field", "--field", "disc-5", "--q", "5"],
        ["enum-field", "--field", "disc-4"],
        ["pairs", "--fields", "disc-4"],
        ["analyze", "--q", "5", "--poly", "5,-3,1", "--format", "csv"],
        ["catalog-validate", "/nonexistent/file.txt"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("siav: error:")


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["analyze", "--q", "5"])
    assert exc.value.code == 2


def test_monic_check_can_be_disabled(capsys):
    code, out, _ = run(capsys, "analyze", "--q", "5", "--poly", "5,-3,2", "--no-monic-check")
    assert code == 0
    assert "weil polynomial      : no" in out


def test_enum_field(capsys):
    code, out, _ = run(capsys, "enum-field", "--field", "disc-4", "--q", "2")
    assert code == 0
    assert "x^2 - 2*x + 2" in out and "x^2 + 2*x + 2" in out
    code, out, _ = run(capsys, "enum-field", "--field", "disc-4", "--q-range", "2:20", "--format", "structured")
    assert [r["q"] for r in json.loads(out)["result"]["records"]] == [2, 2, 5, 5, 17, 17]


def test_pairs(capsys):
    code, out, _ = run(capsys, "pairs", "--fields", "disc-4,disc-19", "--format", "structured")
    assert code == 0
    pairs = json.loads(out)["result"]["pairs"]
    assert [p["q"] for p in pairs] == [17, 17]
    code, out, _ = run(capsys, "pairs", "--fields", "disc-11,disc-19")
    assert out.strip() == "no Weil generator pairs"


def test_pairs_all_builtin(capsys):
    code, out, _ = run(capsys, "pairs", "--all", "--builtin-only", "--workers", "1")
    assert code == 0
    assert out.startswith("26 pair(s)")


def test_table_builtin_only_csv(capsys):
    code, out, _ = run(capsys, "table", "--builtin-only", "--format", "csv", "--workers", "1")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "q,type_1x1,type_1x2,type_1x1x2,type_1x2x2,type_2x2"
    assert lines[1] == "2,4,,,,"
    assert len(lines) == 12


def test_table_text_marks_partial(capsys):
    code, out, _ = run(capsys, "table", "--builtin-only", "--workers", "1")
    assert "partial" in out and "total: 26" in out


def test_structured_output_is_deterministic(capsys):
    from siav.cli import build_parser, cmd_table

    args = build_parser().parse_args(["table", "--builtin-only", "--workers", "1", "--records"])
    a, b = cmd_table(args), cmd_table(args)
    a.timing, b.timing = 1.0, 2.0
    assert a.canonical_text() == b.canonical_text()
    assert a.digest() == b.digest()
    assert a.structured() != b.structured()


def test_catalog_validate(tmp_path, capsys):
    good = tmp_path / "good.txt"
    good.write_text("field {\n id = z5\n f_poly = -1,-1,1\n rel_b = 1,0\n rel_c = 2,-1\n disc_K = 125\n class_number_one = true\n}\n")
    code, out, _ = run(capsys, "catalog-validate", str(good))
    assert code == 0 and "z5 (line 1): ok" in out
    bad = tmp_path / "bad.txt"
    bad.write_text(good.read_text().replace("125", "100"))
    code, out, _ = run(capsys, "catalog-validate", str(bad))
    assert code == 2 and "FAIL" in out
    broken = tmp_path / "broken.txt"
    broken.write_text("field {\n colour = red\n}\n")
    code, out, _ = run(capsys, "catalog-validate", str(broken), "--format", "structured")
    assert code == 2
    assert "line 2" in json.loads(out)["result"]["error"]


def test_custom_catalog_flag(tmp_path, capsys):
    f = tmp_path / "c.txt"
    f.write_text("field {\n id = z5\n f_poly = -1,-1,1\n rel_b = 1,0\n rel_c = 2,-1\n disc_K = 125\n class_number_one = true\n}\n")
    code, out, _ = run(capsys, "enum-field", "--catalog", str(f), "--field", "z5", "--q", "11")
    assert code == 0
    code, _, err = run(capsys, "enum-field", "--catalog", str(tmp_path / "missing.txt"), "--field", "z5", "--q", "11")
    assert code == 2
