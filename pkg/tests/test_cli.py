"""CLI surface: every subcommand in-process, exit codes, JSON determinism."""

import json

import pytest

from coxcodes import cli


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_group_human_and_json(capsys, tmp_path):
    out_file = tmp_path / "g.json"
    code, out, _ = run(["group", "--family", "A", "--m", "3",
                        "--out", str(out_file)], capsys)
    assert code == 0
    assert "order 24" in out
    report = json.loads(out_file.read_text())
    assert report["order"] == 24
    assert report["longest_element_length"] == 6
    assert report["elements_by_length"][0] == 1


def test_group_json_stdout(capsys):
    code, out, _ = run(["group", "--family", "I2", "--n", "5", "--out", "-"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["order"] == 10 and report["rank"] == 2


def test_group_product_flag(capsys):
    code, out, _ = run(["group", "--product", "A3,I2(5)", "--out", "-"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["order"] == 240
    assert report["rank"] == 5


def test_euler_with_rate(capsys):
    code, out, _ = run(["euler", "--family", "A", "--m", "3",
                        "--r", "1", "--out", "-"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["counts"] == ["1", "11", "11", "1"]
    assert report["rate"]["numerator"] == "1"
    assert report["rate"]["denominator"] == "2"


def test_code_formula_mode(capsys):
    code, out, _ = run(["code", "--family", "A", "--m", "4",
                        "--r", "1", "--out", "-"], capsys)
    assert code == 0
    report = json.loads(out)
    assert (report["n"], report["k"], report["d"]) == (120, 27, 12)
    assert report["d_status"] == "conjecture-only"


def test_code_exact_mode(capsys):
    code, out, _ = run(["code", "--family", "A", "--m", "4", "--r", "1",
                        "--mode", "exact", "--out", "-"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["d"] == 12
    assert report["d_status"] == "verified-exact"


def test_code_dihedral_power(capsys):
    code, out, _ = run(["code", "--family", "I2", "--n", "3", "--mu", "2",
                        "--r", "1", "--out", "-"], capsys)
    assert code == 0
    report = json.loads(out)
    assert (report["n"], report["k"], report["d"]) == (36, 9, 12)


def test_quantum_params_and_zk(capsys):
    code, out, _ = run(["quantum", "--family", "A", "--m", "3",
                        "--q", "0", "--r", "1", "--zk", "2", "--out", "-"], capsys)
    assert code == 0
    report = json.loads(out)
    assert (report["n"], report["k"], report["d"]) == (24, 11, 2)
    assert report["zk"]["predicted"] == "nontrivial_logical"
    assert report["zk"]["simulated"] == "nontrivial_logical"
    assert report["zk"]["agree"] is True


def test_quantum_degenerate(capsys):
    code, out, _ = run(["quantum", "--family", "A", "--m", "3",
                        "--q", "1", "--r", "1", "--out", "-"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["k"] == 0 and report["d"] is None


def test_tables_formula_documented_erratum(capsys):
    code, out, _ = run(["tables", "--table", "Am", "--out", "-"], capsys)
    assert code == 0, "documented diff must not fail the command"
    report = json.loads(out)
    assert len(report["diffs"]) == 1
    diff = report["diffs"][0]
    assert diff["cell"] == [3, 1]
    assert diff["published"][1] == 13 and diff["computed"][1] == 12


def test_tables_markdown_marks_documented(capsys):
    code, out, _ = run(["tables", "--table", "Am"], capsys)
    assert code == 0
    assert "documented diff at cell [3, 1]" in out
    assert "UNEXPECTED" not in out


def test_tables_i23_formula_clean(capsys):
    code, out, _ = run(["tables", "--table", "I23", "--out", "-"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["diffs"] == []
    italics = [c for c in report["cells"] if c["published_italic"]]
    assert all(c["d_status"] == "conjecture-only" for c in italics)


def test_tables_exceptional(capsys):
    code, out, _ = run(["tables", "--table", "exceptional-eulerian",
                        "--out", "-"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["diffs"] == []
    assert {c["family"] for c in report["cells"]} == {
        "H3", "H4", "F4", "E6", "E7", "E8"}


def test_verify_structural(capsys):
    code, out, _ = run(["verify", "--family", "I2", "--n", "6", "--out", "-"], capsys)
    assert code == 0
    report = json.loads(out)
    assert all(c["passed"] for c in report["structural"]["checks"])


def test_verify_sweep(capsys):
    code, out, _ = run(["verify", "--sweep", "48", "--out", "-"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["sweep"]["codes_checked"] > 0
    assert all(e["passed"] for e in report["sweep"]["entries"])


def test_export_genmat(capsys):
    code, out, _ = run(["export", "--what", "genmat", "--family", "A",
                        "--m", "3", "--r", "1"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "24 12"
    assert len(lines) == 13
    assert all(set(row) <= {"0", "1"} and len(row) == 24 for row in lines[1:])


def test_export_cayley(capsys):
    code, out, _ = run(["export", "--what", "cayley", "--family", "I2",
                        "--n", "3"], capsys)
    assert code == 0
    assert out.startswith("graph")
    assert out.count("--") == 6  # hexagonal Cayley graph


def test_export_stabilizers(capsys):
    code, out, _ = run(["export", "--what", "stabilizers", "--family", "I2",
                        "--n", "4", "--q", "0", "--r", "1"], capsys)
    assert code == 0
    assert out == "X11111111\nZ11111111\n"


def test_export_to_file(capsys, tmp_path):
    path = tmp_path / "stab.txt"
    code, out, _ = run(["export", "--what", "stabilizers", "--family", "I2",
                        "--n", "4", "--q", "0", "--r", "1",
                        "--out", str(path)], capsys)
    assert code == 0
    assert path.read_text() == "X11111111\nZ11111111\n"
    assert "wrote stabilizers" in out


def test_bad_arguments_exit_2(capsys):
    assert run(["group", "--family", "I2"], capsys)[0] == 2  # missing --n
    assert run(["code", "--family", "A", "--m", "3", "--r", "9"], capsys)[0] == 2
    assert run(["group", "--product", "Z9"], capsys)[0] == 2


def test_unknown_table_rejected(capsys):
    with pytest.raises(SystemExit):
        cli.main(["tables", "--table", "nope"])
    capsys.readouterr()


@pytest.mark.parametrize("argv", [
    ["tables", "--table", "Am"],
    ["tables", "--table", "I24"],
    ["verify", "--sweep", "48"],
    ["code", "--family", "B", "--m", "3", "--r", "1", "--mode", "exact"],
])
def test_json_reports_are_byte_identical(argv, capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(argv + ["--out", str(a)]) == 0
    assert cli.main(argv + ["--out", str(b)]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()
