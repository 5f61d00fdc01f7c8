"""CLI: subcommands, formats, exit codes, determinism."""

import json

import pytest

from bilmult.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_bound_text(capsys):
    code, out, _ = run(capsys, "bound", "--q", "2", "--n", "4")
    assert code == 0
    assert "lower 9, upper 9" in out
    assert "exact" in out


def test_bound_json_includes_witness(capsys):
    code, out, _ = run(capsys, "bound", "--q", "5", "--n", "3", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["upper"]["value"] == 5 and doc["lower"]["value"] == 5
    assert doc["upper"]["witness"]["rank"] == 5


def test_bound_trivial_degree(capsys):
    code, out, _ = run(capsys, "bound", "--q", "2", "--n", "1")
    assert code == 0
    assert "lower 1, upper 1" in out


def test_table_csv(capsys):
    code, out, _ = run(capsys, "table", "--q", "2", "--n-max", "8", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,lower,upper,method,citation"
    assert len(lines) == 9
    row4 = lines[4].split(",")
    assert row4[0] == "4" and row4[2] == "9"
    for line in lines[1:]:
        cells = line.split(",")
        assert int(cells[1]) <= int(cells[2])


def test_table_row_n2_is_3_for_every_q(capsys):
    for q in (2, 3, 4, 5, 7, 8, 9):
        code, out, _ = run(capsys, "table", "--q", str(q), "--n-max", "2", "--format", "csv")
        assert code == 0
        row2 = out.strip().splitlines()[2].split(",")
        assert row2[1] == row2[2] == "3"


def test_construct_compose_verify_roundtrip(tmp_path, capsys):
    toom43 = tmp_path / "toom43.json"
    k2 = tmp_path / "k2.json"
    c6 = tmp_path / "c6.json"
    assert run(capsys, "construct", "--q", "4", "--n", "3", "--output", str(toom43))[0] == 0
    assert run(capsys, "construct", "--q", "2", "--n", "2", "--output", str(k2))[0] == 0
    code, _, _ = run(capsys, "compose", str(k2), str(toom43), "--output", str(c6))
    assert code == 0
    doc = json.loads(c6.read_text())
    assert doc["rank"] == 15 and doc["n"] == 6
    code, out, _ = run(capsys, "verify", str(c6))
    assert code == 0 and out.startswith("VALID")


def test_every_emitted_file_verifies(tmp_path, capsys):
    for q, n in [(2, 2), (5, 3), (9, 4)]:
        path = tmp_path / f"d{q}_{n}.json"
        assert run(capsys, "construct", "--q", str(q), "--n", str(n),
                   "--output", str(path))[0] == 0
        code, out, _ = run(capsys, "verify", str(path))
        assert code == 0 and out.startswith("VALID")


def test_verify_invalid_reports_basis_pair(tmp_path, capsys):
    path = tmp_path / "bad.json"
    assert run(capsys, "construct", "--q", "2", "--n", "2", "--output", str(path))[0] == 0
    doc = json.loads(path.read_text())
    doc["triples"][0]["c"] = [0, 0]
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 1
    assert out.startswith("INVALID at basis pair (")


def test_compose_field_mismatch_is_domain_error(tmp_path, capsys):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    run(capsys, "construct", "--q", "2", "--n", "2", "--output", str(a))
    run(capsys, "construct", "--q", "9", "--n", "2", "--output", str(b))
    code, _, err = run(capsys, "compose", str(a), str(b))
    assert code == 1 and "error" in err


def test_rank_search_and_budget_env(capsys, monkeypatch):
    code, out, _ = run(capsys, "rank-search", "--q", "2", "--n", "2", "--r-max", "3")
    assert code == 0 and "outcome=found rank=3" in out
    code, out, _ = run(capsys, "rank-search", "--q", "3", "--n", "2", "--r-max", "2")
    assert code == 0 and "outcome=exhausted" in out
    monkeypatch.setenv("BILMULT_BUDGET", "4")
    code, out, _ = run(capsys, "rank-search", "--q", "3", "--n", "2", "--r-max", "3")
    assert code == 1 and "outcome=aborted" in out


def test_tower_table_includes_kash_row(capsys):
    code, out, _ = run(capsys, "tower", "--family", "gs-t3", "--p", "5", "--r", "1",
                       "--k-max", "4", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    row = next(l for l in lines if l.startswith("2,"))
    cells = row.split(",")
    assert cells[2] == "10"  # exact genus
    assert cells[6] == "6" and cells[7] == "60"  # verified N1, N2
    assert all(l.split(",")[5] == "ok" for l in lines[1:])


def test_asymptotic_text_and_missing_a(capsys):
    code, out, _ = run(capsys, "asymptotic", "--q", "2")
    assert code == 0
    assert "27/2" in out
    code, out, _ = run(capsys, "asymptotic", "--q", "7")
    assert code == 0
    assert "ihara-liminf" in out  # present but marked inapplicable
    assert "x m_7 upper" in out.replace("  ", " ") or "x " in out


def test_asymptotic_json_exact_rationals(capsys):
    code, out, _ = run(capsys, "asymptotic", "--q", "25", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["best"]["m_upper"] == "3"
    assert doc["a_q"] == "4"
    code, out, _ = run(capsys, "asymptotic", "--q", "2", "--format", "json")
    doc = json.loads(out)
    assert doc["best"]["M_upper"] == "27/2"
    assert doc["best"]["m_lower"] == "88/25"


def test_output_determinism(tmp_path, capsys):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    run(capsys, "table", "--q", "4", "--n-max", "12", "--format", "csv", "--output", str(a))
    run(capsys, "table", "--q", "4", "--n-max", "12", "--format", "csv", "--output", str(b))
    assert a.read_bytes() == b.read_bytes()
    c = tmp_path / "c.json"
    d = tmp_path / "d.json"
    run(capsys, "construct", "--q", "5", "--n", "3", "--output", str(c))
    run(capsys, "construct", "--q", "5", "--n", "3", "--output", str(d))
    assert c.read_bytes() == d.read_bytes()


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["bound", "--q", "2"])  # missing --n
    assert exc.value.code == 2


def test_domain_error_exit_code(capsys):
    code, _, err = run(capsys, "bound", "--q", "6", "--n", "2")
    assert code == 1 and "not a prime power" in err


def test_construct_too_few_points_domain_error(capsys):
    code, _, err = run(capsys, "construct", "--q", "2", "--n", "3")
    assert code == 1 and "points" in err
