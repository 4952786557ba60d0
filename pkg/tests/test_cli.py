"""End-to-end runs of the command line entry point, in process."""

import json

import pytest

from shellkit import cli
from shellkit.complex_core import parse_facet_lines
from shellkit.gadgets import OneHouseSpec, boundary_simplex, build_one_house

SPHERE = "0 1 2\n0 1 3\n0 2 3\n1 2 3\n"
WEDGE = "0 1 2\n2 3 4\n"
CNF = "p cnf 2 2\n1 -2 2 0\n-1 1 2 0\n"
UNSAT = "p cnf 1 2\n1 1 1 0\n-1 -1 -1 0\n"


def run(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_stats_plain(tmp_path, capsys):
    path = tmp_path / "sphere.txt"
    path.write_text(SPHERE)
    code, out, _ = run(["stats", str(path)], capsys)
    assert code == 0
    assert "f-vector: [1, 4, 6, 4]" in out
    assert "reduced-euler-characteristic: 1" in out
    assert "pseudomanifold: closed" in out
    assert "verdict: yes" in out


def test_stats_json(tmp_path, capsys):
    path = tmp_path / "sphere.txt"
    path.write_text(SPHERE)
    code, out, _ = run(["--json", "stats", str(path)], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"] == "yes"
    assert doc["stats"]["dimension"] == 2
    assert len(doc["input_digest"]) == 12


def test_check_shellable_writes_witness(tmp_path, capsys):
    path = tmp_path / "sphere.txt"
    path.write_text(SPHERE)
    code, out, _ = run(["check", "shellable", str(path)], capsys)
    assert code == 0
    witness = tmp_path / "sphere.shellable.witness.json"
    assert witness.exists()
    assert f"witness: {witness}" in out
    vcode, vout, _ = run(["verify", str(path), str(witness)], capsys)
    assert vcode == 0 and "verdict: yes" in vout


def test_check_no_has_exit_one(tmp_path, capsys):
    path = tmp_path / "wedge.txt"
    path.write_text(WEDGE)
    code, out, _ = run(["check", "shellable", str(path)], capsys)
    assert code == 1
    assert "verdict: no" in out
    assert not (tmp_path / "wedge.shellable.witness.json").exists()


def test_check_k_decomposable_both_spellings(tmp_path, capsys):
    path = tmp_path / "sphere.txt"
    path.write_text(SPHERE)
    code, _, _ = run(["check", "k-decomposable(0)", str(path)], capsys)
    assert code == 0
    code, _, _ = run(
        ["check", "k-decomposable", "--k", "2", str(path)], capsys
    )
    assert code == 0


def test_check_hachimori_witness_replays(tmp_path, capsys):
    path = tmp_path / "sphere.txt"
    path.write_text(SPHERE)
    code, _, _ = run(["check", "hachimori-sd2", str(path)], capsys)
    assert code == 0
    doc = json.loads((tmp_path / "sphere.hachimori-sd2.witness.json").read_text())
    assert doc["kind"] == "collapse"
    assert len(doc["removed_facets"]) == 1
    vcode, vout, _ = run(
        ["verify", str(path), str(tmp_path / "sphere.hachimori-sd2.witness.json")],
        capsys,
    )
    assert vcode == 0 and "verdict: yes" in vout


def test_check_budget_exceeded_exit_three(tmp_path, capsys):
    path = tmp_path / "pair.txt"
    path.write_text("0 1 2\n3 4 5\n")
    code, out, _ = run(
        ["check", "hachimori-sd2", "--budget", "1", str(path)], capsys
    )
    assert code == 3
    assert "budget: exceeded" in out


def test_verify_rejects_tampered_witness(tmp_path, capsys):
    path = tmp_path / "sphere.txt"
    path.write_text(SPHERE)
    run(["check", "shellable", str(path)], capsys)
    witness = tmp_path / "sphere.shellable.witness.json"
    doc = json.loads(witness.read_text())
    doc["order"] = doc["order"][:-1]
    witness.write_text(json.dumps(doc))
    code, out, _ = run(["verify", str(path), str(witness)], capsys)
    assert code == 1
    assert "verdict: no" in out
    assert "reason:" in out


def test_verify_garbage_witness_is_usage_error(tmp_path, capsys):
    path = tmp_path / "sphere.txt"
    path.write_text(SPHERE)
    witness = tmp_path / "bad.json"
    witness.write_text("{]")
    code, _, err = run(["verify", str(path), str(witness)], capsys)
    assert code == 2
    assert "error:" in err


def test_reduce_then_stats(tmp_path, capsys):
    cnf = tmp_path / "phi.cnf"
    cnf.write_text(CNF)
    code, out, _ = run(["reduce", str(cnf)], capsys)
    assert code == 0
    built = tmp_path / "phi.kphi.json"
    assert built.exists()
    assert f"output-path: {built}" in out
    scode, sout, _ = run(["stats", str(built)], capsys)
    assert scode == 0
    assert "f-vector: [1, 113, 431, 321]" in sout
    assert "reduced-euler-characteristic: 2" in sout
    assert "links-connected: yes" in sout


def test_reduce_to_stdout_keeps_report_on_stderr(tmp_path, capsys):
    cnf = tmp_path / "phi.cnf"
    cnf.write_text(CNF)
    code, out, err = run(["reduce", str(cnf), "-o", "-"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["labels"]
    assert "verdict: yes" in err


def test_solve_sat_certificate_round_trip(tmp_path, capsys):
    cnf = tmp_path / "phi.cnf"
    cnf.write_text(CNF)
    code, out, _ = run(["solve-sat", str(cnf)], capsys)
    assert code == 0
    cert = tmp_path / "phi.sat.witness.json"
    assert cert.exists()
    doc = json.loads(cert.read_text())
    assert doc["kind"] == "reduction-certificate"
    assert doc["formula"]["n"] == 2
    assert "assignment" in out
    vcode, vout, _ = run(["verify", str(cnf), str(cert)], capsys)
    assert vcode == 0 and "verdict: yes" in vout


def test_solve_sat_unsat(tmp_path, capsys):
    cnf = tmp_path / "phi.cnf"
    cnf.write_text(UNSAT)
    code, out, _ = run(["solve-sat", str(cnf)], capsys)
    assert code == 1
    assert "verdict: no" in out


def test_verify_certificate_against_other_formula(tmp_path, capsys):
    cnf = tmp_path / "phi.cnf"
    cnf.write_text(CNF)
    run(["solve-sat", str(cnf)], capsys)
    other = tmp_path / "other.cnf"
    other.write_text("p cnf 1 1\n1 1 1 0\n")
    code, _, err = run(
        ["verify", str(other), str(tmp_path / "phi.sat.witness.json")], capsys
    )
    assert code == 2
    assert "error:" in err


def test_verify_inadmissible_removal(tmp_path, capsys):
    cnf = tmp_path / "phi.cnf"
    cnf.write_text(CNF)
    run(["solve-sat", str(cnf)], capsys)
    cert = tmp_path / "phi.sat.witness.json"
    doc = json.loads(cert.read_text())
    doc["removal"] = doc["removal"][:1]
    cert.write_text(json.dumps(doc))
    code, out, _ = run(["verify", str(cnf), str(cert)], capsys)
    assert code == 1
    assert "verdict: inadmissible" in out


def test_gadget_listing_and_dump(tmp_path, capsys):
    code, out, _ = run(["gadget"], capsys)
    assert code == 0
    assert "one_house" in out and "torus_7" in out
    code, out, _ = run(["gadget", "one_house"], capsys)
    assert code == 0
    dumped = parse_facet_lines(out)
    assert dumped.f_vector() == build_one_house(OneHouseSpec()).complex.f_vector()


def test_gadget_unknown_name(capsys):
    code, _, err = run(["gadget", "nonsense"], capsys)
    assert code == 2
    assert "error:" in err


def test_subdivide_stdin_stdout(tmp_path, capsys, monkeypatch):
    import io

    monkeypatch.setattr("sys.stdin", io.StringIO("0 1 2\n"))
    code, out, err = run(["subdivide", "-", "-o", "-"], capsys)
    assert code == 0
    k = parse_facet_lines(out)
    assert k.f_vector() == (1, 7, 12, 6)
    assert "verdict: yes" in err


def test_subdivide_default_path_and_levels(tmp_path, capsys):
    path = tmp_path / "tri.txt"
    path.write_text("0 1 2\n")
    code, _, _ = run(["subdivide", "--levels", "2", str(path)], capsys)
    assert code == 0
    sd2 = tmp_path / "tri.sd2.txt"
    k = parse_facet_lines(sd2.read_text())
    assert k.f_vector() == (1, 25, 60, 36)


def test_parse_error_is_usage_error(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("0 1 x\n")
    code, _, err = run(["stats", str(path)], capsys)
    assert code == 2
    assert "error:" in err


def test_boundary_delta_gadget_matches_builder(capsys):
    code, out, _ = run(["gadget", "boundary_delta_3"], capsys)
    assert code == 0
    dumped = parse_facet_lines(out)
    assert dumped.f_vector() == boundary_simplex(3).f_vector()
