import json

import pytest

from lacohom import cli, liealg, poincare


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_poincare_default(capsys):
    code, out, _ = run(capsys, "verify", "poincare")
    assert code == 0 and "status: ok" in out


def test_verify_poincare_bad_radius(capsys):
    code, _, err = run(capsys, "verify", "poincare", "--epsilon", "1", "--epsilon-prime", "1")
    assert code == 2 and "strictly smaller" in err


def test_usage_error_exit_2():
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify", "poincare", "--n", "x"])
    assert exc.value.code == 2


def test_sign_flipped_h_detected(capsys, monkeypatch):
    orig = poincare.homotopy_h
    monkeypatch.setattr(poincare, "homotopy_h", lambda w: orig(w).scale(-1))
    code, out, _ = run(capsys, "verify", "poincare", "--trials", "5", "--format", "json")
    report = json.loads(out)
    assert code == 1 and report["status"] == "fail"
    assert report["failures"][0]["check"] == "homotopy_identity" and "form" in report["failures"][0]


def test_wrong_ce_sign_detected(capsys, monkeypatch):
    orig = liealg.ce_differential
    monkeypatch.setattr(liealg, "ce_differential", lambda q, g, M: orig(q, g.negated(), M))
    code, out, _ = run(capsys, "lazard-check", "--bch", "--builtin", "heisenberg", "--degree", "4")
    assert code == 1 and "status: fail" in out


def test_determinism(capsys):
    args = ("verify", "poincare", "--trials", "20", "--seed", "7", "--format", "json")
    a = run(capsys, *args)[1]
    b = run(capsys, *args)[1]
    assert a == b
    c = run(capsys, "verify", "poincare", "--trials", "20", "--seed", "8", "--format", "json")[1]
    assert json.loads(c)["status"] == "ok"


def test_lie_cohomology(capsys, data_dir):
    code, out, _ = run(capsys, "lie-cohomology", "--algebra", str(data_dir / "sl2.json"))
    assert code == 0 and "dims: (1, 0, 0, 1)" in out
    code, out, _ = run(capsys, "lie-cohomology", "--builtin", "abelian3", "--format", "json")
    assert json.loads(out)["dims"] == [1, 3, 3, 1]
    code, out, _ = run(capsys, "lie-cohomology", "--algebra", str(data_dir / "heisenberg.json"),
                       "--automorphism", str(data_dir / "heisenberg_flip.json"), "--format", "json")
    assert code == 0 and json.loads(out)["invariant_dims"] == [1, 0, 0, 1]


def test_lie_cohomology_representatives(capsys):
    code, out, _ = run(capsys, "lie-cohomology", "--builtin", "heisenberg", "--representatives", "--format", "json")
    reps = json.loads(out)["representatives"]
    assert [len(r["basis"]) for r in reps] == [1, 2, 2, 1]


def test_invalid_algebra(capsys, data_dir):
    code, out, _ = run(capsys, "lie-cohomology", "--algebra", str(data_dir / "jacobi_broken.json"))
    assert code == 1 and "Jacobi fails on triple (i=0, j=1, k=2)" in out


def test_missing_file(capsys):
    code, _, err = run(capsys, "lie-cohomology", "--algebra", "/nonexistent.json")
    assert code == 2 and err


def test_lazard_additive(capsys):
    code, out, _ = run(capsys, "lazard-check", "--additive", "2", "--degree", "3")
    assert code == 0 and "Ψ induces iso, dims (1,2,1)" in out


def test_lazard_heisenberg(capsys):
    code, out, _ = run(capsys, "lazard-check", "--bch", "--builtin", "heisenberg", "--degree", "4", "--p-max", "2", "--format", "json")
    report = json.loads(out)
    assert code == 0 and report["cohomology"]["dims"] == [1, 2, 2]


def test_lazard_files(capsys, data_dir):
    code, out, _ = run(capsys, "lazard-check", "--multiplicative", "--rep", str(data_dir / "multiplicative_unipotent_rep.json"))
    assert code == 0
    code, out, _ = run(capsys, "lazard-check", "--group", str(data_dir / "additive2_group.json"),
                       "--module", str(data_dir / "unipotent2_module_abelian2.json"))
    assert code == 0


def test_lazard_cap_too_small(capsys):
    code, _, err = run(capsys, "lazard-check", "--additive", "2", "--degree", "1", "--p-max", "2")
    assert code == 2 and "increase --degree" in err


def test_lazard_needs_one_group(capsys):
    code, _, err = run(capsys, "lazard-check", "--additive", "2", "--multiplicative")
    assert code == 2
