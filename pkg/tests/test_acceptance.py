"""Acceptance suite: ten exact checks, one PASS/FAIL line each, no tolerance anywhere.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the summary) or
directly with ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import io
import json
import random
import sys
import time
from contextlib import redirect_stdout
from fractions import Fraction as Fr
from math import comb
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))
import oracles  # noqa: E402

from lacohom import cli, liealg, poincare
from lacohom.exactla import Matrix
from lacohom.forms import Form
from lacohom.groups import (
    InhomCochain,
    additive_group,
    bch_group_law,
    chain_map_residual,
    exp_representation,
    log_one_plus,
    multiplicative_group,
    trivial_representation,
    truncated_group_cohomology,
)
from lacohom.jets import Jet, monomials
from lacohom.liealg import CompatibleAutomorphism, LieModule, abelian, ce_complex, filiform4, heisenberg, lie_cohomology, sl2
from lacohom.poincare import boundedness_threshold, homotopy_identity_check, monomial_norm_bound_check, naturality_check
from lacohom.randomgen import random_form, random_jet, random_matrix
from lacohom.scalars import shrink_ratio

FROZEN = json.loads((Path(__file__).resolve().parent / "fixtures" / "frozen.json").read_text())
RESULTS: dict[int, str] = {}


def E(i, j, r):
    return [[int((a, b) == (i, j)) for b in range(r)] for a in range(r)]


def c1():
    rng = random.Random(20240601)
    start = time.perf_counter()
    trials = bad = 0
    for p in (2, 3, 5):
        for _ in range(80):
            n = rng.randint(1, 4)
            q = rng.randint(1, n)
            w = random_form(rng, n, q, rng.randint(0, 6), dim=rng.randint(1, 2), terms=8)
            trials += 1
            bad += not homotopy_identity_check(w, p=p).passed
    elapsed = time.perf_counter() - start
    ok = trials >= 200 and bad == 0 and elapsed < 10
    return ok, f"Poincare homotopy identity on {trials} random forms: {bad} nonzero residuals, {elapsed:.1f}s (limit 10s)"


def c2():
    cases = bad = 0
    for n in (1, 2, 3):
        for q in range(1, n + 1):
            T = tuple(range(q))
            for I in monomials(n, 4):
                w = Form.basis(n, 4, T, Jet.monomial(n, 4, I))
                cases += 1
                bad += not homotopy_identity_check(w).passed
    return bad == 0, f"monomial identity (dh+hd) x^I dx_1..dx_q = x^I dx_1..dx_q: {cases} cases, {bad} failures"


def c3():
    eps, eps2, p = (1, 1), (Fr(1, 2), Fr(1, 2)), 2
    C = shrink_ratio(eps, eps2)
    checked = bad = 0
    thresholds = []
    for q in (1, 2):
        n0 = boundedness_threshold(q, C, p)
        thresholds.append(n0)
        for N in range(n0, n0 + 51):
            for I in monomials(2, N, N):
                checked += 1
                bad += not monomial_norm_bound_check(1, I, q, eps, eps2, p)
    return bad == 0, f"boundedness certificate: thresholds {tuple(thresholds)}, {checked} monomial bounds, {bad} failures"


def c4():
    rng = random.Random(77)
    bad = 0
    for _ in range(60):
        n = rng.randint(1, 3)
        k, m = rng.randint(1, 3), rng.randint(1, 3)
        w = random_form(rng, n, rng.randint(1, n), 4, dim=k)
        bad += not naturality_check(random_matrix(rng, m, k), w)
    return bad == 0, f"naturality of h under 60 random coefficient maps: {bad} failures"


def c5():
    algebras = [("sl2", sl2()), ("heisenberg", heisenberg()), ("abelian3", abelian(3)), ("filiform4", filiform4())]
    bad = []
    for name, g in algebras:
        ad = LieModule(g.dim, [Matrix.from_rows([[g.structure[i][j][k] for j in range(g.dim)] for k in range(g.dim)]) for i in range(g.dim)])
        for M in (LieModule.trivial(g), ad):
            ds = ce_complex(g, M)
            if any(not (b @ a).is_zero() for a, b in zip(ds, ds[1:])):
                bad.append(f"{name}: d^2 != 0")
        dims = [d.dim for d in lie_cohomology(g, LieModule.trivial(g))]
        expect = [comb(g.dim, q) for q in range(g.dim + 1)] if g.is_abelian() else FROZEN["lie_dims_trivial"][name]
        if dims != expect or dims != oracles.ce_dims(g.structure):
            bad.append(f"{name}: dims {dims} vs {expect}")
    shown = {name: tuple(d.dim for d in lie_cohomology(g, LieModule.trivial(g))) for name, g in algebras}
    return not bad, f"CE complex d^2 = 0 and Betti numbers vs oracle {shown}" + (f"; {bad}" if bad else "")


def _groups():
    out = []
    for n in (1, 2, 3):
        G = additive_group(n, 3)
        out.append((f"additive{n}/trivial", G, trivial_representation(n, 1, 3)))
        out.append((f"additive{n}/unipotent", G, exp_representation(G, [E(0, 1, 2)] * n)))
    M = multiplicative_group(3)
    out.append(("multiplicative/trivial", M, trivial_representation(1, 1, 3)))
    out.append(("multiplicative/unipotent", M, exp_representation(M, [E(0, 1, 2)], [log_one_plus(3)])))
    H = bch_group_law(heisenberg(), 3)
    out.append(("heisenberg/trivial", H, trivial_representation(3, 1, 3)))
    out.append(("heisenberg/unipotent", H, exp_representation(H, [E(0, 1, 3), E(1, 2, 3), E(0, 2, 3)])))
    return out


def c6():
    rng = random.Random(314159)
    start = time.perf_counter()
    count = bad = 0
    for _name, law, rep in _groups():
        for p in (0, 1, 2):
            for _ in range(4):
                f = InhomCochain(p, law.n, random_jet(rng, p * law.n, 3, rep.dimV, terms=5, height=4))
                count += 1
                for which in ("psi", "phi"):
                    bad += not chain_map_residual(f, which, rep, law).is_zero()
    elapsed = time.perf_counter() - start
    ok = count >= 100 and bad == 0 and elapsed < 60
    return ok, f"chain-map residuals Psi and Phi on {count} random cochains over {len(_groups())} group/representation pairs: {bad} nonzero, {elapsed:.1f}s (limit 60s)"


def c7():
    cases = [("additive2", additive_group(2, 3), trivial_representation(2, 1, 3)),
             ("heisenberg", bch_group_law(heisenberg(), 4), trivial_representation(3, 1, 4))]
    bad = []
    for name, law, rep in cases:
        tc = truncated_group_cohomology(law, rep, 2)
        for q in (1, 2):
            d = tc.degrees[q]
            if d.psi.matrix != d.phi.matrix:
                bad.append(f"{name} H^{q}")
    return not bad, "Psi and Phi induce equal maps on truncated H^1 and H^2 (additive n=2, Heisenberg)" + (f"; differ: {bad}" if bad else "")


def c8():
    bad = []
    for n in (1, 2, 3):
        for D in (n, n + 1):
            tc = truncated_group_cohomology(additive_group(n, max(D, 2)), trivial_representation(n, 1, max(D, 2)), n, D)
            if tc.dims != [comb(n, q) for q in range(n + 1)] or not all(d.psi.bijective for d in tc.degrees):
                bad.append(f"additive{n} D={D}: {tc.dims}")
    fix = FROZEN["bar_dims"]["heisenberg"]
    H = bch_group_law(heisenberg(), fix["cap"])
    tc = truncated_group_cohomology(H, trivial_representation(3, 1, fix["cap"]), fix["p_max"])
    lie = [d.dim for d in lie_cohomology(heisenberg(), LieModule.trivial(heisenberg()))][: fix["p_max"] + 1]
    if tc.dims != fix["dims"] or tc.dims != lie or any(d.psi.rank != d.lie_dim for d in tc.degrees):
        bad.append(f"heisenberg D={fix['cap']}: {tc.dims} vs {lie}")
    return not bad, f"truncated bar cohomology: additive n<=3 gives C(n,q) with Psi iso at D=n,n+1; Heisenberg D={fix['cap']} dims {tuple(tc.dims)} = Lie dims, Psi full rank" + (f"; {bad}" if bad else "")


def c9():
    g = abelian(2)
    got = [d.invariant_dim for d in liealg.invariants_in_cohomology(g, LieModule.trivial(g), CompatibleAutomorphism([[-1, 0], [0, -1]], [[1]]))]
    return got == [1, 0, 1], f"invariants for g = Q^2, gamma = -id: {tuple(got)} (expected (1, 0, 1))"


def _cli(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = cli.main(argv)
    return code, buf.getvalue()


def c10():
    runs = [["verify", "poincare", "--trials", "30", "--seed", "5", "--format", "json"],
            ["lazard-check", "--bch", "--builtin", "heisenberg", "--degree", "4", "--seed", "5", "--format", "json"],
            ["lazard-check", "--additive", "2", "--seed", "5"]]
    same = all(_cli(a) == _cli(a) and _cli(a)[0] == 0 for a in runs)
    with pytest.MonkeyPatch.context() as mp:
        orig = poincare.homotopy_h
        mp.setattr(poincare, "homotopy_h", lambda w: orig(w).scale(-1))
        h_code = _cli(["verify", "poincare", "--trials", "10"])[0]
    with pytest.MonkeyPatch.context() as mp:
        orig_d = liealg.ce_differential
        mp.setattr(liealg, "ce_differential", lambda q, g, M: orig_d(q, g.negated(), M))
        ce_code = _cli(["lazard-check", "--bch", "--builtin", "heisenberg", "--degree", "4"])[0]
    ok = same and h_code == 1 and ce_code == 1
    return ok, f"CLI reports byte-identical per seed: {same}; mutants exit codes: sign-flipped h {h_code}, wrong CE sign {ce_code}"


CRITERIA = [c1, c2, c3, c4, c5, c6, c7, c8, c9, c10]


def _line(i, ok, detail):
    return f"criterion {i:2d} [{'PASS' if ok else 'FAIL'}] {detail}"


@pytest.mark.parametrize("index", range(1, 11))
def test_criterion(index):
    ok, detail = CRITERIA[index - 1]()
    line = _line(index, ok, detail)
    RESULTS[index] = line
    print(line)
    assert ok, line


if __name__ == "__main__":
    failed = 0
    for i, crit in enumerate(CRITERIA, 1):
        ok, detail = crit()
        failed += not ok
        print(_line(i, ok, detail), flush=True)
    sys.exit(1 if failed else 0)
