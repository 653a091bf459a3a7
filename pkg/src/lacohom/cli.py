"""Command-line entry point.

Exit codes: 0 when every exact identity holds, 1 when a check fails or an
input is mathematically invalid, 2 for usage errors and unmet preconditions.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Dict, List

from . import __version__, groups, liealg, poincare
from .forms import Form, increasing_tuples
from .jets import Jet, monomials
from .randomgen import make_rng, random_form, random_jet, random_matrix
from .scalars import Multiradius, Prime, format_scalar, shrink_ratio
from .schema import (
    SchemaError,
    dumps_report,
    jet_to_json,
    load_algebra,
    load_automorphism,
    load_document,
    load_group,
    load_module,
    load_rep,
)


class UsageError(Exception):
    """Bad flags or unmet preconditions (exit 2)."""


def _radius(text: str, n: int) -> Multiradius:
    try:
        parts = [Fraction(s) for s in text.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad multiradius {text!r}") from exc
    if len(parts) == 1:
        parts = parts * n
    if len(parts) != n:
        raise UsageError(f"multiradius {text!r} needs 1 or {n} components")
    try:
        return Multiradius(parts)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _form_json(omega: Form) -> Dict[str, Any]:
    return {"nvars": omega.nvars, "q": omega.q, "cap": omega.cap, "dim": omega.dim,
            "components": [[list(t), jet_to_json(j)] for t, j in sorted(omega.components.items())]}


# -- verify poincare ----------------------------------------------------------------

def cmd_verify_poincare(args) -> tuple[int, Dict[str, Any]]:
    n, q_max, degree, p = args.n, args.q_max, args.degree, args.prime
    if n < 1 or q_max < 1 or degree < 0 or args.trials < 0:
        raise UsageError("--n and --q-max must be >= 1, --degree and --trials >= 0")
    try:
        Prime(p)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    eps = _radius(args.epsilon, n)
    eps_prime = _radius(args.epsilon_prime, n)
    try:
        C = shrink_ratio(eps, eps_prime)
    except ValueError as exc:
        raise UsageError(f"epsilon' must be strictly smaller than epsilon: {exc}") from exc
    q_top = min(q_max, n)
    rng = make_rng(args.seed)
    failures: List[Dict[str, Any]] = []

    passed = 0
    for t in range(args.trials):
        q = rng.randint(1, q_top)
        omega = random_form(rng, n, q, degree, dim=rng.randint(1, 2))
        rep = poincare.homotopy_identity_check(omega, eps, p)
        if rep.passed:
            passed += 1
        else:
            failures.append({"check": "homotopy_identity", "trial": t, "digest": rep.digest,
                             "residual_norm": format_scalar(rep.max_residual_norm), "form": _form_json(omega)})
    homotopy = {"trials": args.trials, "passed": passed}

    grid = 0
    grid_ok = 0
    for q in range(1, q_top + 1):
        for T in increasing_tuples(n, q):
            for I in monomials(n, degree):
                omega = Form.basis(n, degree, T, Jet.monomial(n, degree, I))
                grid += 1
                if poincare.homotopy_identity_check(omega, eps, p).passed:
                    grid_ok += 1
                else:
                    failures.append({"check": "monomial_identity", "I": list(I), "dx": list(T)})
    monomial = {"cases": grid, "passed": grid_ok}

    nat_ok = 0
    for t in range(args.trials):
        q = rng.randint(1, q_top)
        k, m = rng.randint(1, 3), rng.randint(1, 3)
        omega = random_form(rng, n, q, degree, dim=k)
        phi = random_matrix(rng, m, k)
        if poincare.naturality_check(phi, omega):
            nat_ok += 1
        else:
            failures.append({"check": "naturality", "trial": t, "form": _form_json(omega),
                             "map": [[format_scalar(x) for x in r] for r in phi]})
    naturality = {"trials": args.trials, "passed": nat_ok}

    bounds = []
    for q in range(1, q_top + 1):
        n0 = poincare.boundedness_threshold(q, C, p)
        checked = ok = 0
        for N in range(n0, n0 + args.window + 1):
            for I in monomials(n, N, N):
                checked += 1
                if poincare.monomial_norm_bound_check(1, I, q, eps, eps_prime, p):
                    ok += 1
                else:
                    failures.append({"check": "monomial_norm_bound", "q": q, "I": list(I)})
        bounds.append({"q": q, "threshold": n0, "monomials": checked, "passed": ok})

    report = {
        "command": "verify poincare",
        "version": __version__,
        "config": {"n": n, "q_max": q_max, "degree": degree, "prime": p,
                   "epsilon": [format_scalar(x) for x in eps],
                   "epsilon_prime": [format_scalar(x) for x in eps_prime],
                   "trials": args.trials, "seed": args.seed, "window": args.window},
        "shrink_ratio": format_scalar(C),
        "homotopy_identity": homotopy,
        "monomial_identity": monomial,
        "naturality": naturality,
        "norm_bounds": bounds,
        "failures": failures,
        "status": "fail" if failures else "ok",
    }
    return (1 if failures else 0), report


# -- lie-cohomology ------------------------------------------------------------------

BUILTIN_ALGEBRAS = {"sl2": liealg.sl2, "heisenberg": liealg.heisenberg, "filiform4": liealg.filiform4}


def _algebra(args) -> liealg.LieAlgebra:
    if args.algebra and args.builtin:
        raise UsageError("give either --algebra or --builtin, not both")
    if args.builtin:
        name = args.builtin
        if name.startswith("abelian") and name[7:].isdigit():
            return liealg.abelian(int(name[7:]))
        if name not in BUILTIN_ALGEBRAS:
            raise UsageError(f"unknown builtin algebra {name!r}")
        return BUILTIN_ALGEBRAS[name]()
    if not args.algebra:
        raise UsageError("an algebra is required (--algebra FILE or --builtin NAME)")
    return load_algebra(load_document(args.algebra))


def _vec_json(v) -> List[str]:
    return [format_scalar(x) for x in v]


def cmd_lie_cohomology(args) -> tuple[int, Dict[str, Any]]:
    g = _algebra(args)
    report: Dict[str, Any] = {"command": "lie-cohomology", "version": __version__, "dim": g.dim}
    check = liealg.validate_lie_algebra(g)
    if not check.ok:
        report.update(status="invalid algebra", violations=check.violations)
        return 1, report
    M = load_module(load_document(args.module)) if args.module else liealg.LieModule.trivial(g)
    check = liealg.validate_module(g, M)
    if not check.ok:
        report.update(status="invalid module", violations=check.violations)
        return 1, report
    report["module_dim"] = M.dim
    degrees = liealg.lie_cohomology(g, M)
    report["dims"] = [d.dim for d in degrees]
    if args.representatives:
        report["representatives"] = [
            {"q": d.q, "basis": [_vec_json(v) for v in d.representatives]} for d in degrees
        ]
    if args.automorphism:
        gamma = load_automorphism(load_document(args.automorphism))
        check = liealg.validate_automorphism(g, M, gamma)
        if not check.ok:
            report.update(status="invalid automorphism", violations=check.violations)
            return 1, report
        report["invariant_dims"] = [d.invariant_dim for d in liealg.invariants_in_cohomology(g, M, gamma)]
    report["status"] = "ok"
    return 0, report


# -- lazard-check -------------------------------------------------------------------------

def _group(args, D: int) -> groups.FormalGroupLaw:
    chosen = [x for x in (args.group, args.additive, args.multiplicative or None, args.bch or None) if x]
    if len(chosen) != 1:
        raise UsageError("choose exactly one of --group, --additive, --multiplicative, --bch")
    if args.additive:
        return groups.additive_group(args.additive, max(D, 2))
    if args.multiplicative:
        return groups.multiplicative_group(max(D, 2))
    if args.bch:
        g = _algebra(args)
        liealg.require_valid(g)
        return groups.bch_group_law(g, max(D, 2, g.nilpotency_class() or 0))
    law = load_group(load_document(args.group))
    if law.cap < D:
        raise UsageError(f"group file has cap {law.cap} < --degree {D}")
    return law


def _representation(args, law: groups.FormalGroupLaw, g: liealg.LieAlgebra) -> groups.GroupRepresentation:
    if sum(bool(x) for x in (args.rep, args.module)) > 1:
        raise UsageError("give at most one of --rep and --module")
    if args.rep:
        rep = load_rep(load_document(args.rep), law.n, law.cap)
        if rep.cap < law.cap:
            raise UsageError("representation file cap is below the group cap")
        return rep
    if args.module:
        if args.multiplicative:
            return groups.exp_representation(law, load_module(load_document(args.module)).action,
                                             log_chart=[groups.log_one_plus(law.cap)])
        return groups.exp_representation(law, load_module(load_document(args.module)).action)
    return groups.trivial_representation(law.n, 1, law.cap)


def _random_cochain(rng, p: int, n: int, dimV: int, D: int) -> groups.InhomCochain:
    return groups.InhomCochain(p, n, random_jet(rng, p * n, D, dimV, terms=4, height=3))


def cmd_lazard_check(args) -> tuple[int, Dict[str, Any]]:
    D, p_max = args.degree, args.p_max
    if p_max < 0 or args.trials < 0:
        raise UsageError("--p-max and --trials must be >= 0")
    if D < p_max + 1:
        raise UsageError(f"cap {D} too small for degree {p_max}: increase --degree to at least {p_max + 1}")
    law = _group(args, D)
    report: Dict[str, Any] = {"command": "lazard-check", "version": __version__,
                              "config": {"n": law.n, "degree": D, "p_max": p_max,
                                         "trials": args.trials, "seed": args.seed}}
    check = groups.validate_group_law(law)
    if not check.ok:
        report.update(status="invalid group law", violations=check.violations)
        return 1, report
    g = groups.lie_algebra_of_group_law(law)
    rep = _representation(args, law, g)
    check = groups.validate_representation(rep, law)
    if not check.ok:
        report.update(status="invalid representation", violations=check.violations)
        return 1, report
    M = groups.derived_representation(rep)
    report["config"]["dimV"] = rep.dimV
    rng = make_rng(args.seed)
    failures: List[Dict[str, Any]] = []

    dd = {"trials": 0, "zero": 0}
    for p in range(p_max):
        for t in range(args.trials):
            f = _random_cochain(rng, p, law.n, rep.dimV, D)
            dd["trials"] += 1
            once = groups.inhomogeneous_differential(f, rep, law)
            twice = groups.inhomogeneous_differential(once, rep, law)
            hom = groups.simplicial_differential_hom(groups.simplicial_differential_hom(groups.homogenize(f, rep, law)))
            if twice.value.is_zero() and hom.value.is_zero():
                dd["zero"] += 1
            else:
                failures.append({"check": "delta_squared", "p": p, "trial": t, "cochain": jet_to_json(f.value)})

    residuals = []
    for p in range(p_max + 1):
        row = {"p": p, "trials": args.trials, "psi_zero": 0, "phi_zero": 0}
        for t in range(args.trials):
            f = _random_cochain(rng, p, law.n, rep.dimV, D)
            for which in ("psi", "phi"):
                r = groups.chain_map_residual(f, which, rep, law, g, M)
                if r.is_zero():
                    row[f"{which}_zero"] += 1
                else:
                    failures.append({"check": f"{which}_chain_map", "p": p, "trial": t, "cochain": jet_to_json(f.value)})
        residuals.append(row)

    cohomology: Dict[str, Any] = {}
    try:
        tc = groups.truncated_group_cohomology(law, rep, p_max, D)
    except ValueError as exc:
        failures.append({"check": "induced_map", "error": str(exc)})
    else:
        asserted = list(range(min(p_max, D - 1) + 1))
        cohomology = {
            "dims": tc.dims,
            "lie_dims": [d.lie_dim for d in tc.degrees],
            "psi_rank": [d.psi.rank for d in tc.degrees],
            "psi_bijective": [d.psi.bijective for d in tc.degrees],
            "phi_agrees": [d.psi.matrix == d.phi.matrix for d in tc.degrees],
        }
        for q in asserted:
            d = tc.degrees[q]
            if not d.psi.bijective:
                failures.append({"check": "psi_iso", "q": q, "rank": d.psi.rank, "dim": d.dim, "lie_dim": d.lie_dim})
            if d.psi.matrix != d.phi.matrix:
                failures.append({"check": "psi_phi_agree", "q": q})
    report.update(delta_squared=dd, residuals=residuals, cohomology=cohomology,
                  failures=failures, status="fail" if failures else "ok")
    if not failures:
        report["summary"] = "Ψ induces iso, dims (" + ",".join(str(x) for x in cohomology["dims"]) + ")"
    return (1 if failures else 0), report


# -- output and dispatch ----------------------------------------------------------------

def render_table(report: Dict[str, Any]) -> str:
    lines = []

    def show(v) -> str:
        if isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v):
            return "(" + ", ".join(str(x) for x in v) + ")"
        if isinstance(v, (list, dict)):
            return json.dumps(v, separators=(",", ":"))
        return str(v)

    for key, value in report.items():
        if key == "failures":
            lines.append(f"failures: {len(value)}")
            for f in value:
                lines.append("  " + ", ".join(f"{k}={show(v)}" for k, v in f.items()))
        elif isinstance(value, dict):
            lines.append(f"{key}:")
            lines += [f"  {k}: {show(v)}" for k, v in value.items()]
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{key}:")
            lines += ["  " + ", ".join(f"{k}={show(v)}" for k, v in item.items()) for item in value]
        else:
            lines.append(f"{key}: {show(value)}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lacohom", description="Exact checks for analytic and Lie algebra cohomology at jet level.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("table", "json"), default="table")

    verify = sub.add_parser("verify", help="run a verification suite")
    vsub = verify.add_subparsers(dest="suite", required=True)
    pc = vsub.add_parser("poincare", help="homotopy operator identities and norm certificates")
    pc.add_argument("--n", type=int, default=3)
    pc.add_argument("--q-max", type=int, default=3)
    pc.add_argument("--degree", type=int, default=4)
    pc.add_argument("--prime", type=int, default=2)
    pc.add_argument("--epsilon", default="1")
    pc.add_argument("--epsilon-prime", default="1/2")
    pc.add_argument("--trials", type=int, default=100)
    pc.add_argument("--seed", type=int, default=0)
    pc.add_argument("--window", type=int, default=10, help="degrees above the threshold to certify")
    common(pc)
    pc.set_defaults(func=cmd_verify_poincare)

    lc = sub.add_parser("lie-cohomology", help="Chevalley-Eilenberg cohomology dimensions")
    lc.add_argument("--algebra")
    lc.add_argument("--builtin", help="sl2, heisenberg, filiform4 or abelianN")
    lc.add_argument("--module")
    lc.add_argument("--automorphism")
    lc.add_argument("--representatives", action="store_true")
    common(lc)
    lc.set_defaults(func=cmd_lie_cohomology)

    lz = sub.add_parser("lazard-check", help="group cochains versus Lie algebra cochains")
    lz.add_argument("--group")
    lz.add_argument("--additive", type=int, metavar="N")
    lz.add_argument("--multiplicative", action="store_true")
    lz.add_argument("--bch", action="store_true", help="BCH law of --algebra/--builtin")
    lz.add_argument("--algebra")
    lz.add_argument("--builtin")
    lz.add_argument("--rep")
    lz.add_argument("--module", help="nilpotent Lie module to exponentiate")
    lz.add_argument("--trivial", action="store_true", help="trivial 1-dim coefficients (default)")
    lz.add_argument("--p-max", type=int, default=2)
    lz.add_argument("--degree", type=int, default=3)
    lz.add_argument("--trials", type=int, default=10)
    lz.add_argument("--seed", type=int, default=0)
    common(lz)
    lz.set_defaults(func=cmd_lazard_check)
    return parser


def main(argv: List[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "trivial", False) and (args.rep or args.module):
        parser.error("--trivial conflicts with --rep/--module")
    try:
        code, report = args.func(args)
    except UsageError as exc:
        print(f"lacohom: error: {exc}", file=sys.stderr)
        return 2
    except (SchemaError, OSError) as exc:
        print(f"lacohom: error: {exc}", file=sys.stderr)
        return 2
    except liealg.InvalidLieAlgebra as exc:
        print(f"lacohom: {exc}", file=sys.stderr)
        return 1
    except groups.CapError as exc:
        print(f"lacohom: error: {exc}; increase --degree", file=sys.stderr)
        return 2
    out = dumps_report(report) if args.format == "json" else render_table(report)
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
