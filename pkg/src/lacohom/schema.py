"""JSON schemas for algebras, modules, automorphisms, group laws, representations
and cochains.

Rationals are written as "num/den" strings (integers and plain ints are also
accepted on input).  Indices are 0-based.  A jet is a list of
``[exponents, coefficient]`` pairs; the coefficient is a scalar or a vector.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List

from .exactla import Matrix
from .groups import FormalGroupLaw, GroupRepresentation, InhomCochain
from .jets import Jet
from .liealg import CompatibleAutomorphism, LieAlgebra, LieModule
from .scalars import format_scalar


class SchemaError(ValueError):
    """Malformed input document."""


def parse_rational(x) -> Fraction:
    if isinstance(x, bool):
        raise SchemaError(f"not a rational: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"not a rational: {x!r}") from exc
    raise SchemaError(f"rationals must be strings or integers, got {x!r}")


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _require(doc: Dict[str, Any], *keys: str) -> None:
    missing = [k for k in keys if k not in doc]
    if missing:
        raise SchemaError(f"missing field(s): {', '.join(missing)}")


def load_document(path) -> Dict[str, Any]:
    try:
        with open(Path(path), encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc})") from exc


def _matrix(rows) -> Matrix:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise SchemaError("a matrix is a list of rows")
    return Matrix.from_rows([[parse_rational(x) for x in r] for r in rows])


def jet_from_json(terms, nvars: int, cap: int, dim: int = 1) -> Jet:
    out = {}
    for item in terms:
        if not isinstance(item, list) or len(item) != 2:
            raise SchemaError("a jet term is a pair [exponents, coefficient]")
        exps, coeff = item
        if len(exps) != nvars or any(not isinstance(e, int) or e < 0 for e in exps):
            raise SchemaError(f"exponent vector {exps!r} does not fit {nvars} variables")
        vec = tuple(parse_rational(c) for c in coeff) if isinstance(coeff, list) else (parse_rational(coeff),)
        if len(vec) != dim:
            raise SchemaError(f"coefficient {coeff!r} does not have dimension {dim}")
        key = tuple(exps)
        if key in out:
            out[key] = tuple(a + b for a, b in zip(out[key], vec))
        else:
            out[key] = vec
    return Jet(nvars, cap, out, dim)


def jet_to_json(jet: Jet) -> List:
    def coeff(v):
        return format_rational(v[0]) if jet.dim == 1 else [format_rational(x) for x in v]

    return [[list(e), coeff(v)] for e, v in sorted(jet.terms.items())]


def load_algebra(doc) -> LieAlgebra:
    _require(doc, "dim")
    n = doc["dim"]
    brackets = {}
    for b in doc.get("brackets", []):
        _require(b, "i", "j", "coeffs")
        if len(b["coeffs"]) != n:
            raise SchemaError("bracket coefficients must have length dim")
        if not (0 <= b["i"] < n and 0 <= b["j"] < n):
            raise SchemaError(f"bracket index out of range: [{b['i']}, {b['j']}]")
        brackets[(b["i"], b["j"])] = [parse_rational(c) for c in b["coeffs"]]
    c = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for (i, j), v in brackets.items():
        c[i][j] = list(v)
        if (j, i) not in brackets:
            c[j][i] = [-x for x in v]
    return LieAlgebra(n, c, tuple(doc.get("names", ())))


def dump_algebra(g: LieAlgebra) -> Dict[str, Any]:
    brackets = [
        {"i": i, "j": j, "coeffs": [format_rational(x) for x in g.structure[i][j]]}
        for i in range(g.dim) for j in range(i + 1, g.dim) if any(g.structure[i][j])
    ]
    return {"dim": g.dim, "brackets": brackets}


def load_module(doc) -> LieModule:
    _require(doc, "dim", "action")
    return LieModule(doc["dim"], [_matrix(a) for a in doc["action"]])


def load_automorphism(doc) -> CompatibleAutomorphism:
    _require(doc, "gamma_g", "gamma_V")
    return CompatibleAutomorphism(_matrix(doc["gamma_g"]), _matrix(doc["gamma_V"]), doc.get("order"))


def load_group(doc) -> FormalGroupLaw:
    _require(doc, "n", "cap", "F")
    n, cap = doc["n"], doc["cap"]
    if len(doc["F"]) != n:
        raise SchemaError("F needs one jet per coordinate")
    F = [jet_from_json(t, 2 * n, cap) for t in doc["F"]]
    iota = [jet_from_json(t, n, cap) for t in doc["iota"]] if "iota" in doc else None
    return FormalGroupLaw(n, cap, F, iota, doc.get("name", ""))


def dump_group(law: FormalGroupLaw) -> Dict[str, Any]:
    return {"n": law.n, "cap": law.cap, "F": [jet_to_json(f) for f in law.F],
            "iota": [jet_to_json(j) for j in law.iota]}


def load_rep(doc, n: int, cap: int) -> GroupRepresentation:
    _require(doc, "dimV", "rho")
    r = doc["dimV"]
    rows = doc["rho"]
    if len(rows) != r or any(len(row) != r for row in rows):
        raise SchemaError("rho must be a dimV x dimV matrix of jets")
    return GroupRepresentation(r, [[jet_from_json(t, n, cap) for t in row] for row in rows])


def load_cochain(doc, n: int, dimV: int, cap: int) -> InhomCochain:
    _require(doc, "p", "jet")
    p = doc["p"]
    return InhomCochain(p, n, jet_from_json(doc["jet"], p * n, cap, dimV))


def dump_cochain(f: InhomCochain) -> Dict[str, Any]:
    return {"p": f.p, "jet": jet_to_json(f.value)}


def dumps_report(report: Dict[str, Any]) -> str:
    """Deterministic JSON: insertion order kept, fixed separators, trailing newline."""
    return json.dumps(report, indent=2, ensure_ascii=False, default=_default) + "\n"


def _default(x):
    if isinstance(x, Fraction):
        return format_scalar(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")
