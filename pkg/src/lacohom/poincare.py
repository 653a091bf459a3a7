"""The polynomial homotopy operator h with dh + hd = id on forms of degree q >= 1.

On a monomial form ``x^I dx_{k_1} ... dx_{k_q}``::

    h = 1/(|I|+q) * sum_a (-1)^(a-1) x^(I + e_{k_a}) dx_{k_1} .. (omit k_a) .. dx_{k_q}

Jets carry no radius, so the inclusion between radii is the identity on
representations; radii only enter through the norm certificates below.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Sequence

from .forms import Form, exterior_derivative, evaluate_form_at_origin
from .jets import Exp, Jet, Vec, eps_norm
from .scalars import Multiradius, Prime, as_scalar, padic_abs, shrink_ratio, vector_abs


def homotopy_h(omega: Form) -> Form:
    """Apply h termwise.  The result has degree q-1 and cap raised by one."""
    q = omega.q
    if q == 0:
        raise ValueError("homotopy undefined in degree 0")
    n, cap = omega.nvars, omega.cap + 1
    acc: Dict[tuple, Dict[Exp, Vec]] = {}
    for idx, jet in omega.components.items():
        for e, v in jet.terms.items():
            w = Fraction(1, sum(e) + q)
            for a, k in enumerate(idx):
                sign = w if a % 2 == 0 else -w
                ne = e[:k] + (e[k] + 1,) + e[k + 1 :]
                rest = idx[:a] + idx[a + 1 :]
                terms = acc.setdefault(rest, {})
                add = tuple(sign * c for c in v)
                terms[ne] = tuple(x + y for x, y in zip(terms[ne], add)) if ne in terms else add
    comps = {idx: Jet(n, cap, terms, omega.dim) for idx, terms in acc.items()}
    return Form(n, q - 1, comps, cap, omega.dim)


def form_digest(omega: Form) -> str:
    items = sorted(
        (idx, sorted((e, tuple(str(c) for c in v)) for e, v in jet.terms.items()))
        for idx, jet in omega.components.items()
    )
    blob = repr((omega.nvars, omega.q, omega.dim, items)).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


@dataclass
class HomotopyReport:
    digest: str
    residual: Form
    max_residual_norm: Fraction
    passed: bool


def homotopy_identity_check(omega: Form, eps: Sequence | None = None, p: int = 2, h=None) -> HomotopyReport:
    """Compute d(h w) + h(d w) - w exactly.

    Headroom is allocated automatically: the form is reinterpreted with cap
    ``degree + 2`` so no term is lost to truncation.  ``h`` may be replaced
    (used to check that a broken operator is caught).
    """
    h = homotopy_h if h is None else h
    cap = max(omega.cap, omega.degree() + 2)
    w = omega.with_cap(cap)
    dh = exterior_derivative(h(w))
    if w.q < w.nvars:
        hd = h(exterior_derivative(w))
        residual = dh + hd - w
    else:
        residual = dh - w
    eps = Multiradius(eps if eps is not None else [1] * omega.nvars)
    norm = max((eps_norm(j, eps, p) for j in residual.components.values()), default=Fraction(0))
    return HomotopyReport(form_digest(omega), residual, norm, residual.is_zero())


def boundedness_threshold(q: int, C, p: int) -> int:
    """Smallest N0 >= 1 with |1/(N+q)|_p <= C**N for every N >= N0.

    Since |1/(N+q)|_p <= N+q, the inequality holds for all N from the first
    M with N+q <= C**N and C**N (C-1) >= 1 on (induction: the right side then
    grows by at least one per step).  Below M the exact inequality is scanned.
    """
    if q < 1:
        raise ValueError("degree must be >= 1")
    C = as_scalar(C)
    p = Prime(p)
    if C <= 1:
        raise ValueError("no threshold exists for C <= 1")
    N, power = 1, C
    while not (N + q <= power and power * (C - 1) >= 1):
        N += 1
        power *= C
    safe = N
    n0 = safe
    for m in range(safe - 1, 0, -1):
        if padic_abs(Fraction(1, m + q), p) <= C**m:
            n0 = m
        else:
            break
    return n0


def monomial_norm_bound_check(a_I, I: Sequence[int], q: int, eps, eps_prime, p: int) -> bool:
    """True iff ||a_I/(|I|+q)|| eps'^I <= ||a_I|| eps^I for this monomial."""
    eps, eps_prime = Multiradius(eps), Multiradius(eps_prime)
    shrink_ratio(eps, eps_prime)  # raises unless eps' < eps
    if len(I) != len(eps):
        raise ValueError("multi-index length must match the multiradius")
    vec = tuple(as_scalar(c) for c in (a_I if isinstance(a_I, (list, tuple)) else (a_I,)))
    norm = vector_abs(vec, p)
    lhs = norm * padic_abs(Fraction(1, sum(I) + q), p) * eps_prime.power(I)
    rhs = norm * eps.power(I)
    return lhs <= rhs


def naturality_check(phi_matrix, omega: Form, h=None) -> bool:
    """Phi(h w) == h(Phi w) and Phi(w(0)) == (Phi w)(0) for a coefficient map Phi."""
    h = homotopy_h if h is None else h
    rows = [[as_scalar(x) for x in r] for r in phi_matrix]
    if not rows or any(len(r) != omega.dim for r in rows):
        raise ValueError("dimension mismatch between the map and the coefficient space")
    left = h(omega).map_coefficients(rows)
    right = h(omega.map_coefficients(rows))
    if left != right:
        return False
    mapped_eval = {
        idx: tuple(sum((r[j] * v[j] for j in range(len(v))), Fraction(0)) for r in rows)
        for idx, v in evaluate_form_at_origin(omega).items()
    }
    mapped_eval = {k: v for k, v in mapped_eval.items() if any(v)}
    return mapped_eval == evaluate_form_at_origin(omega.map_coefficients(rows))
