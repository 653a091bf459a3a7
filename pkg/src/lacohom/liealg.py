"""Finite-dimensional Lie algebras over Q and their Chevalley-Eilenberg complexes.

Cochains of degree q are maps on increasing q-tuples of basis indices with
values in V.  Coordinates are ordered tuple-major: the entry for
``(tuple, a)`` sits at ``tuple_index * dim V + a`` with tuples in
``itertools.combinations`` order.  The differential is

    (dw)(x_0..x_q) = sum_i (-1)^i x_i . w(..^x_i..)
                   + sum_{i<j} (-1)^(i+j) w([x_i, x_j], ..^x_i..^x_j..)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Dict, List, Mapping, NamedTuple, Sequence, Tuple

from .exactla import (
    Matrix,
    cohomology_at,
    determinant,
    image_basis,
    induced_map_on_cohomology,
    inverse,
    rank,
)
from .scalars import as_scalar

_ZERO = Fraction(0)


class InvalidLieAlgebra(ValueError):
    pass


@dataclass
class LieAlgebra:
    """Structure constants ``c[i][j][k]`` with ``[e_i, e_j] = sum_k c[i][j][k] e_k``."""

    dim: int
    structure: List[List[List[Fraction]]]
    names: Tuple[str, ...] = ()

    def __post_init__(self):
        n = self.dim
        if len(self.structure) != n or any(len(r) != n or any(len(c) != n for c in r) for r in self.structure):
            raise ValueError("structure constants must be an n x n x n array")
        self.structure = [[[as_scalar(x) for x in c] for c in r] for r in self.structure]
        if not self.names:
            self.names = tuple(f"e{i}" for i in range(n))

    @classmethod
    def from_brackets(cls, dim: int, brackets: Mapping[Tuple[int, int], Sequence], names=()) -> "LieAlgebra":
        """Build from ``{(i, j): coeffs}`` with i < j; the opposite brackets are filled antisymmetrically."""
        c = [[[_ZERO] * dim for _ in range(dim)] for _ in range(dim)]
        for (i, j), coeffs in brackets.items():
            if i == j:
                raise ValueError("bracket of a basis vector with itself is zero by definition")
            coeffs = [as_scalar(x) for x in coeffs]
            if len(coeffs) != dim:
                raise ValueError("bracket coefficient vector has the wrong length")
            c[i][j] = coeffs
            c[j][i] = [-x for x in coeffs]
        return cls(dim, c, tuple(names))

    def bracket(self, u: Sequence, v: Sequence) -> List[Fraction]:
        out = [_ZERO] * self.dim
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if not b:
                    continue
                ab = as_scalar(a) * as_scalar(b)
                for k, c in enumerate(self.structure[i][j]):
                    if c:
                        out[k] += ab * c
        return out

    def is_abelian(self) -> bool:
        return not any(x for r in self.structure for c in r for x in c)

    def lower_central_series(self) -> List[int]:
        """Dimensions of g, [g,g], [g,[g,g]], ... until they stabilise."""
        n = self.dim
        basis = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        dims = [n]
        current = basis
        while current:
            spans = [self.bracket(e, v) for e in basis for v in current]
            nxt = image_basis(Matrix.from_columns(spans, n)) if spans else []
            if len(nxt) == len(current):
                break
            dims.append(len(nxt))
            current = nxt
        return dims

    def nilpotency_class(self) -> int | None:
        """Smallest c with g^(c+1) = 0, or None if g is not nilpotent (0 for g = 0)."""
        lcs = self.lower_central_series()
        if lcs[-1] != 0:
            return None if self.dim else 0
        return len(lcs) - 1

    def negated(self) -> "LieAlgebra":
        """The opposite algebra [x, y]' = -[x, y]."""
        return LieAlgebra(self.dim, [[[-x for x in c] for c in r] for r in self.structure], self.names)


class ValidationReport(NamedTuple):
    ok: bool
    violations: List[str]


def validate_lie_algebra(g: LieAlgebra) -> ValidationReport:
    n, c = g.dim, g.structure
    bad = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if c[i][j][k] != -c[j][i][k]:
                    bad.append(f"antisymmetry fails at (i={i}, j={j}, k={k})")
    for i, j, k in combinations(range(n), 3):
        ei, ej, ek = ([Fraction(int(t == s)) for t in range(n)] for s in (i, j, k))
        total = [_ZERO] * n
        for x, y, z in ((ei, ej, ek), (ej, ek, ei), (ek, ei, ej)):
            for l, val in enumerate(g.bracket(g.bracket(x, y), z)):
                total[l] += val
        if any(total):
            bad.append(f"Jacobi fails on triple (i={i}, j={j}, k={k})")
    return ValidationReport(not bad, bad)


def require_valid(g: LieAlgebra) -> None:
    rep = validate_lie_algebra(g)
    if not rep.ok:
        raise InvalidLieAlgebra(rep.violations[0])


@dataclass
class LieModule:
    """V = K^dim with one action matrix per basis element of g."""

    dim: int
    action: List[Matrix]

    def __post_init__(self):
        self.action = [a if isinstance(a, Matrix) else Matrix.from_rows(a) if a else Matrix(self.dim, self.dim) for a in self.action]
        if any((a.rows, a.cols) != (self.dim, self.dim) for a in self.action):
            raise ValueError("action matrices must be dim x dim")

    @classmethod
    def trivial(cls, g: LieAlgebra, dim: int = 1) -> "LieModule":
        return cls(dim, [Matrix.zeros(dim, dim) for _ in range(g.dim)])

    def act(self, x: Sequence) -> Matrix:
        out = Matrix.zeros(self.dim, self.dim)
        for a, m in zip(x, self.action):
            if a:
                out = out + m.scale(a)
        return out


def validate_module(g: LieAlgebra, M: LieModule) -> ValidationReport:
    if len(M.action) != g.dim:
        return ValidationReport(False, ["need one action matrix per basis element"])
    bad = []
    for i, j in combinations(range(g.dim), 2):
        lhs = M.act(g.structure[i][j])
        rhs = M.action[i] @ M.action[j] - M.action[j] @ M.action[i]
        if lhs != rhs:
            bad.append(f"rho([e{i}, e{j}]) != [rho(e{i}), rho(e{j})]")
    return ValidationReport(not bad, bad)


@dataclass
class CECochain:
    """A q-cochain: increasing q-tuple -> vector in V (missing tuples are zero)."""

    q: int
    n: int
    dimV: int
    values: Dict[Tuple[int, ...], Tuple[Fraction, ...]] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for t, v in self.values.items():
            t = tuple(t)
            if len(t) != self.q or any(b <= a for a, b in zip(t, t[1:])) or any(not 0 <= k < self.n for k in t):
                raise ValueError(f"{t} is not an increasing {self.q}-tuple of basis indices")
            v = tuple(as_scalar(x) for x in v)
            if len(v) != self.dimV:
                raise ValueError("cochain value has the wrong dimension")
            if any(v):
                clean[t] = v
        self.values = clean

    def to_vector(self) -> List[Fraction]:
        out = []
        for t in combinations(range(self.n), self.q):
            out.extend(self.values.get(t, (_ZERO,) * self.dimV))
        return out

    @classmethod
    def from_vector(cls, q: int, n: int, dimV: int, vec: Sequence) -> "CECochain":
        tuples = list(combinations(range(n), q))
        if len(vec) != len(tuples) * dimV:
            raise ValueError("vector length does not match the cochain space")
        vals = {t: tuple(vec[i * dimV : (i + 1) * dimV]) for i, t in enumerate(tuples)}
        return cls(q, n, dimV, vals)

    def __sub__(self, other: "CECochain") -> "CECochain":
        if (self.q, self.n, self.dimV) != (other.q, other.n, other.dimV):
            raise ValueError("cochain shapes differ")
        keys = set(self.values) | set(other.values)
        zero = (_ZERO,) * self.dimV
        return CECochain(self.q, self.n, self.dimV, {
            t: tuple(a - b for a, b in zip(self.values.get(t, zero), other.values.get(t, zero))) for t in keys
        })

    def is_zero(self) -> bool:
        return not self.values


def cochain_dimension(n: int, q: int, dimV: int) -> int:
    return comb(n, q) * dimV if 0 <= q <= n else 0


def _insert_sign(k: int, rest: Tuple[int, ...]):
    if k in rest:
        return 0, None
    pos = sum(1 for r in rest if r < k)
    return (-1) ** pos, tuple(sorted(rest + (k,)))


def ce_differential(q: int, g: LieAlgebra, M: LieModule) -> Matrix:
    """Matrix of d: Hom(L^q g, V) -> Hom(L^(q+1) g, V)."""
    n, m = g.dim, M.dim
    if not 0 <= q <= n:
        raise ValueError(f"degree {q} out of range 0..{n}")
    src = {t: i for i, t in enumerate(combinations(range(n), q))}
    tgt = list(combinations(range(n), q + 1))
    out = Matrix(len(tgt) * m, len(src) * m)
    data = out.data
    acts = [a.data for a in M.action]
    c = g.structure
    for ti, T in enumerate(tgt):
        for a, x in enumerate(T):
            S = T[:a] + T[a + 1 :]
            sign = -1 if a % 2 else 1
            col0 = src[S] * m
            rho = acts[x]
            for i in range(m):
                for j in range(m):
                    if rho[i][j]:
                        data[ti * m + i][col0 + j] += sign * rho[i][j]
        for a, b in combinations(range(q + 1), 2):
            rest = T[:a] + T[a + 1 : b] + T[b + 1 :]
            sign = -1 if (a + b) % 2 else 1
            for k, ck in enumerate(c[T[a]][T[b]]):
                if not ck:
                    continue
                s2, S = _insert_sign(k, rest)
                if not s2:
                    continue
                col0 = src[S] * m
                for i in range(m):
                    data[ti * m + i][col0 + i] += sign * s2 * ck
    out._sparse = None
    return out


def apply_ce_differential(w: CECochain, g: LieAlgebra, M: LieModule) -> CECochain:
    if w.q > g.dim:
        return CECochain(w.q + 1, g.dim, M.dim, {})
    vec = ce_differential(w.q, g, M) @ w.to_vector()
    return CECochain.from_vector(w.q + 1, g.dim, M.dim, vec)


class CohomologyDegree(NamedTuple):
    q: int
    dim: int
    representatives: List[List[Fraction]]


def ce_complex(g: LieAlgebra, M: LieModule) -> List[Matrix]:
    """[d_-1 (zero map into degree 0), d_0, ..., d_n]."""
    ds = [Matrix(M.dim, 0)]
    ds += [ce_differential(q, g, M) for q in range(g.dim + 1)]
    return ds


def lie_cohomology(g: LieAlgebra, M: LieModule) -> List[CohomologyDegree]:
    require_valid(g)
    rep = validate_module(g, M)
    if not rep.ok:
        raise ValueError(rep.violations[0])
    ds = ce_complex(g, M)
    out = []
    for q in range(g.dim + 1):
        h = cohomology_at(ds[q], ds[q + 1])
        out.append(CohomologyDegree(q, h.dim, h.representatives))
    return out


# -- automorphisms and invariants ------------------------------------------------

@dataclass
class CompatibleAutomorphism:
    """A pair (gamma_g, gamma_V) acting on cochains by
    (gamma . w)(x_1..x_q) = gamma_V w(gamma_g^-1 x_1, ..., gamma_g^-1 x_q)."""

    gamma_g: Matrix
    gamma_V: Matrix
    order: int | None = None

    def __post_init__(self):
        if not isinstance(self.gamma_g, Matrix):
            self.gamma_g = Matrix.from_rows(self.gamma_g)
        if not isinstance(self.gamma_V, Matrix):
            self.gamma_V = Matrix.from_rows(self.gamma_V)


def _matrix_order(a: Matrix, b: Matrix, limit: int = 720) -> int | None:
    ia, ib = Matrix.identity(a.rows), Matrix.identity(b.rows)
    pa, pb = a, b
    for k in range(1, limit + 1):
        if pa == ia and pb == ib:
            return k
        pa, pb = pa @ a, pb @ b
    return None


def validate_automorphism(g: LieAlgebra, M: LieModule, gamma: CompatibleAutomorphism) -> ValidationReport:
    bad = []
    A, B = gamma.gamma_g, gamma.gamma_V
    if (A.rows, A.cols) != (g.dim, g.dim) or (B.rows, B.cols) != (M.dim, M.dim):
        return ValidationReport(False, ["automorphism matrices have the wrong size"])
    n = g.dim
    cols = A.columns()
    for i, j in combinations(range(n), 2):
        lhs = A @ g.structure[i][j]
        rhs = g.bracket(cols[i], cols[j])
        if lhs != rhs:
            bad.append(f"gamma_g does not preserve [e{i}, e{j}]")
    try:
        Binv = inverse(B)
    except ValueError:
        return ValidationReport(False, bad + ["gamma_V is singular"])
    for i in range(n):
        if B @ M.action[i] @ Binv != M.act(cols[i]):
            bad.append(f"gamma_V rho(e{i}) gamma_V^-1 != rho(gamma_g e{i})")
    order = _matrix_order(A, B)
    if order is None:
        bad.append("automorphism has no finite order (searched up to 720)")
    elif gamma.order is not None and order != gamma.order and gamma.order % order:
        bad.append(f"declared order {gamma.order} but gamma has order {order}")
    return ValidationReport(not bad, bad)


def cochain_action(q: int, g: LieAlgebra, M: LieModule, gamma: CompatibleAutomorphism) -> Matrix:
    """Matrix of w -> gamma . w on Hom(L^q g, V)."""
    n, m = g.dim, M.dim
    Ainv = inverse(gamma.gamma_g).data
    B = gamma.gamma_V.data
    tuples = list(combinations(range(n), q))
    out = Matrix(len(tuples) * m, len(tuples) * m)
    for ti, T in enumerate(tuples):
        for si, S in enumerate(tuples):
            minor = determinant([[Ainv[s][t] for t in T] for s in S])
            if not minor:
                continue
            for i in range(m):
                for j in range(m):
                    if B[i][j]:
                        out.data[ti * m + i][si * m + j] += minor * B[i][j]
    return out


class InvariantDegree(NamedTuple):
    q: int
    dim: int
    invariant_dim: int


def invariants_in_cohomology(g: LieAlgebra, M: LieModule, gamma: CompatibleAutomorphism) -> List[InvariantDegree]:
    """Dimension of the gamma-fixed part of each H^q, via the averaging idempotent."""
    rep = validate_automorphism(g, M, gamma)
    if not rep.ok:
        raise ValueError("automorphism not compatible: " + rep.violations[0])
    order = gamma.order or _matrix_order(gamma.gamma_g, gamma.gamma_V)
    ds = ce_complex(g, M)
    acts = [cochain_action(q, g, M, gamma) for q in range(g.dim + 1)]
    for q in range(g.dim):
        if not (ds[q + 1] @ acts[q] - acts[q + 1] @ ds[q + 1]).is_zero():
            raise ValueError(f"automorphism not compatible: action does not commute with d in degree {q}")
    out = []
    for q in range(g.dim + 1):
        sub = induced_map_on_cohomology(acts[q], (ds[q], ds[q + 1]), (ds[q], ds[q + 1]))
        h = sub.source.dim
        if h == 0:
            out.append(InvariantDegree(q, 0, 0))
            continue
        avg = Matrix.zeros(h, h)
        power = Matrix.identity(h)
        for _ in range(order):
            avg = avg + power
            power = power @ sub.matrix
        out.append(InvariantDegree(q, h, rank(avg.scale(Fraction(1, order)))))
    return out


# -- standard algebras ----------------------------------------------------------

def abelian(n: int) -> LieAlgebra:
    return LieAlgebra.from_brackets(n, {})


def sl2() -> LieAlgebra:
    """Basis (e, f, h): [h,e] = 2e, [h,f] = -2f, [e,f] = h."""
    return LieAlgebra.from_brackets(3, {(0, 1): [0, 0, 1], (2, 0): [2, 0, 0], (2, 1): [0, -2, 0]}, ("e", "f", "h"))


def heisenberg() -> LieAlgebra:
    """Basis (x, y, z) with [x, y] = z."""
    return LieAlgebra.from_brackets(3, {(0, 1): [0, 0, 1]}, ("x", "y", "z"))


def filiform4() -> LieAlgebra:
    """Class-3 filiform algebra: [e0, e1] = e2, [e0, e2] = e3."""
    return LieAlgebra.from_brackets(4, {(0, 1): [0, 0, 1, 0], (0, 2): [0, 0, 0, 1]})
