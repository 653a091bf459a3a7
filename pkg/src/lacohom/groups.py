"""Formal group laws in a chart at the identity, truncated representations,
jet-level group cochains and the two comparison maps into Lie algebra cochains.

Conventions
-----------
* A group of dimension n is a law ``F(x, y)``: n scalar jets in 2n variables
  (block ``x`` then block ``y``); the identity is the chart origin.
* A p-cochain lives on ``G^p`` (inhomogeneous) or ``G^(p+1)`` (homogeneous);
  factor i occupies variables ``i*n .. i*n + n - 1``.
* Everything is computed modulo total degree > cap, and every substitution
  used here preserves the degree filtration, so identities hold exactly mod cap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import factorial
from typing import Dict, List, Sequence, Tuple

from .exactla import Matrix, SubquotientMap, cohomology_at, induced_map_on_cohomology
from .forms import BlockStructure, Form, evaluate_form_at_origin, partial_exterior_derivative, pullback
from .jets import Exp, Jet, Vec, coordinate_jets, jet_substitute, monomials
from .liealg import (
    CECochain,
    LieAlgebra,
    LieModule,
    ValidationReport,
    apply_ce_differential,
    ce_complex,
    require_valid,
    validate_module,
)

_ZERO = Fraction(0)


class CapError(ValueError):
    """The truncation cap is too small for the requested exact computation."""


# -- small helpers on blocks -------------------------------------------------------

def _block(n: int, i: int) -> List[int]:
    return list(range(i * n, (i + 1) * n))


def _block_coords(n: int, blocks: int, i: int, cap: int) -> List[Jet]:
    return [Jet.variable(n * blocks, cap, k) for k in _block(n, i)]


def _zeros(nvars: int, cap: int, count: int) -> List[Jet]:
    return [Jet.zero(nvars, cap) for _ in range(count)]


def _bilinear(a: Jet, b: Jet, combine, dim: int) -> Jet:
    """Cauchy product with a bilinear map on coefficients."""
    cap = min(a.cap, b.cap)
    out: Dict[Exp, list] = {}
    bl = sorted(((sum(e), e, v) for e, v in b.terms.items()), key=lambda t: t[0])
    for ea, va in a.terms.items():
        room = cap - sum(ea)
        for db, eb, vb in bl:
            if db > room:
                break
            e = tuple(x + y for x, y in zip(ea, eb))
            w = combine(va, vb)
            acc = out.get(e)
            if acc is None:
                out[e] = list(w)
            else:
                for k, x in enumerate(w):
                    acc[k] += x
    return Jet._raw(a.nvars, cap, {e: tuple(v) for e, v in out.items() if any(v)}, dim)


def _matmul_coeffs(r: int):
    def combine(u: Vec, v: Vec) -> list:
        out = [_ZERO] * (r * r)
        for i in range(r):
            for k in range(r):
                a = u[i * r + k]
                if a:
                    for j in range(r):
                        b = v[k * r + j]
                        if b:
                            out[i * r + j] += a * b
        return out
    return combine


def _matvec_coeffs(r: int):
    def combine(u: Vec, v: Vec) -> list:
        out = [_ZERO] * r
        for i in range(r):
            s = _ZERO
            for k in range(r):
                a = u[i * r + k]
                if a and v[k]:
                    s += a * v[k]
            out[i] = s
        return out
    return combine


def matrix_jet_product(a: Jet, b: Jet, r: int) -> Jet:
    return _bilinear(a, b, _matmul_coeffs(r), r * r)


def matrix_jet_apply(a: Jet, f: Jet, r: int) -> Jet:
    """(rho . f) for a matrix-valued jet rho and a K^r-valued jet f in the same variables."""
    return _bilinear(a, f, _matvec_coeffs(r), r)


# -- formal group laws --------------------------------------------------------------

@dataclass
class FormalGroupLaw:
    n: int
    cap: int
    F: List[Jet]
    iota: List[Jet] | None = None
    name: str = ""

    def __post_init__(self):
        if len(self.F) != self.n or any(f.nvars != 2 * self.n or f.dim != 1 for f in self.F):
            raise ValueError("a group law needs n scalar jets in 2n variables")
        self.F = [f.with_cap(self.cap) for f in self.F]
        if self.iota is None:
            self.iota = group_law_inverse(self)
        else:
            if len(self.iota) != self.n or any(j.nvars != self.n for j in self.iota):
                raise ValueError("inverse must be n jets in n variables")
            self.iota = [j.with_cap(self.cap) for j in self.iota]

    def multiply(self, a: Sequence[Jet], b: Sequence[Jet]) -> List[Jet]:
        """F(a, b) for coordinate jets a, b (no constant terms) in common variables."""
        args = list(a) + list(b)
        return [jet_substitute(f, args) for f in self.F]

    def inverse(self, a: Sequence[Jet]) -> List[Jet]:
        return [jet_substitute(j, list(a)) for j in self.iota]


def group_law_inverse(law: FormalGroupLaw) -> List[Jet]:
    """Solve F(x, iota(x)) = 0 degree by degree.

    With F(x, y) = x + y + (terms of degree >= 2 mixing x and y), the map
    y -> y - F(x, y) gains one correct degree per step starting from -x.
    """
    n, cap = law.n, law.cap
    x = coordinate_jets(n, cap)
    y = [-xi for xi in x]
    for _ in range(cap):
        fxy = [jet_substitute(f, x + y) for f in law.F]
        y = [yi - fi for yi, fi in zip(y, fxy)]
    return y


def validate_group_law(law: FormalGroupLaw) -> ValidationReport:
    n, cap = law.n, law.cap
    bad = []
    x2 = _block_coords(n, 2, 0, cap)
    y2 = _block_coords(n, 2, 1, cap)
    zeros2 = _zeros(2 * n, cap, n)
    for k, f in enumerate(law.F):
        if jet_substitute(f, x2 + zeros2) != x2[k]:
            bad.append(f"unit law F(x, 0) = x fails in coordinate {k}")
        if jet_substitute(f, zeros2 + y2) != y2[k]:
            bad.append(f"unit law F(0, y) = y fails in coordinate {k}")
    x3, y3, z3 = (_block_coords(n, 3, i, cap) for i in range(3))
    left = law.multiply(law.multiply(x3, y3), z3)
    right = law.multiply(x3, law.multiply(y3, z3))
    for k in range(n):
        if left[k] != right[k]:
            bad.append(f"associativity fails in coordinate {k}")
    x1 = coordinate_jets(n, cap)
    for k, r in enumerate(law.multiply(x1, law.inverse(x1))):
        if not r.is_zero():
            bad.append(f"inverse law F(x, iota(x)) = 0 fails in coordinate {k}")
    return ValidationReport(not bad, bad)


def lie_algebra_of_group_law(law: FormalGroupLaw) -> LieAlgebra:
    """[u, v] = B(u, v) - B(v, u) for the bilinear part B of F."""
    n = law.n
    if law.cap < 2:
        raise CapError("need cap >= 2 to read the bracket")
    c = [[[_ZERO] * n for _ in range(n)] for _ in range(n)]
    for k, f in enumerate(law.F):
        for i in range(n):
            for j in range(n):
                e = [0] * (2 * n)
                e[i] += 1
                e[n + j] += 1
                b_ij = f.coefficient(e)[0]
                e = [0] * (2 * n)
                e[j] += 1
                e[n + i] += 1
                b_ji = f.coefficient(e)[0]
                c[i][j][k] = b_ij - b_ji
    g = LieAlgebra(n, c)
    from .liealg import validate_lie_algebra

    if not validate_lie_algebra(g).ok:
        raise ValueError("not a group law to order 3")
    return g


def _lie_bracket_jets(g: LieAlgebra, a: Jet, b: Jet) -> Jet:
    n = g.dim
    c = g.structure

    def combine(u: Vec, v: Vec) -> list:
        out = [_ZERO] * n
        for i in range(n):
            if not u[i]:
                continue
            for j in range(n):
                if not v[j]:
                    continue
                uv = u[i] * v[j]
                for k, ck in enumerate(c[i][j]):
                    if ck:
                        out[k] += uv * ck
        return out

    return _bilinear(a, b, combine, n)


def _dynkin_words(length: int) -> Dict[str, Fraction]:
    """Coefficients of right-nested bracket words of the given length in log(e^X e^Y)."""
    words: Dict[str, Fraction] = {}

    def pairs(remaining: int):
        if remaining == 0:
            yield ()
            return
        for tot in range(1, remaining + 1):
            for r in range(tot + 1):
                for rest in pairs(remaining - tot):
                    yield ((r, tot - r),) + rest

    for seq in pairs(length):
        k = len(seq)
        coef = Fraction((-1) ** (k - 1), k * length)
        word = ""
        for r, s in seq:
            coef /= factorial(r) * factorial(s)
            word += "X" * r + "Y" * s
        words[word] = words.get(word, _ZERO) + coef
    return {w: c for w, c in words.items() if c}


def bch_group_law(g: LieAlgebra, cap: int) -> FormalGroupLaw:
    """Baker-Campbell-Hausdorff law log(exp x exp y) for nilpotent g, via Dynkin's series."""
    require_valid(g)
    cls = g.nilpotency_class()
    if cls is None:
        raise ValueError("BCH series does not terminate: algebra is not nilpotent")
    if cls > cap:
        raise CapError(f"nilpotency class {cls} exceeds cap {cap}")
    n = g.dim
    ident = [tuple(Fraction(int(i == k)) for k in range(n)) for i in range(n)]
    X = Jet(2 * n, cap, {tuple(int(j == i) for j in range(2 * n)): ident[i] for i in range(n)}, n)
    Y = Jet(2 * n, cap, {tuple(int(j == n + i) for j in range(2 * n)): ident[i] for i in range(n)}, n)
    letters = {"X": X, "Y": Y}
    memo: Dict[str, Jet] = {}

    def nested(word: str) -> Jet:
        if len(word) == 1:
            return letters[word]
        if word not in memo:
            memo[word] = _lie_bracket_jets(g, letters[word[0]], nested(word[1:]))
        return memo[word]

    total = Jet.zero(2 * n, cap, n)
    for length in range(1, max(cls, 1) + 1):
        for word, coef in _dynkin_words(length).items():
            if len(word) > 1 and word[-1] == word[-2]:
                continue
            total = total + nested(word).scale(coef)
    law = FormalGroupLaw(n, cap, total.components(), iota=[-v for v in coordinate_jets(n, cap)], name="bch")
    return law


def additive_group(n: int, cap: int) -> FormalGroupLaw:
    x = coordinate_jets(2 * n, cap)
    return FormalGroupLaw(n, cap, [x[k] + x[n + k] for k in range(n)], name="additive")


def multiplicative_group(cap: int) -> FormalGroupLaw:
    """F(x, y) = x + y + xy, the chart x = t - 1 on the multiplicative group."""
    x, y = coordinate_jets(2, cap)
    return FormalGroupLaw(1, cap, [x + y + x * y], name="multiplicative")


def log_one_plus(cap: int) -> Jet:
    """log(1 + x) truncated at cap."""
    return Jet(1, cap, {(k,): Fraction((-1) ** (k + 1), k) for k in range(1, cap + 1)})


# -- representations -----------------------------------------------------------

@dataclass
class GroupRepresentation:
    """rho: a dimV x dimV matrix of scalar jets in n variables."""

    dimV: int
    rho: List[List[Jet]]

    def __post_init__(self):
        if len(self.rho) != self.dimV or any(len(r) != self.dimV for r in self.rho):
            raise ValueError("rho must be a dimV x dimV matrix of jets")
        nv = {j.nvars for r in self.rho for j in r}
        if len(nv) != 1:
            raise ValueError("all entries of rho must be jets in the same variables")

    @property
    def n(self) -> int:
        return self.rho[0][0].nvars

    @property
    def cap(self) -> int:
        return min(j.cap for r in self.rho for j in r)

    def matrix_jet(self) -> Jet:
        r = self.dimV
        return Jet.from_components([self.rho[i][j] for i in range(r) for j in range(r)])

    def on_block(self, nvars: int, positions: Sequence[int]) -> Jet:
        """rho as a matrix-valued jet in the variables ``positions`` of a larger set."""
        return self.matrix_jet().embed(nvars, positions)


def trivial_representation(n: int, dimV: int, cap: int) -> GroupRepresentation:
    rho = [[Jet.constant(n, cap, int(i == j)) for j in range(dimV)] for i in range(dimV)]
    return GroupRepresentation(dimV, rho)


def exp_representation(law: FormalGroupLaw, actions: Sequence, log_chart: Sequence[Jet] | None = None) -> GroupRepresentation:
    """rho(x) = exp(sum_i l_i(x) A_i) for Lie algebra action matrices A_i.

    ``log_chart`` gives the exponential coordinates l(x) (identity by default,
    which is right for BCH and additive laws).  The series is exact mod cap
    because l has no constant term.
    """
    n, cap = law.n, law.cap
    mats = [a if isinstance(a, Matrix) else Matrix.from_rows(a) for a in actions]
    if len(mats) != n:
        raise ValueError("need one action matrix per group coordinate")
    r = mats[0].rows
    ell = list(log_chart) if log_chart is not None else coordinate_jets(n, cap)
    N = Jet.zero(n, cap, r * r)
    for li, A in zip(ell, mats):
        flat = tuple(x for row in A.data for x in row)
        N = N + li.with_cap(cap) * Jet.constant(n, cap, flat)
    ident = tuple(Fraction(int(i == j)) for i in range(r) for j in range(r))
    total = Jet.constant(n, cap, ident)
    power = Jet.constant(n, cap, ident)
    for k in range(1, cap + 1):
        power = matrix_jet_product(power, N, r).scale(Fraction(1, k))
        if power.is_zero():
            break
        total = total + power
    rho = [[total.component(i * r + j) for j in range(r)] for i in range(r)]
    return GroupRepresentation(r, rho)


def validate_representation(rep: GroupRepresentation, law: FormalGroupLaw) -> ValidationReport:
    n, r = law.n, rep.dimV
    cap = min(law.cap, rep.cap)
    bad = []
    if rep.n != n:
        return ValidationReport(False, ["representation and group law use different dimensions"])
    R = rep.matrix_jet().with_cap(cap)
    ident = tuple(Fraction(int(i == j)) for i in range(r) for j in range(r))
    if R.constant_term() != ident:
        bad.append("rho(0) is not the identity")
    lhs = jet_substitute(R, [f.with_cap(cap) for f in law.F])
    rhs = matrix_jet_product(R.embed(2 * n, _block(n, 0)), R.embed(2 * n, _block(n, 1)), r)
    if lhs != rhs:
        bad.append("not a representation mod cap: rho(F(x, y)) != rho(x) rho(y)")
    return ValidationReport(not bad, bad)


def derived_representation(rep: GroupRepresentation) -> LieModule:
    """rho_*(e_i) = coefficient of x_i in rho."""
    n, r = rep.n, rep.dimV
    R = rep.matrix_jet()
    action = []
    for i in range(n):
        v = R.coefficient(tuple(int(j == i) for j in range(n)))
        action.append(Matrix(r, r, [list(v[a * r : (a + 1) * r]) for a in range(r)]))
    return LieModule(r, action)


# -- cochains ---------------------------------------------------------------------

@dataclass
class InhomCochain:
    """f(g_1, ..., g_p): a V-valued jet in p*n variables (a constant vector when p = 0)."""

    p: int
    n: int
    value: Jet

    def __post_init__(self):
        if self.value.nvars != self.p * self.n:
            raise ValueError(f"a {self.p}-cochain needs {self.p * self.n} variables")

    @classmethod
    def constant(cls, n: int, cap: int, v: Sequence) -> "InhomCochain":
        return cls(0, n, Jet.constant(0, cap, tuple(v)))


@dataclass
class HomCochain:
    """F(g_0, ..., g_p): a V-valued jet in (p+1)*n variables."""

    p: int
    n: int
    value: Jet

    def __post_init__(self):
        if self.value.nvars != (self.p + 1) * self.n:
            raise ValueError(f"a homogeneous {self.p}-cochain needs {(self.p + 1) * self.n} variables")


def _require_cap(cap: int, need: int, what: str) -> None:
    if cap < need:
        raise CapError(f"insufficient cap {cap} for {what}: need >= {need}")


def inhomogeneous_differential(f: InhomCochain, rep: GroupRepresentation, law: FormalGroupLaw) -> InhomCochain:
    """(df)(g_1..g_{p+1}) = rho(g_1) f(g_2..) + sum_i (-1)^i f(.., g_i g_{i+1}, ..) + (-1)^(p+1) f(g_1..g_p)."""
    n, p = law.n, f.p
    cap = min(f.value.cap, law.cap, rep.cap)
    total_vars = (p + 1) * n
    val = f.value.with_cap(cap)
    shifted = val.embed(total_vars, list(range(n, total_vars)))
    out = matrix_jet_apply(rep.on_block(total_vars, _block(n, 0)).with_cap(cap), shifted, rep.dimV)
    if p > 0:
        coords = [_block_coords(n, p + 1, i, cap) for i in range(p + 1)]
        for i in range(1, p + 1):
            args: List[Jet] = []
            for k in range(i - 1):
                args += coords[k]
            args += law.multiply(coords[i - 1], coords[i])
            for k in range(i + 1, p + 1):
                args += coords[k]
            term = jet_substitute(val, args)
            out = out + (term if i % 2 == 0 else -term)
    last = val.embed(total_vars, list(range(p * n)))
    out = out + (last if (p + 1) % 2 == 0 else -last)
    return InhomCochain(p + 1, n, out)


def homogenize(f: InhomCochain, rep: GroupRepresentation, law: FormalGroupLaw) -> HomCochain:
    """F(g_0..g_p) = rho(g_0) f(g_0^-1 g_1, g_1^-1 g_2, ..., g_{p-1}^-1 g_p)."""
    n, p = law.n, f.p
    cap = min(f.value.cap, law.cap, rep.cap)
    total_vars = (p + 1) * n
    val = f.value.with_cap(cap)
    if p == 0:
        inner = Jet.constant(total_vars, cap, val.constant_term())
    else:
        coords = [_block_coords(n, p + 1, i, cap) for i in range(p + 1)]
        args: List[Jet] = []
        for k in range(p):
            args += law.multiply(law.inverse(coords[k]), coords[k + 1])
        inner = jet_substitute(val, args)
    out = matrix_jet_apply(rep.on_block(total_vars, _block(n, 0)).with_cap(cap), inner, rep.dimV)
    return HomCochain(p, n, out)


def dehomogenize(F: HomCochain, law: FormalGroupLaw) -> InhomCochain:
    """f(g_1..g_p) = F(1, g_1, g_1 g_2, ..., g_1 ... g_p)."""
    n, p = F.n, F.p
    cap = min(F.value.cap, law.cap)
    if p == 0:
        return InhomCochain(0, n, Jet.constant(0, cap, F.value.constant_term()))
    total_vars = p * n
    coords = [_block_coords(n, p, i, cap) for i in range(p)]
    args = _zeros(total_vars, cap, n)
    partial = coords[0]
    args += partial
    for k in range(1, p):
        partial = law.multiply(partial, coords[k])
        args += partial
    return InhomCochain(p, n, jet_substitute(F.value.with_cap(cap), args))


def face_pullback(F: HomCochain, i: int) -> HomCochain:
    """d_i^* F(g_0..g_{p+1}) = F(g_0, .., omit g_i, .., g_{p+1})."""
    n, p = F.n, F.p
    if not 0 <= i <= p + 1:
        raise IndexError("face index out of range")
    total_vars = (p + 2) * n
    positions = [k for b in range(p + 2) if b != i for k in _block(n, b)]
    return HomCochain(p + 1, n, F.value.embed(total_vars, positions))


def simplicial_differential_hom(F: HomCochain) -> HomCochain:
    """sum_i (-1)^i d_i^* F."""
    out = None
    for i in range(F.p + 2):
        term = face_pullback(F, i).value
        term = term if i % 2 == 0 else -term
        out = term if out is None else out + term
    return HomCochain(F.p + 1, F.n, out)


def check_equivariance(F: HomCochain, rep: GroupRepresentation, law: FormalGroupLaw) -> bool:
    """F(h g_0, ..., h g_p) == rho(h) F(g_0, ..., g_p) mod cap."""
    n, p = F.n, F.p
    cap = min(F.value.cap, law.cap, rep.cap)
    total_vars = (p + 2) * n
    h = _block_coords(n, p + 2, 0, cap)
    args: List[Jet] = []
    for b in range(1, p + 2):
        args += law.multiply(h, _block_coords(n, p + 2, b, cap))
    lhs = jet_substitute(F.value.with_cap(cap), args)
    shifted = F.value.with_cap(cap).embed(total_vars, list(range(n, total_vars)))
    rhs = matrix_jet_apply(rep.on_block(total_vars, _block(n, 0)).with_cap(cap), shifted, rep.dimV)
    return lhs == rhs


# -- tilde model: faces (g_0, .., g_i g_{i+1}, ..), last face drops g_p ----------

def tilde_lift(f: InhomCochain, rep: GroupRepresentation) -> HomCochain:
    """f~(g_0, g_1..g_p) = rho(g_0) f(g_1..g_p), equivariant for left multiplication on g_0."""
    n, p = f.n, f.p
    cap = min(f.value.cap, rep.cap)
    total_vars = (p + 1) * n
    shifted = f.value.with_cap(cap).embed(total_vars, list(range(n, total_vars)))
    return HomCochain(p, n, matrix_jet_apply(rep.on_block(total_vars, _block(n, 0)).with_cap(cap), shifted, rep.dimV))


def tilde_differential(F: HomCochain, law: FormalGroupLaw) -> HomCochain:
    n, p = F.n, F.p
    cap = min(F.value.cap, law.cap)
    val = F.value.with_cap(cap)
    blocks = p + 2
    coords = [_block_coords(n, blocks, i, cap) for i in range(blocks)]
    out = None
    for i in range(p + 1):
        args: List[Jet] = []
        for k in range(i):
            args += coords[k]
        args += law.multiply(coords[i], coords[i + 1])
        for k in range(i + 2, blocks):
            args += coords[k]
        term = jet_substitute(val, args)
        term = term if i % 2 == 0 else -term
        out = term if out is None else out + term
    last = val.embed(blocks * n, list(range((p + 1) * n)))
    out = out + (last if (p + 1) % 2 == 0 else -last)
    return HomCochain(p + 1, n, out)


def tilde_restrict(F: HomCochain) -> InhomCochain:
    """f(g_1..g_p) = f~(1, g_1..g_p)."""
    n, p = F.n, F.p
    cap = F.value.cap
    if p == 0:
        return InhomCochain(0, n, Jet.constant(0, cap, F.value.constant_term()))
    total_vars = p * n
    args = _zeros(total_vars, cap, n) + coordinate_jets(total_vars, cap)
    return InhomCochain(p, n, jet_substitute(F.value, args))


# -- comparison maps -------------------------------------------------------------------

def psi_map(F: HomCochain) -> CECochain:
    """Pull d_1 d_2 .. d_p F back along the diagonal and evaluate at the identity.

    Only the degree-p part of F can survive p derivatives followed by
    evaluation at the origin, so F is truncated to degree p first.
    """
    n, p = F.n, F.p
    _require_cap(F.value.cap, p, "Psi")
    dim = F.value.dim
    val = F.value.with_cap(p)
    if p == 0:
        return CECochain(0, n, dim, {(): val.constant_term()})
    if p > n:
        return CECochain(p, n, dim, {})
    blocks = BlockStructure.product(n, p + 1)
    omega = Form.function(val)
    for i in range(p, 0, -1):
        omega = partial_exterior_derivative(omega, blocks, i)
    diagonal = [Jet.variable(n, p, k) for _ in range(p + 1) for k in range(n)]
    at_one = evaluate_form_at_origin(pullback(omega, diagonal))
    return CECochain(p, n, dim, at_one)


def phi_map(f: InhomCochain) -> CECochain:
    """Antisymmetrized mixed first derivatives at the identity:
    Phi(f)(x_1..x_p) = sum_s sgn(s) (D^(1)_{x_s(1)} .. D^(p)_{x_s(p)} f)(1, .., 1)."""
    n, p = f.n, f.p
    _require_cap(f.value.cap, p, "Phi")
    dim = f.value.dim
    if p == 0:
        return CECochain(0, n, dim, {(): f.value.constant_term()})
    acc: Dict[Tuple[int, ...], list] = {}
    for e, v in f.value.terms.items():
        if sum(e) != p:
            continue
        ks = []
        for b in range(p):
            blk = e[b * n : (b + 1) * n]
            if sum(blk) != 1:
                break
            ks.append(blk.index(1))
        else:
            if len(set(ks)) < p:
                continue
            inversions = sum(1 for a, b in combinations(ks, 2) if a > b)
            sign = -1 if inversions % 2 else 1
            t = tuple(sorted(ks))
            cur = acc.setdefault(t, [_ZERO] * dim)
            for a in range(dim):
                cur[a] += sign * v[a]
    return CECochain(p, n, dim, {t: tuple(v) for t, v in acc.items()})


def _lie_data(law: FormalGroupLaw, rep: GroupRepresentation, g=None, M=None):
    g = g if g is not None else lie_algebra_of_group_law(law)
    M = M if M is not None else derived_representation(rep)
    return g, M


def chain_map_residual(f, which: str, rep: GroupRepresentation, law: FormalGroupLaw, g: LieAlgebra | None = None, M: LieModule | None = None, ce=None) -> CECochain:
    """map(delta f) - d_CE(map(f)); must vanish.

    ``which`` is ``"psi"`` (homogeneous model, f homogenized first if needed)
    or ``"phi"`` (tilde model).  ``ce`` overrides the CE differential.
    """
    g, M = _lie_data(law, rep, g, M)
    ce = ce or apply_ce_differential
    if which == "psi":
        F = homogenize(f, rep, law) if isinstance(f, InhomCochain) else f
        _require_cap(F.value.cap, F.p + 1, "the Psi chain-map check")
        return psi_map(simplicial_differential_hom(F)) - ce(psi_map(F), g, M)
    if which == "phi":
        if not isinstance(f, InhomCochain):
            raise TypeError("the Phi check takes an inhomogeneous cochain")
        _require_cap(f.value.cap, f.p + 1, "the Phi chain-map check")
        ft = tilde_lift(f, rep)
        return phi_map(tilde_restrict(tilde_differential(ft, law))) - ce(phi_map(tilde_restrict(ft)), g, M)
    raise ValueError(f"unknown map {which!r}; expected 'psi' or 'phi'")


# -- truncated bar complex and induced maps ------------------------------------------------

def cochain_basis(p: int, n: int, dimV: int, cap: int) -> List[Tuple[Exp, int]]:
    return [(e, a) for e in monomials(p * n, cap) for a in range(dimV)]


def jet_to_vector(jet: Jet, index: Dict[Tuple[Exp, int], int], size: int) -> List[Fraction]:
    vec = [_ZERO] * size
    for e, v in jet.terms.items():
        for a, x in enumerate(v):
            if x:
                vec[index[(e, a)]] = x
    return vec


def _basis_cochain(p: int, n: int, dimV: int, cap: int, e: Exp, a: int) -> InhomCochain:
    coeff = tuple(Fraction(int(b == a)) for b in range(dimV))
    return InhomCochain(p, n, Jet(p * n, cap, {e: coeff}, dimV))


def bar_differential_matrix(p: int, law: FormalGroupLaw, rep: GroupRepresentation, cap: int) -> Matrix:
    n, r = law.n, rep.dimV
    src = cochain_basis(p, n, r, cap)
    tgt = cochain_basis(p + 1, n, r, cap)
    index = {b: i for i, b in enumerate(tgt)}
    cols = []
    for e, a in src:
        df = inhomogeneous_differential(_basis_cochain(p, n, r, cap, e, a), rep, law)
        cols.append(jet_to_vector(df.value, index, len(tgt)))
    return Matrix.from_columns(cols, len(tgt))


def comparison_matrix(p: int, which: str, law: FormalGroupLaw, rep: GroupRepresentation, cap: int) -> Matrix:
    """Matrix of Psi o homogenize (or Phi) from inhomogeneous p-cochains to CE p-cochains.

    Basis cochains of polynomial degree > p map to zero: homogenization keeps
    the degree filtration and both maps read only degree-p coefficients.
    """
    n, r = law.n, rep.dimV
    src = cochain_basis(p, n, r, cap)
    rows = len(list(combinations(range(n), p))) * r
    cols = []
    for e, a in src:
        if sum(e) > p:
            cols.append([_ZERO] * rows)
            continue
        f = _basis_cochain(p, n, r, cap, e, a)
        w = psi_map(homogenize(f, rep, law)) if which == "psi" else phi_map(f)
        cols.append(w.to_vector())
    return Matrix.from_columns(cols, rows)


@dataclass
class TruncatedDegree:
    q: int
    dim: int
    lie_dim: int
    psi: SubquotientMap
    phi: SubquotientMap


@dataclass
class TruncatedCohomology:
    cap: int
    degrees: List[TruncatedDegree] = field(default_factory=list)

    @property
    def dims(self) -> List[int]:
        return [d.dim for d in self.degrees]


def truncated_group_cohomology(law: FormalGroupLaw, rep: GroupRepresentation, p_max: int, cap: int | None = None) -> TruncatedCohomology:
    """Cohomology of the bar complex of jets mod degree > cap, in degrees 0..p_max,
    with the maps induced by Psi o homogenize and by Phi into H*(g, V)."""
    cap = min(law.cap, rep.cap) if cap is None else cap
    if cap > min(law.cap, rep.cap):
        raise CapError("group law or representation is stored with a smaller cap")
    _require_cap(cap, p_max, "truncated cohomology")
    g, M = _lie_data(law, rep)
    if not validate_module(g, M).ok:
        raise ValueError("derived action is not a Lie algebra representation")
    r, n = rep.dimV, law.n
    sizes = [len(cochain_basis(p, n, r, cap)) for p in range(p_max + 2)]
    deltas = [Matrix(sizes[0], 0)] + [bar_differential_matrix(p, law, rep, cap) for p in range(p_max + 1)]
    ce = ce_complex(g, M)
    while len(ce) < p_max + 2:
        ce.append(Matrix(0, ce[-1].rows))
    maps = {w: [comparison_matrix(p, w, law, rep, cap) for p in range(p_max + 1)] for w in ("psi", "phi")}
    result = TruncatedCohomology(cap)
    for q in range(p_max + 1):
        src = cohomology_at(deltas[q], deltas[q + 1])
        tgt_in, tgt_out = ce[q], ce[q + 1]
        tgt = cohomology_at(tgt_in, tgt_out)
        induced = {}
        for w in ("psi", "phi"):
            prev = maps[w][q - 1] if q > 0 else Matrix(0, 0)
            induced[w] = induced_map_on_cohomology(
                maps[w][q], (deltas[q], deltas[q + 1]), (tgt_in, tgt_out), f_prev=prev,
                source_cohomology=src, target_cohomology=tgt,
            )
        result.degrees.append(TruncatedDegree(q, src.dim, tgt.dim, induced["psi"], induced["phi"]))
    return result
