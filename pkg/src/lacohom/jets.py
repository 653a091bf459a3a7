"""Truncated multivariate power series with vector coefficients.

A :class:`Jet` in ``nvars`` variables with cap ``D`` stands for a power series
modulo all monomials of total degree ``> D``.  Coefficients live in a
finite-dimensional space ``K^dim`` over the rationals; ``dim == 1`` is the
scalar case.  Exponent tuples are zero-based by variable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from .scalars import Multiradius, Rational, as_scalar, vector_abs

Exp = Tuple[int, ...]
Vec = Tuple[Fraction, ...]

_ZERO = Fraction(0)


@dataclass(frozen=True)
class CoefficientSpace:
    """K^dim with named basis vectors; normed by the max of coordinate absolute values."""

    dim: int
    labels: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("coefficient space must have dim >= 1")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"v{i}" for i in range(self.dim)))
        if len(self.labels) != self.dim or len(set(self.labels)) != self.dim:
            raise ValueError("basis labels must be distinct, one per dimension")


def _vec(c, dim: int) -> Vec:
    if isinstance(c, (tuple, list)):
        if len(c) != dim:
            raise ValueError(f"coefficient vector has length {len(c)}, expected {dim}")
        return tuple(as_scalar(x) for x in c)
    if dim != 1:
        raise ValueError("scalar coefficient given for a vector-valued jet")
    return (as_scalar(c),)


def _is_zero_vec(v: Vec) -> bool:
    return not any(v)


def _vadd(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def _vscale(c: Fraction, v: Vec) -> Vec:
    return tuple(c * a for a in v)


def _add_exp(e1: Exp, e2: Exp) -> Exp:
    return tuple(a + b for a, b in zip(e1, e2))


def _mul_scalar_terms(a: Dict[Exp, Fraction], b: Dict[Exp, Fraction], cap: int) -> Dict[Exp, Fraction]:
    out: Dict[Exp, Fraction] = {}
    bl = sorted(((sum(e), e, c) for e, c in b.items()), key=lambda t: t[0])
    for ea, ca in a.items():
        da = sum(ea)
        room = cap - da
        if room < 0:
            continue
        for db, eb, cb in bl:
            if db > room:
                break
            e = _add_exp(ea, eb)
            out[e] = out.get(e, _ZERO) + ca * cb
    return {e: c for e, c in out.items() if c}


class Jet:
    """A power series in ``nvars`` variables truncated above total degree ``cap``."""

    __slots__ = ("nvars", "cap", "dim", "terms")

    def __init__(self, nvars: int, cap: int, terms: Mapping[Exp, object] | None = None, dim: int = 1):
        if nvars < 0 or cap < 0 or dim < 1:
            raise ValueError("invalid jet shape")
        self.nvars = nvars
        self.cap = cap
        self.dim = dim
        clean: Dict[Exp, Vec] = {}
        for e, c in (terms or {}).items():
            e = tuple(int(k) for k in e)
            if len(e) != nvars or any(k < 0 for k in e):
                raise ValueError(f"bad exponent {e} for {nvars} variables")
            if sum(e) > cap:
                continue
            v = _vec(c, dim)
            if e in clean:
                v = _vadd(clean[e], v)
            if _is_zero_vec(v):
                clean.pop(e, None)
            else:
                clean[e] = v
        self.terms = clean

    @classmethod
    def _raw(cls, nvars: int, cap: int, terms: Dict[Exp, Vec], dim: int) -> "Jet":
        # terms already canonical: tuples of Fractions, no zeros, degrees <= cap
        j = object.__new__(cls)
        j.nvars, j.cap, j.dim, j.terms = nvars, cap, dim, terms
        return j

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, nvars: int, cap: int, dim: int = 1) -> "Jet":
        return cls._raw(nvars, cap, {}, dim)

    @classmethod
    def constant(cls, nvars: int, cap: int, value, dim: int | None = None) -> "Jet":
        if dim is None:
            dim = len(value) if isinstance(value, (tuple, list)) else 1
        return cls(nvars, cap, {(0,) * nvars: value}, dim)

    @classmethod
    def variable(cls, nvars: int, cap: int, i: int) -> "Jet":
        if not 0 <= i < nvars:
            raise IndexError(f"variable index {i} out of range for {nvars} variables")
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, cap, {tuple(e): 1})

    @classmethod
    def monomial(cls, nvars: int, cap: int, exps: Sequence[int], coeff=1, dim: int | None = None) -> "Jet":
        if dim is None:
            dim = len(coeff) if isinstance(coeff, (tuple, list)) else 1
        return cls(nvars, cap, {tuple(exps): coeff}, dim)

    @classmethod
    def from_components(cls, comps: Sequence["Jet"]) -> "Jet":
        """Assemble a K^m-valued jet from m scalar jets."""
        if not comps:
            raise ValueError("need at least one component")
        nvars = comps[0].nvars
        cap = min(c.cap for c in comps)
        m = len(comps)
        acc: Dict[Exp, list] = {}
        for a, c in enumerate(comps):
            if c.dim != 1 or c.nvars != nvars:
                raise ValueError("components must be scalar jets in the same variables")
            for e, v in c.terms.items():
                if sum(e) > cap:
                    continue
                acc.setdefault(e, [_ZERO] * m)[a] = v[0]
        return cls._raw(nvars, cap, {e: tuple(v) for e, v in acc.items()}, m)

    # -- basic queries ------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Largest stored total degree, -1 for the zero jet."""
        return max((sum(e) for e in self.terms), default=-1)

    def low_degree(self) -> int:
        return min((sum(e) for e in self.terms), default=self.cap + 1)

    def constant_term(self) -> Vec:
        return self.terms.get((0,) * self.nvars, (_ZERO,) * self.dim)

    def coefficient(self, exps: Sequence[int]) -> Vec:
        return self.terms.get(tuple(exps), (_ZERO,) * self.dim)

    def component(self, a: int) -> "Jet":
        terms = {e: (v[a],) for e, v in self.terms.items() if v[a]}
        return Jet._raw(self.nvars, self.cap, terms, 1)

    def components(self):
        return [self.component(a) for a in range(self.dim)]

    def with_cap(self, cap: int) -> "Jet":
        """Reinterpret with a new cap; lowering it truncates."""
        terms = {e: v for e, v in self.terms.items() if sum(e) <= cap}
        return Jet._raw(self.nvars, cap, terms, self.dim)

    def embed(self, nvars: int, positions: Sequence[int]) -> "Jet":
        """Rename variable k to variable ``positions[k]`` of a larger set."""
        if len(positions) != self.nvars:
            raise ValueError("need one target position per variable")
        terms = {}
        for e, v in self.terms.items():
            ne = [0] * nvars
            for k, p in zip(e, positions):
                ne[p] += k
            ne = tuple(ne)
            terms[ne] = _vadd(terms[ne], v) if ne in terms else v
        return Jet._raw(nvars, self.cap, {e: v for e, v in terms.items() if any(v)}, self.dim)

    def map_coefficients(self, matrix: Sequence[Sequence[Rational]]) -> "Jet":
        """Apply a linear map K^dim -> K^m (given as m rows) to every coefficient."""
        rows = [[as_scalar(x) for x in r] for r in matrix]
        if any(len(r) != self.dim for r in rows) or not rows:
            raise ValueError("matrix dimensions do not match the coefficient space")
        terms = {}
        for e, v in self.terms.items():
            w = tuple(sum((r[j] * v[j] for j in range(self.dim) if v[j]), _ZERO) for r in rows)
            if any(w):
                terms[e] = w
        return Jet._raw(self.nvars, self.cap, terms, len(rows))

    def _scalar_terms(self) -> Dict[Exp, Fraction]:
        return {e: v[0] for e, v in self.terms.items()}

    # -- arithmetic ---------------------------------------------------
    def _check_shape(self, other: "Jet") -> None:
        if not isinstance(other, Jet):
            raise TypeError("expected a Jet")
        if self.nvars != other.nvars or self.dim != other.dim:
            raise ValueError(
                f"shape mismatch: ({self.nvars} vars, dim {self.dim}) vs ({other.nvars} vars, dim {other.dim})"
            )

    def __add__(self, other: "Jet") -> "Jet":
        self._check_shape(other)
        cap = min(self.cap, other.cap)
        terms = {e: v for e, v in self.terms.items() if sum(e) <= cap}
        for e, v in other.terms.items():
            if sum(e) > cap:
                continue
            if e in terms:
                w = _vadd(terms[e], v)
                if any(w):
                    terms[e] = w
                else:
                    del terms[e]
            else:
                terms[e] = v
        return Jet._raw(self.nvars, cap, terms, self.dim)

    def __neg__(self) -> "Jet":
        return Jet._raw(self.nvars, self.cap, {e: tuple(-a for a in v) for e, v in self.terms.items()}, self.dim)

    def __sub__(self, other: "Jet") -> "Jet":
        return self + (-other)

    def scale(self, c: Rational) -> "Jet":
        c = as_scalar(c)
        if c == 0:
            return Jet.zero(self.nvars, self.cap, self.dim)
        return Jet._raw(self.nvars, self.cap, {e: _vscale(c, v) for e, v in self.terms.items()}, self.dim)

    def __mul__(self, other):
        if isinstance(other, Jet):
            return jet_multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, Jet):
            return jet_multiply(other, self)
        return self.scale(other)

    def __eq__(self, other) -> bool:
        """Equality modulo the smaller of the two caps."""
        if not isinstance(other, Jet):
            return NotImplemented
        if self.nvars != other.nvars or self.dim != other.dim:
            return False
        return (self - other).is_zero()

    def __hash__(self):
        return hash((self.nvars, self.dim, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return f"Jet(0; n={self.nvars}, cap={self.cap})"
        parts = []
        for e in sorted(self.terms, key=lambda e: (sum(e), tuple(-k for k in e))):
            v = self.terms[e]
            coef = str(v[0]) if self.dim == 1 else "(" + ", ".join(str(a) for a in v) + ")"
            mono = "*".join(f"x{i}^{k}" if k > 1 else f"x{i}" for i, k in enumerate(e) if k)
            parts.append(f"{coef}*{mono}" if mono else coef)
        return f"Jet({' + '.join(parts)}; n={self.nvars}, cap={self.cap})"

    # -- calculus -----------------------------------------------------
    def partial(self, i: int) -> "Jet":
        return partial_derivative(self, i)

    def substitute(self, gs: Sequence["Jet"]) -> "Jet":
        return jet_substitute(self, gs)

    def eps_norm(self, eps: Multiradius, p: int) -> Fraction:
        return eps_norm(self, eps, p)


def jet_add(a: Jet, b: Jet) -> Jet:
    return a + b


def jet_scale(c: Rational, a: Jet) -> Jet:
    return a.scale(c)


def jet_multiply(a: Jet, b: Jet) -> Jet:
    """Cauchy product truncated to the smaller cap; one factor must be scalar."""
    if a.nvars != b.nvars:
        raise ValueError("jets live in different numbers of variables")
    if a.dim != 1 and b.dim != 1:
        raise ValueError("undefined product of two vector-valued jets")
    if a.dim != 1:
        a, b = b, a
    cap = min(a.cap, b.cap)
    if b.dim == 1:
        terms = _mul_scalar_terms(a._scalar_terms(), b._scalar_terms(), cap)
        return Jet._raw(a.nvars, cap, {e: (c,) for e, c in terms.items()}, 1)
    out: Dict[Exp, Vec] = {}
    bl = sorted(((sum(e), e, v) for e, v in b.terms.items()), key=lambda t: t[0])
    for ea, va in a.terms.items():
        room = cap - sum(ea)
        ca = va[0]
        for db, eb, vb in bl:
            if db > room:
                break
            e = _add_exp(ea, eb)
            w = _vscale(ca, vb)
            out[e] = _vadd(out[e], w) if e in out else w
    return Jet._raw(a.nvars, cap, {e: v for e, v in out.items() if any(v)}, b.dim)


def jet_substitute(f: Jet, gs: Sequence[Jet]) -> Jet:
    """Compose f(g_1, ..., g_m); every g_j must be a scalar jet without constant term."""
    if len(gs) != f.nvars:
        raise ValueError(f"need {f.nvars} substitutions, got {len(gs)}")
    if f.nvars == 0:
        raise ValueError("cannot substitute into a jet in zero variables; target variable count unknown")
    k = gs[0].nvars
    for g in gs:
        if g.dim != 1 or g.nvars != k:
            raise ValueError("substituted jets must be scalar and share their variables")
        if g.terms.get((0,) * k):
            raise ValueError("substitution not filtration-preserving")
    cap = min([f.cap] + [g.cap for g in gs])
    gterms = [g._scalar_terms() for g in gs]
    zero_exp = (0,) * k
    memo: Dict[Exp, Dict[Exp, Fraction]] = {(0,) * f.nvars: {zero_exp: Fraction(1)}}

    def value(e: Exp) -> Dict[Exp, Fraction]:
        if e in memo:
            return memo[e]
        j = next(i for i, x in enumerate(e) if x)
        prev = e[:j] + (e[j] - 1,) + e[j + 1 :]
        val = _mul_scalar_terms(value(prev), gterms[j], cap)
        memo[e] = val
        return val

    out: Dict[Exp, Vec] = {}
    for e in sorted(f.terms, key=sum):
        if sum(e) > cap:
            continue
        v = f.terms[e]
        for me, c in value(e).items():
            w = _vscale(c, v)
            out[me] = _vadd(out[me], w) if me in out else w
    return Jet._raw(k, cap, {e: v for e, v in out.items() if any(v)}, f.dim)


def partial_derivative(f: Jet, i: int) -> Jet:
    """Formal d/dx_i.  The cap is kept, so the top degree of the result is only
    exact when the input is a genuine polynomial of degree <= cap."""
    if not 0 <= i < f.nvars:
        raise IndexError(f"variable index {i} out of range for {f.nvars} variables")
    terms = {}
    for e, v in f.terms.items():
        k = e[i]
        if k:
            ne = e[:i] + (k - 1,) + e[i + 1 :]
            terms[ne] = _vscale(Fraction(k), v)
    return Jet._raw(f.nvars, f.cap, terms, f.dim)


def eps_norm(f: Jet, eps: Iterable[Rational], p: int) -> Fraction:
    """max_I |a_I| eps**I over the stored terms."""
    eps = Multiradius(eps)
    if len(eps) != f.nvars:
        raise ValueError("multiradius length must equal the number of variables")
    return max((vector_abs(v, p) * eps.power(e) for e, v in f.terms.items()), default=Fraction(0))


def coordinate_jets(nvars: int, cap: int) -> list:
    return [Jet.variable(nvars, cap, i) for i in range(nvars)]


def monomials(nvars: int, max_degree: int, min_degree: int = 0):
    """All exponent tuples with min_degree <= |I| <= max_degree, graded then lexicographic."""
    def rec(n, d):
        if n == 0:
            if d == 0:
                yield ()
            return
        for k in range(d, -1, -1):
            for rest in rec(n - 1, d - k):
                yield (k,) + rest

    for d in range(min_degree, max_degree + 1):
        yield from rec(nvars, d)
