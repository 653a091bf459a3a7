"""Vector-valued differential forms with jet coefficients.

A q-form in n variables is stored as a map from strictly increasing index
tuples ``(k_1 < ... < k_q)`` (zero-based) to jets.  Basis forms follow the
determinant convention: ``(dx_{k_1} ^ ... ^ dx_{k_q})(v_1, ..., v_q) =
det(dx_{k_i}(v_j))``, with no ``1/q!``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, Mapping, Sequence, Tuple

from .exactla import determinant
from .jets import Jet, jet_substitute, partial_derivative
from .scalars import Rational, as_scalar

Index = Tuple[int, ...]


def merge_sign(s: Index, t: Index):
    """Sign and sorted union of two increasing tuples, ``(0, None)`` if they overlap."""
    if set(s) & set(t):
        return 0, None
    inversions = sum(1 for a in s for b in t if a > b)
    return (-1) ** inversions, tuple(sorted(s + t))


class Form:
    __slots__ = ("nvars", "q", "cap", "dim", "components")

    def __init__(self, nvars: int, q: int, components: Mapping[Index, Jet], cap: int | None = None, dim: int | None = None):
        if not 0 <= q:
            raise ValueError("form degree must be nonnegative")
        comps = dict(components)
        if cap is None or dim is None:
            if not comps:
                raise ValueError("cap and dim are required for an empty form")
            some = next(iter(comps.values()))
            cap = some.cap if cap is None else cap
            dim = some.dim if dim is None else dim
        clean: Dict[Index, Jet] = {}
        for idx, jet in comps.items():
            idx = tuple(idx)
            if len(idx) != q or any(b <= a for a, b in zip(idx, idx[1:])) or any(not 0 <= k < nvars for k in idx):
                raise ValueError(f"index tuple {idx} is not strictly increasing in 0..{nvars - 1}")
            if jet.nvars != nvars or jet.dim != dim:
                raise ValueError("component jets must share variables and coefficient dimension")
            if jet.cap != cap:
                jet = jet.with_cap(cap)
            if not jet.is_zero():
                clean[idx] = jet
        self.nvars, self.q, self.cap, self.dim, self.components = nvars, q, cap, dim, clean

    @classmethod
    def zero(cls, nvars: int, q: int, cap: int, dim: int = 1) -> "Form":
        return cls(nvars, q, {}, cap, dim)

    @classmethod
    def function(cls, f: Jet) -> "Form":
        """A jet viewed as a 0-form."""
        return cls(f.nvars, 0, {(): f}, f.cap, f.dim)

    @classmethod
    def basis(cls, nvars: int, cap: int, idx: Sequence[int], coeff: Jet | None = None) -> "Form":
        """``coeff * dx_idx`` with idx in any order (sorted with sign)."""
        idx = tuple(idx)
        if len(set(idx)) != len(idx):
            return cls.zero(nvars, len(idx), cap, 1 if coeff is None else coeff.dim)
        sign = 1
        perm = list(idx)
        for i in range(len(perm)):
            for j in range(len(perm) - 1 - i):
                if perm[j] > perm[j + 1]:
                    perm[j], perm[j + 1] = perm[j + 1], perm[j]
                    sign = -sign
        if coeff is None:
            coeff = Jet.constant(nvars, cap, 1)
        return cls(nvars, len(idx), {tuple(perm): coeff.scale(sign)}, cap, coeff.dim)

    # -- queries --------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.components

    def coefficient(self, idx: Sequence[int]) -> Jet:
        return self.components.get(tuple(idx), Jet.zero(self.nvars, self.cap, self.dim))

    def as_function(self) -> Jet:
        if self.q != 0:
            raise ValueError("only 0-forms are functions")
        return self.coefficient(())

    def degree(self) -> int:
        """Largest polynomial degree among the coefficients."""
        return max((j.degree() for j in self.components.values()), default=-1)

    def with_cap(self, cap: int) -> "Form":
        return Form(self.nvars, self.q, {k: v.with_cap(cap) for k, v in self.components.items()}, cap, self.dim)

    def map_coefficients(self, matrix) -> "Form":
        comps = {k: v.map_coefficients(matrix) for k, v in self.components.items()}
        return Form(self.nvars, self.q, comps, self.cap, len(matrix))

    # -- linear structure -------------------------------------------------
    def _check(self, other: "Form") -> None:
        if (self.nvars, self.q, self.dim) != (other.nvars, other.q, other.dim):
            raise ValueError("forms differ in variables, degree or coefficient dimension")

    def __add__(self, other: "Form") -> "Form":
        self._check(other)
        cap = min(self.cap, other.cap)
        comps = dict(self.components)
        for k, v in other.components.items():
            comps[k] = comps[k] + v if k in comps else v
        return Form(self.nvars, self.q, comps, cap, self.dim)

    def __neg__(self) -> "Form":
        return Form(self.nvars, self.q, {k: -v for k, v in self.components.items()}, self.cap, self.dim)

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def scale(self, c: Rational) -> "Form":
        c = as_scalar(c)
        return Form(self.nvars, self.q, {k: v.scale(c) for k, v in self.components.items()}, self.cap, self.dim)

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        if (self.nvars, self.q, self.dim) != (other.nvars, other.q, other.dim):
            return False
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self) -> str:
        if not self.components:
            return f"Form(0; n={self.nvars}, q={self.q})"
        parts = [f"({v!r})*d{list(k)}" for k, v in sorted(self.components.items())]
        return f"Form({' + '.join(parts)})"


@dataclass(frozen=True)
class BlockStructure:
    """Partition of the variables into named blocks, e.g. the factors of G x ... x G."""

    nvars: int
    blocks: Tuple[Tuple[str, Tuple[int, ...]], ...]

    def __post_init__(self):
        seen = [k for _, vs in self.blocks for k in vs]
        if sorted(seen) != list(range(self.nvars)):
            raise ValueError("blocks must be disjoint and cover all variables")
        names = [n for n, _ in self.blocks]
        if len(set(names)) != len(names):
            raise ValueError("block names must be distinct")

    @classmethod
    def product(cls, n: int, factors: int, prefix: str = "g") -> "BlockStructure":
        """Blocks ``g0 | g1 | ...`` of n consecutive variables each."""
        return cls(n * factors, tuple((f"{prefix}{i}", tuple(range(i * n, (i + 1) * n))) for i in range(factors)))

    def variables(self, block) -> Tuple[int, ...]:
        if isinstance(block, int) and not isinstance(block, bool):
            if not 0 <= block < len(self.blocks):
                raise KeyError(f"unknown block {block}")
            return self.blocks[block][1]
        for name, vs in self.blocks:
            if name == block:
                return vs
        raise KeyError(f"unknown block {block!r}")


def _d_along(omega: Form, variables: Iterable[int]) -> Form:
    comps: Dict[Index, Jet] = {}
    for idx, a in omega.components.items():
        for k in variables:
            if k in idx:
                continue
            da = partial_derivative(a, k)
            if da.is_zero():
                continue
            sign, new = merge_sign((k,), idx)
            term = da if sign > 0 else -da
            comps[new] = comps[new] + term if new in comps else term
    return Form(omega.nvars, omega.q + 1, comps, omega.cap, omega.dim)


def exterior_derivative(omega: Form) -> Form:
    """d(a dx_T) = sum_k da/dx_k dx_k ^ dx_T."""
    if omega.q >= omega.nvars:
        raise ValueError(f"degree overflow: d of a {omega.q}-form in {omega.nvars} variables")
    return _d_along(omega, range(omega.nvars))


def partial_exterior_derivative(omega: Form, blocks: BlockStructure, block) -> Form:
    """Exterior derivative using only the variables of one block."""
    if blocks.nvars != omega.nvars:
        raise ValueError("block structure does not match the form's variables")
    return _d_along(omega, blocks.variables(block))


def wedge(alpha: Form, beta: Form) -> Form:
    """Graded product; at most one factor may be vector-valued."""
    if alpha.nvars != beta.nvars:
        raise ValueError("forms live in different numbers of variables")
    if alpha.dim != 1 and beta.dim != 1:
        raise ValueError("wedge of two vector-valued forms is undefined")
    dim = max(alpha.dim, beta.dim)
    cap = min(alpha.cap, beta.cap)
    comps: Dict[Index, Jet] = {}
    for s, a in alpha.components.items():
        for t, b in beta.components.items():
            sign, idx = merge_sign(s, t)
            if not sign:
                continue
            term = a * b
            if sign < 0:
                term = -term
            comps[idx] = comps[idx] + term if idx in comps else term
    return Form(alpha.nvars, alpha.q + beta.q, comps, cap, dim)


def pullback(omega: Form, phi: Sequence[Jet]) -> Form:
    """phi^* omega for a map given by scalar jets without constant term."""
    if len(phi) != omega.nvars:
        raise ValueError(f"need {omega.nvars} component jets, got {len(phi)}")
    if not phi:
        raise ValueError("pullback from zero variables needs a target; use Jet.constant")
    k = phi[0].nvars
    cap = min([omega.cap] + [f.cap for f in phi])
    one = Form.function(Jet.constant(k, cap, 1))
    dphi = [exterior_derivative(Form.function(f.with_cap(cap))) if k > 0 else Form.zero(k, 1, cap) for f in phi]
    wedges: Dict[Index, Form] = {(): one}

    def dphi_wedge(idx: Index) -> Form:
        if idx not in wedges:
            wedges[idx] = wedge(dphi_wedge(idx[:-1]), dphi[idx[-1]])
        return wedges[idx]

    out = Form.zero(k, omega.q, cap, omega.dim)
    for idx, a in omega.components.items():
        coef = Form.function(jet_substitute(a, phi))
        out = out + wedge(dphi_wedge(idx), coef)
    return out


def evaluate_form_at_origin(omega: Form) -> Dict[Index, tuple]:
    """Constant terms of all components: an alternating tensor on K^n with values in K^dim."""
    out = {}
    for idx, a in omega.components.items():
        c = a.constant_term()
        if any(c):
            out[idx] = c
    return out


def alternating_value(tensor: Mapping[Index, tuple], vectors: Sequence[Sequence[Rational]], dim: int = 1) -> tuple:
    """Evaluate an alternating tensor (increasing-tuple basis) on q vectors."""
    q = len(vectors)
    total = [Fraction(0)] * dim
    for idx, c in tensor.items():
        if len(idx) != q:
            raise ValueError("tensor degree does not match the number of vectors")
        m = [[as_scalar(vectors[j][idx[i]]) for j in range(q)] for i in range(q)]
        det = determinant(m)
        for a in range(dim):
            total[a] += det * c[a]
    return tuple(total)


def increasing_tuples(n: int, q: int):
    return list(combinations(range(n), q))
