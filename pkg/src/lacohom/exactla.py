"""Exact linear algebra over Q: kernels, images, cohomology of a complex at one spot,
and maps induced on cohomology.

Elimination is fraction-free: rows are scaled to primitive integer vectors and
combined with integer pivots, so entries stay small on the sparse matrices
that cochain complexes produce.  Pivot order follows row order, which makes
every basis returned here deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, List, Sequence

from .scalars import as_scalar

Vector = List[Fraction]
_ZERO = Fraction(0)


class Matrix:
    """Dense rows x cols matrix of Fractions."""

    __slots__ = ("rows", "cols", "data", "_sparse")

    def __init__(self, rows: int, cols: int, data: Sequence[Sequence] | None = None):
        self.rows, self.cols = rows, cols
        if data is None:
            self.data = [[_ZERO] * cols for _ in range(rows)]
        else:
            if len(data) != rows or any(len(r) != cols for r in data):
                raise ValueError("matrix data is not rectangular with the stated shape")
            self.data = [[as_scalar(x) for x in r] for r in data]
        self._sparse = None

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        m = cls(n, n)
        for i in range(n):
            m.data[i][i] = Fraction(1)
        return m

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "Matrix":
        rows = [list(r) for r in rows]
        return cls(len(rows), len(rows[0]) if rows else 0, rows)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int) -> "Matrix":
        m = cls(nrows, len(columns))
        for j, col in enumerate(columns):
            if len(col) != nrows:
                raise ValueError("column length mismatch")
            for i, x in enumerate(col):
                if x:
                    m.data[i][j] = as_scalar(x)
        return m

    def sparse_rows(self) -> List[Dict[int, Fraction]]:
        if self._sparse is None:
            self._sparse = [{j: x for j, x in enumerate(r) if x} for r in self.data]
        return self._sparse

    def column(self, j: int) -> Vector:
        return [r[j] for r in self.data]

    def columns(self) -> List[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows, [list(c) for c in zip(*self.data)] if self.rows else [[] for _ in range(self.cols)])

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.data)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
            out = Matrix(self.rows, other.cols)
            orows = other.sparse_rows()
            for i, row in enumerate(self.sparse_rows()):
                acc = out.data[i]
                for k, a in row.items():
                    for j, b in orows[k].items():
                        acc[j] += a * b
            return out
        vec = [as_scalar(x) for x in other]
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        return [sum((a * vec[k] for k, a in row.items()), _ZERO) for row in self.sparse_rows()]

    def __add__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return Matrix(self.rows, self.cols, [[a + b for a, b in zip(r, s)] for r, s in zip(self.data, other.data)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + other.scale(-1)

    def scale(self, c) -> "Matrix":
        c = as_scalar(c)
        return Matrix(self.rows, self.cols, [[c * a for a in r] for r in self.data])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and self.data == other.data

    __hash__ = None

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self.data)
        return f"Matrix({self.rows}x{self.cols}: [{body}])"


# -- fraction-free elimination -------------------------------------------------

def _int_row(row: Dict[int, Fraction]) -> Dict[int, int]:
    den = 1
    for x in row.values():
        den = den * x.denominator // gcd(den, x.denominator)
    return _primitive({j: int(x * den) for j, x in row.items()})


def _primitive(row: Dict[int, int]) -> Dict[int, int]:
    g = 0
    for x in row.values():
        g = gcd(g, x)
        if g == 1:
            return row
    if g > 1:
        row = {j: x // g for j, x in row.items()}
    return row


def _combine(a: int, row: Dict[int, int], b: int, other: Dict[int, int]) -> Dict[int, int]:
    """Primitive part of a*row - b*other."""
    out = {j: a * x for j, x in row.items()} if a != 1 else dict(row)
    for j, y in other.items():
        v = out.get(j, 0) - b * y
        if v:
            out[j] = v
        else:
            out.pop(j, None)
    return _primitive(out)


class Echelon:
    """Incrementally maintained reduced echelon form of a set of row vectors."""

    def __init__(self):
        self.pivots: Dict[int, Dict[int, int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: Dict[int, int]) -> Dict[int, int]:
        for c in [k for k in row if k in self.pivots]:
            if c not in row:
                continue
            prow = self.pivots[c]
            row = _combine(prow[c], row, row[c], prow)
        return row

    def add(self, vec) -> bool:
        """Insert a vector (Fraction sequence or sparse dict); True iff it was independent."""
        row = vec if isinstance(vec, dict) else {j: as_scalar(x) for j, x in enumerate(vec) if x}
        row = self.reduce(_int_row(row) if row else {})
        if not row:
            return False
        c = min(row)
        for pc, prow in list(self.pivots.items()):
            if c in prow:
                self.pivots[pc] = _combine(row[c], prow, prow[c], row)
        self.pivots[c] = row
        return True

    def contains(self, vec) -> bool:
        row = {j: as_scalar(x) for j, x in enumerate(vec) if x}
        return not self.reduce(_int_row(row) if row else {})

    def normalized(self) -> Dict[int, Dict[int, Fraction]]:
        """Pivot column -> row scaled so the pivot entry is 1."""
        return {c: {j: Fraction(x, r[c]) for j, x in r.items()} for c, r in sorted(self.pivots.items())}


def _row_echelon(m: Matrix) -> Echelon:
    e = Echelon()
    for r in m.sparse_rows():
        if r:
            e.add(dict(r))
    return e


def rank(m: Matrix) -> int:
    return _row_echelon(m).rank


def kernel_basis(m: Matrix) -> List[Vector]:
    """Basis of {x : m x = 0}, one vector per free column (that entry is 1)."""
    rref = _row_echelon(m).normalized()
    free = [j for j in range(m.cols) if j not in rref]
    basis = []
    for f in free:
        x = [_ZERO] * m.cols
        x[f] = Fraction(1)
        for c, r in rref.items():
            if f in r:
                x[c] = -r[f]
        basis.append(x)
    return basis


def image_basis(m: Matrix) -> List[Vector]:
    """The pivot columns of m: a basis of its column space made of actual columns."""
    return [m.column(j) for j in _pivot_columns(m)]


def _pivot_columns(m: Matrix) -> List[int]:
    return sorted(_row_echelon(m).pivots)


def solve_in_span(basis: Sequence[Sequence], targets: Sequence[Sequence]) -> List[Vector] | None:
    """Coordinates of each target in an independent list of basis vectors.

    Returns None if some target is outside the span.  Raises if the basis is dependent.
    """
    k = len(basis)
    if not targets:
        return []
    n = len(targets[0])
    cols = list(basis) + list(targets)
    aug = Matrix.from_columns(cols, n) if cols else Matrix(n, 0)
    rref = _row_echelon(aug).normalized()
    if any(c >= k for c in rref):
        if len([c for c in rref if c < k]) < k:
            raise ValueError("basis vectors are linearly dependent")
        return None
    if len(rref) < k:
        raise ValueError("basis vectors are linearly dependent")
    out = []
    for t in range(len(targets)):
        coords = [_ZERO] * k
        for c, r in rref.items():
            coords[c] = r.get(k + t, _ZERO)
        out.append(coords)
    return out


@dataclass
class Cohomology:
    """H = ker(d_out) / im(d_in) with chosen representatives."""

    dim: int
    representatives: List[Vector]
    kernel: List[Vector] = field(repr=False)
    image: List[Vector] = field(repr=False)


def cohomology_at(d_in: Matrix, d_out: Matrix) -> Cohomology:
    if d_in.rows != d_out.cols:
        raise ValueError("d_in and d_out do not meet in the same space")
    if not (d_out @ d_in).is_zero():
        raise ValueError("not a complex: d_out * d_in != 0")
    kern = kernel_basis(d_out)
    img = image_basis(d_in)
    ech = Echelon()
    for b in img:
        ech.add(b)
    reps = [k for k in kern if ech.add(k)]
    dim = len(kern) - len(img)
    if len(reps) != dim:
        raise AssertionError("image is not contained in the kernel")
    return Cohomology(dim, reps, kern, img)


@dataclass
class SubquotientMap:
    """Matrix of the map induced between two cohomology spaces in representative bases."""

    matrix: Matrix
    source: Cohomology = field(repr=False)
    target: Cohomology = field(repr=False)
    rank: int = 0

    @property
    def injective(self) -> bool:
        return self.rank == self.source.dim

    @property
    def surjective(self) -> bool:
        return self.rank == self.target.dim

    @property
    def bijective(self) -> bool:
        return self.injective and self.surjective


def induced_map_on_cohomology(
    f: Matrix,
    source: Sequence[Matrix],
    target: Sequence[Matrix],
    f_prev: Matrix | None = None,
    source_cohomology: Cohomology | None = None,
    target_cohomology: Cohomology | None = None,
) -> SubquotientMap:
    """Map induced by f: ker d_out / im d_in -> ker d_out' / im d_in'.

    Well-definedness is checked exactly: f must send cocycles to cocycles and
    coboundaries to coboundaries (and commute with d_in when f_prev is given).
    """
    d_in, d_out = source
    t_in, t_out = target
    if f.cols != d_in.rows or f.rows != t_in.rows:
        raise ValueError("f does not map between the middle spaces")
    if f_prev is not None and not (f @ d_in - t_in @ f_prev).is_zero():
        raise ValueError("not a chain map here: f d_in != d_in' f_prev")
    src = source_cohomology or cohomology_at(d_in, d_out)
    tgt = target_cohomology or cohomology_at(t_in, t_out)
    for z in src.kernel:
        if any(t_out @ (f @ z)):
            raise ValueError("not a chain map here: a cocycle is not sent to a cocycle")
    ech = Echelon()
    for b in tgt.image:
        ech.add(b)
    for b in src.image:
        if not ech.contains(f @ b):
            raise ValueError("not a chain map here: a coboundary is not sent to a coboundary")
    basis = list(tgt.image) + list(tgt.representatives)
    images = [f @ r for r in src.representatives]
    coords = solve_in_span(basis, images) if images else []
    if coords is None:
        raise ValueError("image of a representative is not a cocycle")
    off = len(tgt.image)
    cols = [c[off:] for c in coords]
    mat = Matrix.from_columns(cols, tgt.dim) if cols else Matrix(tgt.dim, 0)
    return SubquotientMap(mat, src, tgt, rank(mat))


def determinant(m) -> Fraction:
    """Determinant of a square matrix given as a Matrix or nested sequences."""
    rows = m.data if isinstance(m, Matrix) else m
    n = len(rows)
    a = [[as_scalar(x) for x in r] for r in rows]
    if any(len(r) != n for r in a):
        raise ValueError("determinant of a non-square matrix")
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            return _ZERO
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                for j in range(c, n):
                    a[r][j] -= f * a[c][j]
    return det


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise ValueError("only square matrices are invertible")
    ident = Matrix.identity(m.rows).columns()
    try:
        coords = solve_in_span(m.columns(), ident)
    except ValueError:
        coords = None
    if coords is None:
        raise ValueError("matrix is singular")
    return Matrix.from_columns(coords, m.rows)
