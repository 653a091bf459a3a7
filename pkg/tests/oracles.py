"""Brute-force reference computations built on sympy.

These deliberately share no code with the package: cochains are full
tensors on ordered tuples, polynomials are sympy expressions, and ranks come
from sympy's DomainMatrix over QQ.
"""

from itertools import combinations, product

import sympy as sp
from sympy.combinatorics import Permutation
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix


def _rank(rows, ncols):
    if not rows or ncols == 0:
        return 0
    return DomainMatrix([[QQ.from_sympy(sp.sympify(x)) for x in r] for r in rows], (len(rows), ncols), QQ).rank()


def _sign(seq):
    return Permutation([sorted(seq).index(s) for s in seq]).signature()


def _q(x):
    return sp.Rational(str(x))


# -- Lie algebra cohomology ---------------------------------------------------------

def ce_matrices(c, action, dimV):
    """Matrices d_q: Hom(L^q g, V) -> Hom(L^(q+1) g, V) on increasing-tuple coordinates.

    c[i][j][k] = coefficient of e_k in [e_i, e_j]; action[i][a][b] = (rho(e_i))_{ab}.
    Cochains are evaluated on arbitrary ordered tuples by alternation.
    """
    n = len(c)

    def value(w, tup):
        # w: dict increasing tuple -> list(V); returns w(e_tup) for an ordered tuple
        if len(set(tup)) < len(tup):
            return [0] * dimV
        key = tuple(sorted(tup))
        s = _sign(tup)
        return [s * x for x in w.get(key, [0] * dimV)]

    def d(q, w):
        out = {}
        for tup in combinations(range(n), q + 1):
            acc = [sp.Integer(0)] * dimV
            for i in range(q + 1):
                rest = tup[:i] + tup[i + 1:]
                v = value(w, rest)
                for a in range(dimV):
                    acc[a] += (-1) ** i * sum(_q(action[tup[i]][a][b]) * v[b] for b in range(dimV))
            for i, j in combinations(range(q + 1), 2):
                rest = tup[:i] + tup[i + 1:j] + tup[j + 1:]
                for k in range(n):
                    ck = _q(c[tup[i]][tup[j]][k])
                    if ck:
                        v = value(w, (k,) + rest)
                        for a in range(dimV):
                            acc[a] += (-1) ** (i + j) * ck * v[a]
            out[tup] = acc
        return out

    mats = []
    for q in range(n + 1):
        src = list(combinations(range(n), q))
        tgt = list(combinations(range(n), q + 1))
        cols = []
        for t in src:
            for a in range(dimV):
                w = {t: [int(b == a) for b in range(dimV)]}
                img = d(q, w)
                cols.append([img[u][b] for u in tgt for b in range(dimV)])
        rows = len(tgt) * dimV
        mats.append([[cols[j][i] for j in range(len(cols))] for i in range(rows)])
    return mats


def ce_dims(c, action=None, dimV=1):
    n = len(c)
    action = action or [[[0] * dimV for _ in range(dimV)] for _ in range(n)]
    mats = ce_matrices(c, action, dimV)
    sizes = [len(list(combinations(range(n), q))) * dimV for q in range(n + 2)]
    ranks = [_rank(m, sizes[q]) for q, m in enumerate(mats)]
    return [sizes[q] - ranks[q] - (ranks[q - 1] if q else 0) for q in range(n + 1)]


def ce_invariant_dims(c, gamma_g, order, dimV=1):
    """dims of H^q(C^G) for the cyclic group generated by gamma_g, trivial V of dim 1."""
    n = len(c)
    g = sp.Matrix(gamma_g).applyfunc(_q)
    mats = ce_matrices(c, [[[0]] for _ in range(n)], 1)

    def projector(q):
        basis = list(combinations(range(n), q))
        P = sp.zeros(len(basis), len(basis))
        power = sp.eye(n)
        for _ in range(order):
            # (gamma . w)(e_T) = w(power^-1 e_T) expanded multilinearly
            A = power.inv()
            for col, S in enumerate(basis):
                for row, T in enumerate(basis):
                    P[row, col] += A.extract(list(S), list(T)).det() if q else 1
            power = power * g
        return P / order

    Ps = [projector(q) for q in range(n + 1)]
    out = []
    for q in range(n + 1):
        D = sp.Matrix(mats[q]) if mats[q] else sp.zeros(0, Ps[q].rows)
        im_P = Ps[q].columnspace()
        if im_P:
            B = sp.Matrix.hstack(*im_P)
            z = B.shape[1] - (D * B).rank() if D.rows else B.shape[1]
        else:
            z = 0
        if q:
            Dp = sp.Matrix(mats[q - 1])
            b = (Dp * Ps[q - 1]).rank()
        else:
            b = 0
        out.append(z - b)
    return out


# -- truncated bar complex ------------------------------------------------------------

def _truncate(expr, gens, cap):
    poly = sp.Poly(sp.expand(expr), *gens)
    return {m: v for m, v in poly.terms() if sum(m) <= cap}


def bar_dims(law, n, cap, p_max):
    """law: function (xs, ys) -> list of sympy expressions; trivial 1-dim coefficients."""
    sym = [sp.symbols(f"g{b}_0:{n}") for b in range(p_max + 2)]

    def monos(nv, d):
        return [e for e in product(range(d + 1), repeat=nv) if sum(e) <= d]

    def delta_matrix(p):
        gens_src = [s for b in range(p) for s in sym[b]]
        gens_tgt = [s for b in range(p + 1) for s in sym[b]]
        src = monos(p * n, cap)
        tgt = monos((p + 1) * n, cap)
        index = {m: i for i, m in enumerate(tgt)}
        cols = []
        for e in src:
            f = sp.prod([v ** k for v, k in zip(gens_src, e)]) if gens_src else sp.Integer(1)

            def f_at(blocks):
                sub = {}
                for b, vals in enumerate(blocks):
                    for k in range(n):
                        sub[sym[b][k]] = vals[k]
                return f.xreplace(sub) if sub else f

            blocks = [list(sym[b]) for b in range(p + 1)]
            total = f_at(blocks[1:])
            for i in range(1, p + 1):
                merged = blocks[: i - 1] + [law(blocks[i - 1], blocks[i])] + blocks[i + 1:]
                total += (-1) ** i * f_at(merged)
            total += (-1) ** (p + 1) * f_at(blocks[:p])
            col = [0] * len(tgt)
            if gens_tgt:
                for m, v in _truncate(total, gens_tgt, cap).items():
                    col[index[m]] = v
            cols.append(col)
        return [[cols[j][i] for j in range(len(src))] for i in range(len(tgt))], len(src)

    ranks = []
    sizes = []
    for p in range(p_max + 1):
        m, size = delta_matrix(p)
        sizes.append(size)
        ranks.append(_rank(m, size))
    return [sizes[q] - ranks[q] - (ranks[q - 1] if q else 0) for q in range(p_max + 1)]


def additive_law(xs, ys):
    return [x + y for x, y in zip(xs, ys)]


def heisenberg_law(xs, ys):
    return [xs[0] + ys[0], xs[1] + ys[1], xs[2] + ys[2] + sp.Rational(1, 2) * (xs[0] * ys[1] - xs[1] * ys[0])]


# -- homotopy operator by the integral formula --------------------------------------------

def homotopy_integral(coeffs, n, q):
    """h w = sum_T sum_a (-1)^(a-1) (int_0^1 t^(q-1) f_T(t x) dt) x_{k_a} dx_{T - k_a}.

    coeffs: dict increasing tuple -> sympy expression in x0..x(n-1).
    Returns dict (q-1)-tuple -> expression.
    """
    xs = sp.symbols(f"x0:{n}")
    t = sp.Symbol("t")
    out = {}
    for T, f in coeffs.items():
        g = sp.integrate(t ** (q - 1) * f.xreplace({x: t * x for x in xs}), (t, 0, 1))
        for a, k in enumerate(T):
            rest = T[:a] + T[a + 1:]
            out[rest] = sp.expand(out.get(rest, 0) + (-1) ** a * g * xs[k])
    return {k: v for k, v in out.items() if v != 0}


# -- explicit low-order BCH ------------------------------------------------------------------

def bch_explicit(bracket, x, y):
    """x + y + [x,y]/2 + ([x,[x,y]] + [y,[y,x]])/12 - [y,[x,[x,y]]]/24 (exact through order 4)."""
    xy = bracket(x, y)
    terms = [x, y, [sp.Rational(1, 2) * v for v in xy],
             [sp.Rational(1, 12) * (a + b) for a, b in zip(bracket(x, xy), bracket(y, bracket(y, x)))],
             [sp.Rational(-1, 24) * v for v in bracket(y, bracket(x, xy))]]
    return [sp.expand(sum(t[k] for t in terms)) for k in range(len(x))]
