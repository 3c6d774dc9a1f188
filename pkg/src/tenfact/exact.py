"""Exact integer linear algebra on Python integers.

The Smith form here works on a sparse dict-of-dicts copy of the matrix and
keeps the unimodular transforms as logs of elementary operations instead of
dense matrices, so ``U`` and ``V`` can be applied to (or inverted on) single
vectors cheaply even when the matrix has thousands of rows.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "xgcd",
    "bareiss_adjugate",
    "solve_rational",
    "SmithForm",
    "smith_form",
    "finite_hom_kernel",
]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def bareiss_adjugate(a: Sequence[Sequence[int]]) -> tuple[int, list[list[int]]]:
    """Fraction-free Gauss-Jordan on ``[A | I]``.

    Returns ``(d, R)`` with ``A @ R == d * I``; ``d == 0`` iff ``A`` is singular
    (then ``R`` is meaningless).
    """
    n = len(a)
    m = [[int(v) for v in row] + [int(i == j) for j in range(n)] for i, row in enumerate(a)]
    prev = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            return 0, []
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
        p = m[k][k]
        rowk = m[k]
        for i in range(n):
            if i == k:
                continue
            row = m[i]
            f = row[k]
            for j in range(2 * n):
                row[j] = (p * row[j] - f * rowk[j]) // prev
        prev = p
    d = m[0][0]
    # every diagonal entry of the left block equals d after the final pass
    for i in range(1, n):
        assert m[i][i] == d
    return d, [row[n:] for row in m]


def solve_rational(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Unique solution of a square system over Q, or None if singular."""
    n = len(a)
    m = [[Fraction(v) for v in row] + [Fraction(bv)] for row, bv in zip(a, b)]
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            return None
        m[k], m[piv] = m[piv], m[k]
        inv = 1 / m[k][k]
        m[k] = [v * inv for v in m[k]]
        for i in range(n):
            if i != k and m[i][k]:
                f = m[i][k]
                m[i] = [v - f * w for v, w in zip(m[i], m[k])]
    return [row[n] for row in m]


# -- elementary operation logs --------------------------------------------------
#
# ("add", t, s, k)          v[t] += k * v[s]
# ("mat", i, j, a, b, c, d) (v[i], v[j]) = (a v[i] + b v[j], c v[i] + d v[j]),  ad - bc = +-1
# ("neg", i)                v[i] = -v[i]
#
# Row operations act on the matrix from the left, so the same op applied to a
# column vector computes U @ v.  Column operations act from the right; their
# log is stored in the form that applies to a vector as ``V @ x`` when replayed
# backwards.


def _apply(op, v):
    kind = op[0]
    if kind == "add":
        _, t, s, k = op
        v[t] += k * v[s]
    elif kind == "mat":
        _, i, j, a, b, c, d = op
        vi, vj = v[i], v[j]
        v[i] = a * vi + b * vj
        v[j] = c * vi + d * vj
    else:
        v[op[1]] = -v[op[1]]


def _apply_inverse(op, v):
    kind = op[0]
    if kind == "add":
        _, t, s, k = op
        v[t] -= k * v[s]
    elif kind == "mat":
        _, i, j, a, b, c, d = op
        det = a * d - b * c
        vi, vj = v[i], v[j]
        v[i] = det * (d * vi - b * vj)
        v[j] = det * (-c * vi + a * vj)
    else:
        v[op[1]] = -v[op[1]]


class SmithForm:
    """``U @ M @ V == D`` with ``D`` supported on ``pivots``.

    ``pivots`` lists ``(row, col, d)`` with ``d > 0`` and each ``d`` dividing
    the next; every other entry of ``U M V`` is zero.  Rows and columns keep
    their original indices, so ``D`` is a permuted diagonal.
    """

    def __init__(self, nrows, ncols, pivots, row_ops, col_ops):
        self.nrows = nrows
        self.ncols = ncols
        self.pivots = pivots
        self.row_ops = row_ops
        self.col_ops = col_ops
        self._pivot_rows = {r for r, _, _ in pivots}
        self._pivot_cols = {c for _, c, _ in pivots}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def diagonal(self) -> list[int]:
        return [d for _, _, d in self.pivots]

    @property
    def invariant_factors(self) -> list[int]:
        """Nontrivial diagonal entries (the torsion of the cokernel)."""
        return [d for d in self.diagonal if d != 1]

    def left(self, v: Iterable[int]) -> list[int]:
        """``U @ v``."""
        out = [int(x) for x in v]
        for op in self.row_ops:
            _apply(op, out)
        return out

    def left_inverse(self, v: Iterable[int]) -> list[int]:
        """``U^{-1} @ v``."""
        out = [int(x) for x in v]
        for op in reversed(self.row_ops):
            _apply_inverse(op, out)
        return out

    def right(self, x: Iterable) -> list:
        """``V @ x`` (entries may be Fractions)."""
        out = list(x)
        for op in reversed(self.col_ops):
            _apply(op, out)
        return out

    def unit_row(self, r: int) -> list[int]:
        e = [0] * self.nrows
        e[r] = 1
        return e

    def solve(self, b: Iterable[int]) -> list[int] | None:
        """An integer ``x`` with ``M @ x == b``, or None if none exists."""
        y = self.left(b)
        x = [0] * self.ncols
        for r, c, d in self.pivots:
            q, rem = divmod(y[r], d)
            if rem:
                return None
            x[c] = q
        if any(y[r] for r in range(self.nrows) if r not in self._pivot_rows):
            return None
        return self.right(x)

    def solve_rational(self, b: Iterable[int]) -> list[Fraction] | None:
        """A rational ``x`` with ``M @ x == b``, or None if ``b`` is not in the rational span."""
        y = self.left(b)
        if any(y[r] for r in range(self.nrows) if r not in self._pivot_rows):
            return None
        x = [Fraction(0)] * self.ncols
        for r, c, d in self.pivots:
            x[c] = Fraction(y[r], d)
        return self.right(x)

    def kernel_basis(self) -> list[list[int]]:
        """A Z-basis of ``ker M``."""
        out = []
        for c in range(self.ncols):
            if c not in self._pivot_cols:
                e = [0] * self.ncols
                e[c] = 1
                out.append(self.right(e))
        return out


class _Sparse:
    """Mutable sparse integer matrix with row and column indexes."""

    __slots__ = ("rows", "cols")

    def __init__(self):
        self.rows: dict[int, dict[int, int]] = {}
        self.cols: dict[int, dict[int, int]] = {}

    def set(self, r, c, v):
        if v:
            self.rows.setdefault(r, {})[c] = v
            self.cols.setdefault(c, {})[r] = v
        else:
            row = self.rows.get(r)
            if row is not None and c in row:
                del row[c]
                if not row:
                    del self.rows[r]
                col = self.cols[c]
                del col[r]
                if not col:
                    del self.cols[c]

    def get(self, r, c):
        return self.rows.get(r, {}).get(c, 0)

    def add_row(self, t, s, k):
        row_t = self.rows.get(t, {})
        for c, v in list(self.rows.get(s, {}).items()):
            self.set(t, c, row_t.get(c, 0) + k * v)
            row_t = self.rows.get(t, {})

    def mat_rows(self, i, j, a, b, c, d):
        ri = dict(self.rows.get(i, {}))
        rj = dict(self.rows.get(j, {}))
        for col in set(ri) | set(rj):
            x, y = ri.get(col, 0), rj.get(col, 0)
            self.set(i, col, a * x + b * y)
            self.set(j, col, c * x + d * y)

    def add_col(self, t, s, k):
        for r, v in list(self.cols.get(s, {}).items()):
            self.set(r, t, self.get(r, t) + k * v)

    def mat_cols(self, i, j, w00, w01, w10, w11):
        # [col_i, col_j] <- [col_i, col_j] @ [[w00, w01], [w10, w11]]
        ci = dict(self.cols.get(i, {}))
        cj = dict(self.cols.get(j, {}))
        for r in set(ci) | set(cj):
            x, y = ci.get(r, 0), cj.get(r, 0)
            self.set(r, i, w00 * x + w10 * y)
            self.set(r, j, w01 * x + w11 * y)

    def drop(self, r, c):
        for cc in list(self.rows.get(r, {})):
            self.set(r, cc, 0)
        for rr in list(self.cols.get(c, {})):
            self.set(rr, c, 0)


def _to_sparse(matrix) -> tuple[_Sparse, int, int]:
    sp = _Sparse()
    if hasattr(matrix, "tocoo"):
        coo = matrix.tocoo()
        nrows, ncols = coo.shape
        for r, c, v in zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist()):
            if v:
                sp.set(r, c, sp.get(r, c) + int(v))
        return sp, nrows, ncols
    if isinstance(matrix, np.ndarray):
        matrix = matrix.tolist()
    nrows = len(matrix)
    ncols = len(matrix[0]) if nrows else 0
    for r, row in enumerate(matrix):
        if len(row) != ncols:
            raise ValueError("ragged matrix")
        for c, v in enumerate(row):
            if v:
                sp.set(r, c, int(v))
    return sp, nrows, ncols


def _choose_pivot(sp: _Sparse):
    best = None
    best_key = None
    rows = sp.rows
    for c, col in sp.cols.items():
        lc = len(col) - 1
        for r, v in col.items():
            key = (abs(v), lc * (len(rows[r]) - 1))
            if best_key is None or key < best_key:
                best_key, best = key, (r, c)
                if key[0] == 1 and key[1] == 0:
                    return best
    return best


def smith_form(matrix, shape: tuple[int, int] | None = None) -> SmithForm:
    """Smith normal form with transform logs.

    ``matrix`` may be a dense nested list / ndarray or a scipy sparse matrix.
    Pivots are chosen by smallest absolute value, then Markowitz cost, so
    unit pivots are consumed first and fill-in stays small.
    """
    sp, nrows, ncols = _to_sparse(matrix)
    if shape is not None:
        nrows, ncols = shape
    row_ops: list = []
    col_ops: list = []
    pivots: list = []

    while sp.cols:
        r, c = _choose_pivot(sp)
        p = sp.get(r, c)
        if abs(p) == 1:
            for s, a in list(sp.cols[c].items()):
                if s != r:
                    k = -a * p
                    sp.add_row(s, r, k)
                    row_ops.append(("add", s, r, k))
            for l, b in list(sp.rows[r].items()):
                if l != c:
                    col_ops.append(("add", c, l, -b * p))
            sp.drop(r, c)
            pivots.append((r, c, p))
            continue

        while True:
            for s, a in list(sp.cols.get(c, {}).items()):
                if s == r:
                    continue
                p = sp.get(r, c)
                if a % p == 0:
                    k = -(a // p)
                    sp.add_row(s, r, k)
                    row_ops.append(("add", s, r, k))
                else:
                    g, x, y = xgcd(p, a)
                    op = ("mat", r, s, x, y, -a // g, p // g)
                    sp.mat_rows(*op[1:])
                    row_ops.append(op)
            for l, b in list(sp.rows.get(r, {}).items()):
                if l == c:
                    continue
                p = sp.get(r, c)
                if b % p == 0:
                    k = -(b // p)
                    sp.add_col(l, c, k)
                    col_ops.append(("add", c, l, k))
                else:
                    g, x, y = xgcd(p, b)
                    w = (x, -b // g, y, p // g)
                    sp.mat_cols(c, l, *w)
                    col_ops.append(("mat", c, l, *w))
            if len(sp.cols[c]) == 1 and len(sp.rows[r]) == 1:
                break
        p = sp.get(r, c)
        sp.drop(r, c)
        pivots.append((r, c, p))

    # positive pivots
    fixed = []
    for r, c, d in pivots:
        if d < 0:
            row_ops.append(("neg", r))
            d = -d
        fixed.append([r, c, d])

    units = [q for q in fixed if q[2] == 1]
    rest = sorted((q for q in fixed if q[2] != 1), key=lambda q: q[2])
    # gcd/lcm sweep turns the diagonal into a divisibility chain
    for i in range(len(rest)):
        for j in range(i + 1, len(rest)):
            ri, ci, a = rest[i]
            rj, cj, b = rest[j]
            if b % a == 0:
                continue
            g, s, t = xgcd(a, b)
            row_ops.append(("mat", ri, rj, s, t, -b // g, a // g))
            col_ops.append(("mat", ci, cj, 1, -t * b // g, 1, s * a // g))
            rest[i][2], rest[j][2] = g, a * b // g
    final = [tuple(q) for q in units] + [tuple(q) for q in rest]
    final = [q for q in final if q[2] == 1] + [q for q in final if q[2] != 1]
    return SmithForm(nrows, ncols, final, row_ops, col_ops)


def finite_hom_kernel(a: Sequence[Sequence[int]], src: Sequence[int], dst: Sequence[int]):
    """Kernel of ``x -> a @ x`` from ``(+) Z/src_i`` to ``(+) Z/dst_j``.

    Returns ``(invariant_factors, generators)``: the kernel is the direct sum
    of cyclic groups of the given orders (each > 1), and ``generators[i]`` is
    a coefficient vector (reduced mod ``src``) generating the i-th summand.
    """
    k, m = len(src), len(dst)
    if k == 0:
        return [], []
    a = [[int(v) for v in row] for row in a]
    if m == 0:
        lattice = [[int(i == j) for j in range(k)] for i in range(k)]
    else:
        for j in range(m):
            for i in range(k):
                if (a[j][i] * src[i]) % dst[j]:
                    raise ValueError("matrix does not define a homomorphism")
        stacked = [a[j] + [-(dst[j] if jj == j else 0) for jj in range(m)] for j in range(m)]
        kern = smith_form(stacked, shape=(m, k + m)).kernel_basis()
        gens = [v[:k] for v in kern]
        # basis of the lattice spanned by gens (a full-rank sublattice of Z^k)
        gm = [[g[i] for g in gens] for i in range(k)]
        sf = smith_form(gm, shape=(k, len(gens)))
        lattice = []
        for r, _, d in sf.pivots:
            col = sf.left_inverse(sf.unit_row(r))
            lattice.append([d * v for v in col])
        lattice = [[lattice[j][i] for j in range(k)] for i in range(k)]  # columns are basis vectors
    # express diag(src) in the lattice basis: T = B^{-1} diag(src)
    det, adj = bareiss_adjugate(lattice)
    if det == 0:
        raise ArithmeticError("kernel lattice is not of full rank")
    t = []
    for i in range(k):
        row = []
        for j in range(k):
            num = adj[i][j] * src[j]
            if num % det:
                raise ArithmeticError("relation lattice not contained in kernel lattice")
            row.append(num // det)
        t.append(row)
    sf = smith_form(t, shape=(k, k))
    factors, generators = [], []
    for r, _, d in sf.pivots:
        if d == 1:
            continue
        col = sf.left_inverse(sf.unit_row(r))
        vec = [sum(lattice[i][j] * col[j] for j in range(k)) % src[i] for i in range(k)]
        factors.append(d)
        generators.append(vec)
    return factors, generators


def invariant_factors_of(orders: Sequence[int]) -> list[int]:
    """Invariant factors of ``(+) Z/orders_i`` (dropping trivial summands)."""
    k = len(orders)
    if not k:
        return []
    sf = smith_form([[orders[i] if i == j else 0 for j in range(k)] for i in range(k)], shape=(k, k))
    return sf.invariant_factors


def lcm(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out
