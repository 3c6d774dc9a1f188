"""Integral cohomology of finite groups through the bar complex.

Cochains of degree ``n`` are integer vectors over cells ``(g_1, ..., g_n)``.
In the normalized complex the cells use non-identity elements only (cells
containing the identity are implicitly zero); the full complex uses all
elements and serves as an independent cross-check.  Cells are coded in mixed
radix with ``g_1`` the most significant digit.

``H^3(G, Q/Z)`` is computed as ``H^4(G, Z)``.  Because ``H^4(G, Q) = 0`` for
a finite group, ``ker d^4`` is the saturation of ``im d^3`` and ``H^4(G, Z)``
is the torsion of ``coker d^3``; a Smith form of ``d^3`` therefore gives the
invariant factors, generator cocycles and integral witnesses at once, while
the rank of ``d^4`` (modulo a large prime) certifies the saturation claim.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
import scipy.sparse as sp

from . import exact, kernels
from .errors import NotCocycle, NotExactFactorization, SizeLimit
from .groups import FiniteGroup, Subgroup, is_exact_factorization, subgroup_of

__all__ = [
    "IntCochain",
    "QZCochain",
    "CohomologyGroup",
    "PointedClassification",
    "coboundary_matrix",
    "bar_differential",
    "h4_integral",
    "h4_invariant_factors_local",
    "omega_from_z",
    "restrict",
    "is_trivial_class",
    "classify_pointed",
    "cyclic_omega",
    "bockstein",
]

DEFAULT_ORDER_LIMIT = 8
RANK_PRIME = 1_048_573  # prime below 2**20: exact float64 elimination
RANK_ATTEMPTS = 3
_INT64_SAFE = 2**62


def _cells_base(g: FiniteGroup, normalized: bool) -> tuple[np.ndarray, np.ndarray]:
    elems = np.array([x for x in range(g.order) if not (normalized and x == g.identity)], dtype=np.int64)
    pos = np.full(g.order, -1, dtype=np.int64)
    pos[elems] = np.arange(len(elems))
    return elems, pos


def num_cells(g: FiniteGroup, n: int, normalized: bool = True) -> int:
    return (g.order - int(normalized)) ** n


@lru_cache(maxsize=64)
def coboundary_matrix(g: FiniteGroup, n: int, normalized: bool = True) -> sp.csr_matrix:
    """Sparse integer matrix of ``d: C^n -> C^{n+1}`` (shape ``(#C^{n+1}, #C^n)``)."""
    rows, cols, vals = kernels.coboundary_coo(g.table, g.identity, n, normalized)
    shape = (num_cells(g, n + 1, normalized), num_cells(g, n, normalized))
    m = sp.coo_matrix((vals, (rows, cols)), shape=shape, dtype=np.int64).tocsr()
    m.sum_duplicates()
    m.eliminate_zeros()
    return m


def _matvec(m: sp.csr_matrix, v: np.ndarray) -> np.ndarray:
    """Exact ``m @ v``; falls back to Python integers when int64 could overflow."""
    if v.dtype != object:
        bound = int(np.abs(v).max(initial=0)) * int(np.asarray(abs(m).sum(axis=1)).max(initial=0))
        if bound < _INT64_SAFE:
            return m @ v.astype(np.int64)
    coo = m.tocoo()
    out = [0] * m.shape[0]
    vv = [int(x) for x in v]
    for r, c, a in zip(coo.row.tolist(), coo.col.tolist(), coo.data.tolist()):
        out[r] += a * vv[c]
    return _int_array(out)


def _int_array(values) -> np.ndarray:
    vals = [int(x) for x in values]
    if all(-_INT64_SAFE < x < _INT64_SAFE for x in vals):
        return np.array(vals, dtype=np.int64)
    return np.array(vals, dtype=object)


@dataclass(frozen=True, eq=False)
class IntCochain:
    """Integer-valued ``degree``-cochain on ``group`` (dense over cells)."""

    group: FiniteGroup
    degree: int
    values: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        vals = _int_array(np.asarray(self.values).ravel().tolist()) if len(self.values) else np.zeros(0, np.int64)
        expect = num_cells(self.group, self.degree, self.normalized)
        if len(vals) != expect:
            raise ValueError(f"degree-{self.degree} cochain needs {expect} values, got {len(vals)}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def zero(cls, g: FiniteGroup, n: int, normalized: bool = True) -> "IntCochain":
        return cls(g, n, np.zeros(num_cells(g, n, normalized), dtype=np.int64), normalized)

    @classmethod
    def from_function(cls, g: FiniteGroup, n: int, f: Callable[..., int], normalized: bool = True) -> "IntCochain":
        elems, _ = _cells_base(g, normalized)
        vals = [int(f(*cell)) for cell in _iter_cells(elems, n)]
        return cls(g, n, vals, normalized)

    def cell_index(self, gs: Sequence[int]) -> int | None:
        elems, pos = _cells_base(self.group, self.normalized)
        code = 0
        for x in gs:
            if pos[x] < 0:
                return None
            code = code * len(elems) + int(pos[x])
        return code

    def __call__(self, *gs: int) -> int:
        if len(gs) != self.degree:
            raise ValueError(f"expected {self.degree} arguments")
        i = self.cell_index(gs)
        return 0 if i is None else int(self.values[i])

    def __eq__(self, other):
        return (
            isinstance(other, IntCochain)
            and self.group == other.group
            and self.degree == other.degree
            and self.normalized == other.normalized
            and all(int(a) == int(b) for a, b in zip(self.values, other.values))
        )

    def _combine(self, other, op):
        if not isinstance(other, IntCochain) or (other.group, other.degree, other.normalized) != (
            self.group,
            self.degree,
            self.normalized,
        ):
            return NotImplemented
        return IntCochain(self.group, self.degree, [op(int(a), int(b)) for a, b in zip(self.values, other.values)], self.normalized)

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def __rmul__(self, k: int):
        return IntCochain(self.group, self.degree, [int(k) * int(a) for a in self.values], self.normalized)

    def is_zero(self) -> bool:
        return not any(int(a) for a in self.values)

    def to_json(self):
        return {"degree": self.degree, "normalized": self.normalized, "values": [int(v) for v in self.values]}


def _iter_cells(elems: np.ndarray, n: int):
    return itertools.product(elems.tolist(), repeat=n)


def bar_differential(c: IntCochain) -> IntCochain:
    """``(dc)(g_1..g_{n+1}) = c(g_2..) + sum_i (-1)^i c(..g_i g_{i+1}..) + (-1)^{n+1} c(g_1..g_n)``."""
    m = coboundary_matrix(c.group, c.degree, c.normalized)
    return IntCochain(c.group, c.degree + 1, _matvec(m, c.values), c.normalized)


# -- H^4(G, Z) -------------------------------------------------------------------


def _memory_limit_bytes() -> int | None:
    raw = os.environ.get("TENFACT_LIMIT_MB")
    if not raw:
        return None
    try:
        return int(float(raw) * 2**20)
    except ValueError:
        return None


# rough Python-object footprint of one stored Smith-form entry, with fill-in headroom
_BYTES_PER_ENTRY = 400


@lru_cache(maxsize=32)
def _d3_smith(g: FiniteGroup, normalized: bool) -> exact.SmithForm:
    d3 = coboundary_matrix(g, 3, normalized)
    limit = _memory_limit_bytes()
    if limit is not None and d3.nnz * _BYTES_PER_ENTRY > limit:
        raise SizeLimit(
            f"Smith form of a {d3.shape[0]}x{d3.shape[1]} matrix with {d3.nnz} entries "
            f"exceeds TENFACT_LIMIT_MB={os.environ['TENFACT_LIMIT_MB']}",
            order=g.order,
        )
    return exact.smith_form(d3)


def projected_rank_mod_p(m: sp.csr_matrix, p: int = RANK_PRIME, seed: int = 0, block: int = 512) -> int:
    """Rank of ``m`` over GF(p), computed on ``S @ m`` for a random ``S`` with ``#cols`` rows.

    Never exceeds the true rank over GF(p) and equals it except with
    probability about ``1 / p``.  For a bar coboundary and ``p`` prime to ``|G|``
    the rank over GF(p) is the rational rank.  Only a ``#cols``-square dense matrix is formed.
    """
    nrows, ncols = m.shape
    if nrows <= ncols:
        return kernels.rank_mod_p(m.toarray(), p)
    rng = np.random.default_rng(seed)
    mt = m.T.tocsr()
    out = np.empty((ncols, ncols), dtype=np.int64)
    for start in range(0, ncols, block):
        k = min(block, ncols - start)
        s = rng.integers(0, p, size=(nrows, k), dtype=np.int64)
        # entries of m are small, so each product sum stays far below 2**63
        out[start : start + k] = (mt @ s).T % p
    return kernels.rank_mod_p(out, p)


@dataclass(frozen=True, eq=False)
class CohomologyGroup:
    """``H^4(G, Z)`` as ``(+) Z/d_i`` with generator cocycles.

    ``witnesses[i]`` is an integral 3-cochain with ``d(witnesses[i]) =
    invariant_factors[i] * generators[i]``.
    """

    group: FiniteGroup
    invariant_factors: tuple[int, ...]
    generators: tuple[IntCochain, ...]
    witnesses: tuple[IntCochain, ...]
    normalized: bool = True
    certified: bool = False  # rank of d^4 confirmed ker d^4 / im d^3 is all torsion

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def coordinates(self, z: IntCochain) -> tuple[int, ...]:
        """Coefficients of the class of the cocycle ``z`` in the generator basis."""
        _check_cocycle(z)
        snf = _d3_smith(self.group, self.normalized)
        y = snf.left(z.values.tolist())
        return tuple(y[r] % d for r, _, d in snf.pivots if d != 1)

    def cocycle(self, coeffs: Sequence[int]) -> IntCochain:
        """The cocycle ``sum coeffs[i] * generators[i]``."""
        out = IntCochain.zero(self.group, 4, self.normalized)
        for k, z in zip(coeffs, self.generators):
            if k:
                out = out + int(k) * z
        return out

    def to_json(self, with_generators: bool = False):
        out = {"invariant_factors": list(self.invariant_factors), "order": self.order, "certified": self.certified}
        if with_generators:
            out["generators"] = [z.to_json() for z in self.generators]
        return out


def h4_integral(
    g: FiniteGroup,
    limit: int = DEFAULT_ORDER_LIMIT,
    normalized: bool = True,
    certify: bool = True,
    seed: int = 0,
    progress: Callable[[str], None] | None = None,
) -> CohomologyGroup:
    """``H^4(G, Z) = H^3(G, Q/Z)`` with generators and torsion witnesses."""
    if g.order > limit:
        raise SizeLimit(f"group order {g.order} exceeds the cohomology limit {limit}", order=g.order)
    say = progress or (lambda msg: None)
    say(f"building d3 for order {g.order} ({'normalized' if normalized else 'full'} complex)")
    d3 = coboundary_matrix(g, 3, normalized)
    say(f"smith form of {d3.shape[0]}x{d3.shape[1]} matrix, {d3.nnz} entries")
    snf = _d3_smith(g, normalized)
    d4 = coboundary_matrix(g, 4, normalized)
    certified = False
    if certify:
        say(f"rank of d4 ({d4.shape[0]}x{d4.shape[1]}) modulo {RANK_PRIME}")
        # rank_p(S d4) <= rank(d4) <= #C^4 - rank(d3); equality certifies.
        # A uniform random projection loses rank with probability about 1 / p.
        for attempt in range(RANK_ATTEMPTS):
            r4 = projected_rank_mod_p(d4, seed=seed + attempt)
            if snf.rank + r4 == d3.shape[0]:
                certified = True
                break
        if not certified:
            raise ArithmeticError(
                f"rank(d3) + rank(d4) = {snf.rank} + {r4} != {d3.shape[0]}; rational cohomology check failed"
            )
    factors, gens, wits = [], [], []
    for r, c, d in snf.pivots:
        if d == 1:
            continue
        z = IntCochain(g, 4, snf.left_inverse(snf.unit_row(r)), normalized)
        e = [0] * snf.ncols
        e[c] = 1
        w = IntCochain(g, 3, snf.right(e), normalized)
        if not bar_differential(z).is_zero() or bar_differential(w) != d * z:
            raise ArithmeticError("generator or witness failed its certificate")
        factors.append(d)
        gens.append(z)
        wits.append(w)
    say(f"invariant factors {factors}")
    return CohomologyGroup(g, tuple(factors), tuple(gens), tuple(wits), normalized, certified)


def h4_invariant_factors_local(g: FiniteGroup, normalized: bool = False) -> list[int]:
    """Invariant factors of ``H^4(G, Z)`` by local elimination modulo prime powers.

    An independent code path from :func:`h4_integral`: dense ``d^3`` is
    reduced over ``Z/p^k`` for every prime ``p`` dividing ``|G|``, with ``p^k``
    exceeding the ``p``-part of ``|G|`` (which bounds every exponent).
    """
    d3 = coboundary_matrix(g, 3, normalized).toarray()
    rank = kernels.rank_mod_p(d3, RANK_PRIME)
    powers = []
    n = g.order
    p = 2
    while n > 1:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            vals = kernels.local_valuations(d3, p, e + 1)
            if len(vals) != rank:
                raise ArithmeticError(f"local elimination at {p} found {len(vals)} pivots, expected {rank}")
            powers += [p ** int(v) for v in vals if v > 0]
        p += 1
    return exact.invariant_factors_of(powers)


def _check_cocycle(z: IntCochain):
    if z.degree != 4 and z.degree != 3:
        raise NotCocycle(f"expected a degree-4 cocycle, got degree {z.degree}")
    if not bar_differential(z).is_zero():
        raise NotCocycle("cochain is not a cocycle")


# -- Q/Z-valued 3-cocycles ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class QZCochain:
    """Degree-3 cochain with values in ``Q/Z``, stored as Fractions in ``[0, 1)``."""

    group: FiniteGroup
    values: tuple[Fraction, ...]
    normalized: bool = True

    def __post_init__(self):
        vals = tuple(Fraction(v) % 1 for v in self.values)
        if len(vals) != num_cells(self.group, 3, self.normalized):
            raise ValueError("wrong number of values for a 3-cochain")
        object.__setattr__(self, "values", vals)

    @property
    def denominator_bound(self) -> int:
        return exact.lcm(v.denominator for v in self.values)

    def __call__(self, a: int, b: int, c: int) -> Fraction:
        elems, pos = _cells_base(self.group, self.normalized)
        if min(pos[a], pos[b], pos[c]) < 0:
            return Fraction(0)
        base = len(elems)
        return self.values[(int(pos[a]) * base + int(pos[b])) * base + int(pos[c])]

    def scaled(self) -> IntCochain:
        """``L * omega`` as an integral cochain, ``L`` the denominator bound."""
        lcm = self.denominator_bound
        return IntCochain(self.group, 3, [int(v * lcm) for v in self.values], self.normalized)

    def is_cocycle(self) -> bool:
        """Exact check of the Q/Z 3-cocycle identity."""
        lcm = self.denominator_bound
        dz = bar_differential(self.scaled())
        return all(int(v) % lcm == 0 for v in dz.values)

    def __eq__(self, other):
        return isinstance(other, QZCochain) and self.group == other.group and self.values == other.values

    def to_json(self):
        return {"values": [str(v) for v in self.values], "denominator_bound": self.denominator_bound}


def omega_from_z(g: FiniteGroup, z: IntCochain) -> QZCochain:
    """A normalized Q/Z 3-cocycle whose class maps to the class of ``z``.

    Solves ``dc = z`` over the rationals; ``c mod 1`` is the cocycle.
    """
    if z.group != g or z.degree != 4:
        raise NotCocycle("z must be a degree-4 cochain on the given group")
    _check_cocycle(z)
    sol = _d3_smith(g, z.normalized).solve_rational(z.values.tolist())
    if sol is None:
        raise ArithmeticError("cocycle is not rationally a coboundary")
    return QZCochain(g, tuple(sol), z.normalized)


def bockstein(omega: QZCochain) -> IntCochain:
    """Integral 4-cocycle ``d(lift of omega)``, the image of ``omega`` in ``H^4(G, Z)``."""
    lcm = omega.denominator_bound
    dz = bar_differential(omega.scaled())
    return IntCochain(omega.group, 4, [int(v) // lcm for v in dz.values], omega.normalized)


def cyclic_omega(g: FiniteGroup, n: int | None = None) -> QZCochain:
    """``omega(a, b, c) = a * floor((b + c) / n) / n`` on a cyclic group labelled ``0..n-1``."""
    n = g.order if n is None else n
    num = [int(lbl) for lbl in g.labels]

    def f(a, b, c):
        x, y, w = num[a], num[b], num[c]
        return Fraction(x * ((y + w) // n), n)

    elems, _ = _cells_base(g, True)
    return QZCochain(g, tuple(f(*cell) for cell in _iter_cells(elems, 3)), True)


# -- restriction and triviality ----------------------------------------------------


def restrict(z: IntCochain, h: Subgroup) -> IntCochain:
    """Restriction of ``z`` to the subgroup ``h``, as a cochain on ``h`` itself."""
    g = z.group
    h = subgroup_of(g, h.elements)
    sub, incl = g.subgroup_group(h)
    incl = np.array(incl)
    _, pos = _cells_base(g, z.normalized)
    hel, _ = _cells_base(sub, z.normalized)
    base = g.order - int(z.normalized)
    n = z.degree
    if len(hel) == 0:
        return IntCochain.zero(sub, n, z.normalized)
    grid = np.array(np.meshgrid(*([pos[incl[hel]]] * n), indexing="ij")).reshape(n, -1) if n else np.zeros((0, 1), np.int64)
    codes = np.zeros(grid.shape[1], dtype=np.int64)
    for row in grid:
        codes = codes * base + row
    return IntCochain(sub, n, z.values[codes], z.normalized)


def is_trivial_class(z: IntCochain) -> tuple[bool, IntCochain | None]:
    """Whether the cocycle ``z`` is ``d`` of an integral 3-cochain (with that cochain)."""
    _check_cocycle(z)
    w = _d3_smith(z.group, z.normalized).solve(z.values.tolist())
    if w is None:
        return False, None
    return True, IntCochain(z.group, 3, w, z.normalized)


@dataclass(frozen=True, eq=False)
class PointedClassification:
    """Kernel of ``H^4(G, Z) -> H^4(G1, Z) (+) H^4(G2, Z)``.

    ``coefficients[i]`` expresses the i-th kernel generator in the basis of
    ``h4`` (None when the answer followed without computing ``H^4(G, Z)``).
    """

    group: FiniteGroup
    g1: Subgroup
    g2: Subgroup
    invariant_factors: tuple[int, ...]
    coefficients: tuple[tuple[int, ...], ...]
    cocycles: tuple[IntCochain, ...]
    h4: CohomologyGroup | None

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def omegas(self) -> list[QZCochain]:
        return [omega_from_z(self.group, z) for z in self.cocycles]

    def to_json(self):
        return {
            "kernel_invariant_factors": list(self.invariant_factors),
            "kernel_order": self.order,
            "h4_invariant_factors": None if self.h4 is None else list(self.h4.invariant_factors),
            "kernel_generators": [list(c) for c in self.coefficients],
        }


def classify_pointed(
    g: FiniteGroup,
    g1: Subgroup,
    g2: Subgroup,
    limit: int = DEFAULT_ORDER_LIMIT,
    shortcut: bool = True,
    progress: Callable[[str], None] | None = None,
) -> PointedClassification:
    """Classes in ``H^3(G, Q/Z)`` trivial on both factors of ``G = G1 G2``.

    With ``shortcut`` the case where one factor is all of ``G`` is answered
    directly: restriction to ``G`` is the identity, so the kernel is zero.
    """
    g1 = subgroup_of(g, g1.elements)
    g2 = subgroup_of(g, g2.elements)
    if not is_exact_factorization(g, g1, g2):
        raise NotExactFactorization("the subgroups do not form an exact factorization")
    if shortcut and g.order in (g1.order, g2.order):
        return PointedClassification(g, g1, g2, (), (), (), None)
    h4 = h4_integral(g, limit=limit, progress=progress)
    if not h4.invariant_factors:
        return PointedClassification(g, g1, g2, (), (), (), h4)
    blocks, dst = [], []
    for h in (g1, g2):
        sub, _ = g.subgroup_group(h)
        hh = h4_integral(sub, limit=limit, progress=progress)
        dst += list(hh.invariant_factors)
        blocks.append([hh.coordinates(restrict(z, h)) for z in h4.generators])
    cols = [blocks[0][i] + blocks[1][i] for i in range(len(h4.generators))]
    matrix = [[cols[i][j] for i in range(len(cols))] for j in range(len(dst))]
    factors, gens = exact.finite_hom_kernel(matrix, list(h4.invariant_factors), dst)
    cocycles = tuple(h4.cocycle(v) for v in gens)
    return PointedClassification(g, g1, g2, tuple(factors), tuple(tuple(v) for v in gens), cocycles, h4)

