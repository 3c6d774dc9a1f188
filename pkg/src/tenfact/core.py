"""Grothendieck-level category data and its arithmetic.

A finite tensor category is represented by what its Grothendieck ring and
``K_0`` can see: the simple objects, the fusion multiplicities
``N^X_{Y,Z} = [Y (x) Z : X]``, the right-dual permutation and the Cartan
matrix ``C[X][Y] = [P(X) : Y]``.

Vectors over the simples (Grothendieck classes) and over the indecomposable
projectives (``K_0`` classes) are plain one-dimensional numpy arrays.  The
``K_0`` class ``m`` maps to the Grothendieck class ``m @ cartan``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

import numpy as np
import scipy.sparse as sp

from . import exact
from .errors import (
    AmbiguousDual,
    DimensionMismatch,
    InconsistentDual,
    IndexOutOfRange,
    InputError,
    NotProjectiveClass,
    SingularCartan,
)

__all__ = [
    "CategoryData",
    "Violation",
    "ValidationReport",
    "validate",
    "fusion_matrix",
    "gr_product",
    "dual_D",
    "dual_D_map",
    "decompose_projective",
    "hom_from_projective",
    "basis_vector",
    "projective_class",
    "dual_vector",
    "load_category",
    "dump_category",
    "category_from_json",
    "category_to_json",
    "restrict_category",
    "read_json",
]

MAX_WITNESSES = 20


def _is_permutation(p: Sequence[int], n: int) -> bool:
    return len(p) == n and sorted(p) == list(range(n))


@dataclass(frozen=True)
class CategoryData:
    """Immutable Grothendieck-level description of a finite tensor category.

    ``fusion`` holds sparse quadruples ``(x, y, z, mult)`` meaning
    ``N^x_{y,z} = mult``; omitted triples are zero.  ``dualD`` is the optional
    permutation ``Y -> Y^D`` with ``P(Y)* = P(Y^D)``.  ``metadata`` is carried
    along for provenance and never takes part in equality.
    """

    simples: tuple[str, ...]
    unit: int
    dual: tuple[int, ...]
    fusion: tuple[tuple[int, int, int, int], ...]
    cartan: tuple[tuple[int, ...], ...]
    dualD: tuple[int, ...] | None = None
    metadata: Mapping[str, Any] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        n = len(self.simples)
        set_ = object.__setattr__
        set_(self, "simples", tuple(str(s) for s in self.simples))
        if n == 0:
            raise InputError("category needs at least one simple object")
        if len(set(self.simples)) != n:
            raise InputError("simple labels must be distinct")
        if not (isinstance(self.unit, (int, np.integer)) and 0 <= self.unit < n):
            raise InputError(f"unit index {self.unit!r} out of range")
        set_(self, "unit", int(self.unit))
        dual = tuple(int(i) for i in self.dual)
        if not _is_permutation(dual, n):
            raise InputError("dual must be a permutation of the simple indices")
        set_(self, "dual", dual)

        entries: dict[tuple[int, int, int], int] = {}
        for quad in self.fusion:
            if len(quad) != 4:
                raise InputError(f"fusion entry {quad!r} is not a quadruple")
            x, y, z, m = (int(v) for v in quad)
            if not all(0 <= i < n for i in (x, y, z)):
                raise InputError(f"fusion entry {quad!r} has an index out of range")
            if m < 0:
                raise InputError(f"fusion entry {quad!r} has negative multiplicity")
            if (x, y, z) in entries:
                raise InputError(f"duplicate fusion entry for {(x, y, z)!r}")
            entries[x, y, z] = m
        set_(self, "fusion", tuple(sorted((x, y, z, m) for (x, y, z), m in entries.items() if m)))

        cartan = tuple(tuple(int(v) for v in row) for row in self.cartan)
        if len(cartan) != n or any(len(row) != n for row in cartan):
            raise InputError(f"cartan must be a {n}x{n} matrix")
        if any(v < 0 for row in cartan for v in row):
            raise InputError("cartan entries must be nonnegative")
        set_(self, "cartan", cartan)

        if self.dualD is not None:
            dd = tuple(int(i) for i in self.dualD)
            if not _is_permutation(dd, n):
                raise InputError("dualD must be a permutation of the simple indices")
            set_(self, "dualD", dd)

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_tensor(cls, simples, unit, dual, tensor, cartan=None, dualD=None, metadata=None):
        """Build from a dense ``tensor[x, y, z] = N^x_{y,z}``."""
        t = np.asarray(tensor)
        n = len(simples)
        if t.shape != (n, n, n):
            raise InputError(f"fusion tensor must have shape {(n, n, n)}, got {t.shape}")
        quads = [(int(x), int(y), int(z), int(t[x, y, z])) for x, y, z in zip(*np.nonzero(t))]
        if cartan is None:
            cartan = np.eye(n, dtype=np.int64)
        return cls(
            simples=tuple(simples),
            unit=unit,
            dual=tuple(dual),
            fusion=tuple(quads),
            cartan=tuple(tuple(int(v) for v in row) for row in np.asarray(cartan)),
            dualD=None if dualD is None else tuple(dualD),
            metadata=dict(metadata or {}),
        )

    def replace(self, **changes) -> "CategoryData":
        fields = dict(
            simples=self.simples,
            unit=self.unit,
            dual=self.dual,
            fusion=self.fusion,
            cartan=self.cartan,
            dualD=self.dualD,
            metadata=dict(self.metadata),
        )
        fields.update(changes)
        return CategoryData(**fields)

    # -- cached dense views (read-only once built) ----------------------------

    @property
    def n(self) -> int:
        return len(self.simples)

    @cached_property
    def tensor(self) -> np.ndarray:
        """Dense ``N[x, y, z] = N^x_{y,z}``."""
        t = np.zeros((self.n,) * 3, dtype=np.int64)
        for x, y, z, m in self.fusion:
            t[x, y, z] = m
        t.setflags(write=False)
        return t

    @cached_property
    def cartan_matrix(self) -> np.ndarray:
        c = np.array(self.cartan, dtype=np.int64).reshape(self.n, self.n)
        c.setflags(write=False)
        return c

    @cached_property
    def left_dual(self) -> tuple[int, ...]:
        inv = [0] * self.n
        for x, xs in enumerate(self.dual):
            inv[xs] = x
        return tuple(inv)

    @cached_property
    def is_fusion(self) -> bool:
        return bool(np.array_equal(self.cartan_matrix, np.eye(self.n, dtype=np.int64)))

    @cached_property
    def _cartan_adjugate(self):
        # (det, adj) of cartan^T, or None when singular
        if self.is_fusion:
            return 1, None
        det, adj = exact.bareiss_adjugate(self.cartan_matrix.T.tolist())
        return (det, adj) if det != 0 else None

    def index(self, label: str) -> int:
        try:
            return self.simples.index(label)
        except ValueError:
            raise IndexOutOfRange(f"no simple object labelled {label!r}") from None

    def __repr__(self):
        return f"CategoryData(n={self.n}, simples={list(self.simples[:6])}{'...' if self.n > 6 else ''})"


# -- validation ------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str
    witnesses: tuple[tuple[int, ...], ...]
    count: int
    message: str = ""

    def to_json(self):
        return {
            "kind": self.kind,
            "count": self.count,
            "witnesses": [list(w) for w in self.witnesses],
            "message": self.message,
        }


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def __bool__(self):
        return self.ok

    def to_json(self):
        return {"ok": self.ok, "violations": [v.to_json() for v in self.violations]}


def _violation(kind, mask, message):
    idx = np.argwhere(mask)
    if len(idx) == 0:
        return None
    wit = tuple(tuple(int(i) for i in row) for row in idx[:MAX_WITNESSES])
    return Violation(kind, wit, int(len(idx)), message)


def _associativity_dense(t: np.ndarray) -> tuple[list[tuple[int, int, int, int]], int]:
    # one X at a time so memory stays cubic; float64 products are exact at these sizes
    n = t.shape[0]
    f = t.transpose(1, 0, 2).astype(np.float64)  # F[Y, Z, V] = N^Z_{Y,V}
    flat = f.reshape(n, n * n)
    bad, count = [], 0
    for x in range(n):
        lhs = (t[:, x, :].T.astype(np.float64) @ flat).reshape(n, n, n)  # [Y, Z, V]
        rhs = np.matmul(f[x][None, :, :], f)  # [Y, Z, V]
        diff = lhs != rhs
        k = int(diff.sum())
        if k:
            count += k
            if len(bad) < MAX_WITNESSES:
                bad.extend((x, int(y), int(v), int(z)) for y, z, v in np.argwhere(diff)[:MAX_WITNESSES])
    return bad[:MAX_WITNESSES], count


def _associativity_sparse(t: np.ndarray) -> tuple[list[tuple[int, int, int, int]], int]:
    # both sides as sparse n^2 x n^2 products, compared on 4-index keys
    n = t.shape[0]
    w, x, y = np.nonzero(t)
    v = t[w, x, y].astype(np.int64)
    t1 = sp.csr_matrix((v, (x * n + y, w)), shape=(n * n, n))  # [(X,Y), W] = N^W_{X,Y}
    t2 = sp.csr_matrix((v, (x, w * n + y)), shape=(n, n * n))  # [W, (Z,V)] = N^Z_{W,V}
    t3 = sp.csr_matrix((v, (y, x * n + w)), shape=(n, n * n))  # [W, (X,Z)] = N^Z_{X,W}
    lhs = (t1 @ t2).tocsr()  # [(X,Y), (Z,V)]
    rhs = (t1 @ t3).tocoo()  # [(Y,V), (X,Z)], re-indexed below
    rhs = sp.csr_matrix(
        (rhs.data, ((rhs.col // n) * n + rhs.row // n, (rhs.col % n) * n + rhs.row % n)), shape=(n * n, n * n)
    )
    diff = (lhs - rhs).tocoo()
    nz = diff.data != 0
    rows, cols = diff.row[nz], diff.col[nz]
    order = np.lexsort((cols % n, cols // n, rows % n, rows // n))[:MAX_WITNESSES]
    wit = [(int(rows[i] // n), int(rows[i] % n), int(cols[i] % n), int(cols[i] // n)) for i in order]
    return wit, int(nz.sum())


def _associativity_failures(t: np.ndarray) -> tuple[list[tuple[int, int, int, int]], int]:
    """Witnesses (X, Y, V, Z) of failed associativity (truncated) and their count."""
    n = t.shape[0]
    if n >= 16 and np.count_nonzero(t) * 8 <= n**3:
        return _associativity_sparse(t)
    return _associativity_dense(t)


def validate(data: CategoryData) -> ValidationReport:
    """Check every Grothendieck-level axiom; collect all violations with witnesses."""
    n, u = data.n, data.unit
    t = data.tensor
    c = data.cartan_matrix
    d = np.array(data.dual)
    ld = np.array(data.left_dual)
    eye = np.eye(n, dtype=bool)
    found = []

    # unit laws
    m = (t[:, u, :] != eye) | (t[:, :, u] != eye)
    found.append(_violation("unit", m, "N^X_{1,Y} and N^X_{Y,1} must equal delta_{X,Y}; witness (X, Y)"))

    # associativity
    bad, count = _associativity_failures(t)
    if count:
        found.append(
            Violation(
                "associativity",
                tuple(bad),
                count,
                "sum_W N^W_{X,Y} N^Z_{W,V} != sum_W N^W_{Y,V} N^Z_{X,W}; witness (X, Y, V, Z)",
            )
        )

    # duality symmetry
    expect_unit = np.zeros((n, n), dtype=bool)
    expect_unit[np.arange(n), d] = True
    m1 = t[u] != expect_unit.astype(np.int64)
    rotated = t[np.ix_(d, d, d)].transpose(0, 2, 1)  # [Z, X, Y] -> N^{Z*}_{Y*, X*}
    m2 = t != rotated
    v1 = _violation("duality-symmetry", m1, "N^1_{X,Y} must equal delta_{Y,X*}; witness (X, Y)")
    v2 = _violation("duality-symmetry", m2, "N^Z_{X,Y} must equal N^{Z*}_{Y*,X*}; witness (Z, X, Y)")
    if v1 and v2:
        found.append(
            Violation(
                "duality-symmetry",
                (v1.witnesses + v2.witnesses)[:MAX_WITNESSES],
                v1.count + v2.count,
                v1.message + "; " + v2.message,
            )
        )
    else:
        found.append(v1 or v2)

    # Cartan diagonal
    found.append(_violation("cartan-diagonal", np.diag(c) < 1, "C[X][X] must be >= 1; witness (X,)"))

    # projective decomposition: Y (x) P(X) = sum_Z N^X_{*Y,Z} P(Z)
    f = t.transpose(1, 0, 2)  # [Y, Z, V] = N^Z_{Y,V}
    cf = c.astype(np.float64)  # exact: entries and sums stay far below 2^53
    lhs = (f.reshape(n * n, n) @ cf.T).reshape(n, n, n)  # [Y, Z, X]
    rhs = (t[:, ld, :].reshape(n * n, n) @ cf).reshape(n, n, n)  # [X, Y, Z]
    m = (lhs.transpose(2, 0, 1) != rhs).any(axis=2)  # [X, Y]
    found.append(_violation("projdec", m, "Gr-class of Y (x) P(X) != sum_Z N^X_{*Y,Z} [P(Z)]; witness (X, Y)"))

    if data.dualD is not None:
        dd = np.array(data.dualD)
        m = (c[dd][:, d] != c).any(axis=1)
        found.append(_violation("dualD", m, "dual of [P(Y)] must equal [P(Y^D)]; witness (Y,)"))

    return ValidationReport(tuple(v for v in found if v is not None))


# -- Grothendieck ring -----------------------------------------------------------


def _check_index(data: CategoryData, x) -> int:
    if not isinstance(x, (int, np.integer)) or not 0 <= x < data.n:
        raise IndexOutOfRange(f"simple index {x!r} out of range 0..{data.n - 1}")
    return int(x)


def _as_vector(data: CategoryData, v, name="vector") -> np.ndarray:
    a = np.asarray(v)
    if a.ndim != 1 or a.shape[0] != data.n:
        raise DimensionMismatch(f"{name} must have length {data.n}, got shape {a.shape}")
    return a


def fusion_matrix(data: CategoryData, x: int) -> np.ndarray:
    """Left multiplication by ``[x]``: ``N_x[Z][Y] = N^Z_{x,Y}``."""
    x = _check_index(data, x)
    return np.array(data.tensor[:, x, :])


def basis_vector(data: CategoryData, x: int) -> np.ndarray:
    x = _check_index(data, x)
    e = np.zeros(data.n, dtype=np.int64)
    e[x] = 1
    return e


def projective_class(data: CategoryData, x: int) -> np.ndarray:
    """Grothendieck class of the projective cover ``P(x)`` (Cartan row)."""
    return np.array(data.cartan_matrix[_check_index(data, x)])


def gr_product(data: CategoryData, v, w) -> np.ndarray:
    v = _as_vector(data, v, "left factor")
    w = _as_vector(data, w, "right factor")
    return np.einsum("x,zxy,y->z", v, data.tensor, w)


def dual_vector(data: CategoryData, v) -> np.ndarray:
    """Class of the right dual: ``(v*)[X*] = v[X]``."""
    v = _as_vector(data, v)
    out = np.zeros_like(v)
    out[np.array(data.dual)] = v
    return out


def _dualD_candidates(data: CategoryData, y: int) -> list[int]:
    c = data.cartan_matrix
    target = c[y]
    permuted = c[:, np.array(data.dual)]  # row Z, column W holds C[Z][W*]
    return [int(z) for z in np.nonzero((permuted == target).all(axis=1))[0]]


def dual_D(data: CategoryData, y: int) -> int:
    """The simple ``Y^D`` with ``P(Y)* = P(Y^D)``.

    Decided from the Cartan data when the match is unique; otherwise the
    ``dualD`` field must be supplied, and it is checked against the data.
    """
    y = _check_index(data, y)
    cands = _dualD_candidates(data, y)
    if data.dualD is not None:
        z = data.dualD[y]
        if z not in cands:
            raise InconsistentDual(
                f"supplied dualD[{y}] = {z} does not satisfy [P({y})]* = [P({z})]", simple=y
            )
        return z
    if not cands:
        raise InconsistentDual(f"no simple Z with [P({y})]* = [P(Z)]", simple=y)
    if len(cands) > 1:
        raise AmbiguousDual(
            f"[P({y})]* matches {len(cands)} projective classes; supply dualD", simple=y, candidates=cands
        )
    return cands[0]


def dual_D_map(data: CategoryData) -> tuple[int, ...]:
    return tuple(dual_D(data, y) for y in range(data.n))


# -- K_0 ----------------------------------------------------------------------


def decompose_projective(data: CategoryData, v) -> np.ndarray:
    """Solve ``m @ cartan = v`` exactly and return ``m`` as an integer array.

    Raises :class:`SingularCartan` when the Cartan matrix gives no unique
    solution and :class:`NotProjectiveClass` (carrying the rational solution)
    when the solution is not a nonnegative integer vector.
    """
    v = _as_vector(data, v)
    vals = [Fraction(x) if not isinstance(x, (float, np.floating)) else Fraction(float(x)) for x in v.tolist()]
    if data.is_fusion:
        sol = vals
    else:
        adj = data._cartan_adjugate
        if adj is None:
            raise SingularCartan("Cartan matrix is singular; the K_0 class is not determined")
        det, a = adj
        sol = [Fraction(sum(a[i][j] * vals[j] for j in range(data.n)), det) for i in range(data.n)]
    if any(s < 0 or s.denominator != 1 for s in sol):
        raise NotProjectiveClass("solution is not a nonnegative integer vector", tuple(sol))
    return np.array([int(s) for s in sol], dtype=np.int64)


def hom_from_projective(data: CategoryData, p, m) -> int:
    """``dim Hom(P, M)`` for ``P = sum p[X] P(X)``: equals ``sum p[X] [M:X]``."""
    p = _as_vector(data, p, "projective multiplicities")
    m = _as_vector(data, m, "object class")
    if not all(float(x).is_integer() for x in p.tolist()):
        raise InputError("projective multiplicities must be integers")
    return int(sum(int(a) * int(b) for a, b in zip(p.tolist(), m.tolist())))


# -- JSON ---------------------------------------------------------------------


def category_to_json(data: CategoryData) -> dict:
    out = {
        "simples": list(data.simples),
        "unit": data.unit,
        "dual": list(data.dual),
        "fusion": [list(q) for q in data.fusion],
        "cartan": [list(r) for r in data.cartan],
    }
    if data.dualD is not None:
        out["dualD"] = list(data.dualD)
    if data.metadata:
        out["metadata"] = dict(data.metadata)
    return out


def category_from_json(obj: Mapping) -> CategoryData:
    if not isinstance(obj, Mapping):
        raise InputError("category JSON must be an object")
    missing = {"simples", "unit", "dual", "fusion", "cartan"} - set(obj)
    if missing:
        raise InputError(f"category JSON missing keys: {sorted(missing)}")
    try:
        return CategoryData(
            simples=tuple(obj["simples"]),
            unit=obj["unit"],
            dual=tuple(obj["dual"]),
            fusion=tuple(tuple(q) for q in obj["fusion"]),
            cartan=tuple(tuple(r) for r in obj["cartan"]),
            dualD=None if obj.get("dualD") is None else tuple(obj["dualD"]),
            metadata=dict(obj.get("metadata") or {}),
        )
    except (TypeError, ValueError) as exc:
        raise InputError(f"malformed category JSON: {exc}") from exc


def read_json(path) -> Any:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(
            f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}",
            line=exc.lineno,
            column=exc.colno,
        ) from exc


def format_json(obj, indent: int = 1, _level: int = 0) -> str:
    """Indented JSON with lists of scalars kept on one line (one fusion entry per line)."""
    pad, inner = " " * (indent * _level), " " * (indent * (_level + 1))
    if isinstance(obj, Mapping):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {format_json(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if all(not isinstance(v, (Mapping, list, tuple)) for v in obj):
            return json.dumps(list(obj))
        return "[\n" + ",\n".join(inner + format_json(v, indent, _level + 1) for v in obj) + "\n" + pad + "]"
    return json.dumps(obj)


def load_category(path) -> CategoryData:
    return category_from_json(read_json(path))


def dump_category(data: CategoryData, path) -> None:
    Path(path).write_text(format_json(category_to_json(data)) + "\n")


def restrict_category(data: CategoryData, support: Iterable[int], cartan=None) -> tuple[CategoryData, tuple[int, ...]]:
    """Full subcategory on ``support`` (must be closed); returns data and inclusion map.

    The subcategory's Cartan matrix is not visible from ``data`` in general,
    so it must be passed in unless ``data`` is fusion.
    """
    sup = sorted(set(int(s) for s in support))
    pos = {s: i for i, s in enumerate(sup)}
    if data.unit not in pos:
        raise InputError("support must contain the unit")
    t = data.tensor[np.ix_(sup, sup, sup)]
    if cartan is None:
        if not data.is_fusion:
            raise InputError("Cartan data of a subcategory of a non-fusion category must be supplied")
        cartan = np.eye(len(sup), dtype=np.int64)
    try:
        dual = [pos[data.dual[s]] for s in sup]
    except KeyError:
        raise InputError("support is not closed under duality") from None
    sub = CategoryData.from_tensor(
        [data.simples[s] for s in sup], pos[data.unit], dual, t, cartan
    )
    return sub, tuple(sup)
