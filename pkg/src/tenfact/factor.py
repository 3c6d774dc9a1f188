"""Embeddings, intersections, the closure ``AC`` and exact factorizations ``B = A . C``.

Everything is decided from Grothendieck data: products of simples, the
induced map ``O(A) x O(C) -> O(B)``, projective covers pushed into ``B`` and
the intersection ``A n C``.  Whether ``B`` is exact as a module category is
not visible at this level, so a positive verdict means a Grothendieck-level
exact factorization.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .core import (
    CategoryData,
    basis_vector,
    gr_product,
    load_category,
    projective_class,
    read_json,
    restrict_category,
)
from .errors import AutoUnsupported, InputError, InvalidEmbedding, TargetMismatch, Unsupported
from .fpdim import fp_character

__all__ = [
    "Embedding",
    "FactorizationVerdict",
    "RatioReport",
    "check_embedding",
    "intersect",
    "product_support",
    "check_exact_factorization",
    "fpdim_ratio_check",
    "closed_supports",
    "search_exact_factorizations",
    "load_embedding",
]

REL_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class Embedding:
    """Injective map of the simples of ``source`` into those of ``target``."""

    source: CategoryData
    target: CategoryData
    map: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(int(i) for i in self.map))

    @property
    def image(self) -> frozenset[int]:
        return frozenset(self.map)

    def push(self, v) -> np.ndarray:
        """A Grothendieck vector of ``source`` as a vector of ``target``."""
        out = np.zeros(self.target.n, dtype=np.asarray(v).dtype)
        out[list(self.map)] = v
        return out


def embedding_problems(e: Embedding) -> list[str]:
    s, t, f = e.source, e.target, e.map
    if len(f) != s.n:
        return [f"map has length {len(f)}, source has {s.n} simples"]
    if any(not 0 <= i < t.n for i in f):
        return ["map sends a simple outside the target"]
    out = []
    if len(set(f)) != len(f):
        out.append("map is not injective")
        return out
    if f[s.unit] != t.unit:
        out.append("unit is not sent to the unit")
    if any(f[s.dual[x]] != t.dual[f[x]] for x in range(s.n)):
        out.append("map does not commute with duality")
    fa = np.array(f)
    tt = t.tensor
    if not np.array_equal(tt[np.ix_(fa, fa, fa)], s.tensor):
        out.append("fusion multiplicities are not preserved")
    outside = np.setdiff1d(np.arange(t.n), fa)
    if len(outside) and tt[np.ix_(outside, fa, fa)].any():
        out.append("image is not closed under taking constituents of products")
    return out


def check_embedding(e: Embedding) -> Embedding:
    problems = embedding_problems(e)
    if problems:
        raise InvalidEmbedding("; ".join(problems), problems=problems)
    return e


def _same_target(a: Embedding, c: Embedding) -> CategoryData:
    if a.target != c.target:
        raise TargetMismatch("embeddings have different targets")
    return a.target


def intersect(a: Embedding, c: Embedding) -> frozenset[int]:
    _same_target(a, c)
    return a.image & c.image


def _constituents(b: CategoryData, left: Sequence[int], right: Sequence[int]) -> set[int]:
    if not len(left) or not len(right):
        return set()
    blk = b.tensor[:, list(left), :][:, :, list(right)]
    return set(np.nonzero(blk.any(axis=(1, 2)))[0].tolist())


def product_support(a: Embedding, c: Embedding) -> tuple[int, ...]:
    """Simples of ``AC``: least set holding ``1`` and closed under ``X (x) s (x) Y``."""
    b = _same_target(a, c)
    xs, ys = sorted(a.image), sorted(c.image)
    support = {b.unit}
    frontier = [b.unit]
    while frontier:
        left = _constituents(b, xs, frontier)
        new = _constituents(b, sorted(left | set(frontier)), ys) | left
        new -= support
        support |= new
        frontier = sorted(new)
    return tuple(sorted(support))


@dataclass(frozen=True, eq=False)
class FactorizationVerdict:
    """Outcome of the Grothendieck-level exact factorization test.

    ``failures`` holds ``(criterion, witness)`` pairs with criterion one of
    ``simple-product`` (i), ``bijection`` (ii), ``projective-product`` (iii)
    and ``intersection`` (iv).  ``bijection`` maps source pairs ``(X, Y)``
    to ``X (x) Y`` in ``B`` whenever the product is simple.
    """

    a: Embedding
    c: Embedding
    failures: tuple[tuple[str, tuple], ...]
    bijection: dict
    fpdim_a: float
    fpdim_c: float
    fpdim_b: float
    label: str = field(default="Grothendieck-level exact factorization")

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def fpdim_equal(self) -> bool:
        return abs(self.fpdim_a * self.fpdim_c - self.fpdim_b) <= REL_TOL * self.fpdim_b

    @property
    def failed_criteria(self) -> list[str]:
        return sorted({k for k, _ in self.failures})

    @property
    def trivial(self) -> bool:
        return min(len(self.a.map), len(self.c.map)) == 1

    def to_json(self, max_witnesses: int = 20):
        b = self.a.target
        return {
            "ok": self.ok,
            "label": self.label,
            "a": [b.simples[i] for i in self.a.map],
            "c": [b.simples[i] for i in self.c.map],
            "failed_criteria": self.failed_criteria,
            "failures": [{"criterion": k, "witness": list(w)} for k, w in self.failures[:max_witnesses]],
            "failure_count": len(self.failures),
            "fpdim": {"A": self.fpdim_a, "C": self.fpdim_c, "B": self.fpdim_b, "equal": self.fpdim_equal},
            "bijection": (
                [[self.a.source.simples[x], self.c.source.simples[y], b.simples[z]] for (x, y), z in sorted(self.bijection.items())]
                if self.ok
                else None
            ),
        }


def check_exact_factorization(a: Embedding, c: Embedding) -> FactorizationVerdict:
    b = _same_target(a, c)
    check_embedding(a)
    check_embedding(c)
    A, C = a.source, c.source
    failures: list[tuple[str, tuple]] = []
    products: dict[tuple[int, int], int] = {}
    for x in range(A.n):
        for y in range(C.n):
            v = gr_product(b, basis_vector(b, a.map[x]), basis_vector(b, c.map[y]))
            nz = np.nonzero(v)[0]
            if len(nz) == 1 and v[nz[0]] == 1:
                products[x, y] = int(nz[0])
            else:
                failures.append(("simple-product", (x, y)))
    # (ii) bijection O(A) x O(C) -> O(B)
    hit: dict[int, tuple[int, int]] = {}
    for xy, z in products.items():
        if z in hit:
            failures.append(("bijection", (*hit[z], *xy)))
        else:
            hit[z] = xy
    if len(products) < A.n * C.n:
        failures.append(("bijection", ("undefined", A.n * C.n - len(products))))
    missing = sorted(set(range(b.n)) - set(hit))
    if missing:
        failures.append(("bijection", ("not-surjective", *missing)))
    # (iii) P_A(X) P_C(Y) = P_B(X (x) Y)
    for (x, y), z in products.items():
        lhs = gr_product(b, a.push(projective_class(A, x)), c.push(projective_class(C, y)))
        if not np.array_equal(lhs, projective_class(b, z)):
            failures.append(("projective-product", (x, y)))
    # (iv) A n C = {1}
    extra = sorted(intersect(a, c) - {b.unit})
    if extra:
        failures.append(("intersection", tuple(extra)))
    return FactorizationVerdict(
        a,
        c,
        tuple(failures),
        products,
        fp_character(A).cat_dim,
        fp_character(C).cat_dim,
        fp_character(b).cat_dim,
    )


@dataclass(frozen=True)
class RatioReport:
    lhs: float  # FPdim(A) FPdim(C)
    rhs: float  # FPdim(AC) FPdim(D)
    fpdim_ac: float
    fpdim_d: float
    fpdim_b: float
    support: tuple[int, ...]
    intersection: tuple[int, ...]
    equal: bool
    inequality: bool  # FPdim(B) >= FPdim(A) FPdim(C) / FPdim(D)
    basis: str  # how FPdim(AC) was obtained

    def to_json(self):
        def num(v):
            return int(round(v)) if abs(v - round(v)) <= 1e-9 * max(1.0, abs(v)) else v

        return {
            "lhs": num(self.lhs),
            "rhs": num(self.rhs),
            "fpdim_AC": num(self.fpdim_ac),
            "fpdim_D": num(self.fpdim_d),
            "fpdim_B": num(self.fpdim_b),
            "equal": self.equal,
            "inequality": self.inequality,
            "support_size": len(self.support),
            "intersection": list(self.intersection),
            "basis": self.basis,
        }


def fpdim_ratio_check(a: Embedding, c: Embedding) -> RatioReport:
    """``FPdim(A) FPdim(C) = FPdim(AC) FPdim(D)`` with ``D = A n C``.

    Supported when ``D`` is fusion on both sides and either ``AC`` is all of
    ``B`` or ``B`` is fusion; otherwise ``FPdim(AC)`` would need projective
    covers in a module category, which the data does not carry.
    """
    b = _same_target(a, c)
    check_embedding(a)
    check_embedding(c)
    d = sorted(intersect(a, c))
    for e in (a, c):
        inv = {t: s for s, t in enumerate(e.map)}
        cm = e.source.cartan_matrix
        for z in d:
            x = inv[z]
            if not np.array_equal(cm[x], basis_vector(e.source, x)):
                raise Unsupported("intersection is not fusion", simple=int(z))
    support = product_support(a, c)
    prof_b = fp_character(b)
    dims = prof_b.dims
    if len(support) == b.n:
        fp_ac, basis = prof_b.cat_dim, "AC = B"
    elif b.is_fusion:
        fp_ac, basis = float(sum(dims[s] ** 2 for s in support)), "B fusion"
    else:
        raise Unsupported("FPdim(AC) is not determined by the data: AC is proper and B is not fusion")
    fp_d = float(sum(dims[z] ** 2 for z in d))
    lhs = fp_character(a.source).cat_dim * fp_character(c.source).cat_dim
    rhs = fp_ac * fp_d
    return RatioReport(
        lhs=lhs,
        rhs=rhs,
        fpdim_ac=fp_ac,
        fpdim_d=fp_d,
        fpdim_b=prof_b.cat_dim,
        support=support,
        intersection=tuple(d),
        equal=abs(lhs - rhs) <= REL_TOL * max(lhs, rhs),
        inequality=prof_b.cat_dim * (1 + 1e-9) >= lhs / fp_d,
        basis=basis,
    )


# -- search ---------------------------------------------------------------------------


def _closure(b: CategoryData, seed: Iterable[int]) -> frozenset[int]:
    s = set(seed) | {b.unit}
    s |= {b.dual[x] for x in s}
    frontier = sorted(s)
    while frontier:
        cur = sorted(s)
        new = (_constituents(b, frontier, cur) | _constituents(b, cur, frontier)) - s
        new |= {b.dual[x] for x in new} - s
        s |= new
        frontier = sorted(new)
    return frozenset(s)


def closed_supports(b: CategoryData) -> list[tuple[int, ...]]:
    """Unit-containing subsets closed under products and duals, grown from ``{1}``."""
    found = {_closure(b, ())}
    layer = list(found)
    while layer:
        nxt = []
        for s in layer:
            for x in range(b.n):
                if x in s:
                    continue
                k = _closure(b, s | {x})
                if k not in found:
                    found.add(k)
                    nxt.append(k)
        layer = nxt
    return sorted((tuple(sorted(s)) for s in found), key=lambda s: (len(s), s))


def _invertibles(b: CategoryData) -> list[int]:
    u = basis_vector(b, b.unit)
    return [x for x in range(b.n) if np.array_equal(gr_product(b, basis_vector(b, x), basis_vector(b, b.dual[x])), u)]


def _conjugate_support(b: CategoryData, s: Sequence[int], g: int) -> tuple[int, ...]:
    return tuple(sorted(_constituents(b, sorted(_constituents(b, [g], s)), [b.dual[g]])))


@dataclass(frozen=True, eq=False)
class SearchResult:
    verdicts: tuple[FactorizationVerdict, ...]
    representative: tuple[bool, ...]  # least in its class under conjugation by invertibles and swap

    def nontrivial_up_to_conjugacy_and_swap(self) -> list[FactorizationVerdict]:
        return [v for v, r in zip(self.verdicts, self.representative) if r and not v.trivial]


def search_exact_factorizations(b: CategoryData, candidates="auto") -> SearchResult:
    """All passing pairs among the candidates (ordered pairs, both orders kept).

    With ``candidates="auto"`` (fusion ``B`` only) every pair of closed
    supports is tried, each carrying identity Cartan data.
    """
    if isinstance(candidates, str):
        if candidates.lower() != "auto":
            raise InputError(f"unknown candidate mode {candidates!r}")
        if not b.is_fusion:
            raise AutoUnsupported("automatic search needs fusion data; pass explicit embeddings with Cartan data")
        supports = closed_supports(b)
        emb = {}
        for s in supports:
            sub, incl = restrict_category(b, s)
            emb[s] = Embedding(sub, b, incl)
        pairs = [
            (emb[s1], emb[s2])
            for s1 in supports
            for s2 in supports
            if len(s1) * len(s2) == b.n and set(s1) & set(s2) == {b.unit}
        ]
    else:
        pairs = list(candidates)
    verdicts = [v for v in (check_exact_factorization(a, c) for a, c in pairs) if v.ok]
    verdicts.sort(key=lambda v: (sorted(v.a.map), sorted(v.c.map)))
    inv = _invertibles(b)
    reps = []
    for v in verdicts:
        s1, s2 = tuple(sorted(v.a.map)), tuple(sorted(v.c.map))
        orbit = []
        for g in inv:
            x, y = _conjugate_support(b, s1, g), _conjugate_support(b, s2, g)
            orbit += [(x, y), (y, x)]
        reps.append((s1, s2) == min(orbit))
    return SearchResult(tuple(verdicts), tuple(reps))


# -- JSON -----------------------------------------------------------------------------


def load_embedding(path, target: CategoryData | None = None) -> Embedding:
    """Read ``{"source": file, "target": file, "map": [...]}``; paths are relative to the file."""
    path = Path(path)
    obj = read_json(path)
    if not isinstance(obj, dict) or not {"source", "map"} <= set(obj):
        raise InputError(f"{path}: embedding JSON needs 'source' and 'map'")

    def resolve(ref):
        p = Path(ref)
        return p if p.is_absolute() else path.parent / p

    source = load_category(resolve(obj["source"]))
    if target is None:
        if "target" not in obj:
            raise InputError(f"{path}: embedding JSON needs 'target'")
        target = load_category(resolve(obj["target"]))
    elif "target" in obj and load_category(resolve(obj["target"])) != target:
        raise TargetMismatch(f"{path}: embedding target differs from the given category")
    try:
        return Embedding(source, target, tuple(obj["map"]))
    except (TypeError, ValueError) as exc:
        raise InputError(f"{path}: malformed map: {exc}") from exc
