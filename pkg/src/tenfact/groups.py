"""Finite groups given by Cayley tables, their subgroups and exact factorizations."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import InputError, NotSubgroup, OrderLimit

__all__ = [
    "FiniteGroup",
    "Subgroup",
    "ExactPair",
    "subgroups",
    "subgroup_of",
    "is_exact_factorization",
    "enumerate_exact_factorizations",
    "cyclic",
    "dihedral",
    "symmetric",
    "alternating",
    "quaternion",
    "direct_product",
    "catalog",
    "load_group",
    "group_to_json",
    "group_from_json",
]

EXHAUSTIVE_ASSOC_LIMIT = 64
MAX_ORDER = 10_000


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """``table[a, b]`` is the index of ``a * b``; labels name the elements."""

    labels: tuple[str, ...]
    table: np.ndarray
    name: str = field(default="", compare=False)
    identity: int = field(init=False, compare=False)

    def __post_init__(self):
        t = np.array(self.table, dtype=np.int64)
        n = len(self.labels)
        object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))
        if n == 0:
            raise InputError("a group needs at least one element")
        if n > MAX_ORDER:
            raise OrderLimit(f"group order {n} exceeds limit {MAX_ORDER}")
        if len(set(self.labels)) != n:
            raise InputError("element labels must be distinct")
        if t.shape != (n, n):
            raise InputError(f"table must be {n}x{n}, got {t.shape}")
        if t.min() < 0 or t.max() >= n:
            raise InputError("table entries out of range")
        full = np.arange(n)
        if not all((np.sort(t, axis=1) == full).all(axis=1)) or not all((np.sort(t, axis=0).T == full).all(axis=1)):
            raise InputError("table is not a Latin square")
        ids = [e for e in range(n) if (t[e] == full).all() and (t[:, e] == full).all()]
        if not ids:
            raise InputError("table has no identity element")
        t.setflags(write=False)
        object.__setattr__(self, "table", t)
        object.__setattr__(self, "identity", ids[0])
        if not self._associative():
            raise InputError("table is not associative")

    def _associative(self) -> bool:
        t, n = self.table, self.order
        if n <= EXHAUSTIVE_ASSOC_LIMIT:
            return bool((t[t, :] == t[:, t]).all())
        # (ab)c = a(bc) for all a, b and all c in a generating set, plus random triples
        rng = np.random.default_rng(0)
        gens = self.generators()
        for c in gens:
            if not (t[t, c] == t[:, t[:, c]]).all():
                return False
        x, y, z = rng.integers(0, n, (3, 20_000))
        return bool((t[t[x, y], z] == t[x, t[y, z]]).all())

    def generators(self) -> list[int]:
        """A small generating set, found greedily."""
        gens: list[int] = []
        have = np.zeros(self.order, dtype=bool)
        have[self.identity] = True
        for g in range(self.order):
            if not have[g]:
                gens.append(g)
                have[list(_closure(self.table, np.nonzero(have)[0].tolist(), [g] + gens))] = True
        return gens

    @property
    def order(self) -> int:
        return len(self.labels)

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.labels == other.labels and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash((self.labels, self.table.tobytes()))

    def __repr__(self):
        return f"FiniteGroup({self.name or 'order'} {self.order})"

    @cached_property
    def inverse(self) -> np.ndarray:
        inv = np.argmax(self.table == self.identity, axis=1)
        inv.setflags(write=False)
        return inv

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != self.identity:
            x = self.table[x, g]
            k += 1
        return k

    def order_statistics(self) -> dict[int, int]:
        """Number of elements of each order (an isomorphism invariant)."""
        out: dict[int, int] = {}
        for g in range(self.order):
            k = self.element_order(g)
            out[k] = out.get(k, 0) + 1
        return dict(sorted(out.items()))

    def center(self) -> list[int]:
        t = self.table
        return [g for g in range(self.order) if (t[g] == t[:, g]).all()]

    def index(self, label: str) -> int:
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise InputError(f"no element labelled {label!r}") from None

    def subgroup_group(self, h: "Subgroup") -> tuple["FiniteGroup", tuple[int, ...]]:
        """``h`` as a group in its own right, with the inclusion map."""
        elems = h.elements
        pos = {g: i for i, g in enumerate(elems)}
        table = [[pos[int(self.table[a, b])] for b in elems] for a in elems]
        return FiniteGroup([self.labels[g] for g in elems], table, name=f"subgroup of {self.name}"), elems


def _closure(table: np.ndarray, start: Iterable[int], gens: Sequence[int]) -> frozenset[int]:
    """Subgroup generated by ``start`` and ``gens`` (start assumed closed or a generating seed)."""
    elems = set(int(s) for s in start)
    gens = sorted(set(int(g) for g in gens) | elems)
    frontier = list(elems) or [0]
    elems.update(frontier)
    while frontier:
        new = set(table[np.ix_(frontier, gens)].ravel().tolist()) - elems
        elems |= new
        frontier = list(new)
    return frozenset(elems)


@dataclass(frozen=True)
class Subgroup:
    elements: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(sorted(set(int(e) for e in self.elements))))

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g) -> bool:
        return int(g) in set(self.elements)

    def __len__(self):
        return len(self.elements)


def subgroup_of(g: FiniteGroup, elements: Iterable[int]) -> Subgroup:
    """Validate that ``elements`` form a subgroup of ``g``."""
    elems = sorted(set(int(e) for e in elements))
    if any(not 0 <= e < g.order for e in elems):
        raise NotSubgroup("element index out of range")
    s = set(elems)
    if g.identity not in s:
        raise NotSubgroup("subset does not contain the identity")
    sub = g.table[np.ix_(elems, elems)]
    if not set(sub.ravel().tolist()) <= s:
        raise NotSubgroup("subset is not closed under multiplication")
    return Subgroup(tuple(elems))


def _conjugate(g: FiniteGroup, elems: Sequence[int], x: int) -> tuple[int, ...]:
    t = g.table
    xi = g.inverse[x]
    return tuple(sorted(int(t[t[x, h], xi]) for h in elems))


def conjugacy_key(g: FiniteGroup, h: Subgroup) -> tuple[int, ...]:
    """Lexicographically least conjugate of ``h``, a class invariant."""
    return min(_conjugate(g, h.elements, x) for x in range(g.order))


def subgroups(g: FiniteGroup, by_conjugacy: bool = False, limit: int = MAX_ORDER):
    """All subgroups, built in layers ``<H, x>`` from the trivial one.

    Sorted by (order, elements).  With ``by_conjugacy`` also returns a list of
    classes, each a list of positions into the subgroup list.
    """
    if g.order > limit:
        raise OrderLimit(f"group order {g.order} exceeds subgroup search limit {limit}")
    t = g.table
    trivial = frozenset([g.identity])
    found = {trivial}
    layer = [trivial]
    while layer:
        nxt = []
        for h in layer:
            seen = set(h)
            hl = sorted(h)
            for x in range(g.order):
                if x in seen:
                    continue
                k = _closure(t, hl, [x])
                seen.update(t[hl, x].tolist())  # <H, hx> = <H, x>
                if k not in found:
                    found.add(k)
                    nxt.append(k)
        layer = nxt
    out = sorted((Subgroup(tuple(k)) for k in found), key=lambda s: (s.order, s.elements))
    if not by_conjugacy:
        return out
    classes: dict[tuple[int, ...], list[int]] = {}
    for i, s in enumerate(out):
        classes.setdefault(conjugacy_key(g, s), []).append(i)
    return out, list(classes.values())


def is_exact_factorization(g: FiniteGroup, h1: Subgroup, h2: Subgroup) -> bool:
    """``|H1 n H2| = 1`` and ``|H1| |H2| = |G|``."""
    return len(set(h1.elements) & set(h2.elements)) == 1 and h1.order * h2.order == g.order


def factorization_bijective(g: FiniteGroup, h1: Subgroup, h2: Subgroup) -> bool:
    """Whether ``(g1, g2) -> g1 g2`` is a bijection ``H1 x H2 -> G``."""
    prods = g.table[np.ix_(h1.elements, h2.elements)].ravel()
    return len(prods) == g.order and len(set(prods.tolist())) == g.order


@dataclass(frozen=True)
class ExactPair:
    h1: Subgroup
    h2: Subgroup
    trivial: bool
    representative: bool  # least member of its class under conjugation and swap

    def to_json(self, g: FiniteGroup | None = None):
        name = (lambda s: [g.labels[e] for e in s.elements]) if g else (lambda s: list(s.elements))
        return {"g1": name(self.h1), "g2": name(self.h2), "trivial": self.trivial, "representative": self.representative}


def enumerate_exact_factorizations(g: FiniteGroup, limit: int = MAX_ORDER) -> list[ExactPair]:
    """All ordered pairs ``(H1, H2)`` with ``G = H1 H2`` exact."""
    subs = subgroups(g, limit=limit)
    by_order: dict[int, list[Subgroup]] = {}
    for s in subs:
        by_order.setdefault(s.order, []).append(s)
    pairs = []
    for h1 in subs:
        if g.order % h1.order:
            continue
        for h2 in by_order.get(g.order // h1.order, []):
            if is_exact_factorization(g, h1, h2):
                pairs.append((h1, h2))
    out = []
    for h1, h2 in pairs:
        key = (h1.elements, h2.elements)
        orbit = []
        for x in range(g.order):
            a, b = _conjugate(g, h1.elements, x), _conjugate(g, h2.elements, x)
            orbit += [(a, b), (b, a)]
        out.append(ExactPair(h1, h2, trivial=min(h1.order, h2.order) == 1, representative=key == min(orbit)))
    return out


# -- builders -----------------------------------------------------------------------


def _from_mul(elems: Sequence, mul, label, name: str) -> FiniteGroup:
    pos = {e: i for i, e in enumerate(elems)}
    table = [[pos[mul(a, b)] for b in elems] for a in elems]
    return FiniteGroup([label(e) for e in elems], table, name=name)


def _check_order(n: int, limit: int = MAX_ORDER):
    if n > limit:
        raise OrderLimit(f"requested group order {n} exceeds limit {limit}")


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise InputError("cyclic group needs n >= 1")
    _check_order(n)
    a = np.arange(n)
    return FiniteGroup([str(k) for k in range(n)], (a[:, None] + a[None, :]) % n, name=f"Z{n}")


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n; elements ``r^i`` then ``s r^i``."""
    if n < 1:
        raise InputError("dihedral group needs n >= 1")
    _check_order(2 * n)
    elems = [(a, i) for a in range(2) for i in range(n)]

    def mul(x, y):
        (a, i), (b, j) = x, y
        return ((a + b) % 2, ((-i if b else i) + j) % n)

    def label(x):
        a, i = x
        if a == 0:
            return "e" if i == 0 else f"r^{i}"
        return "s" if i == 0 else f"sr^{i}"

    return _from_mul(elems, mul, label, f"D{n}")


def _cycles(p: Sequence[int]) -> str:
    seen, out = set(), []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(j + 1)
            j = p[j]
        out.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(out) or "()"


def symmetric(n: int, max_n: int = 4) -> FiniteGroup:
    """Permutations of ``{1..n}`` in cycle notation, ``(p q)(i) = p(q(i))``."""
    if n < 1:
        raise InputError("symmetric group needs n >= 1")
    if n > max_n:
        raise OrderLimit(f"symmetric({n}) exceeds the supported degree {max_n}")
    elems = list(itertools.permutations(range(n)))
    return _from_mul(elems, lambda p, q: tuple(p[q[i]] for i in range(n)), _cycles, f"S{n}")


def _parity(p) -> int:
    return sum(1 for i in range(len(p)) for j in range(i) if p[j] > p[i]) % 2


def alternating(n: int, max_n: int = 4) -> FiniteGroup:
    if n < 1:
        raise InputError("alternating group needs n >= 1")
    if n > max_n:
        raise OrderLimit(f"alternating({n}) exceeds the supported degree {max_n}")
    elems = [p for p in itertools.permutations(range(n)) if _parity(p) == 0]
    return _from_mul(elems, lambda p, q: tuple(p[q[i]] for i in range(n)), _cycles, f"A{n}")


def quaternion() -> FiniteGroup:
    """Q8 = {+-1, +-i, +-j, +-k}."""
    units = ["1", "i", "j", "k"]
    # unit products: (a, b) -> (sign, c)
    prod = {
        ("1", x): (1, x) for x in units
    } | {(x, "1"): (1, x) for x in units} | {
        ("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
        ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
        ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j"),
    }
    elems = [(s, u) for u in units for s in (1, -1)]

    def mul(x, y):
        s, c = prod[x[1], y[1]]
        return (x[0] * y[0] * s, c)

    return _from_mul(elems, mul, lambda x: ("" if x[0] > 0 else "-") + x[1], "Q8")


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    """Elements ``(a, b)`` indexed ``a * |H| + b``."""
    _check_order(g.order * h.order)
    m = h.order
    a = np.arange(g.order * m)
    table = g.table[(a // m)[:, None], (a // m)[None, :]] * m + h.table[(a % m)[:, None], (a % m)[None, :]]
    labels = [f"({x},{y})" for x in g.labels for y in h.labels]
    return FiniteGroup(labels, table, name=f"{g.name}x{h.name}")


def catalog(max_order: int = 24) -> dict[str, FiniteGroup]:
    """Named small groups used as the standard test corpus."""
    make = {
        "Z1": lambda: cyclic(1),
        "Z2": lambda: cyclic(2),
        "Z3": lambda: cyclic(3),
        "Z4": lambda: cyclic(4),
        "Z2xZ2": lambda: direct_product(cyclic(2), cyclic(2)),
        "Z5": lambda: cyclic(5),
        "Z6": lambda: cyclic(6),
        "S3": lambda: symmetric(3),
        "Z7": lambda: cyclic(7),
        "Z8": lambda: cyclic(8),
        "Z2xZ4": lambda: direct_product(cyclic(2), cyclic(4)),
        "Z2xZ2xZ2": lambda: direct_product(direct_product(cyclic(2), cyclic(2)), cyclic(2)),
        "D4": lambda: dihedral(4),
        "Q8": quaternion,
        "Z9": lambda: cyclic(9),
        "Z3xZ3": lambda: direct_product(cyclic(3), cyclic(3)),
        "D5": lambda: dihedral(5),
        "Z12": lambda: cyclic(12),
        "A4": lambda: alternating(4),
        "D6": lambda: dihedral(6),
        "Z2xS3": lambda: direct_product(cyclic(2), symmetric(3)),
        "S3xZ3": lambda: direct_product(symmetric(3), cyclic(3)),
        "Z2xZ2xZ2xZ2": lambda: direct_product(
            direct_product(cyclic(2), cyclic(2)), direct_product(cyclic(2), cyclic(2))
        ),
        "S4": lambda: symmetric(4),
        "Z24": lambda: cyclic(24),
    }
    out = {}
    for name, f in make.items():
        grp = f()
        if grp.order <= max_order:
            object.__setattr__(grp, "name", name)
            out[name] = grp
    return out


# -- JSON -----------------------------------------------------------------------------


def group_to_json(g: FiniteGroup) -> dict:
    return {"labels": list(g.labels), "table": g.table.tolist()}


def group_from_json(obj: Mapping) -> FiniteGroup:
    if not isinstance(obj, Mapping) or not {"labels", "table"} <= set(obj):
        raise InputError("group JSON must be an object with 'labels' and 'table'")
    try:
        return FiniteGroup(tuple(obj["labels"]), np.array(obj["table"], dtype=np.int64), name=str(obj.get("name", "")))
    except (TypeError, ValueError) as exc:
        raise InputError(f"malformed group JSON: {exc}") from exc


def load_group(path) -> FiniteGroup:
    from .core import read_json

    g = group_from_json(read_json(path))
    if not g.name:
        object.__setattr__(g, "name", Path(path).name.split(".")[0])
    return g


def dump_group(g: FiniteGroup, path) -> None:
    Path(path).write_text(json.dumps(group_to_json(g)) + "\n")
