"""Standard category data: pointed, small nonsemisimple, products and opposites."""
from __future__ import annotations

import numpy as np

from .core import CategoryData, dual_D_map
from .errors import AmbiguousDual, InconsistentDual, InputError
from .groups import FiniteGroup

__all__ = [
    "vec_of_group",
    "rep_zp_char_p",
    "taft_like",
    "fibonacci",
    "deligne_product",
    "opposite",
]


def vec_of_group(g: FiniteGroup, omega: str | None = None) -> CategoryData:
    """Pointed category with simples the elements of ``g``.

    ``omega`` is an opaque reference to an associator class; the
    Grothendieck data cannot see it and nothing here interprets it.
    """
    n = g.order
    t = np.zeros((n, n, n), dtype=np.int64)
    a = np.arange(n)
    t[g.table[a[:, None], a[None, :]], a[:, None], a[None, :]] = 1
    meta = {"builder": "vec", "group": g.name or f"order {n}"}
    if omega is not None:
        meta["omega"] = omega
    return CategoryData.from_tensor(g.labels, g.identity, g.inverse.tolist(), t, metadata=meta)


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, int(p**0.5) + 1))


def rep_zp_char_p(p: int) -> CategoryData:
    """Representations of ``Z/p`` in characteristic ``p``: one simple, ``P(1)`` of length ``p``."""
    if not _is_prime(p):
        raise InputError(f"{p} is not prime")
    return CategoryData(
        simples=("1",),
        unit=0,
        dual=(0,),
        fusion=((0, 0, 0, 1),),
        cartan=((p,),),
        metadata={"builder": "rep-zp", "p": p},
    )


def taft_like(n: int) -> CategoryData:
    """Simples ``Z/n`` with group fusion and all-ones Cartan matrix.

    The Cartan data cannot single out ``Y^D`` here (all projective classes
    coincide), so ``dualD`` is fixed explicitly: ``k -> 1 - k``, the dual
    shifted by the distinguished invertible object ``1``.
    """
    if n < 2:
        raise InputError("taft_like needs n >= 2")
    t = np.zeros((n, n, n), dtype=np.int64)
    for y in range(n):
        for z in range(n):
            t[(y + z) % n, y, z] = 1
    dual = [(-k) % n for k in range(n)]
    dual_d = [(1 - k) % n for k in range(n)]
    return CategoryData.from_tensor(
        [str(k) for k in range(n)],
        0,
        dual,
        t,
        cartan=np.ones((n, n), dtype=np.int64),
        dualD=dual_d,
        metadata={"builder": "taft", "n": n, "dualD": "k -> 1 - k (distinguished object 1)"},
    )


def fibonacci() -> CategoryData:
    """``{1, tau}`` with ``tau (x) tau = 1 + tau``."""
    return CategoryData(
        simples=("1", "tau"),
        unit=0,
        dual=(0, 1),
        fusion=((0, 0, 0, 1), (1, 0, 1, 1), (1, 1, 0, 1), (0, 1, 1, 1), (1, 1, 1, 1)),
        cartan=((1, 0), (0, 1)),
        metadata={"builder": "fibonacci"},
    )


def _dual_d_or_none(data: CategoryData):
    try:
        return dual_D_map(data)
    except (AmbiguousDual, InconsistentDual):
        return None


def deligne_product(a: CategoryData, c: CategoryData):
    """``A (x) C`` with simples ``(X, Y)`` at index ``X * |C| + Y``.

    Returns the product and the canonical embeddings ``X -> (X, 1)`` and
    ``Y -> (1, Y)``.
    """
    from .factor import Embedding

    na, nc = a.n, c.n
    quads = [
        (xa * nc + xc, ya * nc + yc, za * nc + zc, ma * mc)
        for xa, ya, za, ma in a.fusion
        for xc, yc, zc, mc in c.fusion
    ]
    dual = [a.dual[i // nc] * nc + c.dual[i % nc] for i in range(na * nc)]
    cartan = np.kron(a.cartan_matrix, c.cartan_matrix)
    dual_d = None
    if a.dualD is not None or c.dualD is not None:
        da, dc = _dual_d_or_none(a), _dual_d_or_none(c)
        if da is not None and dc is not None:
            dual_d = tuple(da[i // nc] * nc + dc[i % nc] for i in range(na * nc))
    b = CategoryData(
        simples=tuple(f"({x},{y})" for x in a.simples for y in c.simples),
        unit=a.unit * nc + c.unit,
        dual=tuple(dual),
        fusion=tuple(quads),
        cartan=tuple(tuple(int(v) for v in row) for row in cartan),
        dualD=dual_d,
        metadata={"builder": "deligne", "factors": [a.n, c.n]},
    )
    ea = Embedding(a, b, tuple(x * nc + c.unit for x in range(na)))
    ec = Embedding(c, b, tuple(a.unit * nc + y for y in range(nc)))
    return b, ea, ec


def opposite(a: CategoryData) -> CategoryData:
    """Reversed tensor product: ``N^Z_{X,Y} -> N^Z_{Y,X}``.

    Right duals of the opposite are the left duals of ``a``; projective
    covers and their composition factors are unchanged, and ``Y -> Y^D``
    is inverted along with the duals.
    """
    inv_d = None
    if a.dualD is not None:
        inv = [0] * a.n
        for y, z in enumerate(a.dualD):
            inv[z] = y
        inv_d = tuple(inv)
    meta = dict(a.metadata)
    if meta.pop("opposite", False) is False:
        meta["opposite"] = True
    return a.replace(
        dual=a.left_dual,
        fusion=tuple((x, z, y, m) for x, y, z, m in a.fusion),
        dualD=inv_d,
        metadata=meta,
    )
