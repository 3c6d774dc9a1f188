"""Frobenius-Perron dimensions, the regular element and the usual predicates."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import CategoryData, basis_vector, gr_product
from .errors import DimensionMismatch, InputError, NoConvergence, Nonpositive

__all__ = [
    "FpProfile",
    "fp_character",
    "fpdim_object",
    "eigen_equation_check",
    "predicates",
    "regular_class",
]

MAX_ITER = 100_000
INTEGRAL_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class FpProfile:
    """``dims[X] = FPdim(X)``; ``regular`` is ``R_A`` as a ``K_0`` vector."""

    dims: np.ndarray
    cat_dim: float
    regular: np.ndarray
    tolerance: float
    iterations: int
    exact: bool  # dims confirmed as an integer-valued character
    residual: float  # max |d_X d_Y - sum_Z N^Z_{X,Y} d_Z| / max(1, d_X d_Y)

    def to_json(self):
        return {
            "dims": [int(d) if self.exact else float(d) for d in self.dims],
            "cat_dim": int(self.cat_dim) if self.exact else float(self.cat_dim),
            "exact": self.exact,
            "residual": float(self.residual),
            "iterations": self.iterations,
        }


def _character_residual(t: np.ndarray, d: np.ndarray) -> float:
    lhs = np.outer(d, d)
    rhs = np.einsum("zxy,z->xy", t, d)
    return float((np.abs(lhs - rhs) / np.maximum(1.0, lhs)).max())


def _integer_character(t: np.ndarray, d: np.ndarray) -> np.ndarray | None:
    cand = np.rint(d)
    if np.abs(d - cand).max() > INTEGRAL_TOL or cand.min() < 1:
        return None
    c = cand.astype(np.int64)
    if np.array_equal(np.outer(c, c), np.einsum("zxy,z->xy", t, c)):
        return c
    return None


def fp_character(data: CategoryData, tol: float = 1e-12, max_iter: int = MAX_ITER) -> FpProfile:
    """Perron eigenvector of ``M = sum_X N_X`` by power iteration from all ones."""
    if not tol > 0:
        raise InputError("tolerance must be positive")
    t = data.tensor.astype(np.float64)
    m = t.sum(axis=1)  # M[Z, Y] = sum_X N^Z_{X,Y}
    v = np.ones(data.n)
    for it in range(1, max_iter + 1):
        w = m @ v
        top = w.max()
        if not top > 0:
            raise Nonpositive("iteration collapsed to zero")
        w /= top
        if np.abs(w - v).max() <= tol:
            v = w
            break
        v = w
    else:
        raise NoConvergence(f"power iteration did not reach {tol} in {max_iter} steps", iterations=max_iter)
    dims = v / v[data.unit]
    if dims.min() <= tol:
        raise Nonpositive(f"Perron vector has a nonpositive entry at simple {int(dims.argmin())}")
    ints = _integer_character(data.tensor, dims)
    c = data.cartan_matrix
    if ints is not None:
        cat_dim = float(int(ints @ (c @ ints)))
        dims = ints.astype(np.float64)
    else:
        cat_dim = float(dims @ (c @ dims))
    dims.setflags(write=False)
    return FpProfile(
        dims=dims,
        cat_dim=cat_dim,
        regular=dims,
        tolerance=tol,
        iterations=it,
        exact=ints is not None,
        residual=_character_residual(t, dims),
    )


def fpdim_object(profile: FpProfile, v) -> float:
    v = np.asarray(v, dtype=np.float64)
    if v.shape != profile.dims.shape:
        raise DimensionMismatch(f"vector must have length {len(profile.dims)}")
    return float(profile.dims @ v)


def regular_class(data: CategoryData, profile: FpProfile) -> np.ndarray:
    """Grothendieck class of ``R_A = sum FPdim(X) P(X)``."""
    return profile.regular @ data.cartan_matrix


@dataclass(frozen=True)
class EigenReport:
    max_deviation: float
    ok: bool

    def to_json(self):
        return {"max_deviation": self.max_deviation, "ok": self.ok}


def eigen_equation_check(data: CategoryData, profile: FpProfile, tol: float = 1e-9) -> EigenReport:
    """``X R = R X = FPdim(X) R`` in the Grothendieck group, for every simple ``X``."""
    r = regular_class(data, profile)
    scale = max(1.0, float(np.abs(r).max()))
    dev = 0.0
    for x in range(data.n):
        e = basis_vector(data, x).astype(np.float64)
        target = profile.dims[x] * r
        dev = max(dev, float(np.abs(gr_product(data, e, r) - target).max()))
        dev = max(dev, float(np.abs(gr_product(data, r, e) - target).max()))
    dev /= scale
    return EigenReport(dev, dev <= tol)


def predicates(data: CategoryData, profile: FpProfile) -> dict[str, bool]:
    d = np.asarray(profile.dims)
    unit = basis_vector(data, data.unit)
    pointed = all(
        np.array_equal(gr_product(data, basis_vector(data, x), basis_vector(data, data.dual[x])), unit)
        for x in range(data.n)
    )
    return {
        "pointed": bool(pointed),
        "integral": bool(np.abs(d - np.rint(d)).max() <= INTEGRAL_TOL),
        "weakly_integral": bool(abs(profile.cat_dim - round(profile.cat_dim)) <= INTEGRAL_TOL),
        "fusion": data.is_fusion,
    }

