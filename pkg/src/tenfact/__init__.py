"""Grothendieck-level computations with finite tensor categories.

Category data and validation live in :mod:`tenfact.core`, Frobenius-Perron
dimensions in :mod:`tenfact.fpdim`, exact factorizations in
:mod:`tenfact.factor`, finite groups in :mod:`tenfact.groups` and
``H^3(G, Q/Z)`` in :mod:`tenfact.cohomology`.
"""
__version__ = "0.1.0"

from .core import (  # noqa: E402
    CategoryData,
    ValidationReport,
    decompose_projective,
    dual_D,
    fusion_matrix,
    gr_product,
    hom_from_projective,
    validate,
)
from .errors import TenfactError  # noqa: E402

__all__ = [
    "CategoryData",
    "ValidationReport",
    "validate",
    "fusion_matrix",
    "gr_product",
    "dual_D",
    "decompose_projective",
    "hom_from_projective",
    "TenfactError",
    "__version__",
]
