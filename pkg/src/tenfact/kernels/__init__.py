"""Hot numeric loops, compiled with numba when available.

Set ``TENFACT_JIT=0`` to force the pure-numpy implementations (same results,
slower).  Both backends stay importable as ``kernels.jit_impl`` and
``kernels.numpy_impl`` so they can be compared directly.
"""
import os

from . import _numpy as numpy_impl

try:
    from . import _jit as jit_impl
except ImportError:  # numba missing
    jit_impl = None

JIT_ENABLED = jit_impl is not None and os.environ.get("TENFACT_JIT", "1").strip().lower() not in {
    "0",
    "false",
    "no",
    "off",
}

_impl = jit_impl if JIT_ENABLED else numpy_impl

coboundary_coo = _impl.coboundary_coo
rank_mod_p = _impl.rank_mod_p
local_valuations = _impl.local_valuations


def backend() -> str:
    return "numba" if JIT_ENABLED else "numpy"


def set_threads(n: int | None) -> None:
    if n and JIT_ENABLED:
        import numba

        numba.set_num_threads(max(1, min(int(n), numba.config.NUMBA_NUM_THREADS)))


__all__ = ["coboundary_coo", "rank_mod_p", "local_valuations", "backend", "set_threads", "JIT_ENABLED"]
