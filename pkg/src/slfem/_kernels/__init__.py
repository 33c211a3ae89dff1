"""Kernel backend selection.

The hot loops (band assembly, tridiagonal solve, piecewise-linear evaluation)
exist twice: compiled Cython in ``_core`` and numpy in ``pure``.  The compiled
backend is preferred when present; set ``SLFEM_PURE=1`` to force the fallback.
"""

import os

from slfem._kernels import pure

if os.environ.get("SLFEM_PURE"):
    _impl = pure
else:
    try:
        from slfem._kernels import _core as _impl
    except ImportError:
        _impl = pure

thomas = _impl.thomas
assemble_p1 = _impl.assemble_p1
assemble_compact = _impl.assemble_compact
linear_eval = _impl.linear_eval


def backend() -> str:
    """Name of the active kernel backend ('core' or 'pure')."""
    return _impl.NAME
