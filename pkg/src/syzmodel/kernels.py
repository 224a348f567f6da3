"""Kernel dispatch: compiled extension when available, Python fallback otherwise.

Set ``SYZMODEL_PURE=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("SYZMODEL_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        pass
    else:
        _impl = _compiled
        BACKEND = "compiled"


def reduce_columns(cols):
    """Rank and unit-pivot flag of a sparse integer matrix (columns of (row, value))."""
    if _impl is not _kernels_py:
        try:
            return _impl.reduce_columns(cols)
        except ArithmeticError:
            pass  # int64 headroom exceeded; redo with Python ints
    return _kernels_py.reduce_columns(cols)


def point_segment_distances(points, segments):
    return _impl.point_segment_distances(points, segments)


def point_cloud_distances(points, cloud):
    return _impl.point_cloud_distances(points, cloud)
