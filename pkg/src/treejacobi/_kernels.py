"""Select the kernel implementation at import time.

The compiled extension is preferred when it imported cleanly; the pure
NumPy module is the fallback and can be forced by setting the environment
variable ``TREEJACOBI_PURE`` to anything other than ``0``.
"""

from __future__ import annotations

import os

from . import _kernels_py as pure

compiled = None
if os.environ.get("TREEJACOBI_PURE", "0") in ("", "0"):
    try:
        from . import _core as compiled  # type: ignore[no-redef]
    except ImportError:
        compiled = None

HAVE_COMPILED = compiled is not None
active = compiled if HAVE_COMPILED else pure

m_fixed_point = active.m_fixed_point
jacobi_eigh = active.jacobi_eigh
expand_frontier = active.expand_frontier

__all__ = [
    "HAVE_COMPILED",
    "active",
    "compiled",
    "pure",
    "m_fixed_point",
    "jacobi_eigh",
    "expand_frontier",
]
