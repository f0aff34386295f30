"""Kernel backend selection.

The compiled extension is used when present.  Setting MDSREPAIR_PURE_KERNEL=1
forces the pure Python fallback, which is also what you get when the
extension was never built.
"""
import os

if os.environ.get("MDSREPAIR_PURE_KERNEL") == "1":
    from . import pure as _backend
else:
    try:
        from . import _fast as _backend  # type: ignore[no-redef]
    except ImportError:
        from . import pure as _backend

BACKEND = "pure" if _backend.__name__.endswith("pure") else "compiled"
rre_rank = _backend.rre_rank
rref_rank = _backend.rref_rank
