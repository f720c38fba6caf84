"""Backend selection for the hot loops.

The compiled Cython module is used when it imports; otherwise, or when the
environment variable ``THETADESIGN_PURE`` is set to a non-empty value other
than ``0``, the pure-Python mirror in ``_fallback`` is used.
"""
import os

from . import _fallback

_force_pure = os.environ.get("THETADESIGN_PURE", "") not in ("", "0")

try:
    if _force_pure:
        raise ImportError("pure backend requested")
    from . import _kernels as _impl

    BACKEND = "cython"
except ImportError:
    _impl = _fallback
    BACKEND = "python"

cover_scan = _impl.cover_scan
local_search = _impl.local_search

__all__ = ["BACKEND", "cover_scan", "local_search"]
