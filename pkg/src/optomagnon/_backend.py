"""Kernel backend selection.

The compiled extension is preferred. Set ``OPTOMAGNON_BACKEND=python`` to force
the numpy fallback.
"""
import os

if os.environ.get("OPTOMAGNON_BACKEND", "").lower() == "python":
    from . import _kernels_py as kernels
    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels
        BACKEND = "compiled"
    except ImportError:
        from . import _kernels_py as kernels
        BACKEND = "python"

__all__ = ["kernels", "BACKEND"]
