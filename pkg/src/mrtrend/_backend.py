"""Kernel selection: the compiled extension when importable, else the fallback.

Set ``MRTREND_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _fallback

if os.environ.get("MRTREND_PURE_PYTHON", "").strip() not in ("", "0"):
    _compiled = None
else:
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None

if _compiled is not None:
    BACKEND = "compiled"
    euler_path = _compiled.euler_path
    hp_solve = _compiled.hp_solve
    cosine_synthesis = _compiled.cosine_synthesis
else:
    BACKEND = "python"
    euler_path = _fallback.euler_path
    hp_solve = _fallback.hp_solve
    cosine_synthesis = _fallback.cosine_synthesis

__all__ = ["BACKEND", "cosine_synthesis", "euler_path", "hp_solve"]
