"""Kernel selection: compiled extension when importable, numpy/Python otherwise.

Set ``PRIMLAB_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _fallback

BACKEND = "python"
kernels = _fallback

if os.environ.get("PRIMLAB_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        kernels = _compiled
        BACKEND = "compiled"

spf_table = kernels.spf_table
factor_tables = kernels.factor_tables
dinic = kernels.dinic
