"""Hot kernels, compiled when available.

The Cython extension ``_ckernels`` is used when it was built and
``PADICPI_PURE_PYTHON`` is unset; otherwise the numpy fallback in
``_pykernels`` is loaded. ``BACKEND`` names the active choice.
"""

from __future__ import annotations

import os

from . import _pykernels

if os.environ.get("PADICPI_PURE_PYTHON"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

gram_exact_window = _impl.gram_exact_window
gram_float_window = _impl.gram_float_window
green_level_sum = _impl.green_level_sum
reduce_root_sum = _pykernels.reduce_root_sum


def backends() -> dict:
    """All importable backends by name (for benchmarks and cross-checks)."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels

        out["cython"] = _ckernels
    except ImportError:
        pass
    return out
