"""Backend selection for the F2 kernels.

The compiled extension is used when importable, otherwise the pure-Python
fallback.  Set ``HFCONE_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _f2py

BACKEND = "python"

if os.environ.get("HFCONE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _f2ext as _impl
        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _f2py
else:
    _impl = _f2py

reduce_columns = _impl.reduce_columns
reduce_vectors = _impl.reduce_vectors
apply_map = _impl.apply_map
rank = _impl.rank
echelon = _impl.echelon
csr_bitsets = _impl.csr_bitsets

__all__ = ["BACKEND", "reduce_columns", "reduce_vectors", "apply_map", "rank", "echelon", "csr_bitsets"]
