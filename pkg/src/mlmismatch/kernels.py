"""Select the histogram/statistics backend at import time.

The compiled ``_kernels`` extension is used when it was built; otherwise the
pure-Python ``_pykernels`` module. Set ``MLMISMATCH_PURE_PYTHON=1`` to force the
fallback. Both take contiguous ``array('d')`` buffers.
"""
from __future__ import annotations

import os
from array import array

from . import _pykernels

python_backend = _pykernels

try:
    from . import _kernels as compiled_backend
except ImportError:  # extension not built
    compiled_backend = None

if compiled_backend is not None and not os.environ.get("MLMISMATCH_PURE_PYTHON"):
    backend = compiled_backend
    BACKEND = "cython"
else:
    backend = python_backend
    BACKEND = "python"


def as_buffer(values) -> array:
    if isinstance(values, array) and values.typecode == "d":
        return values
    return array("d", values)


def available_backends() -> dict:
    found = {"python": python_backend}
    if compiled_backend is not None:
        found["cython"] = compiled_backend
    return found
