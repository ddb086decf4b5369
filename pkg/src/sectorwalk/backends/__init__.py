"""Backend selection for the grid-propagation kernel.

The compiled extension is preferred when present; the pure-numpy
implementation is the fallback. Set SECTORWALK_BACKEND=numpy to force
the fallback.
"""

from __future__ import annotations

import os

from . import numpy_backend

if os.environ.get("SECTORWALK_BACKEND", "").lower() == "numpy":
    _impl = numpy_backend
else:
    try:
        from . import _gridprop as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = numpy_backend

propagate_density = _impl.propagate_density
BACKEND_NAME = _impl.BACKEND_NAME

__all__ = ["propagate_density", "BACKEND_NAME", "numpy_backend"]
