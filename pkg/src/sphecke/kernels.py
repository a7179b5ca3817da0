"""Kernel backend selection.

Prefers the compiled partition kernel when the extension built; set
``SPHECKE_PURE_PYTHON=1`` to force the fallback.  Both backends are
exact (counts are arbitrary-precision integers) and interchangeable.
"""

from __future__ import annotations

import os

from . import _qpart_py

if os.environ.get("SPHECKE_PURE_PYTHON"):
    _impl = _qpart_py
else:
    try:
        from . import _qpart as _impl  # type: ignore[attr-defined]

        if not hasattr(_impl, "PartitionContext"):
            _impl = _qpart_py
    except ImportError:
        _impl = _qpart_py

BACKEND = _impl.BACKEND
PartitionContext = _impl.PartitionContext


def available_backends():
    out = {"python": _qpart_py.PartitionContext}
    try:
        from . import _qpart  # type: ignore[attr-defined]

        if hasattr(_qpart, "PartitionContext"):
            out["cython"] = _qpart.PartitionContext
    except ImportError:
        pass
    return out
