"""Sweep-kernel backend selection.

The compiled extension is preferred; the pure-Python twin is used when the
extension is missing or when CHIMERALOC_PURE_PYTHON is set to a non-empty
value.  Both expose the same ``run_chain`` contract and produce identical
trajectories.
"""

from __future__ import annotations

import os

from . import _kernel_py

if os.environ.get("CHIMERALOC_PURE_PYTHON"):
    _impl = _kernel_py
else:
    try:
        from . import _kernel as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernel_py

run_chain = _impl.run_chain
BACKEND = _impl.backend_name()


def kernel_backends():
    """(active backend name, dict of importable backends)."""
    available = {"python": _kernel_py}
    try:
        from . import _kernel

        available["compiled"] = _kernel
    except ImportError:
        pass
    return BACKEND, available
