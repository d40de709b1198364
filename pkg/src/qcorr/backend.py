"""Select the numerical kernel backend at import time.

The compiled Cython extension carries the hot inner loops (Jacobi
eigensolver, partial traces, concurrence, tangles, roof search); the NumPy
module in `_kernels_py` exposes the same surface and is used when the
extension is missing. Set QCORR_BACKEND=compiled or QCORR_BACKEND=python to
force a choice; `compiled` raises if the extension cannot be imported.
"""

import os

from . import _kernels_py


def _select():
    choice = os.environ.get("QCORR_BACKEND", "auto").lower()
    if choice not in ("auto", "compiled", "python"):
        raise RuntimeError(f"QCORR_BACKEND must be auto, compiled or python, not {choice!r}")
    if choice == "python":
        return _kernels_py
    try:
        from . import _kernels_cy  # noqa: PLC0415

        return _kernels_cy
    except ImportError:
        if choice == "compiled":
            raise
        return _kernels_py


kernels = _select()
