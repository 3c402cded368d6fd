"""Kernel backend selection.

Prefers the compiled extension, falling back to the numpy implementation.
AGREEKIT_BACKEND=python|c forces a choice ("c" raises if unavailable, so CI
can assert the extension actually built).
"""

from __future__ import annotations

import os

from . import _pykernels

_choice = os.environ.get("AGREEKIT_BACKEND", "auto").lower()

if _choice not in ("auto", "c", "python"):
    raise RuntimeError(
        f"AGREEKIT_BACKEND={_choice!r}: expected 'auto', 'c', or 'python'"
    )

if _choice == "python":
    kernels = _pykernels
else:
    try:
        from . import _ckernels as kernels  # type: ignore[no-redef]
    except ImportError:
        if _choice == "c":
            raise RuntimeError(
                "AGREEKIT_BACKEND=c but the compiled extension is not available"
            ) from None
        kernels = _pykernels

BACKEND = kernels.NAME

label_counts = kernels.label_counts
pair_confusion = kernels.pair_confusion
coincidence_from_counts = kernels.coincidence_from_counts


def backend_info() -> dict:
    """Name and origin of the active kernel backend."""
    return {"name": BACKEND, "module": kernels.__name__}
