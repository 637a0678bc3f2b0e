"""Backend selection for the Matsubara-term kernel.

The compiled extension is used when it imports; otherwise, or when the
environment variable ``VDW_UNIAXIAL_PURE_PYTHON`` is set to a non-empty
value other than ``0``, the numpy implementation is used.
"""
from __future__ import annotations

import os

from . import _kernels_py

_force_python = os.environ.get("VDW_UNIAXIAL_PURE_PYTHON", "") not in ("", "0")

if _force_python:
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:  # pragma: no cover - depends on build
        _impl = _kernels_py

BACKEND: str = _impl.BACKEND
lifshitz_terms = _impl.lifshitz_terms
lifshitz_terms_python = _kernels_py.lifshitz_terms


def compiled_available() -> bool:
    try:
        from . import _kernels  # noqa: F401
    except ImportError:
        return False
    return True


def compiled_lifshitz_terms():
    """The compiled kernel, or None when the extension is not built."""
    try:
        from . import _kernels
    except ImportError:
        return None
    return _kernels.lifshitz_terms
