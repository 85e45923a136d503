"""Backend selection for the Monte Carlo kernels.

The compiled ``_kernels`` extension is used when it imports; otherwise the
pure-Python ``_kernels_py`` module is used. Setting ``STABTHERM_PURE_PYTHON=1``
forces the fallback. Both consume the uniform buffer identically.
"""

import os

from . import _kernels_py

try:
    if os.environ.get("STABTHERM_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure-Python backend requested")
    from . import _kernels as _impl

    BACKEND = "cython"
except ImportError:
    _impl = _kernels_py
    BACKEND = "python"

wolff_sample = _impl.wolff_sample
metropolis_sample = _impl.metropolis_sample


def get_backend(name: str | None = None):
    """Kernel module by name (``"cython"``, ``"python"`` or the active one)."""
    if name is None:
        return _impl
    if name == "python":
        return _kernels_py
    if name == "cython":
        from . import _kernels

        return _kernels
    raise ValueError(f"unknown backend {name!r}")
