"""Kernel selection: compiled extension when available, pure Python otherwise.

Override with the SGDAVG_KERNEL environment variable ("compiled" or
"python"), or per call via the `backend` argument the solvers accept.
Both kernels produce bit-identical iterates by construction.
"""

from __future__ import annotations

import os

_ALIASES = {
    "c": "compiled",
    "compiled": "compiled",
    "py": "python",
    "python": "python",
}


def _resolve(name: str | None) -> str | None:
    if name is None:
        name = os.environ.get("SGDAVG_KERNEL", "").strip().lower() or None
    if name is None or name == "auto":
        return None
    try:
        return _ALIASES[name.lower()]
    except KeyError:
        raise ValueError(f"unknown kernel backend: {name}") from None


def get_kernel(name: str | None = None):
    """Return the kernel module; auto-selection prefers the extension."""
    choice = _resolve(name)
    if choice == "python":
        from . import _kernel_py

        return _kernel_py
    if choice == "compiled":
        from . import _kernel_c

        return _kernel_c
    try:
        from . import _kernel_c

        return _kernel_c
    except ImportError:
        from . import _kernel_py

        return _kernel_py


def backend_name(name: str | None = None) -> str:
    return "compiled" if get_kernel(name).__name__.endswith("_c") else "python"
