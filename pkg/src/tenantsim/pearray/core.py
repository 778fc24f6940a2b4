"""Kernel backend selection: compiled extension if available, numpy otherwise.

Set TENANTSIM_BACKEND=python or TENANTSIM_BACKEND=cython to force one.
"""

from __future__ import annotations

import os

from . import _core_py

_forced = os.environ.get("TENANTSIM_BACKEND", "").strip().lower()

if _forced == "python":
    _impl = _core_py
elif _forced == "cython":
    from . import _core_cy as _impl  # type: ignore[no-redef]
else:
    try:
        from . import _core_cy as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _core_py

BACKEND_NAME: str = _impl.BACKEND_NAME
simulate = _impl.simulate


def available_backends() -> list[str]:
    names = ["python"]
    try:
        from . import _core_cy  # noqa: F401
        names.append("cython")
    except ImportError:
        pass
    return names
