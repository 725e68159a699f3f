"""Selects the trial-counting backend: compiled extension or numpy fallback.

The default is resolved once at import: the compiled kernels when the
extension built, otherwise the numpy reference implementation. Override with
the ``NOMA_RELAY_ENGINE`` environment variable (``compiled`` / ``python``)
or per call via the ``engine`` argument of :func:`get_kernel`. Both backends
produce identical counts from identical inputs.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

HAVE_COMPILED = _compiled is not None

_ENGINES = ("auto", "compiled", "python")


def get_kernel(engine: str | None = None) -> ModuleType:
    """Return the kernel module for the requested engine name."""
    if engine is None:
        engine = os.environ.get("NOMA_RELAY_ENGINE", "auto")
    if engine not in _ENGINES:
        raise ValueError(f"engine must be one of {_ENGINES}, got {engine!r}")
    if engine == "python":
        return _kernels_py
    if engine == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        return _compiled
    return _compiled if _compiled is not None else _kernels_py


def engine_name(engine: str | None = None) -> str:
    """Resolved backend name, ``compiled`` or ``python``."""
    return "compiled" if get_kernel(engine) is _compiled and _compiled else "python"
