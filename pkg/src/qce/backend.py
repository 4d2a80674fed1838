"""Selection of the kernel backend: compiled extension or NumPy fallback.

The compiled Cython kernels are preferred when the extension built; the
NumPy implementations are semantically identical.  Set QCE_BACKEND=numpy
(or =compiled) to force a choice, e.g. for benchmarking.
"""

from __future__ import annotations

import os

from . import _kernels_np

_cache: dict[str, object] = {"numpy": _kernels_np}


def _load_compiled():
    if "compiled" not in _cache:
        try:
            from . import _kernels_cy

            _cache["compiled"] = _kernels_cy
        except ImportError:
            _cache["compiled"] = None
    return _cache["compiled"]


def available_backends() -> tuple[str, ...]:
    """Names of the usable backends, preferred first."""
    return ("compiled", "numpy") if _load_compiled() is not None else ("numpy",)


def get_backend(name: str | None = None):
    """Return the kernel module for ``name`` (default: env QCE_BACKEND or best)."""
    if name is None:
        name = os.environ.get("QCE_BACKEND")
    if name is None:
        compiled = _load_compiled()
        return compiled if compiled is not None else _kernels_np
    if name == "numpy":
        return _kernels_np
    if name == "compiled":
        compiled = _load_compiled()
        if compiled is None:
            raise ImportError("the compiled kernel extension is not available")
        return compiled
    raise ValueError(f"unknown backend {name!r}; expected 'compiled' or 'numpy'")
