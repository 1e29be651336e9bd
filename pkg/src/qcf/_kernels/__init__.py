"""Gate kernel backends.

The compiled Cython kernel is preferred when the extension built; otherwise the
numpy fallback is used. Set QCF_BACKEND=python or QCF_BACKEND=cython to force a
backend (the CLI bench can time both side by side).
"""
from __future__ import annotations

import os

from qcf.errors import ConfigurationError

from . import _pykernels

try:
    from . import _cykernels
except ImportError:
    _cykernels = None


def available_backends() -> tuple[str, ...]:
    return ("cython", "python") if _cykernels is not None else ("python",)


def get_backend(name: str):
    if name == "python":
        return _pykernels
    if name == "cython":
        if _cykernels is None:
            raise ConfigurationError("cython kernel extension is not built")
        return _cykernels
    raise ConfigurationError(f"unknown kernel backend {name!r}")


_requested = os.environ.get("QCF_BACKEND")
if _requested:
    active = get_backend(_requested)
else:
    active = _cykernels if _cykernels is not None else _pykernels

BACKEND_NAME: str = active.BACKEND_NAME
apply_local_inplace = active.apply_local_inplace
