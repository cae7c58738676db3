"""Quadrature-kernel backend selection.

The compiled extension ``_core`` and the pure-Python module ``_ref``
implement the same functions with the same algorithm; the compiled one is
preferred when it imported successfully.  Set ``ZML_KERNELS=python`` (or
``cython``) to force a backend; forcing ``cython`` when the extension is
missing raises at import time rather than silently degrading.
"""

import os

from . import _ref

KIND_BOX = _ref.KIND_BOX
KIND_TRUNC_GAUSS = _ref.KIND_TRUNC_GAUSS
KIND_BUMP = _ref.KIND_BUMP
KIND_PW_LINEAR = _ref.KIND_PW_LINEAR

try:
    from . import _core
except ImportError:
    _core = None

_choice = os.environ.get("ZML_KERNELS", "auto").lower()
if _choice not in ("auto", "cython", "python"):
    raise ImportError(f"ZML_KERNELS must be auto, cython or python, got {_choice!r}")
if _choice == "cython" and _core is None:
    raise ImportError("ZML_KERNELS=cython but the compiled extension is not available")

_impl = _ref if _choice == "python" or _core is None else _core

BACKEND = _impl.BACKEND

eval_field = _impl.eval_field
field_values = _impl.field_values
integrate_field = _impl.integrate_field
integrate_radial_moment = _impl.integrate_radial_moment
convolve_abs = _impl.convolve_abs
convolve_sign = _impl.convolve_sign
convolve_log_radial = _impl.convolve_log_radial


def available_backends():
    """Names of the kernel backends importable in this installation."""
    return ("python",) if _core is None else ("cython", "python")


def get_backend(name):
    """Return a specific backend module ('cython' or 'python')."""
    if name == "python":
        return _ref
    if name == "cython":
        if _core is None:
            raise ImportError("compiled kernel backend is not available")
        return _core
    raise ValueError(f"unknown backend {name!r}")
