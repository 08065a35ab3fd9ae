"""Backend selection for the hot eigensolver kernel.

The compiled Cython kernel is preferred; the numpy implementation is the
fallback.  ``SEMIFRAME_PURE_PYTHON=1`` forces the fallback (useful for the
benchmark and for debugging).
"""

import os

from . import jacobi_py as _py

try:
    from . import _jacobi as _compiled
except ImportError:  # extension not built on this install
    _compiled = None

if _compiled is not None and not os.environ.get("SEMIFRAME_PURE_PYTHON"):
    _impl = _compiled
else:
    _impl = _py

cyclic_jacobi = _impl.cyclic_jacobi


def backend_name():
    return _impl.BACKEND


def available_backends():
    backends = {"python": _py.cyclic_jacobi}
    if _compiled is not None:
        backends["compiled"] = _compiled.cyclic_jacobi
    return backends
