"""Hot kernels, compiled when possible.

The Cython extension ``_ckernels`` is imported if it was built; otherwise the
numpy implementation in ``_pykernels`` is used.  Set ``SPACELIKE_PURE_PYTHON=1``
to force the fallback.  ``BACKEND`` names the active implementation.
"""

import os

from . import _pykernels as python_backend

if os.environ.get("SPACELIKE_PURE_PYTHON", "") not in ("", "0"):
    _impl = python_backend
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = python_backend

BACKEND = "python" if _impl is python_backend else "cython"

marginals = _impl.marginals
family_spread = _impl.family_spread
family_spread_batch = _impl.family_spread_batch
project_simplex_blocks = _impl.project_simplex_blocks
dykstra = _impl.dykstra


def compiled_backend():
    """The compiled module, or ``None`` if the extension is not built."""
    try:
        from . import _ckernels
    except ImportError:
        return None
    return _ckernels
