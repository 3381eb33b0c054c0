"""Numerical tolerances.

Defaults can be overridden through environment variables, read once at import:

``SPACELIKE_TAU_NORM``
    normalization / non-negativity tolerance (default 1e-9)
``SPACELIKE_TAU_SIG``
    tolerance on the no-signaling equalities (default 1e-9)
``SPACELIKE_TAU_ZERO``
    smallest probability one may condition on (default 1e-12)
``SPACELIKE_TAU_QUANTUM``
    Hermiticity / idempotence / trace tolerance for quantum objects (default 1e-10)
"""

import os


def _env_float(name, default):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        value = float(raw)
    except ValueError:
        raise ValueError(f"environment variable {name}={raw!r} is not a number") from None
    if not value >= 0:
        raise ValueError(f"environment variable {name} must be non-negative")
    return value


TAU_NORM = _env_float("SPACELIKE_TAU_NORM", 1e-9)
TAU_SIG = _env_float("SPACELIKE_TAU_SIG", 1e-9)
TAU_ZERO = _env_float("SPACELIKE_TAU_ZERO", 1e-12)
TAU_QUANTUM = _env_float("SPACELIKE_TAU_QUANTUM", 1e-10)
