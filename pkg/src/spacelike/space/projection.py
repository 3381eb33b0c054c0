"""Nearest no-signaling theory (Euclidean) by Dykstra's algorithm."""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .. import _kernels
from ..core.types import JointBehavior
from ..errors import ConvergenceError
from .theory import no_signaling_constraints, signaling

MAX_ITER = 10_000
MOVE_TOL = 1e-12


@dataclass(frozen=True)
class ProjectionResult:
    point: JointBehavior
    iterations: int
    residuals: np.ndarray  # sup distance between the two iterates, per sweep
    sig: float
    simplex_violation: float


@lru_cache(maxsize=64)
def _affine_projector(key):
    preps, loc, rem = key
    size = len(preps) * sum(c.n * r.n for c in loc for r in rem)
    tpl = JointBehavior(preps, loc, rem, np.zeros(size))
    A = no_signaling_constraints(tpl)
    if A.shape[0] == 0:
        M = np.eye(size)
    else:
        M = np.eye(size) - np.linalg.pinv(A) @ A
    M.setflags(write=False)
    return M


def affine_projector(P: JointBehavior) -> np.ndarray:
    """Orthogonal projector onto the no-signaling subspace for ``P``'s layout."""
    return _affine_projector((P.preparations, P.local_contexts, P.remote_contexts))


def simplex_violation(P: JointBehavior) -> float:
    """Worst block-sum error or negative entry."""
    bptr = P.block_ptr()
    if P.size == 0:
        return 0.0
    sums = np.add.reduceat(P.data, bptr[:-1])
    return float(max(np.max(np.abs(sums - 1.0)), max(0.0, -P.data.min())))


def project_no_signaling_detailed(P: JointBehavior, *, max_iter=MAX_ITER,
                                  tol=MOVE_TOL) -> ProjectionResult:
    """Alternate between the no-signaling subspace and the product of
    simplices with Dykstra corrections, until successive simplex iterates
    move less than ``tol`` (sup norm).  The returned point is the last simplex
    iterate, so it is exactly on the simplices up to rounding.

    Raises ConvergenceError after ``max_iter`` sweeps.
    """
    M = affine_projector(P)
    x, _, k, converged, residuals = _kernels.dykstra(
        P.data, M, np.zeros(P.size), P.block_ptr(), int(max_iter), float(tol))
    if not converged:
        raise ConvergenceError(
            f"Dykstra projection did not converge in {max_iter} iterations "
            f"(last residual {residuals[-1]:.3g})", residuals=residuals)
    Q = P.with_data(x)
    return ProjectionResult(Q, k, residuals, signaling(Q), simplex_violation(Q))


def project_no_signaling(P: JointBehavior, *, max_iter=MAX_ITER, tol=MOVE_TOL) -> JointBehavior:
    """Nearest point to ``P`` in the no-signaling set of its theory space."""
    return project_no_signaling_detailed(P, max_iter=max_iter, tol=tol).point
