"""Projection-rule probabilities for two successive measurements A then B."""

import numpy as np

from ..errors import ConditioningError, PreconditionError, ShapeError
from ..tolerances import TAU_QUANTUM, TAU_ZERO
from .states import DensityMatrix, ProjectiveMeasurement


def _check_dims(rho, *measurements):
    for m in measurements:
        if m.dim != rho.dim:
            raise ShapeError(f"measurement {m.name!r} acts on dimension {m.dim}, state on {rho.dim}")


def _tr(a, b):
    # Tr(a b) without forming the product
    return np.einsum("ij,ji->", a, b)


def joint_probability(rho: DensityMatrix, A: ProjectiveMeasurement,
                      B: ProjectiveMeasurement) -> np.ndarray:
    """``P(i, j) = Tr(P_i rho P_i Q_j)``: A measured first, then B.

    Rows index A's outcomes, columns B's.
    """
    _check_dims(rho, A, B)
    r = rho.matrix
    out = np.empty((len(A.projectors), len(B.projectors)))
    for i, p in enumerate(A.projectors):
        s = p @ r @ p
        for j, q in enumerate(B.projectors):
            out[i, j] = _tr(s, q).real
    return np.clip(out, 0.0, None)


def pre_condition(rho: DensityMatrix, P, *, tau_zero=TAU_ZERO):
    """``(Tr(P rho), P rho P / Tr(P rho))``.

    ``P`` is a projector matrix (or a ``(measurement, outcome)`` pair).
    """
    if isinstance(P, tuple):
        meas, outcome = P
        P = meas.projectors[meas.index(outcome)]
    P = np.asarray(P)
    if P.shape != rho.matrix.shape:
        raise ShapeError(f"projector shape {P.shape} does not match state {rho.matrix.shape}")
    prob = float(_tr(P, rho.matrix).real)
    if prob <= tau_zero:
        raise ConditioningError(f"cannot pre-condition on a projector of probability {prob:.3g}")
    s = P @ rho.matrix @ P / prob
    return prob, DensityMatrix((s + s.conj().T) / 2)


def post_condition(rho: DensityMatrix, A: ProjectiveMeasurement, B: ProjectiveMeasurement,
                   i, j, *, tau_zero=TAU_ZERO) -> float:
    """``P(i | j) = Tr(P_i rho P_i Q_j) / sum_k Tr(P_k rho P_k Q_j)``."""
    table = joint_probability(rho, A, B)
    ii, jj = A.index(i), B.index(j)
    den = table[:, jj].sum()
    if den <= tau_zero:
        raise ConditioningError(f"outcome {B.outcomes[jj]!r} of {B.name!r} has probability {den:.3g}")
    return float(table[ii, jj] / den)


def post_condition_table(rho, A, B, *, tau_zero=TAU_ZERO) -> np.ndarray:
    """All ``P(i | j)``; rows i, columns j."""
    table = joint_probability(rho, A, B)
    den = table.sum(axis=0)
    if np.any(den <= tau_zero):
        j = int(np.argmin(den))
        raise ConditioningError(f"outcome {B.outcomes[j]!r} of {B.name!r} has probability {den[j]:.3g}")
    return table / den


def _find_projector(meas, P, tol):
    for k, p in enumerate(meas.projectors):
        if p.shape == P.shape and np.max(np.abs(p - P)) <= tol:
            return k
    raise PreconditionError(f"measurement {meas.name!r} does not contain the shared projector")


def post_condition_witness(rho: DensityMatrix, B: ProjectiveMeasurement, shared,
                           A: ProjectiveMeasurement, A2: ProjectiveMeasurement,
                           *, tol=TAU_QUANTUM, tau_zero=TAU_ZERO) -> float:
    """How much ``P(shared | j)`` depends on the projectors measured alongside.

    ``A`` and ``A2`` both contain the projector ``shared``.  Returns
    ``max_j |P(shared | j; A) - P(shared | j; A2)|`` over detector outcomes j
    with non-zero probability under both.  A positive value shows that no
    single state ``rho_j`` fixed by ``rho`` and ``B`` reproduces
    post-conditioned statistics as ``Tr(P rho_j)``.
    """
    _check_dims(rho, A, A2, B)
    shared = np.asarray(shared, dtype=complex)
    k1, k2 = _find_projector(A, shared, tol), _find_projector(A2, shared, tol)
    t1, t2 = joint_probability(rho, A, B), joint_probability(rho, A2, B)
    d1, d2 = t1.sum(axis=0), t2.sum(axis=0)
    ok = (d1 > tau_zero) & (d2 > tau_zero)
    if not ok.any():
        return 0.0
    dev = np.abs(t1[k1, ok] / d1[ok] - t2[k2, ok] / d2[ok])
    return float(dev.max())
