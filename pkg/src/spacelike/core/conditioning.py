"""Conditioning a joint behavior on a detector outcome.

For a preparation W and detector setting D, the outcome probability
``c_j = sum_i P(W, E, D, e_i, d_j)`` must not depend on the local context E.
When it doesn't, ``P(W, E, D, e_i, d_j) / c_j`` is a normalized weight over
the local contexts: the behavior of the indirectly prepared state ``W|j``.
"""

from typing import NamedTuple

import numpy as np

from ..errors import ConditioningError, ShapeError, SignalingError
from ..tolerances import TAU_SIG, TAU_ZERO
from .signaling import marginal_local, signaling_measure
from .types import Behavior, JointBehavior, Weight


class Conditioned(NamedTuple):
    probability: float
    behavior: Behavior


def conditioned_name(w, d, outcome) -> str:
    return f"{w}|{d}={outcome}"


def detector_weight(jb: JointBehavior, w, d, j) -> Weight:
    """Unnormalized weight ``E, e_i -> P(W, E, D, e_i, d_j)``."""
    wi, di = jb.prep_index(w), jb.remote_index(d)
    jj = jb.remote_contexts[di].index(j)
    return Weight(jb.local_contexts,
                  [jb.block(wi, e, di)[:, jj] for e in range(len(jb.local_contexts))])


def condition(jb: JointBehavior, w, d, j, *, tau_sig=TAU_SIG, tau_zero=TAU_ZERO) -> Conditioned:
    """Collapse preparation ``w`` onto outcome ``j`` of detector ``d``.

    Returns ``(c_j, behavior)`` where ``behavior`` has the single preparation
    ``"w|d=j"`` and one normalized row per local context.  ``c_j`` is the
    context average of the per-context totals; each row is normalized by its
    own total.

    Raises
    ------
    SignalingError
        the totals differ across local contexts by more than ``tau_sig``
    ConditioningError
        ``c_j <= tau_zero``
    """
    raw = detector_weight(jb, w, d, j)
    totals = raw.totals
    wn = jb.preparations[jb.prep_index(w)]
    dc = jb.remote_contexts[jb.remote_index(d)]
    label = dc.outcomes[dc.index(j)]
    spread = float(totals.max() - totals.min())
    if spread > tau_sig:
        raise SignalingError(
            f"P({label} | {dc.name}) for preparation {wn!r} depends on the local context "
            f"(spread {spread:.3g} > {tau_sig:g}); no context-independent conditioning exists",
            report=signaling_measure(jb))
    c = float(totals.mean())
    if c <= tau_zero or totals.min() <= tau_zero:
        raise ConditioningError(
            f"cannot condition {wn!r} on {dc.name}={label}: probability {c:.3g} <= {tau_zero:g}")
    beh = raw.normalized().as_behavior(conditioned_name(wn, dc.name, label))
    return Conditioned(c, beh)


def total_probability_check(jb: JointBehavior, w, e, d, *, tau_zero=TAU_ZERO) -> float:
    """``max_i |sum_j c_j w_(W,j)(i) - sum_j P(W,E,D,e_i,d_j)|`` for one block.

    ``c_j`` is taken per block (no no-signaling assumption); terms with
    ``c_j <= tau_zero`` contribute their raw column.
    """
    block = jb.block(w, e, d)
    c = block.sum(axis=0)
    ok = c > tau_zero
    recon = np.zeros(block.shape[0])
    for j in range(block.shape[1]):
        col = block[:, j]
        recon += c[j] * (col / c[j]) if ok[j] else col
    return float(np.max(np.abs(recon - marginal_local(jb, w, e, d))))


def total_probability_error(jb: JointBehavior, *, tau_zero=TAU_ZERO) -> float:
    """Largest :func:`total_probability_check` over every block."""
    return max(total_probability_check(jb, w, e, d, tau_zero=tau_zero)
               for (w, e, d), _ in jb.blocks())


def mixture(behaviors, weights, name="mixture") -> Behavior:
    """Convex combination of single-preparation behaviors on the same contexts."""
    behaviors = list(behaviors)
    weights = np.asarray(weights, dtype=float)
    if not behaviors or len(behaviors) != len(weights):
        raise ShapeError("need one weight per behavior")
    ctx = behaviors[0].contexts
    for b in behaviors:
        if b.contexts != ctx or len(b.preparations) != 1:
            raise ShapeError("mixture needs single-preparation behaviors on identical contexts")
    data = sum(wt * b.data for wt, b in zip(weights, behaviors))
    return Behavior([name], ctx, data)


def conditioned_family(jb: JointBehavior, w, d, *, tau_sig=TAU_SIG, tau_zero=TAU_ZERO):
    """All ``{j: (c_j, W|j)}`` for detector ``d`` with ``c_j > tau_zero``."""
    dc = jb.remote_contexts[jb.remote_index(d)]
    out = {}
    for label in dc.outcomes:
        try:
            out[label] = condition(jb, w, d, label, tau_sig=tau_sig, tau_zero=tau_zero)
        except ConditioningError:
            continue
    return out
