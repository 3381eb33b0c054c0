"""Statistical equivalence of preparations and of observation contexts."""

from typing import NamedTuple, Optional

import numpy as np

from .types import Behavior


class PreparationEquivalence(NamedTuple):
    equivalent: bool
    deviation: float


def equivalent_preparations(b: Behavior, w1, w2, tol: float = 1e-9) -> PreparationEquivalence:
    """Do ``w1`` and ``w2`` give the same outcome probabilities in every context?"""
    i1, i2 = b.prep_index(w1), b.prep_index(w2)
    stride = b.size // len(b.preparations)
    a = b.data[i1 * stride:(i1 + 1) * stride]
    c = b.data[i2 * stride:(i2 + 1) * stride]
    dev = float(np.max(np.abs(a - c))) if stride else 0.0
    return PreparationEquivalence(dev <= tol, dev)


def _profiles(b, e):
    """Matrix (outcomes x preparations) of P(W, E, e_j)."""
    return np.array([b.row(w, e) for w in range(len(b.preparations))]).T


def equivalent_observations(b: Behavior, e1, e2, tol: float = 1e-9) -> Optional[dict]:
    """A relabeling ``pi`` of the outcomes of ``e1`` onto those of ``e2`` with
    ``P(W, e1, o) = P(W, e2, pi(o))`` for every preparation, or ``None``.

    Outcomes are matched on their probability profile across preparations
    (sup-norm within ``tol``) by augmenting-path bipartite matching.  Outcomes
    are processed and candidates tried in declared order, so identical
    profiles are paired in ascending order.
    """
    c1 = b.contexts[b.context_index(e1)]
    c2 = b.contexts[b.context_index(e2)]
    if c1.n != c2.n:
        return None
    p1, p2 = _profiles(b, c1.name), _profiles(b, c2.name)
    compat = np.max(np.abs(p1[:, None, :] - p2[None, :, :]), axis=2) <= tol
    match_of_right = [-1] * c2.n

    def augment(i, seen):
        for k in np.flatnonzero(compat[i]):
            if seen[k]:
                continue
            seen[k] = True
            if match_of_right[k] < 0 or augment(match_of_right[k], seen):
                match_of_right[k] = i
                return True
        return False

    for i in range(c1.n):
        # free partner first: keeps tied profiles in ascending order
        free = [k for k in np.flatnonzero(compat[i]) if match_of_right[k] < 0]
        if free:
            match_of_right[free[0]] = i
        elif not augment(i, [False] * c2.n):
            return None
    pi = {}
    for k, i in enumerate(match_of_right):
        pi[c1.outcomes[i]] = c2.outcomes[k]
    return {o: pi[o] for o in c1.outcomes}


def permutation_deviation(b: Behavior, e1, e2, pi: dict) -> float:
    """``max_W,o |P(W, e1, o) - P(W, e2, pi(o))|`` for a given relabeling."""
    c1 = b.contexts[b.context_index(e1)]
    c2 = b.contexts[b.context_index(e2)]
    dev = 0.0
    for w in range(len(b.preparations)):
        r1, r2 = b.row(w, c1.name), b.row(w, c2.name)
        for o, o2 in pi.items():
            dev = max(dev, abs(r1[c1.index(o)] - r2[c2.index(o2)]))
    return float(dev)
