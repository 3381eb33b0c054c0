"""Finite two-region statistical theories.

* :mod:`spacelike.core` -- behaviors, marginals, signaling measures,
  conditioning (collapse), statistical equivalence, extension diagnosis
* :mod:`spacelike.quantum` -- behaviors from density matrices and projective
  measurements
* :mod:`spacelike.space` -- the product-of-simplices theory space and the
  open/dense experiments
"""

from ._kernels import BACKEND
from .core import (Behavior, Context, JointBehavior, SignalingReport, Verdict, Weight,
                   condition, diagnose_extension, equivalent_observations,
                   equivalent_preparations, marginal_local, marginal_remote,
                   signaling_measure, total_probability_check, validate)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "Behavior", "Context", "JointBehavior", "SignalingReport", "Verdict", "Weight",
    "condition", "diagnose_extension", "equivalent_observations", "equivalent_preparations",
    "marginal_local", "marginal_remote", "signaling_measure", "total_probability_check",
    "validate",
]
