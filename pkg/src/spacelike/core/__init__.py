"""Finite behaviors, marginals, signaling measures, conditioning, equivalence
and the classification of two-region extensions."""

from .conditioning import (Conditioned, condition, conditioned_family, detector_weight,
                           mixture, total_probability_check, total_probability_error)
from .diagnosis import ExtensionDiagnosis, Verdict, diagnose_extension
from .equivalence import (PreparationEquivalence, equivalent_observations,
                          equivalent_preparations, permutation_deviation)
from .signaling import (EqualityFamily, SignalingReport, equality_families, evaluate_witness,
                        local_marginal_behavior, marginal_local, marginal_remote, max_terms,
                        reference_deviation, remote_marginal_behavior, signaling_measure,
                        signaling_values)
from .types import Behavior, Context, JointBehavior, Violation, Weight, validate

__all__ = [
    "Behavior", "Conditioned", "Context", "EqualityFamily", "ExtensionDiagnosis",
    "JointBehavior", "PreparationEquivalence", "SignalingReport", "Verdict", "Violation",
    "Weight", "condition", "conditioned_family", "detector_weight", "diagnose_extension",
    "equality_families", "equivalent_observations", "equivalent_preparations",
    "evaluate_witness", "local_marginal_behavior", "marginal_local", "marginal_remote",
    "max_terms", "mixture", "permutation_deviation", "reference_deviation",
    "remote_marginal_behavior", "signaling_measure", "signaling_values",
    "total_probability_check", "total_probability_error", "validate",
]
