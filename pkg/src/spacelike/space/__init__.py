"""Theory space: sampling, weak distance, perturbations, projection onto the
no-signaling set, and the open/dense stability experiment."""

from .projection import (ProjectionResult, affine_projector, project_no_signaling,
                         project_no_signaling_detailed, simplex_violation)
from .stability import StabilityResult, density_check, openness_check, stability_experiment
from .theory import (Structure, TheoryPoint, WeakProbe, construct_signaling_perturbation,
                     lipschitz_constant, no_signaling_constraints, openness_radius,
                     perturb_flat, perturb_in_ball, sample_flat, sample_theory, signaling,
                     sup_distance, weak_distance)

__all__ = [
    "ProjectionResult", "StabilityResult", "Structure", "TheoryPoint", "WeakProbe",
    "affine_projector", "construct_signaling_perturbation", "density_check",
    "lipschitz_constant", "no_signaling_constraints", "openness_check", "openness_radius",
    "perturb_flat", "perturb_in_ball", "project_no_signaling", "project_no_signaling_detailed",
    "sample_flat", "sample_theory", "signaling", "simplex_violation", "stability_experiment",
    "sup_distance", "weak_distance",
]
