"""Behaviors generated by density matrices and projective measurements."""

from .bipartite import (BipartiteSetup, SequentialSetup, bipartite_behavior,
                        collapsed_remote_state, local_behavior, product_probabilities,
                        reduced_state, reference_behavior, sequential_behavior, singlet)
from .rules import (joint_probability, post_condition, post_condition_table,
                    post_condition_witness, pre_condition)
from .states import (DensityMatrix, ProjectiveMeasurement, fourier_vectors, generic_basis,
                     partial_trace, random_density_matrix, random_measurement,
                     random_pure_state, random_unitary, validate_measurement, validate_state,
                     x_basis, z_basis)

__all__ = [
    "BipartiteSetup", "DensityMatrix", "ProjectiveMeasurement", "SequentialSetup",
    "bipartite_behavior", "collapsed_remote_state", "fourier_vectors", "generic_basis",
    "joint_probability", "local_behavior", "partial_trace", "post_condition",
    "post_condition_table", "post_condition_witness", "pre_condition", "product_probabilities",
    "random_density_matrix", "random_measurement", "random_pure_state", "random_unitary",
    "reduced_state", "reference_behavior", "sequential_behavior", "singlet",
    "validate_measurement", "validate_state", "x_basis", "z_basis",
]
