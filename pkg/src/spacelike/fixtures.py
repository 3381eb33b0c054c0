"""Shipped scenario files.

==========================  ==================================================
``pr_box.json``              PR box, no-signaling, marginals all 1/2
``copy_box.json``            remote outcome copies the local setting
``uniform_reference.json``   local theory with (1/2, 1/2) in both contexts
``photon_equiv.json``        three preparations of the same qubit state I/2
``singlet_setup.json``       two-qubit singlet, z/x on both sides
``mixed_qubit_setup.json``   maximally mixed two-qubit state, z/x on both sides
``qutrit_witness_setup.json`` A-then-B qutrit setup exhibiting post-conditioning
                             dependence on co-measured projectors
==========================  ==================================================
"""

import os

import numpy as np

from .core.types import Behavior, Context, JointBehavior
from .io import behavior_to_dict, setup_to_dict, write_json
from .quantum.bipartite import BipartiteSetup, SequentialSetup, local_behavior, singlet
from .quantum.rules import post_condition_witness
from .quantum.states import (DensityMatrix, ProjectiveMeasurement, partial_trace,
                             random_pure_state, random_unitary, x_basis, z_basis)

WITNESS_SEARCH_SEED = 20240611
WITNESS_MIN_DEVIATION = 0.05


def _binary(prefix, n=2):
    return [Context(f"{prefix}{k}", ("0", "1")) for k in range(n)]


def pr_box(preparation="W") -> JointBehavior:
    """``P(a, b | x, y) = 1/2`` iff ``a xor b = x y``."""
    table = [[[[[0.5 if (a ^ b) == x * y else 0.0 for b in range(2)] for a in range(2)]
               for y in range(2)] for x in range(2)]]
    return JointBehavior([preparation], _binary("x"), _binary("y"), table)


def copy_box(preparation="W") -> JointBehavior:
    """``P(a, b | x, y) = 1/2`` iff ``b = x``: local outcome uniform, remote
    outcome equal to the local setting."""
    table = [[[[[0.5 if b == x else 0.0 for b in range(2)] for a in range(2)]
               for y in range(2)] for x in range(2)]]
    return JointBehavior([preparation], _binary("x"), _binary("y"), table)


def uniform_reference(preparation="W") -> Behavior:
    return Behavior([preparation], _binary("x"), [[[0.5, 0.5], [0.5, 0.5]]])


def photon_states():
    """The three qubit preparations, each computed from its own recipe."""
    filtered = DensityMatrix.maximally_mixed(2)
    h, v = np.diag([1.0, 0.0]), np.diag([0.0, 1.0])
    polarizer = DensityMatrix((h + v) / 2)
    one_of_pair = DensityMatrix(partial_trace(singlet(), (2, 2), keep=0))
    return [filtered, polarizer, one_of_pair]


def photon_equiv() -> Behavior:
    circular = ProjectiveMeasurement.from_basis("y", np.array([[1, 1], [1j, -1j]]) / np.sqrt(2))
    meas = [z_basis(2), x_basis(2), circular]
    return local_behavior(photon_states(), meas, ["W1", "W2", "W3"])


def singlet_setup() -> BipartiteSetup:
    return BipartiteSetup(singlet(), (2, 2), [z_basis(2), x_basis(2)],
                          [z_basis(2), x_basis(2)], "singlet")


def mixed_qubit_setup() -> BipartiteSetup:
    return BipartiteSetup(DensityMatrix.maximally_mixed(4), (2, 2), [z_basis(2), x_basis(2)],
                          [z_basis(2), x_basis(2)], "mixed")


def qutrit_measurements():
    """``A`` and ``A_prime`` share ``|0><0|`` and complete it differently."""
    e = np.eye(3)
    A = ProjectiveMeasurement.from_basis("A", e)
    plus = (e[:, 1] + e[:, 2]) / np.sqrt(2)
    minus = (e[:, 1] - e[:, 2]) / np.sqrt(2)
    A_prime = ProjectiveMeasurement.from_basis("A_prime", np.column_stack([e[:, 0], plus, minus]))
    B_comm = ProjectiveMeasurement.from_basis("B_commuting", e, [[0], [1, 2]])
    return A, A_prime, B_comm


def qutrit_witness_setup(seed=WITNESS_SEARCH_SEED, threshold=WITNESS_MIN_DEVIATION):
    """Seeded search for a generic basis B and pure state making the
    post-conditioned probability of ``|0><0|`` depend on its co-measured
    projectors by more than ``threshold``.

    Returns ``(setup, witness_metadata)``.
    """
    A, A_prime, B_comm = qutrit_measurements()
    shared = A.projectors[0]
    for attempt in range(1000):
        rng = np.random.default_rng([seed, attempt])
        B = ProjectiveMeasurement.from_basis("B", random_unitary(3, rng))
        rho = random_pure_state(3, rng)
        dev = post_condition_witness(rho, B, shared, A, A_prime)
        if dev > threshold:
            setup = SequentialSetup(rho, [A, A_prime], [B, B_comm], "rho0")
            meta = {"witness": {"shared": {"measurement": "A", "outcome": "0"},
                                "first": "A", "first_alt": "A_prime",
                                "detector": "B", "control_detector": "B_commuting",
                                "search_seed": seed, "attempt": attempt,
                                "threshold": threshold}}
            return setup, meta
    raise RuntimeError("witness search failed")  # pragma: no cover


def build_all():
    """``{filename: json-ready dict}`` for every shipped fixture."""
    witness, meta = qutrit_witness_setup()
    return {
        "pr_box.json": behavior_to_dict(pr_box()),
        "copy_box.json": behavior_to_dict(copy_box()),
        "uniform_reference.json": behavior_to_dict(uniform_reference()),
        "photon_equiv.json": behavior_to_dict(photon_equiv()),
        "singlet_setup.json": setup_to_dict(singlet_setup()),
        "mixed_qubit_setup.json": setup_to_dict(mixed_qubit_setup()),
        "qutrit_witness_setup.json": setup_to_dict(witness, meta),
    }


def write_fixtures(directory):
    os.makedirs(directory, exist_ok=True)
    paths = []
    for name, data in build_all().items():
        path = os.path.join(directory, name)
        write_json(data, path)
        paths.append(path)
    return paths
