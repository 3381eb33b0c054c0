"""Behaviors generated by quantum states.

:class:`BipartiteSetup` describes space-like separated measurements on
``C^d_A (x) C^d_B`` (local factor first); :class:`SequentialSetup` describes
two successive measurements on one system, A before B.
"""

from dataclasses import dataclass

import numpy as np

from ..core.types import Behavior, JointBehavior
from ..errors import ConditioningError, InvalidInputError, ShapeError, UnknownIndexError
from ..tolerances import TAU_ZERO
from .rules import joint_probability
from .states import (DensityMatrix, ProjectiveMeasurement, partial_trace, validate_measurement,
                     validate_state)


def _validated(state, measurements, dims_ok, what):
    problems = list(validate_state(state))
    for m in measurements:
        problems.extend(validate_measurement(m))
    if problems:
        raise InvalidInputError(f"invalid {what}: " + "; ".join(
            f"{v.kind} {list(v.index)} ({v.magnitude:.3g})" for v in problems), problems)
    if not dims_ok:
        raise ShapeError(f"inconsistent dimensions in {what}")


@dataclass(frozen=True, eq=False)
class BipartiteSetup:
    state: DensityMatrix
    dims: tuple
    local_measurements: tuple
    remote_measurements: tuple
    preparation: str = "rho"

    def __post_init__(self):
        da, db = (int(x) for x in self.dims)
        object.__setattr__(self, "dims", (da, db))
        object.__setattr__(self, "local_measurements", tuple(self.local_measurements))
        object.__setattr__(self, "remote_measurements", tuple(self.remote_measurements))
        if self.state.dim != da * db:
            raise ShapeError(f"state dimension {self.state.dim} != {da} x {db}")
        ok = (all(m.dim == da for m in self.local_measurements)
              and all(m.dim == db for m in self.remote_measurements))
        _validated(self.state, self.local_measurements + self.remote_measurements, ok,
                   "bipartite setup")
        for side in (self.local_measurements, self.remote_measurements):
            names = [m.name for m in side]
            if len(set(names)) != len(names):
                raise ShapeError("duplicate measurement names")

    def local(self, name) -> ProjectiveMeasurement:
        return _by_name(self.local_measurements, name, "local")

    def remote(self, name) -> ProjectiveMeasurement:
        return _by_name(self.remote_measurements, name, "remote")


@dataclass(frozen=True, eq=False)
class SequentialSetup:
    state: DensityMatrix
    first_measurements: tuple
    second_measurements: tuple
    preparation: str = "rho"

    def __post_init__(self):
        object.__setattr__(self, "first_measurements", tuple(self.first_measurements))
        object.__setattr__(self, "second_measurements", tuple(self.second_measurements))
        d = self.state.dim
        ok = all(m.dim == d for m in self.first_measurements + self.second_measurements)
        _validated(self.state, self.first_measurements + self.second_measurements, ok,
                   "sequential setup")

    def first(self, name):
        return _by_name(self.first_measurements, name, "first")

    def second(self, name):
        return _by_name(self.second_measurements, name, "second")


def _by_name(measurements, name, side):
    if isinstance(name, int):
        return measurements[name]
    for m in measurements:
        if m.name == name:
            return m
    raise UnknownIndexError(f"unknown {side} measurement: {name!r}")


def product_probabilities(state: DensityMatrix, dims, A: ProjectiveMeasurement,
                          B: ProjectiveMeasurement) -> np.ndarray:
    """``Tr((P_i (x) Q_j) rho)`` for all i, j."""
    da, db = dims
    r = state.matrix.reshape(da, db, da, db)
    t = np.einsum("ixy,juv,yvxu->ij", A.stacked(), B.stacked(), r).real
    return np.clip(t, 0.0, None)


def bipartite_behavior(setup: BipartiteSetup) -> JointBehavior:
    """Joint behavior of local and remote measurements on the shared state."""
    table = [[[product_probabilities(setup.state, setup.dims, A, B)
               for B in setup.remote_measurements] for A in setup.local_measurements]]
    return JointBehavior([setup.preparation],
                         [m.context for m in setup.local_measurements],
                         [m.context for m in setup.remote_measurements], table)


def sequential_behavior(setup: SequentialSetup) -> JointBehavior:
    """Joint behavior of A followed by B; the "remote" region is B's."""
    table = [[[joint_probability(setup.state, A, B) for B in setup.second_measurements]
              for A in setup.first_measurements]]
    return JointBehavior([setup.preparation],
                         [m.context for m in setup.first_measurements],
                         [m.context for m in setup.second_measurements], table)


def local_behavior(states, measurements, preparations=None) -> Behavior:
    """Single-region behavior ``Tr(P_i rho)`` for each state and measurement."""
    if isinstance(states, DensityMatrix):
        states = [states]
    if preparations is None:
        preparations = [f"rho{k}" for k in range(len(states))] if len(states) > 1 else ["rho"]
    table = [[np.clip([s.expectation(p) for p in m.projectors], 0.0, None) for m in measurements]
             for s in states]
    return Behavior(preparations, [m.context for m in measurements], table)


def reduced_state(setup: BipartiteSetup, keep=0) -> DensityMatrix:
    return DensityMatrix(partial_trace(setup.state, setup.dims, keep))


def reference_behavior(setup: BipartiteSetup) -> Behavior:
    """The local theory: the reduced state measured by the local measurements."""
    return local_behavior(reduced_state(setup), setup.local_measurements, [setup.preparation])


def collapsed_remote_state(setup: BipartiteSetup, d, j, *, tau_zero=TAU_ZERO):
    """``(c_j, rho_A|j)`` after the remote detector ``d`` reports outcome ``j``.

    ``rho_A|j = Tr_B[(I (x) Q_j) rho (I (x) Q_j)] / c_j`` with
    ``c_j = Tr((I (x) Q_j) rho)``.
    """
    meas = setup.remote(d)
    da, db = setup.dims
    Q = np.kron(np.eye(da), meas.projectors[meas.index(j)])
    c = float(np.trace(Q @ setup.state.matrix).real)
    if c <= tau_zero:
        raise ConditioningError(f"remote outcome {j!r} of {meas.name!r} has probability {c:.3g}")
    s = partial_trace(Q @ setup.state.matrix @ Q, setup.dims, keep=0) / c
    return c, DensityMatrix((s + s.conj().T) / 2)


def singlet() -> DensityMatrix:
    """Two-qubit singlet ``(|01> - |10>)/sqrt 2``."""
    psi = np.zeros(4, dtype=complex)
    psi[1], psi[2] = 1, -1
    return DensityMatrix.pure(psi)
