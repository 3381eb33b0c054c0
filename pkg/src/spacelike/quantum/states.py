"""Density matrices, projective measurements, and the standard bases used as
fixtures."""

from dataclasses import dataclass

import numpy as np

from ..core.types import Context, Violation
from ..errors import ShapeError
from ..tolerances import TAU_QUANTUM


def _readonly(m):
    m = np.array(m, dtype=complex)
    m.setflags(write=False)
    return m


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A d x d complex matrix meant to be Hermitian, unit-trace and PSD.

    Nothing is checked here; see :func:`validate_state`.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = _readonly(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ShapeError(f"density matrix must be square, got shape {m.shape}")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def pure(cls, psi):
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))

    @classmethod
    def maximally_mixed(cls, d):
        return cls(np.eye(d) / d)

    def expectation(self, op) -> float:
        return float(np.real(np.trace(np.asarray(op) @ self.matrix)))

    def tensor(self, other):
        return DensityMatrix(np.kron(self.matrix, other.matrix))


@dataclass(frozen=True, eq=False)
class ProjectiveMeasurement:
    """Named list of orthogonal projectors summing to the identity.

    ``outcomes`` defaults to ``"0", "1", ...``.
    """

    name: str
    projectors: tuple
    outcomes: tuple = None

    def __post_init__(self):
        projs = tuple(_readonly(p) for p in self.projectors)
        if not projs:
            raise ShapeError(f"measurement {self.name!r} has no projectors")
        d = projs[0].shape
        if any(p.ndim != 2 or p.shape != d or d[0] != d[1] for p in projs):
            raise ShapeError(f"measurement {self.name!r}: projectors must be square and equal-sized")
        outcomes = self.outcomes
        if outcomes is None:
            outcomes = tuple(str(k) for k in range(len(projs)))
        if len(outcomes) != len(projs):
            raise ShapeError(f"measurement {self.name!r}: {len(outcomes)} labels for {len(projs)} projectors")
        object.__setattr__(self, "name", str(self.name))
        object.__setattr__(self, "projectors", projs)
        object.__setattr__(self, "outcomes", tuple(str(o) for o in outcomes))

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]

    @property
    def context(self) -> Context:
        return Context(self.name, self.outcomes)

    def index(self, outcome) -> int:
        return self.context.index(outcome)

    def stacked(self) -> np.ndarray:
        return np.array(self.projectors)

    def lifted(self, left=1, right=1):
        """The same measurement acting on ``C^left (x) C^d (x) C^right``."""
        return ProjectiveMeasurement(
            self.name, [np.kron(np.kron(np.eye(left), p), np.eye(right)) for p in self.projectors],
            self.outcomes)

    @classmethod
    def from_basis(cls, name, vectors, groups=None, outcomes=None):
        """Projectors onto orthonormal ``vectors`` (columns), optionally
        coarse-grained: ``groups`` lists the vector indices of each outcome."""
        vectors = np.asarray(vectors, dtype=complex)
        d = vectors.shape[0]
        if groups is None:
            groups = [[k] for k in range(vectors.shape[1])]
        projs = []
        for g in groups:
            v = vectors[:, list(g)]
            projs.append(v @ v.conj().T if len(g) else np.zeros((d, d)))
        return cls(name, projs, outcomes)


def validate_state(rho: DensityMatrix, tol: float = TAU_QUANTUM):
    """Hermiticity, trace and positivity violations of ``rho``."""
    m = rho.matrix
    out = []
    herm = float(np.max(np.abs(m - m.conj().T)))
    if herm > tol:
        out.append(Violation("hermiticity", (), herm))
    tr = abs(complex(np.trace(m)) - 1.0)
    if tr > tol:
        out.append(Violation("trace", (), float(tr)))
    lam = float(np.linalg.eigvalsh((m + m.conj().T) / 2).min())
    if lam < -tol:
        out.append(Violation("positivity", (), -lam))
    return out


def validate_measurement(meas: ProjectiveMeasurement, tol: float = TAU_QUANTUM):
    """Idempotence, Hermiticity, orthogonality and completeness violations."""
    out = []
    P = meas.projectors
    for k, p in enumerate(P):
        label = meas.outcomes[k]
        v = float(np.max(np.abs(p @ p - p)))
        if v > tol:
            out.append(Violation("idempotence", (meas.name, label), v))
        v = float(np.max(np.abs(p - p.conj().T)))
        if v > tol:
            out.append(Violation("hermiticity", (meas.name, label), v))
    for a in range(len(P)):
        for b in range(a + 1, len(P)):
            v = float(np.max(np.abs(P[a] @ P[b])))
            if v > tol:
                out.append(Violation("orthogonality", (meas.name, meas.outcomes[a], meas.outcomes[b]), v))
    v = float(np.max(np.abs(sum(P) - np.eye(meas.dim))))
    if v > tol:
        out.append(Violation("completeness", (meas.name,), v))
    return out


def partial_trace(rho, dims, keep=0) -> np.ndarray:
    """Trace out every factor of ``C^dims[0] (x) C^dims[1]`` except ``keep``."""
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    da, db = dims
    if m.shape != (da * db, da * db):
        raise ShapeError(f"matrix of shape {m.shape} does not factor as {da} x {db}")
    r = m.reshape(da, db, da, db)
    if keep == 0:
        return np.einsum("ajbj->ab", r)
    return np.einsum("iaib->ab", r)


# -- bases ------------------------------------------------------------------

def z_basis(d=2, name="z"):
    return ProjectiveMeasurement.from_basis(name, np.eye(d))


def fourier_vectors(d):
    k = np.arange(d)
    return np.exp(2j * np.pi * np.outer(k, k) / d) / np.sqrt(d)


def x_basis(d=2, name="x"):
    """Fourier basis; for d = 2 the usual ``|+>, |->``."""
    return ProjectiveMeasurement.from_basis(name, fourier_vectors(d))


def random_unitary(d, rng) -> np.ndarray:
    """Haar-random unitary (QR of a Ginibre matrix with phase correction)."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def generic_basis(d=2, seed=0, name="g"):
    return ProjectiveMeasurement.from_basis(name, random_unitary(d, np.random.default_rng(seed)))


def random_density_matrix(d, rng, rank=None) -> DensityMatrix:
    rank = d if rank is None else rank
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def random_pure_state(d, rng) -> DensityMatrix:
    return DensityMatrix.pure(rng.standard_normal(d) + 1j * rng.standard_normal(d))


def random_measurement(d, rng, name, n_outcomes=None) -> ProjectiveMeasurement:
    """Haar-random basis coarse-grained into ``n_outcomes`` non-empty groups."""
    n = d if n_outcomes is None else n_outcomes
    if not 1 <= n <= d:
        raise ValueError(f"need 1 <= n_outcomes <= {d}")
    order = rng.permutation(d)
    cuts = np.sort(rng.choice(np.arange(1, d), size=n - 1, replace=False)) if n > 1 else []
    groups = [g.tolist() for g in np.split(order, cuts)]
    return ProjectiveMeasurement.from_basis(name, random_unitary(d, rng), groups)
