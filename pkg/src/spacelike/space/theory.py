"""Theory space: the product of one probability simplex per
(preparation, local context, remote context) block.

Points are :class:`~spacelike.core.JointBehavior` values.  Closeness is the
weak (finite-probe, sup-norm) notion: two theories are near if finitely many
of their probabilities agree to within epsilon.
"""

import re
from dataclasses import dataclass

import numpy as np

from ..core.signaling import equality_families, max_terms, signaling_values
from ..core.types import Context, JointBehavior
from ..errors import ConstructionError, PreconditionError, ShapeError
from ..tolerances import TAU_SIG

TheoryPoint = JointBehavior


@dataclass(frozen=True)
class Structure:
    """Block shapes of a theory space.

    ``Structure.parse("2x3x2x2")`` reads preparations x local contexts x
    remote contexts x outcomes; a fifth field gives remote outcomes separately
    (``PxLxRxNxM``).
    """

    preparations: int
    local_outcomes: tuple
    remote_outcomes: tuple

    def __post_init__(self):
        if self.preparations < 1 or not self.local_outcomes or not self.remote_outcomes:
            raise ShapeError("structure needs at least one preparation and one context per side")
        if min(self.local_outcomes) < 1 or min(self.remote_outcomes) < 1:
            raise ShapeError("every context needs at least one outcome")

    @classmethod
    def parse(cls, spec: str):
        parts = re.split(r"[x×,]", spec.strip().lower())
        try:
            nums = [int(p) for p in parts]
        except ValueError:
            raise ValueError(f"bad structure {spec!r}; expected PxLxRxN or PxLxRxNxM") from None
        if len(nums) == 4:
            p, l, r, n = nums
            m = n
        elif len(nums) == 5:
            p, l, r, n, m = nums
        else:
            raise ValueError(f"bad structure {spec!r}; expected PxLxRxN or PxLxRxNxM")
        return cls(p, (n,) * l, (m,) * r)

    @classmethod
    def of(cls, jb: JointBehavior):
        return cls(len(jb.preparations), tuple(c.n for c in jb.local_contexts),
                   tuple(c.n for c in jb.remote_contexts))

    def template(self) -> JointBehavior:
        """All-zero behavior with default names ``W0.., E0.., D0..``."""
        loc = [Context.numbered(f"E{k}", n) for k, n in enumerate(self.local_outcomes)]
        rem = [Context.numbered(f"D{k}", n) for k, n in enumerate(self.remote_outcomes)]
        size = self.preparations * sum(a * b for a in self.local_outcomes for b in self.remote_outcomes)
        return JointBehavior([f"W{k}" for k in range(self.preparations)], loc, rem, np.zeros(size))

    def __str__(self):
        lo, ro = set(self.local_outcomes), set(self.remote_outcomes)
        if len(lo) == 1 and len(ro) == 1:
            n, m = lo.pop(), ro.pop()
            tail = f"{n}" if n == m else f"{n}x{m}"
            return f"{self.preparations}x{len(self.local_outcomes)}x{len(self.remote_outcomes)}x{tail}"
        return f"Structure({self.preparations}, {self.local_outcomes}, {self.remote_outcomes})"


def _template(structure):
    if isinstance(structure, JointBehavior):
        return structure
    if isinstance(structure, str):
        structure = Structure.parse(structure)
    return structure.template()


def sample_flat(rng, bptr, count=None) -> np.ndarray:
    """Uniform points of the product of simplices as flat vectors.

    Each block is a flat-Dirichlet draw, realized as normalized standard
    exponentials.
    """
    n = int(bptr[-1])
    shape = (n,) if count is None else (count, n)
    x = rng.standard_exponential(shape)
    sums = np.add.reduceat(x, bptr[:-1], axis=-1)
    return x / np.repeat(sums, np.diff(bptr), axis=-1)


def sample_theory(structure, seed) -> JointBehavior:
    """One uniform theory; ``structure`` is a Structure, a ``"PxLxRxN"``
    string or a behavior whose layout is reused.  Deterministic per seed."""
    tpl = _template(structure)
    return tpl.with_data(sample_flat(np.random.default_rng(seed), tpl.block_ptr()))


@dataclass(frozen=True)
class WeakProbe:
    """Finitely many preparations and (local, remote) context pairs, and a radius."""

    preparations: tuple
    context_pairs: tuple
    eps: float

    def __post_init__(self):
        object.__setattr__(self, "preparations", tuple(self.preparations))
        object.__setattr__(self, "context_pairs", tuple(tuple(p) for p in self.context_pairs))
        if not self.preparations or not self.context_pairs:
            raise ValueError("a weak probe needs at least one preparation and one context pair")
        if not self.eps > 0:
            raise ValueError("probe radius must be positive")

    @classmethod
    def full(cls, jb: JointBehavior, eps: float):
        pairs = [(e.name, d.name) for e in jb.local_contexts for d in jb.remote_contexts]
        return cls(jb.preparations, pairs, eps)

    def contains(self, P, Q) -> bool:
        """Is ``Q`` in the probe neighbourhood of ``P``?"""
        return weak_distance(P, Q, self) < self.eps


def weak_distance(P: JointBehavior, Q: JointBehavior, probe: WeakProbe) -> float:
    """Sup over the probed blocks of ``|P - Q|``."""
    if not P.same_structure(Q):
        raise ShapeError("theories have different structures")
    dist = 0.0
    for w in probe.preparations:
        for e, d in probe.context_pairs:
            dist = max(dist, float(np.max(np.abs(P.block(w, e, d) - Q.block(w, e, d)))))
    return dist


def sup_distance(P: JointBehavior, Q: JointBehavior) -> float:
    if not P.same_structure(Q):
        raise ShapeError("theories have different structures")
    return float(np.max(np.abs(P.data - Q.data))) if P.size else 0.0


def signaling(P: JointBehavior) -> float:
    """``max(sig_to_remote, sig_to_local)`` without a reference theory."""
    r, l = signaling_values(P)
    return float(max(r[0], l[0]))


def perturb_flat(x, bptr, eps, rng, count=1, on_sphere=False) -> np.ndarray:
    """``count`` random perturbations of flat point ``x`` (rows of the result).

    The direction is a Gaussian projected onto the blocks' zero-sum tangent
    space, scaled to sup-norm ``eps`` (times a uniform factor unless
    ``on_sphere``), then shortened per block where needed so every entry stays
    non-negative.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    sizes = np.diff(bptr)
    if eps == 0 or n == 0:
        return np.tile(x, (count, 1))
    d = rng.standard_normal((count, n))
    d -= np.repeat(np.add.reduceat(d, bptr[:-1], axis=1) / sizes, sizes, axis=1)
    peak = np.max(np.abs(d), axis=1)
    scale = np.divide(eps, peak, out=np.zeros(count), where=peak > 0)
    if not on_sphere:
        scale *= rng.uniform(size=count)
    d *= scale[:, None]
    # largest step t <= 1 keeping x + t d >= 0, per block
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(d < 0, x[None, :] / -d, np.inf)
    t = np.minimum(np.minimum.reduceat(ratio, bptr[:-1], axis=1), 1.0)
    q = np.maximum(x[None, :] + np.repeat(t, sizes, axis=1) * d, 0.0)
    return _into_ball(q, x, eps)


def _into_ball(q, x, eps):
    # rounding in x + d can overshoot eps by an ulp; step those entries back
    while True:
        bad = np.abs(q - x) > eps
        if not bad.any():
            return q
        xb = np.broadcast_to(x, q.shape)[bad]
        q[bad] = np.nextafter(q[bad], xb)


def perturb_in_ball(P: JointBehavior, eps: float, seed, *, on_sphere=False) -> JointBehavior:
    """Random theory within sup-distance ``eps`` of ``P``.

    With ``on_sphere`` the displacement has sup-norm exactly ``eps`` unless a
    block boundary forces it shorter.
    """
    if eps < 0:
        raise ValueError("eps must be non-negative")
    q = perturb_flat(P.data, P.block_ptr(), eps, np.random.default_rng(seed), 1, on_sphere)[0]
    return P.with_data(q)


def _move(x, eps, src, dst):
    """Shift mass from entry ``src`` to ``dst`` keeping ``|dx| <= eps`` in floats."""
    amount = min(eps, x[src])
    while True:
        q = x.copy()
        q[src] = x[src] - amount
        q[dst] = x[dst] + amount
        if np.max(np.abs(q - x)) <= eps and q[src] >= 0:
            return q, amount
        amount = np.nextafter(amount, 0.0)


def _candidate_moves(P, direction):
    """Yield ``(available_mass, src, dst)`` per block, in block order."""
    p, l, r = P.shape
    for (w, e, d), block in P.blocks():
        n, m = block.shape
        base = P.offset(w, e, d)
        if direction == "to_remote" and l > 1 and m > 1:
            # same local outcome, different detector outcome: the detector
            # marginal of this block changes while its sibling blocks do not
            i, j = np.unravel_index(int(np.argmax(block)), block.shape)
            yield block[i, j], base + i * m + j, base + i * m + (j + 1) % m
        elif direction == "to_local" and r > 1 and n > 1:
            i, j = np.unravel_index(int(np.argmax(block)), block.shape)
            yield block[i, j], base + i * m + j, base + ((i + 1) % n) * m + j


def construct_signaling_perturbation(P: JointBehavior, eps: float, *, direction="to_remote",
                                     tau_sig=TAU_SIG) -> JointBehavior:
    """A signaling theory within sup-distance ``eps`` of the no-signaling ``P``.

    Moves mass ``eps' <= eps`` between two entries of one block so that one
    block's marginal changes while its siblings keep theirs.  ``direction``
    selects which equalities are broken: ``"to_remote"`` (detector statistics
    now depend on the local context), ``"to_local"``, or ``"any"`` (try
    ``to_remote`` first).  The first block with at least ``eps`` of movable
    mass is used; failing that, the block with the most.
    """
    if not eps > 0:
        raise PreconditionError("eps must be positive")
    sig = signaling(P)
    if sig > tau_sig:
        raise PreconditionError(f"theory already signals (sig = {sig:.3g} > {tau_sig:g})")
    directions = ["to_remote", "to_local"] if direction == "any" else [direction]
    if not set(directions) <= {"to_remote", "to_local"}:
        raise ValueError(f"unknown direction {direction!r}")
    x = P.data
    for dirn in directions:
        best = None
        for mass, src, dst in _candidate_moves(P, dirn):
            if mass >= eps:
                best = (mass, src, dst)
                break
            if mass > 0 and (best is None or mass > best[0]):
                best = (mass, src, dst)
        if best is None:
            continue
        q, _ = _move(x, eps, best[1], best[2])
        Q = P.with_data(q)
        r, l = signaling_values(Q)
        if (r[0] if dirn == "to_remote" else l[0]) > 0:
            return Q
    raise ConstructionError("no feasible signaling perturbation: the structure has no "
                            f"breakable no-signaling equality in direction {direction!r}")


def openness_radius(P: JointBehavior) -> float:
    """``sig(P) / (2 N_max)``: every Q closer than this (sup norm) still signals."""
    n = max_terms(P)
    if n == 0:
        return 0.0
    return signaling(P) / (2 * n)


def lipschitz_constant(P: JointBehavior) -> int:
    """``2 N_max``: ``|sig(P) - sig(Q)| <= 2 N_max sup|P - Q|``."""
    return 2 * max_terms(P)


def no_signaling_constraints(P: JointBehavior) -> np.ndarray:
    """Matrix ``A`` of the homogeneous no-signaling equalities ``A x = 0``."""
    fam_r, fam_l = equality_families(P)
    return np.vstack([fam_r.constraint_matrix(P.size), fam_l.constraint_matrix(P.size)])
