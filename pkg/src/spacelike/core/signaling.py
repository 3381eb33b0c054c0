"""Marginals and the sup-norm signaling measure of a joint behavior.

The no-signaling conditions are groups of marginal sums that must coincide:

* towards the remote region: for fixed (W, D, d_j) the remote marginal
  ``sum_i P(W, E, D, e_i, d_j)`` must not depend on the local context E;
* towards the local region: for fixed (W, E, e_i) the local marginal
  ``sum_j P(W, E, D, e_i, d_j)`` must not depend on the detector setting D,
  and, when a single-region reference theory is supplied, must equal
  ``P(W, E, e_i)``.

:class:`EqualityFamily` is the generic form (any set of "these sums must be
equal" groups); the two families above are built from a behavior's layout
and cached per structure.
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .. import _kernels
from ..errors import ShapeError
from .types import Behavior, JointBehavior


@dataclass(frozen=True, eq=False)
class EqualityFamily:
    """Groups of marginal sums that must coincide.

    Marginal ``k`` sums ``x[idx[ptr[k]:ptr[k+1]]]``; group ``g`` holds marginals
    ``group_ptr[g]:group_ptr[g+1]``.  ``group_labels`` / ``member_labels``
    describe groups and marginals for witness reporting.
    """

    name: str
    ptr: np.ndarray
    idx: np.ndarray
    group_ptr: np.ndarray
    group_labels: tuple = field(repr=False)
    member_labels: tuple = field(repr=False)

    @classmethod
    def from_groups(cls, name, groups):
        """Build from ``[(group_label, [(member_label, entry_indices), ...]), ...]``."""
        ptr, idx, gptr, glabels, mlabels = [0], [], [0], [], []
        for glabel, members in groups:
            for mlabel, entries in members:
                idx.extend(int(k) for k in entries)
                ptr.append(len(idx))
                mlabels.append(mlabel)
            gptr.append(len(mlabels))
            glabels.append(glabel)
        return cls(name, np.asarray(ptr, dtype=np.intp), np.asarray(idx, dtype=np.intp),
                   np.asarray(gptr, dtype=np.intp), tuple(glabels), tuple(mlabels))

    @property
    def n_groups(self) -> int:
        return len(self.group_ptr) - 1

    @property
    def max_terms(self) -> int:
        """Largest number of entries summed on one side of an equality."""
        return int(np.diff(self.ptr).max()) if len(self.ptr) > 1 else 0

    def spread(self, x):
        """``(value, group_label, member_hi, member_lo)`` of the worst group."""
        value, g, kmax, kmin = _kernels.family_spread(x, self.ptr, self.idx, self.group_ptr)
        if g < 0:
            return 0.0, None, None, None
        return (float(value), self.group_labels[g], self.member_labels[kmax],
                self.member_labels[kmin])

    def spread_batch(self, X):
        return _kernels.family_spread_batch(X, self.ptr, self.idx, self.group_ptr)

    def constraint_matrix(self, size):
        """Rows ``a`` with ``a @ x = 0`` for consecutive members of each group."""
        rows = []
        for g in range(self.n_groups):
            ks = range(self.group_ptr[g], self.group_ptr[g + 1])
            for k0, k1 in zip(ks, ks[1:]):
                row = np.zeros(size)
                row[self.idx[self.ptr[k0]:self.ptr[k0 + 1]]] += 1.0
                row[self.idx[self.ptr[k1]:self.ptr[k1 + 1]]] -= 1.0
                rows.append(row)
        return np.array(rows).reshape(len(rows), size)


def _structure_key(jb):
    return jb.preparations, jb.local_contexts, jb.remote_contexts


@lru_cache(maxsize=256)
def _families(key):
    preps, loc, rem = key
    jb = JointBehavior(preps, loc, rem, np.zeros(len(preps) * sum(
        c.n * r.n for c in loc for r in rem)))
    remote = []
    if len(loc) > 1:
        for w, wn in enumerate(preps):
            for d, dc in enumerate(rem):
                for j, dj in enumerate(dc.outcomes):
                    members = [(ec.name, [jb.offset(w, e, d) + i * dc.n + j for i in range(ec.n)])
                               for e, ec in enumerate(loc)]
                    remote.append(((wn, dc.name, dj), members))
    local = []
    if len(rem) > 1:
        for w, wn in enumerate(preps):
            for e, ec in enumerate(loc):
                for i, ei in enumerate(ec.outcomes):
                    members = [(dc.name, [jb.offset(w, e, d) + i * dc.n + j for j in range(dc.n)])
                               for d, dc in enumerate(rem)]
                    local.append(((wn, ec.name, ei), members))
    return (EqualityFamily.from_groups("to_remote", remote),
            EqualityFamily.from_groups("to_local", local))


def equality_families(jb: JointBehavior):
    """``(to_remote, to_local)`` equality families for ``jb``'s structure."""
    return _families(_structure_key(jb))


def max_terms(jb: JointBehavior) -> int:
    """Largest outcome-set size summed in any no-signaling equality (``N_max``)."""
    fr, fl = equality_families(jb)
    return max(fr.max_terms, fl.max_terms)


def marginal_local(jb: JointBehavior, w, e, d) -> np.ndarray:
    """``sum_j P(W, E, D, e_i, d_j)`` as a vector over the local outcomes."""
    return jb.block(w, e, d).sum(axis=1)


def marginal_remote(jb: JointBehavior, w, e, d) -> np.ndarray:
    """``sum_i P(W, E, D, e_i, d_j)`` as a vector over the detector outcomes."""
    return jb.block(w, e, d).sum(axis=0)


def local_marginal_behavior(jb: JointBehavior, d) -> Behavior:
    """The local theory obtained by summing over the results of detector ``d``."""
    di = jb.remote_index(d)
    table = [[marginal_local(jb, w, e, di) for e in range(len(jb.local_contexts))]
             for w in range(len(jb.preparations))]
    return Behavior(jb.preparations, jb.local_contexts, table)


def remote_marginal_behavior(jb: JointBehavior, e) -> Behavior:
    """The remote theory obtained by summing over the results of local context ``e``."""
    ei = jb.local_index(e)
    table = [[marginal_remote(jb, w, ei, d) for d in range(len(jb.remote_contexts))]
             for w in range(len(jb.preparations))]
    return Behavior(jb.preparations, jb.remote_contexts, table)


@dataclass(frozen=True)
class SignalingReport:
    """Sup-norm violations of the no-signaling equalities.

    ``sig_to_remote`` measures how much the detector statistics depend on the
    local context (signals from the local to the remote region);
    ``sig_to_local`` how much local statistics depend on the detector setting
    or deviate from the reference theory.
    """

    sig_to_remote: float
    sig_to_local: float
    witnesses: dict

    @property
    def value(self) -> float:
        return max(self.sig_to_remote, self.sig_to_local)

    def to_dict(self):
        return {"sig_to_remote": self.sig_to_remote, "sig_to_local": self.sig_to_local,
                "witnesses": self.witnesses}


def _aligned_reference(jb, reference):
    """Reference probabilities arranged as ``ref[w][e]`` vectors, or ShapeError."""
    if not isinstance(reference, Behavior):
        raise ShapeError(f"reference must be a Behavior, got {type(reference).__name__}")
    ref_ctx = {c.name: c for c in reference.contexts}
    for c in jb.local_contexts:
        if c.name not in ref_ctx:
            raise ShapeError(f"reference lacks local context {c.name!r}")
        if ref_ctx[c.name].outcomes != c.outcomes:
            raise ShapeError(f"reference context {c.name!r} has outcomes "
                             f"{list(ref_ctx[c.name].outcomes)}, expected {list(c.outcomes)}")
    missing = [w for w in jb.preparations if w not in reference.preparations]
    if missing:
        raise ShapeError(f"reference lacks preparations {missing}")
    return [[reference.row(w, c.name) for c in jb.local_contexts] for w in jb.preparations]


def reference_deviation(jb: JointBehavior, reference: Behavior):
    """``max |sum_j P - P_ref|`` with its witness dict."""
    ref = _aligned_reference(jb, reference)
    best, witness = 0.0, None
    for (w, e, d), block in jb.blocks():
        diff = np.abs(block.sum(axis=1) - ref[w][e])
        i = int(np.argmax(diff))
        if witness is None or diff[i] > best:
            best = float(diff[i])
            witness = {"kind": "reference", "preparation": jb.preparations[w],
                       "local_context": jb.local_contexts[e].name,
                       "remote_context": jb.remote_contexts[d].name,
                       "local_outcome": jb.local_contexts[e].outcomes[i]}
    return best, witness


def signaling_measure(jb: JointBehavior, reference: Behavior = None) -> SignalingReport:
    """Exact maxima of the no-signaling violations over all index tuples."""
    fam_r, fam_l = equality_families(jb)
    v_r, g_r, hi_r, lo_r = fam_r.spread(jb.data)
    v_l, g_l, hi_l, lo_l = fam_l.spread(jb.data)
    witnesses = {"to_remote": None, "to_local": None}
    if g_r is not None:
        witnesses["to_remote"] = {"kind": "pair", "preparation": g_r[0], "remote_context": g_r[1],
                                  "remote_outcome": g_r[2], "local_contexts": [hi_r, lo_r]}
    if g_l is not None:
        witnesses["to_local"] = {"kind": "pair", "preparation": g_l[0], "local_context": g_l[1],
                                 "local_outcome": g_l[2], "remote_contexts": [hi_l, lo_l]}
    if reference is not None:
        v_ref, w_ref = reference_deviation(jb, reference)
        if witnesses["to_local"] is None or v_ref > v_l:
            v_l = v_ref
            witnesses["to_local"] = w_ref
    return SignalingReport(float(v_r), float(v_l), witnesses)


def evaluate_witness(jb: JointBehavior, witness: dict, reference: Behavior = None) -> float:
    """Recompute the violation a witness refers to, straight from the table."""
    w = witness["preparation"]
    if witness["kind"] == "reference":
        e, d = witness["local_context"], witness["remote_context"]
        i = jb.local_contexts[jb.local_index(e)].index(witness["local_outcome"])
        return float(abs(marginal_local(jb, w, e, d)[i] - reference.row(w, e)[i]))
    if "remote_outcome" in witness:
        d = witness["remote_context"]
        j = jb.remote_contexts[jb.remote_index(d)].index(witness["remote_outcome"])
        e1, e2 = witness["local_contexts"]
        return float(abs(marginal_remote(jb, w, e1, d)[j] - marginal_remote(jb, w, e2, d)[j]))
    e = witness["local_context"]
    i = jb.local_contexts[jb.local_index(e)].index(witness["local_outcome"])
    d1, d2 = witness["remote_contexts"]
    return float(abs(marginal_local(jb, w, e, d1)[i] - marginal_local(jb, w, e, d2)[i]))


def signaling_values(jb: JointBehavior, X=None):
    """Fast ``(sig_to_remote, sig_to_local)`` arrays for many points sharing
    ``jb``'s structure (rows of ``X``; defaults to ``jb`` itself)."""
    fam_r, fam_l = equality_families(jb)
    X = jb.data[None, :] if X is None else np.atleast_2d(X)
    return fam_r.spread_batch(X), fam_l.spread_batch(X)
