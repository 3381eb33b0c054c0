"""Finite behaviors: outcome-probability tables indexed by preparation and context.

A :class:`Behavior` is the empirical content of a single-region theory,
``P(W, E, e_i)``.  A :class:`JointBehavior` is a two-region extension,
``P(W, E, D, e_i, d_j)``, with ``E`` a context in the local region and ``D``
a detector setting in the remote region.

Both keep their numbers in one flat, read-only float64 vector laid out
row-major (preparation, local context, [remote context,] local outcome,
[remote outcome]) so that theory-space code can treat them as points of a
product of simplices without copying.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import ShapeError, UnknownIndexError
from ..tolerances import TAU_NORM


@dataclass(frozen=True)
class Context:
    """An observation procedure together with its ordered outcome labels."""

    name: str
    outcomes: tuple

    def __post_init__(self):
        outcomes = tuple(str(o) for o in self.outcomes)
        if len(outcomes) < 1:
            raise ShapeError(f"context {self.name!r} has no outcomes")
        if len(set(outcomes)) != len(outcomes):
            raise ShapeError(f"context {self.name!r} has duplicate outcome labels")
        object.__setattr__(self, "name", str(self.name))
        object.__setattr__(self, "outcomes", outcomes)

    @property
    def n(self) -> int:
        return len(self.outcomes)

    def index(self, outcome) -> int:
        return _resolve(self.outcomes, outcome, f"outcome of context {self.name!r}")

    @classmethod
    def numbered(cls, name, n):
        return cls(name, tuple(str(k) for k in range(n)))


@dataclass(frozen=True)
class Violation:
    """One failed invariant: what, where, and by how much."""

    kind: str
    index: tuple
    magnitude: float

    def to_dict(self):
        return {"kind": self.kind, "index": list(self.index), "magnitude": self.magnitude}


def _resolve(names, key, what):
    if isinstance(key, (int, np.integer)) and not isinstance(key, bool):
        if 0 <= key < len(names):
            return int(key)
        raise UnknownIndexError(f"unknown {what}: index {key} out of range 0..{len(names) - 1}")
    try:
        return names.index(str(key))
    except ValueError:
        raise UnknownIndexError(f"unknown {what}: {key!r}") from None


def _as_contexts(contexts):
    out = []
    for c in contexts:
        if isinstance(c, Context):
            out.append(c)
        elif isinstance(c, dict):
            out.append(Context(c["name"], tuple(c["outcomes"])))
        else:
            name, outcomes = c
            out.append(Context(name, tuple(outcomes)))
    names = [c.name for c in out]
    if len(set(names)) != len(names):
        raise ShapeError("duplicate context names")
    return tuple(out)


def _as_names(names, what):
    names = tuple(str(n) for n in names)
    if not names:
        raise ShapeError(f"at least one {what} is required")
    if len(set(names)) != len(names):
        raise ShapeError(f"duplicate {what} identifiers")
    return names


def _flatten(table, shapes):
    """Flatten a nested table, checking every leaf block against ``shapes``.

    ``shapes`` yields, in layout order, the expected shape of each leaf block.
    """
    if isinstance(table, np.ndarray) and table.ndim == 1:
        return np.array(table, dtype=float)
    pieces = []
    for path, shape, block in shapes(table):
        try:
            arr = np.asarray(block, dtype=float)
        except (TypeError, ValueError):
            raise ShapeError(f"table block at {path} is ragged or not numeric") from None
        if arr.shape != shape:
            raise ShapeError(f"table block at {path} has shape {arr.shape}, expected {shape}")
        pieces.append(arr.ravel())
    return np.concatenate(pieces) if pieces else np.zeros(0)


def _clamp(data):
    data = np.array(data, dtype=float)
    small = (data < 0) & (data >= -TAU_NORM)
    data[small] = 0.0
    data.setflags(write=False)
    return data


class Behavior:
    """Single-region behavior ``P(W, E, e_i)``.

    Parameters
    ----------
    preparations : sequence of str
    contexts : sequence of Context (or ``(name, outcomes)`` pairs / dicts)
    table : nested ``[w][e][i]`` lists or a flat vector in layout order

    Entries within ``TAU_NORM`` below zero are clamped to zero; anything else
    is stored as given and reported by :func:`validate`.
    """

    def __init__(self, preparations: Sequence[str], contexts, table):
        self.preparations = _as_names(preparations, "preparation")
        self.contexts = _as_contexts(contexts)
        if not self.contexts:
            raise ShapeError("at least one context is required")
        sizes = [c.n for c in self.contexts]
        self._ctx_offsets = np.concatenate([[0], np.cumsum(sizes)]).astype(np.intp)
        self._stride = int(self._ctx_offsets[-1])

        def shapes(tbl):
            if len(tbl) != len(self.preparations):
                raise ShapeError(f"table has {len(tbl)} preparation rows, expected {len(self.preparations)}")
            for w, row in enumerate(tbl):
                if len(row) != len(self.contexts):
                    raise ShapeError(f"preparation {self.preparations[w]!r} has {len(row)} contexts, expected {len(self.contexts)}")
                for e, vec in enumerate(row):
                    yield (w, e), (sizes[e],), vec

        data = _flatten(table, shapes)
        if data.size != self.size:
            raise ShapeError(f"flat table has {data.size} entries, expected {self.size}")
        self.data = _clamp(data)

    @property
    def size(self) -> int:
        return len(self.preparations) * self._stride

    def prep_index(self, w) -> int:
        return _resolve(self.preparations, w, "preparation")

    def context_index(self, e) -> int:
        return _resolve([c.name for c in self.contexts], e, "context")

    def offset(self, w: int, e: int) -> int:
        return w * self._stride + int(self._ctx_offsets[e])

    def row(self, w, e) -> np.ndarray:
        """Probability vector for (preparation, context)."""
        wi, ei = self.prep_index(w), self.context_index(e)
        start = self.offset(wi, ei)
        return self.data[start:start + self.contexts[ei].n]

    def to_nested(self):
        return [[self.row(w, e).tolist() for e in range(len(self.contexts))]
                for w in range(len(self.preparations))]

    def with_data(self, data):
        return Behavior(self.preparations, self.contexts, np.asarray(data, dtype=float))

    def same_structure(self, other) -> bool:
        return (isinstance(other, Behavior) and self.preparations == other.preparations
                and self.contexts == other.contexts)

    def __eq__(self, other):
        return self.same_structure(other) and np.array_equal(self.data, other.data)

    def __hash__(self):
        return hash((self.preparations, self.contexts, self.data.tobytes()))

    def __repr__(self):
        return (f"Behavior(preparations={list(self.preparations)}, "
                f"contexts={[c.name for c in self.contexts]})")


class JointBehavior:
    """Two-region behavior ``P(W, E, D, e_i, d_j)``.

    ``block(w, e, d)`` returns an ``(n_E, m_D)`` array whose rows are local
    outcomes and columns remote outcomes.  This is also the type used for a
    point of theory space.
    """

    def __init__(self, preparations, local_contexts, remote_contexts, table):
        self.preparations = _as_names(preparations, "preparation")
        self.local_contexts = _as_contexts(local_contexts)
        self.remote_contexts = _as_contexts(remote_contexts)
        if not self.local_contexts or not self.remote_contexts:
            raise ShapeError("both regions need at least one context")
        n_loc = [c.n for c in self.local_contexts]
        n_rem = [c.n for c in self.remote_contexts]
        sizes = np.outer(n_loc, n_rem).ravel()
        self._block_offsets = np.concatenate([[0], np.cumsum(sizes)]).astype(np.intp)
        self._stride = int(self._block_offsets[-1])

        def shapes(tbl):
            if len(tbl) != len(self.preparations):
                raise ShapeError(f"table has {len(tbl)} preparation entries, expected {len(self.preparations)}")
            for w, by_e in enumerate(tbl):
                if len(by_e) != len(n_loc):
                    raise ShapeError(f"preparation {self.preparations[w]!r}: {len(by_e)} local contexts, expected {len(n_loc)}")
                for e, by_d in enumerate(by_e):
                    if len(by_d) != len(n_rem):
                        raise ShapeError(f"block ({w}, {e}): {len(by_d)} remote contexts, expected {len(n_rem)}")
                    for d, block in enumerate(by_d):
                        yield (w, e, d), (n_loc[e], n_rem[d]), block

        data = _flatten(table, shapes)
        if data.size != self.size:
            raise ShapeError(f"flat table has {data.size} entries, expected {self.size}")
        self.data = _clamp(data)

    @property
    def size(self) -> int:
        return len(self.preparations) * self._stride

    @property
    def shape(self):
        """(preparations, local contexts, remote contexts)."""
        return len(self.preparations), len(self.local_contexts), len(self.remote_contexts)

    def prep_index(self, w) -> int:
        return _resolve(self.preparations, w, "preparation")

    def local_index(self, e) -> int:
        return _resolve([c.name for c in self.local_contexts], e, "local context")

    def remote_index(self, d) -> int:
        return _resolve([c.name for c in self.remote_contexts], d, "remote context")

    def offset(self, w: int, e: int, d: int) -> int:
        return w * self._stride + int(self._block_offsets[e * len(self.remote_contexts) + d])

    def block_ptr(self) -> np.ndarray:
        """Start offsets of every block plus the total size (length n_blocks + 1)."""
        p = len(self.preparations)
        starts = (np.arange(p)[:, None] * self._stride + self._block_offsets[None, :-1]).ravel()
        return np.concatenate([starts, [self.size]]).astype(np.intp)

    def blocks(self):
        """Iterate ``((w, e, d), block)`` over all blocks in layout order."""
        for w in range(len(self.preparations)):
            for e in range(len(self.local_contexts)):
                for d in range(len(self.remote_contexts)):
                    yield (w, e, d), self.block(w, e, d)

    def block(self, w, e, d) -> np.ndarray:
        wi, ei, di = self.prep_index(w), self.local_index(e), self.remote_index(d)
        n, m = self.local_contexts[ei].n, self.remote_contexts[di].n
        start = self.offset(wi, ei, di)
        return self.data[start:start + n * m].reshape(n, m)

    def to_nested(self):
        p, l, r = self.shape
        return [[[self.block(w, e, d).tolist() for d in range(r)] for e in range(l)]
                for w in range(p)]

    def with_data(self, data):
        """Same structure, new numbers (flat vector in layout order)."""
        return JointBehavior(self.preparations, self.local_contexts, self.remote_contexts,
                             np.asarray(data, dtype=float))

    def swapped(self):
        """The same theory with the two regions' roles exchanged."""
        p, l, r = self.shape
        table = [[[self.block(w, e, d).T for e in range(l)] for d in range(r)] for w in range(p)]
        return JointBehavior(self.preparations, self.remote_contexts, self.local_contexts, table)

    def same_structure(self, other) -> bool:
        return (isinstance(other, JointBehavior) and self.preparations == other.preparations
                and self.local_contexts == other.local_contexts
                and self.remote_contexts == other.remote_contexts)

    def __eq__(self, other):
        return self.same_structure(other) and np.array_equal(self.data, other.data)

    def __hash__(self):
        return hash((self.preparations, self.local_contexts, self.remote_contexts,
                     self.data.tobytes()))

    def __repr__(self):
        return (f"JointBehavior(preparations={list(self.preparations)}, "
                f"local={[c.name for c in self.local_contexts]}, "
                f"remote={[c.name for c in self.remote_contexts]})")


class Weight:
    """Non-negative outcome assignment per context whose total does not
    depend on the context.

    ``values[e]`` is the vector ``w^E(e_i)``.  Construction does not enforce
    context independence; check :meth:`is_weight`.
    """

    def __init__(self, contexts, values):
        self.contexts = _as_contexts(contexts)
        vals = []
        for c, v in zip(self.contexts, values, strict=True):
            arr = np.array(v, dtype=float)
            if arr.shape != (c.n,):
                raise ShapeError(f"weight on context {c.name!r} has shape {arr.shape}, expected ({c.n},)")
            arr.setflags(write=False)
            vals.append(arr)
        self.values = tuple(vals)

    @property
    def totals(self) -> np.ndarray:
        return np.array([v.sum() for v in self.values])

    @property
    def total(self) -> float:
        return float(np.mean(self.totals))

    def is_weight(self, tol=TAU_NORM) -> bool:
        t = self.totals
        return bool(all((v >= 0).all() for v in self.values) and t.max() - t.min() <= tol)

    def is_normalized(self, tol=TAU_NORM) -> bool:
        return self.is_weight(tol) and abs(self.total - 1.0) <= tol

    def normalized(self):
        """Divide each context by its own total; rows sum to 1 exactly up to rounding."""
        return Weight(self.contexts, [v / v.sum() for v in self.values])

    def as_behavior(self, preparation="W"):
        return Behavior([preparation], self.contexts, [[v for v in self.values]])


def validate(b, tol: float = TAU_NORM):
    """Every normalization / non-negativity violation of a behavior.

    Returns a list of :class:`Violation`; empty iff all rows (blocks) sum to 1
    within ``tol`` and no entry is below ``-tol``.
    """
    out = []
    if isinstance(b, JointBehavior):
        for (w, e, d), block in b.blocks():
            idx = (b.preparations[w], b.local_contexts[e].name, b.remote_contexts[d].name)
            _check_cells(out, block.ravel(), idx, tol,
                         lambda k, bl=block: np.unravel_index(k, bl.shape))
    elif isinstance(b, Behavior):
        for w in range(len(b.preparations)):
            for e, ctx in enumerate(b.contexts):
                idx = (b.preparations[w], ctx.name)
                _check_cells(out, b.row(w, e), idx, tol, lambda k: (k,))
    else:
        raise TypeError(f"cannot validate {type(b).__name__}")
    return out


def _check_cells(out, values, idx, tol, locate):
    for k in np.flatnonzero(~np.isfinite(values)):
        out.append(Violation("non-finite", idx + tuple(int(x) for x in locate(k)), float("inf")))
    for k in np.flatnonzero(values < -tol):
        out.append(Violation("negative", idx + tuple(int(x) for x in locate(k)), float(-values[k])))
    s = float(values.sum())
    if not abs(s - 1.0) <= tol:
        out.append(Violation("normalization", idx, abs(s - 1.0)))
