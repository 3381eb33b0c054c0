"""Pure numpy implementations of the hot kernels.

Used when the compiled extension is unavailable or ``SPACELIKE_PURE_PYTHON=1``.
Signatures and results match ``_ckernels`` (up to floating-point summation
order).

Equality families are described by three index arrays:

``mptr, midx``
    marginal ``k`` is ``x[midx[mptr[k]:mptr[k+1]]].sum()``
``gptr``
    group ``g`` consists of marginals ``gptr[g]:gptr[g+1]``; its spread is
    ``max - min`` over those marginals.
"""

import numpy as np


def marginals(x, mptr, midx):
    if len(mptr) <= 1:
        return np.zeros(0)
    return np.add.reduceat(np.asarray(x, dtype=float)[midx], mptr[:-1])


def family_spread(x, mptr, midx, gptr):
    """Largest group spread with its witnesses.

    Returns ``(value, group, k_max, k_min)`` where ``k_max``/``k_min`` index the
    marginals attaining the max and min inside the worst group; ``-1`` for an
    empty family.
    """
    if len(gptr) <= 1:
        return 0.0, -1, -1, -1
    m = marginals(x, mptr, midx)
    mx = np.maximum.reduceat(m, gptr[:-1])
    mn = np.minimum.reduceat(m, gptr[:-1])
    spread = mx - mn
    g = int(np.argmax(spread))
    seg = m[gptr[g]:gptr[g + 1]]
    return float(spread[g]), g, int(gptr[g] + np.argmax(seg)), int(gptr[g] + np.argmin(seg))


def family_spread_batch(X, mptr, midx, gptr):
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if len(gptr) <= 1:
        return np.zeros(X.shape[0])
    m = np.add.reduceat(X[:, midx], mptr[:-1], axis=1)
    spread = np.maximum.reduceat(m, gptr[:-1], axis=1) - np.minimum.reduceat(m, gptr[:-1], axis=1)
    return spread.max(axis=1)


def _size_groups(bptr):
    sizes = np.diff(bptr)
    groups = []
    for n in np.unique(sizes):
        starts = bptr[:-1][sizes == n]
        groups.append(starts[:, None] + np.arange(n)[None, :])
    return groups


def _project_rows(V):
    k, n = V.shape
    U = -np.sort(-V, axis=1)
    css = np.cumsum(U, axis=1) - 1.0
    cond = U - css / np.arange(1, n + 1) > 0
    rho = n - 1 - np.argmax(cond[:, ::-1], axis=1)
    theta = css[np.arange(k), rho] / (rho + 1)
    return np.maximum(V - theta[:, None], 0.0)


def _project_grouped(v, groups, out):
    for idx in groups:
        out[idx] = _project_rows(v[idx])
    return out


def project_simplex_blocks(v, bptr):
    """Euclidean projection of each block ``v[bptr[b]:bptr[b+1]]`` onto the
    probability simplex."""
    v = np.asarray(v, dtype=float)
    return _project_grouped(v, _size_groups(np.asarray(bptr)), np.empty_like(v))


def dykstra(x0, M, c, bptr, max_iter, tol):
    """Dykstra's alternating projections between an affine set
    ``{M v + c}`` (given by its projector) and a product of simplices.

    Returns ``(x, y, n_iter, converged, residuals)``: ``x`` is the last simplex
    iterate, ``y`` the last affine iterate, ``residuals[k] = max|x_k - y_k|``.
    Stops once successive simplex iterates move less than ``tol`` (sup norm).
    """
    x = np.array(x0, dtype=float)
    groups = _size_groups(np.asarray(bptr))
    p = np.zeros_like(x)
    q = np.zeros_like(x)
    xn = np.empty_like(x)
    y = x.copy()
    residuals = np.empty(max_iter)
    converged = False
    k = 0
    while k < max_iter:
        v = x + p
        y = M @ v + c
        p = v - y
        u = y + q
        _project_grouped(u, groups, xn)
        q = u - xn
        move = np.max(np.abs(xn - x))
        residuals[k] = np.max(np.abs(xn - y))
        x, xn = xn, x
        k += 1
        if move < tol:
            converged = True
            break
    return x, y, k, converged, residuals[:k].copy()
