# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the kernels in ``_pykernels``; same contracts."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs
from libc.stdlib cimport malloc, free, qsort

cnp.import_array()


cdef int _cmp_desc(const void* a, const void* b) noexcept nogil:
    cdef double x = (<const double*>a)[0]
    cdef double y = (<const double*>b)[0]
    return (x < y) - (x > y)


cdef void _project_simplex(const double* v, double* out, double* buf, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t k
    cdef double css = 0.0, theta = 0.0, t
    for k in range(n):
        buf[k] = v[k]
    qsort(buf, n, sizeof(double), _cmp_desc)
    for k in range(n):
        css += buf[k]
        t = (css - 1.0) / (k + 1)
        if buf[k] - t > 0:
            theta = t
    for k in range(n):
        t = v[k] - theta
        out[k] = t if t > 0 else 0.0


cdef void _marginals(const double* x, const Py_ssize_t[::1] mptr, const Py_ssize_t[::1] midx,
                     double* m) noexcept nogil:
    cdef Py_ssize_t k, r, nm = mptr.shape[0] - 1
    cdef double s
    for k in range(nm):
        s = 0.0
        for r in range(mptr[k], mptr[k + 1]):
            s += x[midx[r]]
        m[k] = s


def marginals(x, const Py_ssize_t[::1] mptr, const Py_ssize_t[::1] midx):
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef Py_ssize_t nm = max(mptr.shape[0] - 1, 0)
    out = np.zeros(nm)
    cdef double[::1] ov = out
    if nm > 0:
        _marginals(&xv[0], mptr, midx, &ov[0])
    return out


def family_spread(x, const Py_ssize_t[::1] mptr, const Py_ssize_t[::1] midx,
                  const Py_ssize_t[::1] gptr):
    cdef Py_ssize_t ng = gptr.shape[0] - 1
    if ng <= 0:
        return 0.0, -1, -1, -1
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    m_arr = np.empty(mptr.shape[0] - 1)
    cdef double[::1] m = m_arr
    _marginals(&xv[0], mptr, midx, &m[0])
    cdef Py_ssize_t g, k, best_g = 0, kmax, kmin, best_max = gptr[0], best_min = gptr[0]
    cdef double best = -1.0, hi, lo
    for g in range(ng):
        kmax = gptr[g]
        kmin = gptr[g]
        hi = m[kmax]
        lo = m[kmin]
        for k in range(gptr[g] + 1, gptr[g + 1]):
            if m[k] > hi:
                hi = m[k]
                kmax = k
            if m[k] < lo:
                lo = m[k]
                kmin = k
        if hi - lo > best:
            best = hi - lo
            best_g = g
            best_max = kmax
            best_min = kmin
    return best, best_g, best_max, best_min


def family_spread_batch(X, const Py_ssize_t[::1] mptr, const Py_ssize_t[::1] midx,
                        const Py_ssize_t[::1] gptr):
    cdef const double[:, ::1] xv = np.ascontiguousarray(np.atleast_2d(X), dtype=np.float64)
    cdef Py_ssize_t T = xv.shape[0], ng = gptr.shape[0] - 1, nm = mptr.shape[0] - 1
    out = np.zeros(T)
    if ng <= 0 or T == 0:
        return out
    cdef double[::1] ov = out
    cdef double* m = <double*>malloc(nm * sizeof(double))
    if m == NULL:
        raise MemoryError()
    cdef Py_ssize_t t, g, k
    cdef double best, hi, lo
    try:
        with nogil:
            for t in range(T):
                _marginals(&xv[t, 0], mptr, midx, m)
                best = 0.0
                for g in range(ng):
                    hi = m[gptr[g]]
                    lo = hi
                    for k in range(gptr[g] + 1, gptr[g + 1]):
                        if m[k] > hi:
                            hi = m[k]
                        if m[k] < lo:
                            lo = m[k]
                    if hi - lo > best:
                        best = hi - lo
                ov[t] = best
    finally:
        free(m)
    return out


cdef Py_ssize_t _max_block(const Py_ssize_t[::1] bptr) noexcept nogil:
    cdef Py_ssize_t b, n = 1
    for b in range(bptr.shape[0] - 1):
        if bptr[b + 1] - bptr[b] > n:
            n = bptr[b + 1] - bptr[b]
    return n


def project_simplex_blocks(v, const Py_ssize_t[::1] bptr):
    cdef const double[::1] vv = np.ascontiguousarray(v, dtype=np.float64)
    out = np.empty(vv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t b, nb = bptr.shape[0] - 1
    cdef double* buf = <double*>malloc(_max_block(bptr) * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    try:
        with nogil:
            for b in range(nb):
                if bptr[b + 1] > bptr[b]:
                    _project_simplex(&vv[bptr[b]], &ov[bptr[b]], buf, bptr[b + 1] - bptr[b])
    finally:
        free(buf)
    return out


def dykstra(x0, M, c, const Py_ssize_t[::1] bptr, Py_ssize_t max_iter, double tol):
    cdef Py_ssize_t n = len(x0)
    x_arr = np.array(x0, dtype=np.float64)
    cdef double[::1] x = x_arr
    cdef const double[:, ::1] Mv = np.ascontiguousarray(M, dtype=np.float64)
    cdef const double[::1] cv = np.ascontiguousarray(c, dtype=np.float64)
    y_arr = np.zeros(n)
    cdef double[::1] y = y_arr
    res_arr = np.empty(max(max_iter, 0))
    cdef double[::1] res = res_arr
    cdef double* p = <double*>malloc(n * sizeof(double))
    cdef double* q = <double*>malloc(n * sizeof(double))
    cdef double* v = <double*>malloc(n * sizeof(double))
    cdef double* xn = <double*>malloc(n * sizeof(double))
    cdef double* buf = <double*>malloc(_max_block(bptr) * sizeof(double))
    if p == NULL or q == NULL or v == NULL or xn == NULL or buf == NULL:
        free(p); free(q); free(v); free(xn); free(buf)
        raise MemoryError()
    cdef Py_ssize_t i, r, b, k = 0, nb = bptr.shape[0] - 1
    cdef double s, move, resid, d
    cdef bint converged = False
    try:
        with nogil:
            for i in range(n):
                p[i] = 0.0
                q[i] = 0.0
            while k < max_iter:
                for i in range(n):
                    v[i] = x[i] + p[i]
                for i in range(n):
                    s = cv[i]
                    for r in range(n):
                        s += Mv[i, r] * v[r]
                    y[i] = s
                for i in range(n):
                    p[i] = v[i] - y[i]
                    v[i] = y[i] + q[i]
                for b in range(nb):
                    if bptr[b + 1] > bptr[b]:
                        _project_simplex(&v[bptr[b]], &xn[bptr[b]], buf, bptr[b + 1] - bptr[b])
                move = 0.0
                resid = 0.0
                for i in range(n):
                    q[i] = v[i] - xn[i]
                    d = fabs(xn[i] - x[i])
                    if d > move:
                        move = d
                    d = fabs(xn[i] - y[i])
                    if d > resid:
                        resid = d
                    x[i] = xn[i]
                res[k] = resid
                k += 1
                if move < tol:
                    converged = True
                    break
    finally:
        free(p); free(q); free(v); free(xn); free(buf)
    return x_arr, y_arr, k, bool(converged), res_arr[:k].copy()
