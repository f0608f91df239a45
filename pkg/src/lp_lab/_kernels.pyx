# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops: basis enumeration and restarted PDHG steps.

Semantics mirror ``lp_lab._fallback`` exactly; see that module for the
reference description of each routine.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt

cnp.import_array()


cdef int _solve_small(double* B, double* rhs, int r, double tol) noexcept nogil:
    """In-place Gaussian elimination with partial pivoting; 0 means singular."""
    cdef int i, j, k, p
    cdef double big, f, tmp
    for k in range(r):
        p = k
        big = fabs(B[k * r + k])
        for i in range(k + 1, r):
            if fabs(B[i * r + k]) > big:
                big = fabs(B[i * r + k])
                p = i
        if big <= tol:
            return 0
        if p != k:
            for j in range(r):
                tmp = B[k * r + j]
                B[k * r + j] = B[p * r + j]
                B[p * r + j] = tmp
            tmp = rhs[k]
            rhs[k] = rhs[p]
            rhs[p] = tmp
        for i in range(k + 1, r):
            f = B[i * r + k] / B[k * r + k]
            if f != 0.0:
                for j in range(k, r):
                    B[i * r + j] -= f * B[k * r + j]
                rhs[i] -= f * rhs[k]
    for k in range(r - 1, -1, -1):
        tmp = rhs[k]
        for j in range(k + 1, r):
            tmp -= B[k * r + j] * rhs[j]
        rhs[k] = tmp / B[k * r + k]
    return 1


def enumerate_bases(const double[:, ::1] M, const double[::1] h, double pivot_tol, double feas_tol):
    cdef int r = M.shape[0]
    cdef int n = M.shape[1]
    cdef double scale = 0.0
    cdef int i, j, t, ok
    for i in range(r):
        for j in range(n):
            if fabs(M[i, j]) > scale:
                scale = fabs(M[i, j])
    cdef double tol = pivot_tol * scale
    cdef cnp.ndarray[cnp.float64_t, ndim=1] Bbuf = np.empty(r * r)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] rbuf = np.empty(r)
    cdef cnp.ndarray[cnp.intp_t, ndim=1] idx = np.arange(r, dtype=np.intp)
    cdef double* B = <double*> Bbuf.data
    cdef double* rhs = <double*> rbuf.data
    cdef cnp.intp_t* ix = <cnp.intp_t*> idx.data
    rows = []
    while True:
        for i in range(r):
            rhs[i] = h[i]
            for j in range(r):
                B[i * r + j] = M[i, ix[j]]
        ok = _solve_small(B, rhs, r, tol)
        if ok:
            for i in range(r):
                if rhs[i] < -feas_tol:
                    ok = 0
                    break
        if ok:
            z = np.zeros(n)
            for i in range(r):
                z[ix[i]] = rhs[i]
            rows.append(z)
        # next lexicographic combination
        t = r - 1
        while t >= 0 and ix[t] == n - r + t:
            t -= 1
        if t < 0:
            break
        ix[t] += 1
        for j in range(t + 1, r):
            ix[j] = ix[j - 1] + 1
    if rows:
        return np.array(rows)
    return np.zeros((0, n))


cdef double _residual(const double[:, ::1] A, const double[::1] b, const double[::1] c,
                      double tau, double sigma, double* xa, double* ya,
                      double* xp, double* tmp_m, double* tmp_n, int m, int n) noexcept nogil:
    """M-norm of ``z - T(z)`` for ``z = (xa, ya)``."""
    cdef int i, j
    cdef double acc, dx, dy, nx = 0.0, ny = 0.0, cross = 0.0
    for j in range(n):
        acc = 0.0
        for i in range(m):
            acc += A[i, j] * ya[i]
        xp[j] = xa[j] - tau * (c[j] - acc)
        if xp[j] < 0.0:
            xp[j] = 0.0
    for i in range(m):
        acc = 0.0
        for j in range(n):
            acc += A[i, j] * (2.0 * xp[j] - xa[j])
        tmp_m[i] = ya[i] - (ya[i] + sigma * (b[i] - acc))
    for j in range(n):
        dx = xa[j] - xp[j]
        tmp_n[j] = dx
        nx += dx * dx
    for i in range(m):
        dy = tmp_m[i]
        ny += dy * dy
        acc = 0.0
        for j in range(n):
            acc += A[i, j] * tmp_n[j]
        cross += dy * acc
    acc = nx / tau + ny / sigma - 2.0 * cross
    if acc < 0.0:
        acc = 0.0
    return sqrt(acc)


def pdhg_advance(const double[:, ::1] A, const double[::1] b, const double[::1] c,
                 double tau, double sigma, double beta, double growth,
                 double[::1] x, double[::1] y, double[::1] sx, double[::1] sy,
                 cnp.int64_t[::1] istate, double[::1] fstate, long n_steps,
                 double[:, ::1] cur_x, double[:, ::1] cur_y,
                 double[:, ::1] avg_x, double[:, ::1] avg_y, cnp.int8_t[::1] restarted):
    cdef int m = A.shape[0]
    cdef int n = A.shape[1]
    cdef long step
    cdef int i, j
    cdef double acc, rho, inv
    cdef cnp.int64_t k = istate[0]
    cdef cnp.int64_t prev_len = istate[1]
    cdef cnp.int64_t total = istate[2]
    cdef double rho0 = fstate[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] w = np.empty(4 * n + 3 * m)
    cdef double* xn = <double*> w.data
    cdef double* xa = xn + n
    cdef double* xp = xa + n
    cdef double* tn = xp + n
    cdef double* yn = tn + n
    cdef double* ya = yn + m
    cdef double* tm = ya + m
    with nogil:
        for step in range(n_steps):
            for j in range(n):
                acc = 0.0
                for i in range(m):
                    acc += A[i, j] * y[i]
                xn[j] = x[j] - tau * (c[j] - acc)
                if xn[j] < 0.0:
                    xn[j] = 0.0
            for i in range(m):
                acc = 0.0
                for j in range(n):
                    acc += A[i, j] * (2.0 * xn[j] - x[j])
                yn[i] = y[i] + sigma * (b[i] - acc)
            k += 1
            total += 1
            inv = 1.0 / k
            for j in range(n):
                sx[j] += xn[j]
                xa[j] = sx[j] * inv
                cur_x[step, j] = xn[j]
                avg_x[step, j] = xa[j]
            for i in range(m):
                sy[i] += yn[i]
                ya[i] = sy[i] * inv
                cur_y[step, i] = yn[i]
                avg_y[step, i] = ya[i]
            rho = _residual(A, b, c, tau, sigma, xa, ya, xp, tm, tn, m, n)
            if rho <= beta * rho0 or (prev_len > 0 and k >= growth * prev_len):
                for j in range(n):
                    x[j] = xa[j]
                    sx[j] = 0.0
                for i in range(m):
                    y[i] = ya[i]
                    sy[i] = 0.0
                rho0 = rho
                prev_len = k
                k = 0
                restarted[step] = 1
            else:
                for j in range(n):
                    x[j] = xn[j]
                for i in range(m):
                    y[i] = yn[i]
                restarted[step] = 0
    istate[0] = k
    istate[1] = prev_len
    istate[2] = total
    fstate[0] = rho0


def fixed_point_residual(const double[:, ::1] A, const double[::1] b, const double[::1] c,
                         double tau, double sigma, const double[::1] x, const double[::1] y):
    cdef int m = A.shape[0]
    cdef int n = A.shape[1]
    cdef int i, j
    cdef cnp.ndarray[cnp.float64_t, ndim=1] w = np.empty(4 * n + 2 * m)
    cdef double* xa = <double*> w.data
    cdef double* xp = xa + n
    cdef double* tn = xp + n
    cdef double* ya = tn + n
    cdef double* tm = ya + m
    for j in range(n):
        xa[j] = x[j]
    for i in range(m):
        ya[i] = y[i]
    return _residual(A, b, c, tau, sigma, xa, ya, xp, tm, tn, m, n)
