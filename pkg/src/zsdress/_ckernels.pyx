# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled batched kernels for small dense complex matrices.

Every routine works on a leading batch axis (one entry per grid point) and
releases the GIL for the inner loops.
"""
import numpy as np

ctypedef double complex cplx


def weighted_outer(const cplx[:, ::1] u, const cplx[:, ::1] v, const cplx[::1] w):
    cdef Py_ssize_t K = u.shape[0], N = u.shape[1], M = v.shape[1]
    cdef Py_ssize_t k, i, j
    cdef cplx a
    out = np.empty((K, N, M), dtype=np.complex128)
    cdef cplx[:, :, ::1] o = out
    with nogil:
        for k in range(K):
            for i in range(N):
                a = w[k] * u[k, i]
                for j in range(M):
                    o[k, i, j] = a * v[k, j]
    return out


def sandwich(const cplx[:, ::1] L, const cplx[:, :, ::1] X, const cplx[:, ::1] R):
    cdef Py_ssize_t K = X.shape[0], N = X.shape[1]
    cdef Py_ssize_t k, i, j, p
    cdef cplx s
    out = np.empty((K, N, N), dtype=np.complex128)
    tmp = np.empty((N, N), dtype=np.complex128)
    cdef cplx[:, :, ::1] o = out
    cdef cplx[:, ::1] T = tmp
    with nogil:
        for k in range(K):
            for i in range(N):
                for j in range(N):
                    s = 0
                    for p in range(N):
                        s = s + L[i, p] * X[k, p, j]
                    T[i, j] = s
            for i in range(N):
                for j in range(N):
                    s = 0
                    for p in range(N):
                        s = s + T[i, p] * R[p, j]
                    o[k, i, j] = s
    return out


def commutator(const cplx[:, :, ::1] X, const cplx[:, :, ::1] Y):
    cdef Py_ssize_t K = X.shape[0], N = X.shape[1]
    cdef Py_ssize_t k, i, j, p
    cdef cplx s
    out = np.empty((K, N, N), dtype=np.complex128)
    cdef cplx[:, :, ::1] o = out
    with nogil:
        for k in range(K):
            for i in range(N):
                for j in range(N):
                    s = 0
                    for p in range(N):
                        s = s + X[k, i, p] * Y[k, p, j] - Y[k, i, p] * X[k, p, j]
                    o[k, i, j] = s
    return out


def diag_commutator(const cplx[:, ::1] d, const cplx[:, :, ::1] X):
    cdef Py_ssize_t K = X.shape[0], N = X.shape[1]
    cdef Py_ssize_t k, i, j
    out = np.empty((K, N, N), dtype=np.complex128)
    cdef cplx[:, :, ::1] o = out
    with nogil:
        for k in range(K):
            for i in range(N):
                for j in range(N):
                    o[k, i, j] = (d[k, i] - d[k, j]) * X[k, i, j]
    return out


def rank_r_projector(const cplx[:, :, ::1] n, const cplx[:, :, ::1] m):
    """pi = n (m^T n)^{-1} m^T per batch entry, with det(m^T n).

    Gaussian elimination with partial pivoting on the r x r Gram block; a zero
    pivot leaves det = 0 and the projector filled with nan.
    """
    cdef Py_ssize_t K = n.shape[0], N = n.shape[1], r = n.shape[2]
    cdef Py_ssize_t k, i, j, p, piv
    cdef cplx s, f, tmpc, det
    cdef double best, mag
    cdef double nan = float("nan")
    out = np.empty((K, N, N), dtype=np.complex128)
    dets = np.empty(K, dtype=np.complex128)
    Rbuf = np.empty((r, r), dtype=np.complex128)
    Ybuf = np.empty((r, N), dtype=np.complex128)
    cdef cplx[:, :, ::1] o = out
    cdef cplx[::1] dv = dets
    cdef cplx[:, ::1] R = Rbuf
    cdef cplx[:, ::1] Y = Ybuf
    with nogil:
        for k in range(K):
            for i in range(r):
                for j in range(r):
                    s = 0
                    for p in range(N):
                        s = s + m[k, p, i] * n[k, p, j]
                    R[i, j] = s
                for j in range(N):
                    Y[i, j] = m[k, j, i]
            det = 1
            for p in range(r):
                piv = p
                best = abs(R[p, p])
                for i in range(p + 1, r):
                    mag = abs(R[i, p])
                    if mag > best:
                        best = mag
                        piv = i
                if best == 0.0:
                    det = 0
                    break
                if piv != p:
                    det = -det
                    for j in range(r):
                        tmpc = R[p, j]; R[p, j] = R[piv, j]; R[piv, j] = tmpc
                    for j in range(N):
                        tmpc = Y[p, j]; Y[p, j] = Y[piv, j]; Y[piv, j] = tmpc
                det = det * R[p, p]
                for i in range(p + 1, r):
                    f = R[i, p] / R[p, p]
                    for j in range(p, r):
                        R[i, j] = R[i, j] - f * R[p, j]
                    for j in range(N):
                        Y[i, j] = Y[i, j] - f * Y[p, j]
            dv[k] = det
            if det == 0:
                for i in range(N):
                    for j in range(N):
                        o[k, i, j] = nan
                continue
            for p in range(r - 1, -1, -1):
                for j in range(N):
                    s = Y[p, j]
                    for i in range(p + 1, r):
                        s = s - R[p, i] * Y[i, j]
                    Y[p, j] = s / R[p, p]
            for i in range(N):
                for j in range(N):
                    s = 0
                    for p in range(r):
                        s = s + n[k, i, p] * Y[p, j]
                    o[k, i, j] = s
    return out, dets
