# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled echo-trace kernels.

Same contracts as ``fdlab._kernels_py``; the incremental-power loop runs on
BLAS zgemm with preallocated buffers, which removes the per-step Python and
allocation overhead that dominates at small register dimensions.
"""
import numpy as np

cimport numpy as cnp
from scipy.linalg.cython_blas cimport zgemm

cnp.import_array()


cdef void _step(double complex[::1, :] acc, double complex[::1, :] factor,
                double complex[::1, :] scratch, int n) noexcept nogil:
    # scratch = acc @ factor, then acc <- scratch
    cdef double complex one = 1.0 + 0.0j
    cdef double complex zero = 0.0 + 0.0j
    cdef int i, j
    zgemm("N", "N", &n, &n, &n, &one, &acc[0, 0], &n, &factor[0, 0], &n,
          &zero, &scratch[0, 0], &n)
    for j in range(n):
        for i in range(n):
            acc[i, j] = scratch[i, j]


cdef double complex _dot_conj(double complex[::1, :] a, double complex[::1, :] b,
                              int n) noexcept nogil:
    cdef double complex s = 0.0 + 0.0j
    cdef int i, j
    for j in range(n):
        for i in range(n):
            s += a[i, j].conjugate() * b[i, j]
    return s


def echo_traces(u, pu, int n):
    """t_m = Tr[(u^m)^dag (pu)^m] for m = 0..n, via two running products."""
    cdef int dim = u.shape[0]
    cdef double complex[::1, :] uf = np.asfortranarray(u, dtype=np.complex128)
    cdef double complex[::1, :] puf = np.asfortranarray(pu, dtype=np.complex128)
    cdef double complex[::1, :] a = np.asfortranarray(np.eye(dim, dtype=np.complex128))
    cdef double complex[::1, :] b = np.asfortranarray(np.eye(dim, dtype=np.complex128))
    cdef double complex[::1, :] scratch = np.empty((dim, dim), dtype=np.complex128, order="F")
    out = np.empty(n + 1, dtype=np.complex128)
    cdef double complex[::1] ov = out
    cdef int m
    ov[0] = dim
    with nogil:
        for m in range(1, n + 1):
            _step(a, uf, scratch, dim)
            _step(b, puf, scratch, dim)
            ov[m] = _dot_conj(a, b, dim)
    return out


def echo_operator(u, pu, int n):
    """W = (u^n)^dag (pu)^n."""
    cdef int dim = u.shape[0]
    cdef double complex[::1, :] uf = np.asfortranarray(u, dtype=np.complex128)
    cdef double complex[::1, :] puf = np.asfortranarray(pu, dtype=np.complex128)
    cdef double complex[::1, :] a = np.asfortranarray(np.eye(dim, dtype=np.complex128))
    cdef double complex[::1, :] b = np.asfortranarray(np.eye(dim, dtype=np.complex128))
    cdef double complex[::1, :] scratch = np.empty((dim, dim), dtype=np.complex128, order="F")
    cdef int m
    with nogil:
        for m in range(n):
            _step(a, uf, scratch, dim)
            _step(b, puf, scratch, dim)
    return np.asarray(a).conj().T @ np.asarray(b)
