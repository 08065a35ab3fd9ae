# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled cyclic Jacobi eigensolver for complex Hermitian matrices."""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, hypot, sqrt

BACKEND = "compiled"


def cyclic_jacobi(a, double sweep_tol=1e-13, int max_sweeps=100):
    """Same contract as semiframes._kernels.jacobi_py.cyclic_jacobi."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] work = np.array(
        a, dtype=np.complex128, order="C"
    )
    cdef Py_ssize_t d = work.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] vecs = np.eye(d, dtype=np.complex128)
    if d == 1:
        return work.real.diagonal().copy(), vecs, 0

    cdef double complex[:, :] A = work
    cdef double complex[:, :] V = vecs
    cdef double norm_f = _frob(A, d)
    cdef double thresh = sweep_tol * norm_f
    # skip threshold, see jacobi_py: cannot stall a sweep and keeps
    # denormal entries out of the rotation math
    cdef double rot_tol = thresh / (2.0 * d)
    if rot_tol < 1e-306:
        rot_tol = 1e-306
    cdef int sweep
    cdef Py_ssize_t p, q
    for sweep in range(max_sweeps):
        if _off_mass(A, d) <= thresh:
            return np.real(np.diagonal(work)).copy(), vecs, sweep
        for p in range(d - 1):
            for q in range(p + 1, d):
                _rotate(A, V, d, p, q, rot_tol)
    if _off_mass(A, d) <= thresh:
        return np.real(np.diagonal(work)).copy(), vecs, max_sweeps
    return np.real(np.diagonal(work)).copy(), vecs, -1


cdef inline double _cabs2(double complex z) noexcept:
    return z.real * z.real + z.imag * z.imag


cdef double _frob(double complex[:, :] A, Py_ssize_t d) noexcept:
    cdef double acc = 0.0
    cdef Py_ssize_t i, j
    for i in range(d):
        for j in range(d):
            acc += _cabs2(A[i, j])
    return sqrt(acc)


cdef double _off_mass(double complex[:, :] A, Py_ssize_t d) noexcept:
    cdef double acc = 0.0
    cdef Py_ssize_t i, j
    for i in range(d):
        for j in range(d):
            if i != j:
                acc += _cabs2(A[i, j])
    return sqrt(acc)


cdef void _rotate(double complex[:, :] A, double complex[:, :] V,
                  Py_ssize_t d, Py_ssize_t p, Py_ssize_t q,
                  double rot_tol) noexcept:
    cdef double complex apq = A[p, q]
    cdef double r = sqrt(_cabs2(apq))
    if r <= rot_tol:
        return
    cdef double app = A[p, p].real
    cdef double aqq = A[q, q].real
    cdef double complex u = apq / r
    cdef double tau = (aqq - app) / (2.0 * r)
    cdef double t
    if fabs(tau) > 1e150:
        t = 1.0 / (2.0 * tau)
    elif tau >= 0.0:
        t = 1.0 / (tau + hypot(1.0, tau))
    else:
        t = -1.0 / (-tau + hypot(1.0, tau))
    cdef double c = 1.0 / sqrt(t * t + 1.0)
    cdef double s = t * c

    cdef double complex uc = u * c
    cdef double complex us = u * s
    cdef double complex ucc = c * (u.real - 1j * u.imag)   # conj(u) * c
    cdef double complex usc = s * (u.real - 1j * u.imag)   # conj(u) * s
    cdef Py_ssize_t i
    cdef double complex xp, xq
    for i in range(d):
        xp = A[p, i]
        xq = A[q, i]
        A[p, i] = ucc * xp - s * xq
        A[q, i] = usc * xp + c * xq
    for i in range(d):
        xp = A[i, p]
        xq = A[i, q]
        A[i, p] = uc * xp - s * xq
        A[i, q] = us * xp + c * xq
    A[p, p] = app - t * r
    A[q, q] = aqq + t * r
    A[p, q] = 0.0
    A[q, p] = 0.0
    for i in range(d):
        xp = V[i, p]
        xq = V[i, q]
        V[i, p] = uc * xp - s * xq
        V[i, q] = us * xp + c * xq
