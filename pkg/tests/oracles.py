"""Independent brute-force oracles.

These deliberately avoid the library's own linear algebra paths: the
determinant uses a local partial-pivot LU, eigenvalues come from bisection
on the characteristic polynomial, and frame quantities are plain summation.
"""

import numpy as np


def lu_det(a):
    """Determinant via partial-pivot LU written out longhand."""
    a = np.array(a, dtype=np.complex128)
    n = a.shape[0]
    sign = 1.0
    det = 1.0 + 0.0j
    for k in range(n):
        piv = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[piv, k]) == 0.0:
            return 0.0 + 0.0j
        if piv != k:
            a[[k, piv], :] = a[[piv, k], :]
            sign = -sign
        det *= a[k, k]
        for i in range(k + 1, n):
            factor = a[i, k] / a[k, k]
            a[i, k:] -= factor * a[k, k:]
    return sign * det


def charpoly_eigenvalues(a, samples=4096, tol=1e-12):
    """All eigenvalues of a Hermitian matrix with simple spectrum.

    Brackets sign changes of det(a - x I) on a Gershgorin interval and
    bisects each one.  Returns ascending eigenvalues; raises if the number
    of brackets does not match the dimension (degenerate spectrum).
    """
    a = np.asarray(a, dtype=np.complex128)
    n = a.shape[0]
    radii = np.sum(np.abs(a), axis=1) - np.abs(np.diag(a))
    lo = float(np.min(np.diag(a).real - radii)) - 1.0
    hi = float(np.max(np.diag(a).real + radii)) + 1.0

    def f(x):
        return lu_det(a - x * np.eye(n)).real

    xs = np.linspace(lo, hi, samples)
    vals = np.array([f(x) for x in xs])
    roots = []
    for i in range(samples - 1):
        va, vb = vals[i], vals[i + 1]
        if va == 0.0:
            roots.append(xs[i])
            continue
        if va * vb < 0.0:
            left, right = xs[i], xs[i + 1]
            fl = va
            while right - left > tol:
                mid = 0.5 * (left + right)
                fm = f(mid)
                if fm == 0.0:
                    left = right = mid
                elif fl * fm < 0.0:
                    right = mid
                else:
                    left, fl = mid, fm
            roots.append(0.5 * (left + right))
    if len(roots) != n:
        raise RuntimeError(f"bisection found {len(roots)} of {n} eigenvalues")
    return np.array(sorted(roots))


def frame_operator_by_sum(vectors, weights):
    """Sum of weighted outer products, one rank-one term at a time."""
    count, dim = vectors.shape
    t = np.zeros((dim, dim), dtype=np.complex128)
    for n in range(count):
        v = vectors[n]
        t += weights[n] * np.outer(v, v.conj())
    return t


def omega_by_sum(vectors, weights, f, g):
    """Direct evaluation of the weighted analysis pairing."""
    total = 0.0 + 0.0j
    for n in range(vectors.shape[0]):
        phi = vectors[n]
        total += weights[n] * np.vdot(phi, f) * np.vdot(g, phi)
    return total


def rayleigh_range(t, probes):
    """Min/max Rayleigh quotients of a Hermitian matrix over unit probes."""
    lo, hi = np.inf, -np.inf
    for f in probes:
        q = float(np.real(np.vdot(f, t @ f)) / np.real(np.vdot(f, f)))
        lo = min(lo, q)
        hi = max(hi, q)
    return lo, hi
