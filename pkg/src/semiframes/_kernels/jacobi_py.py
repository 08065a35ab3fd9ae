"""Pure-numpy cyclic Jacobi eigensolver for complex Hermitian matrices.

Fallback implementation with the same contract as the compiled kernel in
``_jacobi``: row/column rotations are vectorized, the sweep loop is Python.
"""

import math

import numpy as np

BACKEND = "python"


def cyclic_jacobi(a, sweep_tol=1e-13, max_sweeps=100):
    """Diagonalize a Hermitian matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    a : (d, d) complex ndarray, assumed Hermitian (not re-checked here).
    sweep_tol : stop once the off-diagonal Frobenius mass is below
        ``sweep_tol * ||a||_F``.
    max_sweeps : hard sweep limit.

    Returns
    -------
    (eigenvalues, vectors, sweeps): unsorted real diagonal, the accumulated
    unitary (columns are eigenvectors), and the number of full sweeps run.
    Returns ``sweeps = -1`` if the tolerance was not reached.
    """
    a = np.array(a, dtype=np.complex128)
    d = a.shape[0]
    v = np.eye(d, dtype=np.complex128)
    if d == 1:
        return a.real.diagonal().copy(), v, 0

    norm_f = np.linalg.norm(a)
    thresh = sweep_tol * norm_f
    # per-rotation skip threshold: if the off mass is above `thresh`, the
    # largest entry exceeds thresh/d, so skipping below thresh/(2d) cannot
    # stall a sweep; the floor keeps denormals out of the rotation math
    rot_tol = max(thresh / (2.0 * d), 1e-306)
    for sweep in range(max_sweeps):
        if _off_mass(a) <= thresh:
            return a.diagonal().real.copy(), v, sweep
        for p in range(d - 1):
            for q in range(p + 1, d):
                _rotate(a, v, p, q, rot_tol)
    if _off_mass(a) <= thresh:
        return a.diagonal().real.copy(), v, max_sweeps
    return a.diagonal().real.copy(), v, -1


def _off_mass(a):
    # summed directly over off-diagonal entries: subtracting the diagonal
    # mass from the total cancels catastrophically near convergence
    sq = np.abs(a) ** 2
    np.fill_diagonal(sq, 0.0)
    return math.sqrt(float(np.sum(sq)))


def _rotate(a, v, p, q, rot_tol):
    apq = a[p, q]
    r = abs(apq)
    if r <= rot_tol:
        return
    app = a[p, p].real
    aqq = a[q, q].real
    u = apq / r
    tau = (aqq - app) / (2.0 * r)
    if abs(tau) > 1e150:
        t = 1.0 / (2.0 * tau)
    else:
        t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c

    uc = u * c
    us = u * s
    # rows p, q of a  (left-multiplication by U^H)
    rp = np.conj(u) * c * a[p, :] - s * a[q, :]
    rq = np.conj(u) * s * a[p, :] + c * a[q, :]
    a[p, :] = rp
    a[q, :] = rq
    # columns p, q of a  (right-multiplication by U)
    cp = uc * a[:, p] - s * a[:, q]
    cq = us * a[:, p] + c * a[:, q]
    a[:, p] = cp
    a[:, q] = cq
    a[p, p] = app - t * r
    a[q, q] = aqq + t * r
    a[p, q] = 0.0
    a[q, p] = 0.0
    # accumulate the rotation
    vp = uc * v[:, p] - s * v[:, q]
    vq = us * v[:, p] + c * v[:, q]
    v[:, p] = vp
    v[:, q] = vq
