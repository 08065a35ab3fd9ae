"""Dense complex linear algebra substrate.

Hermitian eigendecomposition (cyclic Jacobi), singular values, Moore-Penrose
pseudoinverse and positive-semidefinite solves.  Everything here is pure:
inputs are never mutated and no state is shared.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import ConvergenceError, NotHermitian, NotPSD, OutOfRange

# Relative rank tolerance shared with the factorization module.
RANK_TOL = 1e-11
# Off-diagonal Frobenius mass threshold (relative) and sweep cap for Jacobi.
SWEEP_TOL = 1e-13
MAX_SWEEPS = 100


def as_complex_matrix(a):
    """Validate and return ``a`` as a 2-D complex128 array with finite entries."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValueError("matrix entries must be finite")
    return m


def hermitian_defect(a):
    """Largest entrywise deviation |a - a*|."""
    return float(np.max(np.abs(a - a.conj().T)))


def is_hermitian(a, tol_herm=None):
    a = as_complex_matrix(a)
    if a.shape[0] != a.shape[1]:
        return False
    if tol_herm is None:
        tol_herm = 1e-10 * max(1.0, float(np.max(np.abs(a))))
    return hermitian_defect(a) <= tol_herm


def hermitian_part(a):
    a = as_complex_matrix(a)
    return 0.5 * (a + a.conj().T)


@dataclass(frozen=True)
class HermitianEig:
    """Eigenvalues in ascending order; eigenvectors as matching columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def hermitian_eig(a, tol_herm=None):
    """Eigendecomposition of a Hermitian matrix via cyclic Jacobi.

    Raises NotHermitian when ``max |a - a*|`` exceeds ``tol_herm``
    (default 1e-10 relative to the largest entry).
    """
    a = as_complex_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise NotHermitian(f"matrix is not square: {a.shape}")
    if tol_herm is None:
        tol_herm = 1e-10 * max(1.0, float(np.max(np.abs(a))))
    defect = hermitian_defect(a)
    if defect > tol_herm:
        raise NotHermitian(f"Hermitian defect {defect:.3e} exceeds {tol_herm:.3e}")
    work = hermitian_part(a)
    vals, vecs, sweeps = _kernels.cyclic_jacobi(work, SWEEP_TOL, MAX_SWEEPS)
    if sweeps < 0:
        raise ConvergenceError(f"Jacobi did not converge in {MAX_SWEEPS} sweeps")
    order = np.argsort(vals, kind="stable")
    return HermitianEig(np.ascontiguousarray(vals[order]), np.ascontiguousarray(vecs[:, order]))


@dataclass(frozen=True)
class SVD:
    """Compact singular value decomposition, singular values descending.

    Left vectors for singular values at or below the rank cutoff are zero
    columns; the decomposition is intended for rank / pseudoinverse work
    at desk scale, not for full unitary factors.
    """

    u: np.ndarray
    s: np.ndarray
    vh: np.ndarray


def svd(a, tol_rank=RANK_TOL):
    """SVD via a Hermitian eigenproblem on the smaller Gramian.

    Singular values are re-extracted as ||A v_i|| (or ||A* u_i||), which is
    accurate near zero where the squared eigenvalues are pure noise, and the
    left factor gets one modified Gram-Schmidt pass.
    """
    a = as_complex_matrix(a)
    m, n = a.shape
    if m < n:
        flipped = svd(a.conj().T, tol_rank)
        return SVD(flipped.vh.conj().T, flipped.s, flipped.u.conj().T)

    gram = a.conj().T @ a
    eig = hermitian_eig(hermitian_part(gram), tol_herm=np.inf)
    # descending singular order
    v = eig.eigenvectors[:, ::-1]
    av = a @ v
    s = np.linalg.norm(av, axis=0)
    order = np.argsort(-s, kind="stable")
    s = s[order]
    v = v[:, order]
    av = av[:, order]

    smax = s[0] if s.size else 0.0
    cutoff = tol_rank * smax
    u = np.zeros((m, n), dtype=np.complex128)
    for i in range(n):
        if s[i] > cutoff and s[i] > 0.0:
            col = av[:, i] / s[i]
            # one re-orthogonalization pass over previously accepted columns
            for j in range(i):
                if s[j] > cutoff:
                    col = col - (u[:, j].conj() @ col) * u[:, j]
            nrm = np.linalg.norm(col)
            if nrm > 0.0:
                u[:, i] = col / nrm
    return SVD(u, s, v.conj().T)


def singular_values(a):
    return svd(a).s


def rank(a, tol_rank=RANK_TOL):
    s = svd(a, tol_rank).s
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > tol_rank * s[0]))


def pinv(a, tol_rank=RANK_TOL):
    """Moore-Penrose pseudoinverse; singular values below the relative
    cutoff are treated as zero (zero matrix maps to zero)."""
    a = as_complex_matrix(a)
    dec = svd(a, tol_rank)
    s = dec.s
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((a.shape[1], a.shape[0]), dtype=np.complex128)
    cutoff = tol_rank * s[0]
    inv = np.where(s > cutoff, 1.0 / np.where(s > cutoff, s, 1.0), 0.0)
    return dec.vh.conj().T @ (inv[:, None] * dec.u.conj().T)


def solve_psd(t, b, tol_rank=RANK_TOL, tol_resid=1e-9, tol_psd=None):
    """Minimal-norm solve T x = b for Hermitian PSD T.

    Raises OutOfRange when b has a component outside range(T) beyond
    ``tol_resid * max(1, ||b||)``.
    """
    t = as_complex_matrix(t)
    b = np.asarray(b, dtype=np.complex128).reshape(-1)
    if t.shape[0] != t.shape[1] or t.shape[0] != b.shape[0]:
        raise ValueError(f"incompatible shapes {t.shape} and {b.shape}")
    eig = hermitian_eig(t)
    lam = eig.eigenvalues
    lmax = float(lam[-1]) if lam.size else 0.0
    if tol_psd is None:
        tol_psd = 1e-10 * max(1.0, abs(lmax))
    if lam[0] < -tol_psd:
        raise NotPSD(f"smallest eigenvalue {lam[0]:.3e} below -{tol_psd:.3e}")
    cutoff = tol_rank * max(lmax, 0.0)
    coeff = eig.eigenvectors.conj().T @ b
    inv = np.where(lam > cutoff, 1.0 / np.where(lam > cutoff, lam, 1.0), 0.0)
    x = eig.eigenvectors @ (inv * coeff)
    residual = float(np.linalg.norm(t @ x - b))
    if residual > tol_resid * max(1.0, float(np.linalg.norm(b))):
        raise OutOfRange(
            f"right-hand side off range(T): residual {residual:.3e}", residual=residual
        )
    return x


def range_kernel_split(a, tol_rank=RANK_TOL):
    """Orthonormal split of the domain of ``a`` by its action.

    Returns ``(w, sig, k)`` where the columns of ``w`` span ker(a)^⊥ (the row
    space), ``sig`` are the matching singular values, and the columns of ``k``
    span ker(a).  ``||a (w z)||^2 = z* diag(sig)^2 z`` for every coefficient
    vector z.  Unlike :func:`svd` this always returns a full orthonormal
    basis of the domain, so it works for wide matrices too.
    """
    a = as_complex_matrix(a)
    gram = a.conj().T @ a
    eig = hermitian_eig(hermitian_part(gram), tol_herm=np.inf)
    v = eig.eigenvectors[:, ::-1]
    s = np.linalg.norm(a @ v, axis=0)
    order = np.argsort(-s, kind="stable")
    v = np.ascontiguousarray(v[:, order])
    s = s[order]
    smax = float(s[0]) if s.size else 0.0
    if smax == 0.0:
        return v[:, :0], s[:0], v
    mask = s > tol_rank * smax
    return v[:, mask], s[mask], v[:, ~mask]


def operator_norm(a):
    s = svd(a).s
    return float(s[0]) if s.size else 0.0
