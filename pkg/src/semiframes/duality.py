"""Canonical duals and duality defect checks.

Duality tests are operator-identity checks in Frobenius norm: exact at a
finite section and each failure comes with a worst-direction witness pair.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, SingularFrameOperator
from .numkernel import RANK_TOL, hermitian_eig, operator_norm, svd
from .spaces import (
    MeasureSpace,
    VectorFamily,
    frame_operator,
    omega_form,
    operator_matrix,
    whiten_family,
)

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class DualReport:
    """Outcome of a duality identity check.

    ``witness`` pairs the worst input basis direction with the normalized
    defect it produces.
    """

    verdict: bool
    max_residual: float
    witness: tuple | None
    detail: dict = field(default_factory=dict)


def _inverse_frame_map(fam_w: VectorFamily, sp: MeasureSpace, tol_rank):
    """Spectral inverse of the (whitened) frame operator."""
    t = frame_operator(fam_w, sp)
    eig = hermitian_eig(t, tol_herm=np.inf)
    lam = eig.eigenvalues
    if lam[0] <= tol_rank * max(lam[-1], 0.0) or lam[-1] <= 0.0:
        raise SingularFrameOperator(
            f"frame operator singular at this truncation (min eigenvalue {lam[0]:.3e})"
        )
    v = eig.eigenvectors
    return (v / lam) @ v.conj().T


def canonical_dual(fam: VectorFamily, sp: MeasureSpace, gram=None, tol_rank=RANK_TOL):
    """Apply the inverse frame operator to every family vector.

    The result is the canonical dual: synthesis against it reconstructs, and
    it is a bound-one tight family in the analysis-graph inner product.
    """
    fam_w, _, winv = whiten_family(fam, gram)
    tinv = _inverse_frame_map(fam_w, sp, tol_rank)
    chi_w = fam_w.vectors @ tinv.T
    if winv is not None:
        chi_w = chi_w @ winv.T
    return VectorFamily(chi_w, label=f"dual({fam.label})" if fam.label else "dual")


def lower_from_frame(chi: VectorFamily, reference: VectorFamily, sp: MeasureSpace,
                     gram=None, tol_rank=RANK_TOL):
    """Push a graph-space frame back through the reference frame operator.

    Inverse construction to :func:`canonical_dual`: applied to a canonical
    dual it returns the original family.
    """
    if chi.ambient_dim != reference.ambient_dim:
        raise DimensionMismatch("families live in different ambient dimensions")
    ref_w, w, winv = whiten_family(reference, gram)
    t = frame_operator(ref_w, sp)
    eig = hermitian_eig(t, tol_herm=np.inf)
    if eig.eigenvalues[0] <= tol_rank * max(eig.eigenvalues[-1], 0.0):
        raise SingularFrameOperator("reference frame operator singular at this truncation")
    chi_vectors = chi.vectors
    if w is not None:
        chi_vectors = chi_vectors @ w.T
    eta_w = chi_vectors @ t.T
    if winv is not None:
        eta_w = eta_w @ winv.T
    return VectorFamily(eta_w, label="eta")


def _checked_pair(phi: VectorFamily, psi: VectorFamily, sp: MeasureSpace):
    if phi.ambient_dim != psi.ambient_dim:
        raise DimensionMismatch("families live in different ambient dimensions")
    if phi.count != psi.count or phi.count != sp.size:
        raise DimensionMismatch("families and measure must share the index set")


def _defect_witness(defect):
    """Spectral residual with the input/output pair that attains it."""
    dec = svd(defect)
    if dec.s.size == 0 or dec.s[0] == 0.0:
        d = defect.shape[1]
        e = np.zeros(d, dtype=np.complex128)
        e[0] = 1.0
        return 0.0, (e, np.zeros(defect.shape[0], dtype=np.complex128))
    residual = float(dec.s[0])
    right = dec.vh[0].conj()
    left = dec.u[:, 0]
    return residual, (right, left)


def dual_pair_check(phi: VectorFamily, psi: VectorFamily, sp: MeasureSpace,
                    tol=DEFAULT_TOL, gram=None):
    """Check the reconstruction identity
    <f, g> = sum_n mu_n <f, phi_n><psi_n, g> as the operator identity
    sum_n mu_n psi_n phi_n^* = I.

    ``max_residual`` is the spectral norm of the defect (its largest action
    on any unit pair); the witness is the attaining pair.  The worst basis
    direction is reported in ``detail``.
    """
    _checked_pair(phi, psi, sp)
    phi_w, _, winv = whiten_family(phi, gram)
    psi_w, _, _ = whiten_family(psi, gram)
    d = phi.ambient_dim
    op = (psi_w.vectors.T * sp.weights) @ np.conj(phi_w.vectors)
    defect = op - np.eye(d)
    residual, (win, wout) = _defect_witness(defect)
    if winv is not None:
        win, wout = winv @ win, winv @ wout
    worst_basis = int(np.argmax(np.linalg.norm(defect, axis=0)))
    return DualReport(
        verdict=residual <= tol,
        max_residual=residual,
        witness=(win, wout),
        detail={"tol": tol, "worst_basis_index": worst_basis,
                "frobenius_residual": float(np.linalg.norm(defect))},
    )


def weak_G_dual_check(phi: VectorFamily, psi: VectorFamily, sp: MeasureSpace,
                      g_op, tol=DEFAULT_TOL, gram=None):
    """Check the operator-mediated duality
    <G f, u> = sum_n mu_n <f, psi_n><phi_n, u>, i.e. that synthesis against
    phi composed with analysis against psi reproduces the section of G.

    The spectral defect is reported relative to max(1, ||G||).  A zero
    family on either side makes the identity trivially unfalsifiable; that
    is flagged in ``detail['zero_family']``.
    """
    _checked_pair(phi, psi, sp)
    d = phi.ambient_dim
    g = operator_matrix(g_op, d)
    phi_w, w, winv = whiten_family(phi, gram)
    psi_w, _, _ = whiten_family(psi, gram)
    if w is not None:
        g = w @ g @ winv
    op = (phi_w.vectors.T * sp.weights) @ np.conj(psi_w.vectors)
    defect = op - g
    residual, (win, wout) = _defect_witness(defect)
    gnorm = operator_norm(g)
    scaled = residual / max(1.0, gnorm)
    if winv is not None:
        win, wout = winv @ win, winv @ wout
    zero_family = bool(
        np.linalg.norm(phi.vectors) < 1e-300 or np.linalg.norm(psi.vectors) < 1e-300
    )
    return DualReport(
        verdict=scaled <= tol,
        max_residual=scaled,
        witness=(win, wout),
        detail={"tol": tol, "absolute_residual": residual, "zero_family": zero_family,
                "frobenius_residual": float(np.linalg.norm(defect))},
    )


def tightness_defect(fam: VectorFamily, chi: VectorFamily, sp: MeasureSpace, probes,
                     gram=None):
    """Largest relative defect of the graph-norm tight-frame identity of a
    canonical dual over the given probe vectors."""
    fam_w, w, _ = whiten_family(fam, gram)
    chi_w, _, _ = whiten_family(chi, gram)
    t = frame_operator(fam_w, sp)
    worst = 0.0
    for f in probes:
        fw = np.asarray(f, dtype=np.complex128).reshape(-1)
        if w is not None:
            fw = w @ fw
        omega = omega_form(fam_w, sp, fw, fw).real
        tf = t @ fw
        mass = float(np.sum(sp.weights * np.abs(np.conj(chi_w.vectors) @ tf) ** 2))
        worst = max(worst, abs(mass - omega) / max(1.0, abs(omega)))
    return worst
