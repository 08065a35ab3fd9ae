"""Coercivity of the analysis form against an operator graph norm, and the
weak solution it guarantees.

When the weighted analysis form dominates the graph norm of A* from below,
every right-hand side admits a unique expansion vector w with
Omega(w, f) = <rhs, f> for all f; at a finite section that is a frame
operator solve.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import NotCoercive
from .numkernel import hermitian_eig, hermitian_part, solve_psd
from .spaces import MeasureSpace, VectorFamily, frame_operator, operator_matrix


@dataclass(frozen=True)
class CoercivityReport:
    """Extreme constants of the analysis form against the graph norm."""

    alpha_prime: float
    gamma: float
    holds: bool
    detail: dict = field(default_factory=dict)


def coercivity_constants(phi: VectorFamily, sp: MeasureSpace, a_op, tol=1e-12):
    """Extreme generalized eigenvalues of the analysis form against
    ||f||^2 + ||A* f||^2."""
    d = phi.ambient_dim
    a = operator_matrix(a_op, d)
    t = frame_operator(phi, sp)
    graph = np.eye(d) + a @ a.conj().T
    eig_g = hermitian_eig(hermitian_part(graph), tol_herm=np.inf)
    root_inv = (eig_g.eigenvectors / np.sqrt(eig_g.eigenvalues)) @ eig_g.eigenvectors.conj().T
    pencil = hermitian_part(root_inv @ t @ root_inv)
    eig_p = hermitian_eig(pencil, tol_herm=np.inf)
    alpha_prime = float(max(eig_p.eigenvalues[0], 0.0))
    gamma = float(max(eig_p.eigenvalues[-1], 0.0))
    holds = alpha_prime > tol * max(1.0, gamma)
    return CoercivityReport(
        alpha_prime=alpha_prime,
        gamma=gamma,
        holds=holds,
        detail={"graph_norm_assumption": "domains of the adjoint and the form coincide"},
    )


def weak_expansion(phi: VectorFamily, sp: MeasureSpace, a_op, rhs, tol=1e-9):
    """Vector w with Omega_phi(w, f) = <rhs, f> for every f at this section.

    Requires coercivity; the weak character of the expansion is a domain
    phenomenon visible only as trend data across truncations.
    """
    report = coercivity_constants(phi, sp, a_op)
    if not report.holds:
        raise NotCoercive(
            f"analysis form is not coercive (alpha' = {report.alpha_prime:.3e})"
        )
    rhs = np.asarray(rhs, dtype=np.complex128).reshape(-1)
    t = frame_operator(phi, sp)
    return solve_psd(t, rhs, tol_resid=tol)
