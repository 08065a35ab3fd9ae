"""Factorizations through analysis operators.

Given the norm majorization ||T1* f|| <= lambda ||T2 f||, a bounded factor U
with T1 = T2* U exists; the minimal-norm representative is (T2*)^+ T1 and its
norm equals the best majorization constant.  On top of that sit the
weak-lower factorization B = C* M, the Bessel dual family read off the rows
of M, coefficient representations, and the upper factorization through a
closed extension.

Proper extensions of the analysis adjoint are a domain phenomenon with no
finite-dimensional content; at a section they collapse to the adjoint
itself, and results record that collapse in ``detail``.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .diagnostics import BoundsReport, weak_A_frame_alpha, weak_upper_alpha
from .duality import weak_G_dual_check
from .errors import (
    DimensionMismatch,
    DualityViolated,
    MajorizationViolated,
    ReconstructionFailed,
    UnsatisfiableBound,
)
from .numkernel import (
    RANK_TOL,
    as_complex_matrix,
    operator_norm,
    pinv,
    range_kernel_split,
)
from .spaces import (
    AnalysisMatrix,
    MeasureSpace,
    OperatorSpec,
    VectorFamily,
    analysis_operator,
    operator_matrix,
)

EXTENSION_NOTE = (
    "extension collapses to the analysis adjoint at a finite section"
)


@dataclass(frozen=True)
class FactorizationResult:
    factor: np.ndarray
    lambda_hat: float
    residual: float
    minimal_norm: bool
    detail: dict = field(default_factory=dict)


@dataclass(frozen=True)
class AtomicCoefficients:
    """Weighted coefficient vector a_f with its certified bound gamma."""

    coefficients: np.ndarray
    gamma: float


def _section_of(op, d):
    if isinstance(op, AnalysisMatrix):
        return np.array(op.matrix)
    if isinstance(op, OperatorSpec):
        return op.matrix_at(d)
    return as_complex_matrix(op)


def _domain_section(t2):
    """T2 must already carry its section: an analysis matrix, a dense
    operator, or a bare matrix (possibly rectangular)."""
    if isinstance(t2, AnalysisMatrix):
        return np.array(t2.matrix)
    if isinstance(t2, OperatorSpec):
        if t2.kind != "dense":
            raise DimensionMismatch(
                "rule-based operator has no intrinsic dimension; pass matrix_at(d)"
            )
        return np.array(t2.matrix)
    return as_complex_matrix(t2)


def douglas_factor(t1, t2, tol=1e-9, tol_rank=RANK_TOL):
    """Minimal-norm U with T1 = T2* U.

    Verifies ker(T2) <= ker(T1*) first (each kernel direction of T2 must be
    annihilated by T1*), raising MajorizationViolated with the offending
    unit vector otherwise; the majorization constant is the top whitened
    quotient of T1* against T2 on the complement.
    """
    t2 = _domain_section(t2)
    d = t2.shape[1]
    t1 = _section_of(t1, d)
    if t1.shape[0] != d:
        raise DimensionMismatch(
            f"T1 acts out of dimension {t1.shape[0]}, T2 out of {d}"
        )
    t1_scale = max(1.0, operator_norm(t1))
    w, sig, kern = range_kernel_split(t2, tol_rank)
    if kern.shape[1]:
        masses = np.linalg.norm(t1.conj().T @ kern, axis=0)
        worst = int(np.argmax(masses))
        if masses[worst] > tol * t1_scale:
            raise MajorizationViolated(
                "ker(T2) not contained in ker(T1*): "
                f"defect {masses[worst]:.3e}",
                witness=kern[:, worst],
            )
    if w.shape[1] == 0:
        lambda_hat = 0.0
    else:
        lambda_hat = operator_norm(t1.conj().T @ (w / sig))
    u = pinv(t2.conj().T, tol_rank) @ t1
    residual = float(np.linalg.norm(t2.conj().T @ u - t1))
    if residual > tol * max(1.0, float(np.linalg.norm(t1))):
        raise MajorizationViolated(
            f"factorization residual {residual:.3e} exceeds tolerance",
            witness=None,
        )
    return FactorizationResult(
        factor=u,
        lambda_hat=float(lambda_hat),
        residual=residual,
        minimal_norm=True,
        detail={"factor_norm": operator_norm(u)},
    )


def lower_factorize(b_op, phi: VectorFamily, sp: MeasureSpace, tol=1e-9):
    """Factor B through the analysis adjoint of phi: B = C* M.

    Valid exactly when the weak-lower majorization ||B* u|| <= lambda ||C u||
    holds at this section.
    """
    c = analysis_operator(phi, sp)
    b = _section_of(b_op, phi.ambient_dim)
    result = douglas_factor(b, c, tol=tol)
    detail = dict(result.detail)
    detail["extension"] = EXTENSION_NOTE
    return FactorizationResult(
        factor=result.factor,
        lambda_hat=result.lambda_hat,
        residual=result.residual,
        minimal_norm=True,
        detail=detail,
    )


def bessel_dual_from_factor(result: FactorizationResult, sp: MeasureSpace):
    """Read the Bessel dual family off the factor rows:
    psi_n = conj(row n of M) / sqrt(mu_n)."""
    m = as_complex_matrix(result.factor)
    if m.shape[0] != sp.size:
        raise DimensionMismatch(
            f"factor has {m.shape[0]} rows, measure has {sp.size} points"
        )
    vectors = np.conj(m) / np.sqrt(sp.weights)[:, None]
    return VectorFamily(vectors, label="bessel_dual")


def atomic_coefficients(f, psi: VectorFamily, sp: MeasureSpace, b_op, phi: VectorFamily,
                        tol=1e-8):
    """Coefficients a_f(n) = sqrt(mu_n) <f, psi_n> representing B f through
    the synthesis of phi, with the certified bound ||a_f|| <= gamma ||f||.

    Raises ReconstructionFailed when psi is not a weak dual for B at this
    tolerance.
    """
    f = np.asarray(f, dtype=np.complex128).reshape(-1)
    c_psi = analysis_operator(psi, sp).matrix
    coeff = c_psi @ f
    gamma = operator_norm(c_psi)
    b = _section_of(b_op, phi.ambient_dim)
    c_phi = analysis_operator(phi, sp).matrix
    recon = c_phi.conj().T @ coeff
    target = b @ f
    residual = float(np.linalg.norm(recon - target))
    if residual > tol * max(1.0, float(np.linalg.norm(target))):
        raise ReconstructionFailed(
            f"coefficient reconstruction off by {residual:.3e}; "
            "psi is not a weak dual for this operator",
            residual=residual,
        )
    return AtomicCoefficients(coefficients=coeff, gamma=float(gamma))


def upper_factorize(psi: VectorFamily, sp: MeasureSpace, f_op, tol=1e-8):
    """Factor the analysis adjoint through F: C* = F N.

    Needs the weak upper bound against F to hold; the factor is built from
    the analysis section composed with the pseudoinverse of F*, which is
    the continuous extension that vanishes on the orthocomplement of
    range(F*).
    """
    upper = weak_upper_alpha(psi, sp, f_op)
    if upper.verdict == "fails":
        raise UnsatisfiableBound(
            "no weak upper bound against this operator: "
            + str(upper.detail.get("reason", ""))
        )
    c = analysis_operator(psi, sp).matrix
    f = _section_of(f_op, psi.ambient_dim)
    o = c @ pinv(f.conj().T)
    n = o.conj().T
    residual = float(np.linalg.norm(f @ n - c.conj().T))
    alpha = upper.constant
    lambda_hat = math.sqrt(alpha) if math.isfinite(alpha) else math.inf
    return FactorizationResult(
        factor=n,
        lambda_hat=float(lambda_hat),
        residual=residual,
        minimal_norm=True,
        detail={
            "alpha": alpha,
            "relative_residual": residual / max(1.0, float(np.linalg.norm(c))),
            "extension": EXTENSION_NOTE,
            "factor_norm": operator_norm(n),
        },
    )


def aphi_lower_chain(psi: VectorFamily, phi: VectorFamily, sp: MeasureSpace,
                     f_op, a_op, tol=1e-8):
    """Push a weak upper bound through duality to a weak lower bound for the
    operator image family.

    Premises: psi has a weak upper bound alpha against F, and phi is a weak
    F-dual of psi.  Then the family (A phi_n) carries a weak lower bound
    with constant 1/alpha against F; the report carries the actual infimum
    and holds when it clears 1/alpha within tolerance.
    """
    upper = weak_upper_alpha(psi, sp, f_op)
    if upper.verdict != "holds" or not (0.0 < upper.constant < math.inf):
        raise UnsatisfiableBound(
            "premise failed: psi has no positive finite weak upper bound against F"
        )
    alpha = upper.constant
    dual = weak_G_dual_check(psi, phi, sp, f_op, tol=tol)
    if not dual.verdict:
        raise DualityViolated(
            f"phi is not a weak dual of psi for this operator "
            f"(residual {dual.max_residual:.3e})",
            residual=dual.max_residual,
        )
    d = phi.ambient_dim
    a = operator_matrix(a_op, d)
    aphi = VectorFamily(phi.vectors @ a.T, label="A_phi")
    chain = weak_A_frame_alpha(aphi, sp, f_op)
    target = 1.0 / alpha
    holds = math.isfinite(chain.constant) and chain.constant >= target - tol
    norm_partial_sum = float(np.sum(sp.weights * np.linalg.norm(aphi.vectors, axis=1) ** 2))
    return BoundsReport(
        kind="aphi_lower_chain",
        constant=chain.constant,
        extremizer=chain.extremizer,
        per_truncation=[(d, chain.constant)],
        verdict="holds" if holds else "fails",
        detail={
            "alpha": alpha,
            "target": target,
            "duality_residual": dual.max_residual,
            "image_norm_partial_sum": norm_partial_sum,
        },
    )
