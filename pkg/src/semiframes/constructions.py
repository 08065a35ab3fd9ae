"""Generators for the worked example families.

Weighted orthonormal/frame pairs, metric-operator families, partition-scaled
pairs and sampled kernel-space pairs.  All constructors are pure and
truncation-consistent where a rule is involved.
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import (
    BoundViolated,
    DimensionMismatch,
    NotAFrame,
    NotMetric,
    NotPSDKernel,
    PartitionMissing,
    ZeroWeight,
)
from .numkernel import as_complex_matrix, hermitian_eig, is_hermitian
from .spaces import MeasureSpace, OperatorSpec, VectorFamily


@dataclass(frozen=True)
class WeightSequence:
    """Nonzero weights m_n with |m_n| strictly below ``sup_bound``.

    ``vanishing`` records whether a subsequence tends to zero; it is
    bookkeeping for classification expectations, not enforced.
    """

    generator: Callable[[int], complex] = field(repr=False)
    sup_bound: float
    vanishing: bool = False

    def values(self, count):
        vals = np.array([complex(self.generator(n)) for n in range(1, count + 1)])
        if np.any(vals == 0):
            first = int(np.argmax(vals == 0)) + 1
            raise ZeroWeight(f"weight m_{first} is zero")
        if np.any(np.abs(vals) >= self.sup_bound):
            first = int(np.argmax(np.abs(vals) >= self.sup_bound)) + 1
            raise ValueError(
                f"|m_{first}| = {abs(vals[first - 1]):.3g} not below bound {self.sup_bound}"
            )
        return vals


def weighted_onb_pair(m: WeightSequence, d):
    """psi_n = m_n e_n and phi_n = e_n / conj(m_n)."""
    vals = m.values(int(d))
    psi = VectorFamily(np.diag(vals), label="psi")
    phi = VectorFamily(np.diag(1.0 / np.conj(vals)), label="phi")
    return psi, phi


def weighted_frame_pair(m: WeightSequence, theta: VectorFamily, sp: MeasureSpace | None = None):
    """Scale a frame by a weight sequence: psi_n = m_n theta_n,
    phi_n = theta_n / conj(m_n).  Requires theta to be a frame at this
    section (positive lower bound)."""
    from .diagnostics import lower_frame_bound

    if sp is None:
        sp = MeasureSpace.counting(theta.count)
    report = lower_frame_bound(theta, sp)
    if report.verdict != "holds":
        raise NotAFrame("theta has no positive lower frame bound at this section")
    vals = m.values(theta.count)
    psi = VectorFamily(vals[:, None] * theta.vectors, label="psi")
    phi = VectorFamily(theta.vectors / np.conj(vals)[:, None], label="phi")
    return psi, phi


def metric_from_operator(s_op: OperatorSpec):
    """G = I + S* S: a metric operator with spectrum at or above one."""
    if s_op.kind == "dense":
        s = s_op.matrix
        return OperatorSpec.dense(np.eye(s.shape[0]) + s.conj().T @ s, label="G")
    if s_op.kind == "diagonal":
        rule = s_op.diag_rule
        return OperatorSpec.diagonal(
            lambda n: 1.0 + abs(complex(rule(n))) ** 2, label="G"
        )
    if s_op.kind == "zero":
        return OperatorSpec.identity(label="G")
    if s_op.kind == "identity":
        return OperatorSpec.scaled_identity(2.0, label="G")
    return OperatorSpec.scaled_identity(1.0 + abs(s_op.scale) ** 2, label="G")


def lower_from_metric(g_op: OperatorSpec, d, tol=1e-9):
    """Family of metric-operator columns phi_n = G e_n."""
    g = g_op.matrix_at(d) if isinstance(g_op, OperatorSpec) else as_complex_matrix(g_op)
    eig = hermitian_eig(g)
    if eig.eigenvalues[0] < 1.0 - tol:
        raise NotMetric(
            f"operator spectrum reaches {eig.eigenvalues[0]:.6g}, below one"
        )
    return VectorFamily(g.T, label="metric_columns")


def partition_G_family(g_op, sp: MeasureSpace, dim=None):
    """Block-constant pair phi_x = G e_k / sqrt(mu(X_k)),
    psi_x = e_k / sqrt(mu(X_k)) for x in block k.

    Exact operator duality between the pair needs one block per ambient
    direction; fewer blocks reproduce only the corresponding columns of G.
    """
    if sp.partition is None:
        raise PartitionMissing("measure space carries no partition")
    blocks = sp.partition
    if dim is None:
        if isinstance(g_op, OperatorSpec) and g_op.kind == "dense":
            dim = g_op.matrix.shape[0]
        else:
            dim = len(blocks)
    if len(blocks) > dim:
        raise DimensionMismatch(
            f"{len(blocks)} blocks do not fit in ambient dimension {dim}"
        )
    g = g_op.matrix_at(dim) if isinstance(g_op, OperatorSpec) else as_complex_matrix(g_op)
    block_weights = sp.block_weights
    phi_rows = np.zeros((sp.size, dim), dtype=np.complex128)
    psi_rows = np.zeros((sp.size, dim), dtype=np.complex128)
    for k, block in enumerate(blocks):
        scale = 1.0 / np.sqrt(block_weights[k])
        for x in block:
            phi_rows[x] = g[:, k] * scale
            psi_rows[x, k] = scale
    return VectorFamily(phi_rows, label="phi"), VectorFamily(psi_rows, label="psi")


@dataclass(frozen=True)
class KernelFamily:
    """Sampled kernel sections with a weight function on the grid.

    ``gram[i, j]`` is the pairing of the sections at grid points i and j;
    ``kernel_fn`` (when present) evaluates the underlying kernel so the
    reproducing identity can be cross-checked pointwise.
    """

    grid: np.ndarray
    gram: np.ndarray
    weight_fn: Callable[[float], float] = field(repr=False)
    power: int = 1
    kernel_fn: Callable[[float, float], float] | None = field(default=None, repr=False)

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float).reshape(-1)
        gram = as_complex_matrix(self.gram)
        if gram.shape != (grid.size, grid.size):
            raise DimensionMismatch("gram must be square on the grid")
        if not is_hermitian(gram):
            raise NotPSDKernel("gram must be Hermitian")
        eig = hermitian_eig(gram, tol_herm=np.inf)
        if eig.eigenvalues[0] < -1e-10 * max(eig.eigenvalues[-1], 1.0):
            raise NotPSDKernel(
                f"gram has negative eigenvalue {eig.eigenvalues[0]:.3e}"
            )
        weights = np.array([float(self.weight_fn(x)) for x in grid])
        if np.any(weights <= 1.0):
            raise ValueError("weight function must exceed one on the grid")
        if self.power < 0:
            raise ValueError("power must be a non-negative integer")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "gram", gram)

    @property
    def size(self):
        return int(self.grid.size)

    def weights(self):
        return np.array([float(self.weight_fn(x)) for x in self.grid])


def gaussian_gram(grid, bandwidth=1.0):
    x = np.asarray(grid, dtype=float).reshape(-1)
    diff = x[:, None] - x[None, :]
    return np.exp(-(diff**2) / (2.0 * bandwidth**2))


def gaussian_kernel_family(grid, weight_fn, power=1, bandwidth=1.0):
    def kernel_fn(a, b):
        return float(np.exp(-((a - b) ** 2) / (2.0 * bandwidth**2)))

    return KernelFamily(
        grid=grid,
        gram=gaussian_gram(grid, bandwidth),
        weight_fn=weight_fn,
        power=power,
        kernel_fn=kernel_fn,
    )


def rkhs_pair(kf: KernelFamily):
    """phi_x = m(x)^p k_x and psi_x = m(x)^-p k_x as coefficient families.

    Ambient vectors are coefficients against the kernel sections; pair them
    through ``kf.gram`` (the ``gram`` argument threaded through the other
    modules).
    """
    m = kf.weights() ** kf.power
    phi = VectorFamily(np.diag(m), label="phi")
    psi = VectorFamily(np.diag(1.0 / m), label="psi")
    return phi, psi


def reproducing_defect(kf: KernelFamily, coeff_vectors):
    """Worst pointwise defect of f(x) = <f, k_x> over the given coefficient
    vectors, with f(x) evaluated through the kernel function when available
    and through the gram matrix otherwise."""
    from .spaces import gram_inner

    worst = 0.0
    for c in coeff_vectors:
        c = np.asarray(c, dtype=np.complex128).reshape(-1)
        for j in range(kf.size):
            e_j = np.zeros(kf.size)
            e_j[j] = 1.0
            via_gram = gram_inner(c, e_j, kf.gram)
            if kf.kernel_fn is not None:
                point = complex(
                    sum(c[i] * kf.kernel_fn(kf.grid[i], kf.grid[j]) for i in range(kf.size))
                )
            else:
                point = complex(kf.gram.T[j] @ c)
            worst = max(worst, abs(point - via_gram))
    return worst


def embedding_operator(kf: KernelFamily, sp: MeasureSpace):
    """Section of the operator representing the weighted point-value pairing
    inside the kernel geometry: <G f, g>_gram = sum_x mu_x f(x) conj(g(x))."""
    if sp.size != kf.size:
        raise DimensionMismatch("measure size must match the grid")
    return OperatorSpec.dense(np.diag(sp.weights) @ kf.gram.T, label="embedding")


def diagonal_A_for(m: WeightSequence, a_rule: Callable[[int], complex], d):
    """Diagonal operator a_n bounded by 1/|m_n|, the regime in which the
    inverse-weighted family keeps a unit operator-relative lower bound."""
    vals = m.values(int(d))
    for n in range(1, int(d) + 1):
        if abs(complex(a_rule(n))) > 1.0 / abs(vals[n - 1]) + 1e-12:
            raise BoundViolated(
                f"|a_{n}| exceeds 1/|m_{n}|", index=n
            )
    return OperatorSpec.diagonal(a_rule, label="A")
