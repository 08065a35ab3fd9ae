"""Measure spaces, vector families, analysis/frame operators, scale norms.

Discrete model: integrals over the index space are weighted sums, and a
family is realized at one truncation as an (N, d) matrix of ambient vectors.
Generators are 1-based (the first vector is ``gen(1)``).

Every operation accepts an optional ``gram`` argument giving the ambient
inner product ``<f, g> = sum_ij f_i conj(g_j) gram[i, j]`` (the Gram matrix
of a spanning set, e.g. kernel sections).  Internally the problem is mapped
to whitened coordinates where that inner product is Euclidean, so all
spectral quantities are exact in the weighted geometry.
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DimensionMismatch, NotHermitian, NotPSD, NotPSDKernel
from .numkernel import (
    RANK_TOL,
    as_complex_matrix,
    hermitian_eig,
    is_hermitian,
)


def _readonly(a):
    out = np.array(a)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class MeasureSpace:
    """Discrete index set with strictly positive weights.

    ``partition`` optionally groups indices into disjoint covering blocks;
    block weights are the sums of their member weights.
    """

    weights: np.ndarray
    partition: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        if w.size < 1:
            raise ValueError("measure needs at least one point")
        if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
            raise ValueError("all weights must be finite and > 0")
        object.__setattr__(self, "weights", _readonly(w))
        if self.partition is not None:
            blocks = tuple(tuple(int(i) for i in b) for b in self.partition)
            seen = [i for b in blocks for i in b]
            if sorted(seen) != list(range(w.size)):
                raise ValueError("partition blocks must be disjoint and cover the index set")
            if any(len(b) == 0 for b in blocks):
                raise ValueError("partition blocks must be non-empty")
            object.__setattr__(self, "partition", blocks)

    @classmethod
    def counting(cls, size, partition=None):
        return cls(np.ones(int(size)), partition)

    @property
    def size(self):
        return int(self.weights.size)

    @property
    def block_weights(self):
        if self.partition is None:
            return None
        return tuple(float(np.sum(self.weights[list(b)])) for b in self.partition)


@dataclass(frozen=True)
class VectorFamily:
    """Indexed family of ambient vectors, one per row."""

    vectors: np.ndarray
    label: str = ""

    def __post_init__(self):
        v = as_complex_matrix(self.vectors)
        object.__setattr__(self, "vectors", _readonly(v))

    @classmethod
    def from_generator(cls, gen: Callable[[int], np.ndarray], count, dim, label=""):
        """Realize ``gen(1) .. gen(count)`` as a family in dimension ``dim``."""
        rows = np.zeros((int(count), int(dim)), dtype=np.complex128)
        for n in range(1, int(count) + 1):
            vec = np.asarray(gen(n), dtype=np.complex128).reshape(-1)
            if vec.shape[0] != dim:
                raise DimensionMismatch(
                    f"generator produced length {vec.shape[0]}, expected {dim}"
                )
            rows[n - 1] = vec
        return cls(rows, label)

    @property
    def count(self):
        return int(self.vectors.shape[0])

    @property
    def ambient_dim(self):
        return int(self.vectors.shape[1])

    def scaled(self, c):
        return VectorFamily(c * self.vectors, self.label)


@dataclass(frozen=True)
class TruncationSchedule:
    """Strictly increasing truncation dimensions; at least two for trends."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) < 2:
            raise ValueError("schedule needs at least two truncations")
        if any(d < 1 for d in dims) or any(b <= a for a, b in zip(dims, dims[1:])):
            raise ValueError("schedule must be strictly increasing positive dimensions")
        object.__setattr__(self, "dims", dims)

    def __iter__(self):
        return iter(self.dims)

    def __len__(self):
        return len(self.dims)


@dataclass(frozen=True)
class OperatorSpec:
    """Finite-section operator with adjoint access.

    Kinds: ``dense`` (explicit matrix, fixed dimension), ``diagonal``
    (1-based entry rule, any truncation), ``identity``, ``zero`` and
    ``scaled_identity``.
    """

    kind: str
    matrix: np.ndarray | None = None
    diag_rule: Callable[[int], complex] | None = field(default=None, repr=False)
    scale: complex = 1.0
    label: str = ""

    _KINDS = ("dense", "diagonal", "identity", "zero", "scaled_identity")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown operator kind {self.kind!r}")
        if self.kind == "dense":
            m = as_complex_matrix(self.matrix)
            if m.shape[0] != m.shape[1]:
                raise DimensionMismatch("dense operator section must be square")
            object.__setattr__(self, "matrix", _readonly(m))
        elif self.kind == "diagonal" and self.diag_rule is None:
            raise ValueError("diagonal operator needs an entry rule")

    @classmethod
    def dense(cls, matrix, label=""):
        return cls("dense", matrix=matrix, label=label)

    @classmethod
    def diagonal(cls, rule, label=""):
        return cls("diagonal", diag_rule=rule, label=label)

    @classmethod
    def identity(cls, label="I"):
        return cls("identity", label=label)

    @classmethod
    def zero(cls, label="0"):
        return cls("zero", label=label)

    @classmethod
    def scaled_identity(cls, scale, label=""):
        return cls("scaled_identity", scale=complex(scale), label=label)

    def matrix_at(self, d):
        d = int(d)
        if self.kind == "dense":
            if self.matrix.shape[0] != d:
                raise DimensionMismatch(
                    f"dense section is {self.matrix.shape[0]}-dimensional, requested {d}"
                )
            return np.array(self.matrix)
        if self.kind == "diagonal":
            return np.diag([complex(self.diag_rule(n)) for n in range(1, d + 1)])
        if self.kind == "identity":
            return np.eye(d, dtype=np.complex128)
        if self.kind == "zero":
            return np.zeros((d, d), dtype=np.complex128)
        return self.scale * np.eye(d, dtype=np.complex128)

    def adjoint(self):
        if self.kind == "dense":
            return OperatorSpec.dense(self.matrix.conj().T, label=self.label + "*")
        if self.kind == "diagonal":
            rule = self.diag_rule
            return OperatorSpec.diagonal(
                lambda n: np.conj(complex(rule(n))), label=self.label + "*"
            )
        if self.kind == "scaled_identity":
            return OperatorSpec.scaled_identity(np.conj(self.scale), label=self.label + "*")
        return self


def operator_matrix(op, d):
    """Accept an OperatorSpec or a bare square matrix."""
    if isinstance(op, OperatorSpec):
        return op.matrix_at(d)
    m = as_complex_matrix(op)
    if m.shape != (d, d):
        raise DimensionMismatch(f"operator section {m.shape} does not match dimension {d}")
    return m


@dataclass(frozen=True)
class AnalysisMatrix:
    """Weighted analysis operator: row n applies sqrt(mu_n) <., phi_n>."""

    matrix: np.ndarray
    measure: MeasureSpace
    gram: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "matrix", _readonly(as_complex_matrix(self.matrix)))


# ---------------------------------------------------------------------------
# Gram / whitening helpers


def gram_inner(f, g, gram=None):
    """Inner product <f, g>, linear in the first argument."""
    f = np.asarray(f, dtype=np.complex128).reshape(-1)
    g = np.asarray(g, dtype=np.complex128).reshape(-1)
    if gram is None:
        return complex(np.vdot(g, f))
    m = gram_metric(gram, f.shape[0])
    return complex(np.conj(g) @ (m @ f))


def gram_norm(f, gram=None):
    val = gram_inner(f, f, gram).real
    return float(np.sqrt(max(val, 0.0)))


def gram_metric(gram, d):
    """Metric matrix M with <f, g> = g^H M f, from gram[i, j] = <k_i, k_j>."""
    k = as_complex_matrix(gram)
    if k.shape != (d, d):
        raise DimensionMismatch(f"gram is {k.shape}, ambient dimension is {d}")
    if not is_hermitian(k):
        raise NotPSDKernel("gram matrix must be Hermitian")
    return k.T


def gram_whitener(gram, d, tol_rank=RANK_TOL):
    """Factors (W, W^-1) with W = M^(1/2); requires a positive-definite gram."""
    m = gram_metric(gram, d)
    eig = hermitian_eig(m, tol_herm=np.inf)
    lam = eig.eigenvalues
    if lam[0] <= tol_rank * max(lam[-1], 0.0) or lam[-1] <= 0.0:
        raise NotPSDKernel(
            f"gram must be positive definite for whitening (min eigenvalue {lam[0]:.3e})"
        )
    v = eig.eigenvectors
    w = (v * np.sqrt(lam)) @ v.conj().T
    winv = (v / np.sqrt(lam)) @ v.conj().T
    return w, winv


def whiten_family(fam: VectorFamily, gram):
    if gram is None:
        return fam, None, None
    w, winv = gram_whitener(gram, fam.ambient_dim)
    return VectorFamily(fam.vectors @ w.T, fam.label), w, winv


# ---------------------------------------------------------------------------
# Operations


def analysis_operator(fam: VectorFamily, sp: MeasureSpace, gram=None):
    """Matrix with rows sqrt(mu_n) * conj(phi_n) (metric-adjusted under a gram),
    so that (C f)(n) = sqrt(mu_n) <f, phi_n>."""
    if fam.count != sp.size:
        raise DimensionMismatch(f"family count {fam.count} != measure size {sp.size}")
    rows = np.conj(fam.vectors)
    if gram is not None:
        rows = rows @ gram_metric(gram, fam.ambient_dim)
    c = np.sqrt(sp.weights)[:, None] * rows
    return AnalysisMatrix(c, sp, None if gram is None else np.asarray(gram))


def frame_operator(fam: VectorFamily, sp: MeasureSpace, gram=None):
    """T = C* C.  Entrywise Hermitian PSD in the plain geometry; under a
    gram the returned section is self-adjoint w.r.t. that inner product."""
    c = analysis_operator(fam, sp, gram).matrix
    if gram is None:
        return c.conj().T @ c
    _, winv = gram_whitener(gram, fam.ambient_dim)
    m = gram_metric(gram, fam.ambient_dim)
    # adjoint of C in the weighted geometry is M^-1 C^H
    return (winv @ winv) @ (c.conj().T @ c)


def omega_form(fam: VectorFamily, sp: MeasureSpace, f, g, gram=None):
    """Weighted sesquilinear analysis pairing sum_n mu_n <f, phi_n><phi_n, g>."""
    if fam.count != sp.size:
        raise DimensionMismatch(f"family count {fam.count} != measure size {sp.size}")
    f = np.asarray(f, dtype=np.complex128).reshape(-1)
    g = np.asarray(g, dtype=np.complex128).reshape(-1)
    if f.shape[0] != fam.ambient_dim or g.shape[0] != fam.ambient_dim:
        raise DimensionMismatch("vectors must live in the family's ambient space")
    rows = np.conj(fam.vectors)
    if gram is not None:
        rows = rows @ gram_metric(gram, fam.ambient_dim)
    cf = rows @ f
    cg = rows @ g
    return complex(np.sum(sp.weights * cf * np.conj(cg)))


def scale_norm(g_op, alpha, f, gram=None, tol_psd=1e-12):
    """||(I + G)^(alpha/2) f|| by spectral calculus on a Hermitian section.

    Under a gram, G must be self-adjoint w.r.t. the weighted inner product
    and the norm is taken in that geometry.
    """
    f = np.asarray(f, dtype=np.complex128).reshape(-1)
    d = f.shape[0]
    g = operator_matrix(g_op, d)
    if gram is not None:
        w, winv = gram_whitener(gram, d)
        g = w @ g @ winv
        f = w @ f
    if not is_hermitian(g):
        raise NotHermitian("scale norms need a self-adjoint operator section")
    eig = hermitian_eig(g, tol_herm=np.inf)
    nu = 1.0 + eig.eigenvalues
    if np.min(nu) < tol_psd:
        raise NotPSD(f"I + G has spectrum below tolerance (min {np.min(nu):.3e})")
    coeff = np.abs(eig.eigenvectors.conj().T @ f) ** 2
    alpha = float(alpha)
    return float(np.sqrt(np.sum(np.power(nu, alpha) * coeff)))
