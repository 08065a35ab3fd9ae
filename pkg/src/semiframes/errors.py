"""Exception hierarchy shared by every module."""


class SemiframeError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(SemiframeError):
    """Operands live at incompatible truncations or ambient dimensions."""


class NotHermitian(SemiframeError):
    """Matrix fails the Hermitian precondition."""


class NotPSD(SemiframeError):
    """Matrix fails the positive-semidefinite precondition."""


class OutOfRange(SemiframeError):
    """Right-hand side is not in the range of the operator within tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ConvergenceError(SemiframeError):
    """Iterative eigensolver hit its sweep limit before reaching tolerance."""


class InconsistentGenerator(SemiframeError):
    """A family vector changed between truncations."""


class SingularFrameOperator(SemiframeError):
    """Frame operator is singular at this truncation."""


class MajorizationViolated(SemiframeError):
    """Norm majorization needed for a factorization fails.

    ``witness`` is a unit vector in ker(T2) that T1* does not annihilate.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class UnsatisfiableBound(SemiframeError):
    """Requested inequality cannot hold at this section."""


class ReconstructionFailed(SemiframeError):
    """Coefficient reconstruction residual exceeds tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class DualityViolated(SemiframeError):
    """A duality premise fails at the working tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NotCoercive(SemiframeError):
    """Coercivity constant is not positive; weak expansion unavailable."""


class ZeroWeight(SemiframeError):
    """Weight sequence produced a zero entry."""


class NotAFrame(SemiframeError):
    """Family has no positive lower frame bound at this section."""


class NotMetric(SemiframeError):
    """Operator is not a metric operator (spectrum below one)."""


class PartitionMissing(SemiframeError):
    """Measure space carries no partition."""


class NotPSDKernel(SemiframeError):
    """Gram matrix is not positive (semi)definite within tolerance."""


class BoundViolated(SemiframeError):
    """Sequence bound |a_n| <= |m_n|^-1 fails.

    ``index`` is the first offending 1-based index.
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class ParseError(SemiframeError):
    """Experiment spec is not well-formed JSON."""


class ValidationError(SemiframeError):
    """Experiment spec is well-formed but invalid.

    ``path`` locates the offending field, e.g. ``tasks[0].operator``.
    """

    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class IoError(SemiframeError):
    """Report files could not be written."""
