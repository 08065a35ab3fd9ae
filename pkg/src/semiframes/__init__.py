"""semiframes: finite-section diagnostics for frames and semi-frames.

Library surface: measure spaces, vector families and operator sections
(``spaces``); frame-constant estimation and classification
(``diagnostics``); canonical duals and duality checks (``duality``);
operator factorizations through analysis maps (``factorization``); worked
example generators (``constructions``); coercive weak expansions
(``reconstruction``); and a JSON-driven batch runner (``cli``).
"""

__version__ = "0.1.0"

from . import _kernels
from .constructions import (
    KernelFamily,
    WeightSequence,
    diagonal_A_for,
    gaussian_gram,
    gaussian_kernel_family,
    lower_from_metric,
    metric_from_operator,
    partition_G_family,
    rkhs_pair,
    weighted_frame_pair,
    weighted_onb_pair,
)
from .diagnostics import (
    BoundsReport,
    FrameClass,
    alt_upper_checks,
    bessel_bound,
    classify,
    controlled_frame_bounds,
    lower_frame_bound,
    mu_total_check,
    weak_A_frame_alpha,
    weak_upper_alpha,
)
from .duality import (
    DualReport,
    canonical_dual,
    dual_pair_check,
    lower_from_frame,
    weak_G_dual_check,
)
from .factorization import (
    AtomicCoefficients,
    FactorizationResult,
    aphi_lower_chain,
    atomic_coefficients,
    bessel_dual_from_factor,
    douglas_factor,
    lower_factorize,
    upper_factorize,
)
from .numkernel import HermitianEig, hermitian_eig, pinv, solve_psd, svd
from .reconstruction import CoercivityReport, coercivity_constants, weak_expansion
from .spaces import (
    AnalysisMatrix,
    MeasureSpace,
    OperatorSpec,
    TruncationSchedule,
    VectorFamily,
    analysis_operator,
    frame_operator,
    omega_form,
    scale_norm,
)

kernel_backend = _kernels.backend_name
