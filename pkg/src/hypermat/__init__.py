"""hypermat: dense hypermatrix algebra and spectral approximation tools."""

from .bm import (
    OperandList,
    bm_product,
    bm_product_reference,
    dual_product,
    general_bm_product,
    validate_operands,
    weighted_product,
)
from .core import (
    as_hypermatrix,
    background_bilinear_form,
    correlation_product,
    cyclic_transpose,
    entrywise_power,
    hadamard,
    is_cubic,
    kronecker_delta,
    roots_of_unity,
    vandermonde,
)
from .elimination import (
    ParsevalSystem,
    PowerStack,
    build_parseval_system,
    char_poly_2x2,
    hadamard_row_products,
    mu_nu_generator_residual,
    uv_generator_residual,
)
from .errors import (
    ConditioningError,
    DefectiveMatrixError,
    HypermatrixError,
    LiftError,
    OperandShapeError,
    ParseError,
    PreconditionError,
    ShapeMismatchError,
    SingularSystemError,
)
from .hermitian import (
    ScalingHypermatrix4,
    SliceInvariantScaling,
    build_slice_invariant_hermitian,
    delta_fiber_factor,
    hermitian_symmetrize,
    is_hermitian,
    multilinear_form,
    rayleigh_bounds,
    theorem_realness_check,
    unitarity_residual,
    unitary_reconstruction_residual,
)
from .hyper import (
    BackgroundSequence,
    HyperSpectralTriple,
    ScalingValues222,
    background_sequence,
    build_from_triple,
    char_poly_222,
    decomposition_residual,
    is_diagonal_analog,
    solve_scaling_222,
    symmetric_elimination_residual,
    triple_minor,
)
from .spectral import (
    ApproximationResult,
    InflationOptions,
    InflationResult,
    LiftedPair,
    ResidualReport,
    SpectralPair,
    TruncationResult,
    decompose_pair_minor,
    decompose_tau_minor,
    eigen_decompose,
    inflate,
    lift,
    lift_pair_minors,
    pair_minor,
    permute_columns,
    recursive_approximate,
    tau_minor,
    truncate,
)

__version__ = "0.1.0"
