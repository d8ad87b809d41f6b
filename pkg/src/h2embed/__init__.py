"""Embeddability of composition and analytic Toeplitz operators on the
Hardy space of the disk into strongly continuous operator semigroups:
decision engine, explicit semigroup constructions, and numerical
verification on truncated operator matrices."""

from .errors import (
    AutomorphismInput,
    BadInverse,
    BoundaryZeroWarning,
    BranchFailure,
    DegenerateMap,
    DegenerateSymbol,
    DomainError,
    ExhaustedRetries,
    FractionalTime,
    H2EmbedError,
    HorizonOverflow,
    IllConditioned,
    IsometryDefect,
    MissingTime,
    NonCommuting,
    NotContractive,
    NotInner,
    PoleHit,
    ResidualFailure,
    UnsupportedCase,
    ZeroPolynomial,
)
from .polynomials import (
    DiskPartition,
    Polynomial,
    RootSet,
    poly_add,
    poly_derivative,
    poly_mul,
    poly_pow,
    poly_roots,
    poly_scale,
    poly_sub,
    roots_in_disk,
)
from .symbols import (
    BlaschkeProduct,
    ConjugatedSymbol,
    FactoredSymbol,
    MobiusMap,
    PowerSeries,
    ProductSymbol,
    RationalOuter,
    SingularInner,
    SingularMeasure,
    circle_eval,
    factor_polynomial,
    taylor_coefficients,
)
from .blaschke import (
    OrbitRecord,
    PreimageSet,
    conjugate_by_automorphism,
    critical_values,
    dw_orbit,
    fixed_points_in_disk,
    frostman_transform,
    interior_fixed_point,
    sample_regular_value,
    solve_blaschke_equation,
)
from .operators import (
    TruncatedOperator,
    WoldDecomposition,
    boundary_gram,
    composition_matrix,
    image_orthocomplement_dim,
    kernel_vector,
    toeplitz_matrix,
    weighted_composition_matrix,
    wold_decompose,
)
from .semigroups import (
    ConstantFlow,
    EllipticFlow,
    HalfLineVector,
    OperatorSemigroupSample,
    OuterFlow,
    ProductFlow,
    SingularInnerFlow,
    conjugate_semigroup,
    conjugated_comparison_defect,
    elliptic_flow,
    embed_isometric_composition,
    outer_flow,
    product_flow,
    sample_elliptic_flow,
    sample_multiplication_flow,
    shift_semigroup_apply,
    singular_inner_flow,
    wold_comparison_defect,
)
from .decisions import (
    EmbeddabilityReport,
    KoenigsFlow,
    SpiralData,
    Verdict,
    build_weight,
    decide_composition,
    decide_lfm,
    decide_polynomial_toeplitz,
    decide_toeplitz,
    spiral_length,
    verify_weighted_isometry,
)
from .verify import (
    VerificationRecord,
    check_isometry,
    check_noncompactness_proxy,
    check_semigroup_law,
    check_strong_continuity,
    check_wold_reconstruction,
)

__version__ = "0.1.0"
