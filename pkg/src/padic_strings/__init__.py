"""p-adic fractal strings: exact ball arithmetic, length spectra, rational zeta
functions, complex dimensions, tube formulas, and Minkowski content."""

from .errors import (
    InternalConsistencyError,
    PadicStringsError,
    PoleProximityError,
    PrecisionError,
    RootFindingError,
)
from .padic import (
    BallRelation,
    PAdicAffineMap,
    PAdicBall,
    apply_affine,
    ball_relation,
    canonical_decompose,
    cantor_digit_map,
    format_ball,
    haar_measure,
    is_prime,
    padic_valuation,
    parse_ball,
    sphere_measure,
)
from .strings import (
    LengthSpectrum,
    RealLengthSpectrum,
    SelfSimilarSystem,
    SystemReport,
    cantor_string_3,
    enumerate_intervals,
    euler_string,
    explicit_spectrum,
    fibonacci_string_2,
    real_cantor_string,
    self_similar_spectrum,
    spectrum_of,
    total_length,
    validate_system,
)
from .zeta import (
    IntPolynomial,
    RationalZeta,
    abscissa_of_convergence,
    closed_form_zeta,
    euler_closed_form,
    verify_integral_representation,
    zeta_eval,
    zeta_partial_sum,
)
from .dimensions import (
    DimensionLine,
    DimensionSet,
    complex_dimensions,
    denominator_roots,
    dimension_set_from_zeta,
    moran_dimension,
    principal_part_at,
    residue_at,
    residue_by_contour,
    zeros_of_zeta,
)
from .tubes import (
    TubeSeriesConfig,
    boundary_measure,
    euler_tube_series,
    explicit_tube_formula,
    fourier_frac_pow,
    grid_avoiding_jumps,
    periodic_G,
    thick_tube_volume,
    thin_tube_volume,
    truncated_tube,
    tubular_residue,
)
from .minkowski import (
    ContentReport,
    average_minkowski_content_closed,
    average_minkowski_content_numeric,
    content_report,
    measurability_diagnostic,
    minkowski_dim_fit,
)
from .archimedean import (
    ComparisonReport,
    comparison_report,
    real_cantor_average_content_closed,
    real_cantor_average_content_numeric,
    real_cantor_dimensions,
    real_cantor_tube_closed,
    real_tube_volume,
)

__version__ = "0.1.0"
