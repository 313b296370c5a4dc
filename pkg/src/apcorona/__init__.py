"""Certified computation in algebras of almost periodic polynomials whose
Bohr-Fourier spectrum lies in a finitely generated additive semigroup."""

__version__ = "0.1.0"

from .algebra import (
    APPolynomial,
    BohrMeanResult,
    Frequency,
    FrequencyBasis,
    RealGrid,
    SupBounds,
    bohr_mean_numeric,
    contract,
    frequency_compare,
    make_basis,
    sort_frequencies,
    sup_bounds,
)
from .completion import (
    APMatrix,
    CompletionReport,
    CompletionResult,
    complete_matrix,
    maximal_minors,
    verify_completion,
)
from .corona import (
    BezoutSolution,
    CoronaCertificate,
    CoronaConfig,
    certify_infimum,
    infimum_grid_oracle,
    invert,
    solve_bezout,
)
from .errors import APCoronaError
from .expressions import (
    parse_ap_expression,
    parse_frequency,
    render,
    render_frequency,
)
from .factor import (
    ExpResult,
    LogConfig,
    LogPath,
    exp_auto,
    exp_truncated,
    logarithm,
    logarithm_with_path,
)
from .hull import (
    CoordinateModel,
    CoordinatePolynomial,
    HullPoint,
    HullTestResult,
    contract_point,
    default_test_family,
    embed_point,
    hull_membership_test,
    integer_kernel,
)
from .semigroup import (
    FrobeniusData,
    MembershipCertificate,
    SaturationResult,
    Semigroup,
    SpectrumValidation,
    enumerate_representable,
)

__all__ = [name for name in dir() if not name.startswith("_")]
