"""
Floquet analysis of periodically driven quadratic oscillators and the
photon-added coherent states built on their integrals of motion.
"""

from .errors import (
    ConfigurationError,
    DegenerateError,
    FloquetPacsError,
    GridTooLargeError,
    ImaginaryResidueError,
    IntegrationError,
    NonConvergedError,
    NormalizationSingularError,
    TruncationWarning,
    UnstableError,
)
from .floquet import (
    FloquetDecomposition,
    build_flt,
    floquet_solutions,
    flt_at,
    fundamental_matrix,
    integrals_of_motion_coefficients,
    monodromy_and_exponents,
)
from .model import (
    FourierSeries,
    Harmonic,
    PeriodicConfiguration,
    build_configuration,
    evaluate_pi,
    load_configuration,
    preset_mathieu_pair,
    save_configuration,
)
from .oracle import build_truncated_ladder, oracle_moments, oracle_state
from .phase_space import (
    Axis,
    PhaseSpaceGrid,
    negativity_scan,
    wavefunction_pacs,
    wigner_pacs,
    wigner_values,
)
from .special import confluent_1f1, hermite_multidim, laguerre, pochhammer
from .states import (
    CovarianceReport,
    StateSpec,
    covariance_iom,
    covariance_quadrature,
    mean_quadratures,
    pacs_moments,
    robertson_report,
    transform_covariance,
)

__version__ = "0.1.0"
