"""Ground energy of -Laplacian + f(t) V on discretized compact manifolds."""

from ._core import (
    BracketError,
    ConvergenceError,
    GeometryError,
    GroundstateError,
    InadmissiblePotential,
    InvalidArgument,
    Manifold,
    NegativityCertificate,
    NonMonotoneScaling,
    PositivityCertificate,
    Potential,
    Scaling,
    Spectrum,
    TStarResult,
    critical_cphi,
    decompose,
    find_tstar,
    icosphere,
    lowest_eigenpairs,
    mesh,
    mesh_from_arrays,
    monotone_tail_check,
    negative_region,
    negativity_certificate,
    poincare_constant,
    positivity_threshold,
    rayleigh_quotient,
    scale_metric,
    scan_regimes,
    torus,
)

__version__ = "0.1.0"
