"""Condensate ground states and first-Born elastic scattering off them."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BecScatError,
    DatasetFileError,
    DegenerateProfileError,
    InsufficientDataError,
    InvalidConfigError,
    InvalidInputError,
    NonConvergenceError,
    OutOfRangeError,
    TruncatedSupportError,
    UnsupportedRegimeError,
)
from .grid import RadialGrid, RadialProfile, build_grid, normalize  # noqa: E402
from .gpe_solver import (  # noqa: E402
    EnergyBreakdown,
    GroundState,
    SolverConfig,
    chemical_potential,
    default_grid,
    default_r_max,
    energy_breakdown,
    gpe_residual,
    solve_ground_state,
)
from .thomas_fermi import (  # noqa: E402
    cutoff_radius_from_mu,
    tf_chemical_potential,
    tf_form_factor,
    tf_profile,
    tf_radius,
)
from .born_scattering import (  # noqa: E402
    CrossSectionCurve,
    FormFactorTable,
    born_amplitude,
    default_q_grid,
    differential_cross_section,
    form_factor,
    form_factor_table,
    scaled_point,
    tf_total_cross_section,
    total_cross_section,
    universal_tf_cross_section,
)
from .harness import (  # noqa: E402
    Dataset,
    PhysicalParams,
    SweepConfig,
    detect_oscillation_period,
    dsdo_curves,
    emit_all,
    emit_dataset,
    envelope,
    fit_exponential,
    fit_power_law,
    gamma_from_physical,
    read_dataset,
    run_all,
    sigma_curves,
)
