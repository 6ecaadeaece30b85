"""Numerical laboratory for Lamb dipoles on the upper half-plane.

The package builds the exact dipole fields, solves the Dirichlet Poisson
problem by two independent routes, certifies a sharp energy inequality,
minimizes the associated impulse-constrained functional, evolves vorticity
with a pseudo-spectral Euler solver, and runs orbital-stability experiments.
"""

__version__ = "1.0.0"

from .errors import (
    BlowUpError,
    BracketError,
    ConvergenceError,
    CostGuardError,
    ResolutionError,
    TruncationWarning,
)
from .specfun import bessel_j, first_zero_j1
from .grid import Grid2D, ScalarField
from .dipole import (
    LambInvariants,
    LambParams,
    lamb_stream_total,
    lamb_vorticity,
    lamb_velocity,
    lamb_invariants,
    lamb_rescale,
    sample_lamb_vorticity,
)
from .poisson import (
    green_kernel,
    green_bound_check,
    solve_stream_quadrature,
    solve_stream_spectral,
    kinetic_energy,
    compare_solvers,
    seeded_pair_field,
    sine_coeffs,
    sine_synthesis,
    ddx1,
    ddx2,
)
from .functionals import (
    InequalityReport,
    bound_hls,
    bound_sharp,
    impulse,
    functional_I,
    energy_ratio,
    weighted_interpolation_check,
    weighted_interpolation_sides,
    lift_isometry_check,
    random_bump_field,
)
from .varmin import (
    MinimizeConfig,
    MinimizeResult,
    el_fixed_point_step,
    minimize,
    minimum_closed_form,
)
from .euler import (
    DiagnosticsRecord,
    EulerState,
    EvolveConfig,
    OddExtension,
    dealias_project,
    make_state,
    odd_extend,
    run,
    step,
)
from .stability import (
    PerturbationSpec,
    StabilityReport,
    orbit_distance,
    perturbed_initial,
    stability_experiment,
)
from .cli import RunConfig, main, read_snapshot, write_snapshot

__all__ = [
    "BlowUpError",
    "BracketError",
    "ConvergenceError",
    "CostGuardError",
    "DiagnosticsRecord",
    "EulerState",
    "EvolveConfig",
    "Grid2D",
    "InequalityReport",
    "LambInvariants",
    "LambParams",
    "MinimizeConfig",
    "MinimizeResult",
    "OddExtension",
    "PerturbationSpec",
    "ResolutionError",
    "RunConfig",
    "ScalarField",
    "StabilityReport",
    "TruncationWarning",
    "bessel_j",
    "bound_hls",
    "bound_sharp",
    "compare_solvers",
    "ddx1",
    "ddx2",
    "dealias_project",
    "el_fixed_point_step",
    "energy_ratio",
    "first_zero_j1",
    "functional_I",
    "green_bound_check",
    "green_kernel",
    "impulse",
    "kinetic_energy",
    "lamb_invariants",
    "lamb_rescale",
    "lamb_stream_total",
    "lamb_velocity",
    "lamb_vorticity",
    "lift_isometry_check",
    "main",
    "make_state",
    "minimize",
    "minimum_closed_form",
    "odd_extend",
    "orbit_distance",
    "perturbed_initial",
    "random_bump_field",
    "read_snapshot",
    "run",
    "sample_lamb_vorticity",
    "seeded_pair_field",
    "sine_coeffs",
    "sine_synthesis",
    "solve_stream_quadrature",
    "solve_stream_spectral",
    "stability_experiment",
    "step",
    "weighted_interpolation_check",
    "weighted_interpolation_sides",
    "write_snapshot",
    "__version__",
]
