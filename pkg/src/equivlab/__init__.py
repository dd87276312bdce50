"""Numerical checks of quantum mechanics in accelerated frames and of
gravitationally bound quantum systems."""

from .bound_states import (
    Coulomb,
    Gravitational,
    action_integrals,
    analytic_spectrum,
    bohr_radius,
    radial_eigensolver,
)
from .correspondence import (
    HarmonicWell,
    bound_basis,
    classical_orbit,
    correspondence_check,
    fourier_coefficients,
    level_spacing_check,
    matrix_element,
    scaling_check,
)
from .errors import (
    BoundaryError,
    BoxTooSmallError,
    ConfigError,
    ConvergenceError,
    DomainError,
    EquivLabError,
    GridResolutionError,
    StabilityError,
    UnboundEnergyError,
    UndersamplingError,
)
from .estimates import EstimateReport, estimate_reports
from .frames import (
    ConstantAcceleration,
    ConstantVelocity,
    Rest,
    Sinusoidal,
    TabulatedNumeric,
    equivalence_experiment,
    free_particle_phase_check,
    from_accelerated_frame,
    phase_field,
    to_accelerated_frame,
)
from .propagator import (
    AcceleratedFrame,
    Free,
    Tabulated,
    UniformGravity,
    harmonic_well,
    propagate,
    stationary_check,
)
from .units import (
    SpatialGrid,
    Wavefunction,
    cgs_constants,
    constants_for,
    gaussian_packet,
    natural_constants,
    observables,
    si_constants,
)

__version__ = "0.1.0"
