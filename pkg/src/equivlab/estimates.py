"""Order-of-magnitude estimates built from CODATA constants.

Quoted literature figures are carried as metadata and compared on a log10
scale; they are never used as the reference value of a computation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .bound_states import Gravitational, analytic_spectrum
from .units import ConstantsSet, SpatialGrid, cgs_constants, gaussian_packet, observables

_LENGTH = {"SI": "m", "CGS": "cm", "natural": "1"}
_SPEED = {"SI": "m/s", "CGS": "cm/s", "natural": "1"}


def planck_length(constants: ConstantsSet) -> float:
    """``sqrt(G hbar / c^3)``."""
    return math.sqrt(constants.G * constants.hbar / constants.c**3)


def fundamental_speed_estimate(constants: ConstantsSet, mass: float) -> float:
    """``G m^2 / hbar``: a speed built from gravity and quantum theory alone."""
    return constants.G * mass**2 / constants.hbar


def classical_electron_radius(constants: ConstantsSet) -> float:
    """``e^2 / (m_e c^2)``."""
    return constants.e_sq / (constants.m_electron * constants.c**2)


def compton_wavelength(constants: ConstantsSet, mass: float, reduced: bool = False) -> float:
    """``h / (m c)``, or ``hbar / (m c)`` when ``reduced``."""
    return (constants.hbar if reduced else constants.h) / (mass * constants.c)


def neutron_pair_bohr_radius(constants: ConstantsSet, reduced_mass: bool = False) -> float:
    """Gravitational Bohr radius of one neutron bound to another.

    Without ``reduced_mass`` the partner is a fixed source and the radius is
    ``hbar^2 / (G m_n^3)``; with it the radius doubles.
    """
    m = constants.m_neutron
    spec = Gravitational(G=constants.G, M=m, mass=m)
    return float(analytic_spectrum(spec, constants.hbar, 1, reduced_mass).analytic_radius[0])


def mass_from_velocity_spread(delta_x: float, delta_v: float, hbar: float = 1.0) -> float:
    """Mass of a minimum-uncertainty packet: ``hbar / (2 dx dv)``."""
    return hbar / (2 * delta_x * delta_v)


def alternative_quantization_number(v_action: float, c: float, lambda0: float) -> float:
    """``oint v dr / (c lambda0)`` for a hypothetical fundamental length.

    Returned unrounded; it is a what-if number, not a quantum number.
    """
    if not lambda0 > 0:
        raise ValueError("lambda0 must be positive")
    return v_action / (c * lambda0)


@dataclass(frozen=True)
class EstimateReport:
    name: str
    formula: str
    value: float
    units: str
    inputs: dict = field(default_factory=dict)
    paper_quoted: Optional[float] = None
    log10_discrepancy: Optional[float] = None
    note: str = ""

    def __post_init__(self):
        if not self.value > 0:
            raise ValueError(f"estimate {self.name} must be positive")
        if self.paper_quoted is not None and self.log10_discrepancy is None:
            gap = abs(math.log10(self.value) - math.log10(self.paper_quoted))
            object.__setattr__(self, "log10_discrepancy", gap)


def _inputs(constants: ConstantsSet, *names: str) -> dict:
    return {name: getattr(constants, name) for name in names}


def estimate_reports(constants: Optional[ConstantsSet] = None) -> list[EstimateReport]:
    """Every estimate, in CGS by default so quoted figures are comparable.

    Quoted figures are only attached when ``constants`` is CGS.
    """
    k = cgs_constants() if constants is None else constants
    cgs = k.unit_system == "CGS"
    length, speed = _LENGTH[k.unit_system], _SPEED[k.unit_system]

    def quoted(value):
        return value if cgs else None

    lp = planck_length(k)
    c_star = fundamental_speed_estimate(k, k.m_neutron)
    r_bohr = neutron_pair_bohr_radius(k)
    ground_v_action = k.h / k.m_neutron  # oint v dr = n h / m at n = 1
    reports = [
        EstimateReport("planck_length", "sqrt(G*hbar/c^3)", lp, length,
                       _inputs(k, "G", "hbar", "c"), quoted(1e-34)),
        EstimateReport("fundamental_speed", "G*m_n^2/hbar", c_star, speed,
                       _inputs(k, "G", "m_neutron", "hbar"), quoted(1e-30)),
        EstimateReport("c_over_fundamental_speed", "c*hbar/(G*m_n^2)", k.c / c_star, "1",
                       _inputs(k, "c", "G", "m_neutron", "hbar"), quoted(1e40),
                       note="dimensionless constants are often said to differ by powers of 1e20"),
        EstimateReport("classical_electron_radius", "e^2/(m_e*c^2)",
                       classical_electron_radius(k), length,
                       _inputs(k, "e_sq", "m_electron", "c"), quoted(1e-13)),
        EstimateReport("compton_wavelength", "h/(m_e*c)",
                       compton_wavelength(k, k.m_electron), length,
                       _inputs(k, "h", "m_electron", "c"), quoted(1e-11)),
        EstimateReport("reduced_compton_wavelength", "hbar/(m_e*c)",
                       compton_wavelength(k, k.m_electron, reduced=True), length,
                       _inputs(k, "hbar", "m_electron", "c"), quoted(1e-11)),
        EstimateReport("neutron_pair_bohr_radius", "hbar^2/(G*m_n^3)", r_bohr, length,
                       _inputs(k, "hbar", "G", "m_neutron"), quoted(1e27)),
        EstimateReport("neutron_pair_bohr_radius_reduced_mass", "2*hbar^2/(G*m_n^3)",
                       neutron_pair_bohr_radius(k, reduced_mass=True), length,
                       _inputs(k, "hbar", "G", "m_neutron"), quoted(1e27)),
        EstimateReport("alternative_quantization_number_planck",
                       "(h/m_n)/(c*l_P)",
                       alternative_quantization_number(ground_v_action, k.c, lp), "1",
                       _inputs(k, "h", "m_neutron", "c"),
                       note="what-if value for lambda0 = Planck length, neutron ground state"),
    ]
    reports.append(_mass_inference_demo())
    return reports


def _mass_inference_demo(mass: float = 2.0) -> EstimateReport:
    """Infer the mass of a Gaussian packet from its measured spreads."""
    grid = SpatialGrid(-32.0, 32.0, 1024)
    obs = observables(gaussian_packet(grid, 0.0, 0.0, 1.0, mass))
    inferred = mass_from_velocity_spread(obs.spread_x, obs.spread_v)
    return EstimateReport("inferred_mass_from_velocity_spread", "hbar/(2*dx*dv)", inferred, "1",
                          {"mass": mass, "delta_x": 1.0, "hbar": 1.0})
