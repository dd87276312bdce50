"""Unit systems, physical constants, the spatial grid and wavefunction state.

Everything that is propagated lives in scaled natural units (hbar = 1,
reference mass = 1).  SI and CGS constants are only used by the
order-of-magnitude estimates and at CLI boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional, Union

import numpy as np
from scipy import constants as _codata

from .errors import GridResolutionError

UNIT_SYSTEMS = ("SI", "CGS", "natural")

# |psi| allowed at the periodic edges of a freshly built or shifted state.
EDGE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class ConstantsSet:
    """Physical constants in one declared unit system.

    ``e_sq`` is the squared electron charge in the Gaussian convention, so
    that the Coulomb potential energy is ``e_sq / r`` in every system.
    """

    G: float
    hbar: float
    h: float
    c: float
    e_sq: float
    m_electron: float
    m_neutron: float
    unit_system: str

    def __post_init__(self):
        if self.unit_system not in UNIT_SYSTEMS:
            raise ValueError(f"unknown unit system {self.unit_system!r}")
        for name in ("G", "hbar", "h", "c", "e_sq", "m_electron", "m_neutron"):
            if not getattr(self, name) > 0:
                raise ValueError(f"constant {name} must be strictly positive")
        if not math.isclose(self.h, 2 * math.pi * self.hbar, rel_tol=1e-12):
            raise ValueError("h must equal 2*pi*hbar")
        if self.unit_system == "natural" and (self.hbar != 1.0 or self.c != 1.0):
            raise ValueError("natural units require hbar = c = 1 exactly")


def si_constants() -> ConstantsSet:
    """CODATA values in SI units (e_sq = e^2 / (4 pi eps0), in J m)."""
    e_sq = _codata.e**2 / (4 * math.pi * _codata.epsilon_0)
    return ConstantsSet(
        G=_codata.G,
        hbar=_codata.hbar,
        h=_codata.h,
        c=_codata.c,
        e_sq=e_sq,
        m_electron=_codata.m_e,
        m_neutron=_codata.m_n,
        unit_system="SI",
    )


def cgs_constants() -> ConstantsSet:
    """CODATA values converted to Gaussian CGS (cm, g, s, erg)."""
    si = si_constants()
    return ConstantsSet(
        G=si.G * 1e3,  # m^3 kg^-1 s^-2 -> cm^3 g^-1 s^-2
        hbar=si.hbar * 1e7,
        h=si.h * 1e7,
        c=si.c * 1e2,
        e_sq=si.e_sq * 1e9,  # J m -> erg cm
        m_electron=si.m_electron * 1e3,
        m_neutron=si.m_neutron * 1e3,
        unit_system="CGS",
    )


def natural_constants() -> ConstantsSet:
    """Scaled units with every constant equal to one."""
    return ConstantsSet(
        G=1.0,
        hbar=1.0,
        h=2 * math.pi,
        c=1.0,
        e_sq=1.0,
        m_electron=1.0,
        m_neutron=1.0,
        unit_system="natural",
    )


def constants_for(unit_system: str) -> ConstantsSet:
    try:
        factory = {"SI": si_constants, "CGS": cgs_constants, "natural": natural_constants}[
            unit_system
        ]
    except KeyError:
        raise ValueError(f"unknown unit system {unit_system!r}") from None
    return factory()


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform periodic grid ``x_j = x_min + j*dx`` for ``j in [0, n_points)``."""

    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        n = self.n_points
        if n < 16 or n & (n - 1):
            raise ValueError(f"n_points must be a power of two >= 16, got {n}")
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def dx(self) -> float:
        return self.length / self.n_points

    @cached_property
    def x(self) -> np.ndarray:
        x = self.x_min + self.dx * np.arange(self.n_points)
        x.setflags(write=False)
        return x

    @cached_property
    def k(self) -> np.ndarray:
        """Angular wavenumbers in FFT order."""
        k = 2 * np.pi * np.fft.fftfreq(self.n_points, d=self.dx)
        k.setflags(write=False)
        return k

    @property
    def k_max(self) -> float:
        return np.pi / self.dx


@dataclass(frozen=True)
class Wavefunction:
    """Complex amplitudes on a grid, stamped with mass and time."""

    grid: SpatialGrid
    amplitudes: np.ndarray
    mass: float
    time: float = 0.0
    hbar: float = 1.0

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.shape != (self.grid.n_points,):
            raise ValueError("amplitudes do not match grid size")
        if not self.mass > 0:
            raise ValueError("mass must be positive")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2) * self.grid.dx)

    @property
    def edge_amplitude(self) -> float:
        """Largest |psi| on the two grid points adjacent to the periodic seam."""
        a = self.amplitudes
        return float(max(abs(a[0]), abs(a[-1])))

    def replace(self, amplitudes: np.ndarray, time: Optional[float] = None) -> "Wavefunction":
        return Wavefunction(
            self.grid,
            amplitudes,
            self.mass,
            self.time if time is None else time,
            self.hbar,
        )


def gaussian_packet(
    grid: SpatialGrid,
    x0: float,
    p0: float,
    delta_x: float,
    mass: float,
    hbar: float = 1.0,
    time: float = 0.0,
) -> Wavefunction:
    """Minimum-uncertainty Gaussian with position spread ``delta_x``.

    The momentum spread is ``hbar / (2 delta_x)``, so the velocity spread
    ``hbar / (2 m delta_x)`` depends on the mass.

    Raises
    ------
    GridResolutionError
        If ``delta_x`` is below four grid spacings, wider than an eighth of
        the domain, or the packet tails exceed ``EDGE_TOLERANCE`` at the
        domain edges.
    """
    if not mass > 0:
        raise ValueError("mass must be positive")
    if delta_x < 4 * grid.dx:
        raise GridResolutionError(
            f"delta_x={delta_x} is under-resolved (dx={grid.dx}, need >= 4 dx)"
        )
    if delta_x > grid.length / 8:
        raise GridResolutionError(
            f"delta_x={delta_x} exceeds an eighth of the domain ({grid.length / 8})"
        )
    x = grid.x
    amps = np.exp(-((x - x0) ** 2) / (4 * delta_x**2) + 1j * p0 * x / hbar)
    amps /= np.sqrt(np.sum(np.abs(amps) ** 2) * grid.dx)
    psi = Wavefunction(grid, amps, mass, time, hbar)
    if psi.edge_amplitude > EDGE_TOLERANCE:
        raise GridResolutionError(
            f"packet amplitude {psi.edge_amplitude:.3e} at the domain edge exceeds "
            f"{EDGE_TOLERANCE:g}"
        )
    return psi


@dataclass(frozen=True)
class Observables:
    norm: float
    mean_x: float
    mean_p: float
    spread_x: float
    spread_p: float
    spread_v: float
    kinetic: float
    potential: Optional[float] = None
    energy: Optional[float] = field(default=None)


PotentialLike = Union[np.ndarray, Callable[[np.ndarray], np.ndarray], "object"]


def _potential_values(potential, psi: Wavefunction) -> np.ndarray:
    if hasattr(potential, "values"):
        return np.asarray(potential.values(psi.grid.x, psi.time, psi.mass), dtype=float)
    if callable(potential):
        return np.asarray(potential(psi.grid.x), dtype=float)
    return np.asarray(potential, dtype=float)


def momentum_distribution(psi: Wavefunction) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(p, P(p))`` from the discrete Fourier representation."""
    prob = np.abs(np.fft.fft(psi.amplitudes)) ** 2
    prob /= prob.sum()
    return psi.hbar * psi.grid.k, prob


def observables(psi: Wavefunction, potential: PotentialLike = None) -> Observables:
    """Moments of ``psi`` in position and momentum space.

    ``potential`` may be an array on the grid, a callable ``V(x)`` or an
    object with a ``values(x, t, mass)`` method; when given, the total
    energy ``<T> + <V>`` is filled in.
    """
    dx = psi.grid.dx
    x = psi.grid.x
    rho = np.abs(psi.amplitudes) ** 2
    norm = float(rho.sum() * dx)
    w = rho * dx / norm
    mean_x = float(np.sum(w * x))
    spread_x = float(np.sqrt(np.sum(w * (x - mean_x) ** 2)))

    p, prob = momentum_distribution(psi)
    mean_p = float(np.sum(prob * p))
    spread_p = float(np.sqrt(np.sum(prob * (p - mean_p) ** 2)))
    kinetic = float(np.sum(prob * p**2) / (2 * psi.mass))

    pot = energy = None
    if potential is not None:
        pot = float(np.sum(w * _potential_values(potential, psi)))
        energy = kinetic + pot
    return Observables(
        norm=norm,
        mean_x=mean_x,
        mean_p=mean_p,
        spread_x=spread_x,
        spread_p=spread_p,
        spread_v=spread_p / psi.mass,
        kinetic=kinetic,
        potential=pot,
        energy=energy,
    )


def overlap(a: Wavefunction, b: Wavefunction) -> complex:
    """Grid inner product ``<a|b>``."""
    return complex(np.vdot(a.amplitudes, b.amplitudes) * a.grid.dx)
