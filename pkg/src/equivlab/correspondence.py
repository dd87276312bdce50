"""Classical-limit checks: orbits, Fourier coefficients and matrix elements.

Quantum-number conventions: the 1D harmonic well counts from its ground
state ``n = 0``; radial l = 0 Coulomb-type states count from ``n = 1``.
Classical orbits start at the outer turning point at ``t = 0`` and
eigenvectors are made positive on their outermost lobe, so that matrix
elements and Fourier coefficients share one phase convention.

Where two levels ``n`` and ``n + l`` are compared with one classical orbit,
the default ``"midpoint"`` convention evaluates the orbit at the mean of the
two level energies; ``"lower"`` uses ``E_n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Union

import numpy as np
from scipy.linalg import circulant, eigh

from .bound_states import (
    CentralPotentialSpec,
    _fix_signs,
    action_integrals,
    analytic_spectrum,
    bohr_radius,
    radial_levels,
    radial_states,
    radial_eigensolver,
)
from .errors import ConvergenceError, UnboundEnergyError, UndersamplingError
from .units import SpatialGrid

CONVENTIONS = ("midpoint", "lower")


@dataclass(frozen=True)
class HarmonicWell:
    """1D well ``V = m omega^2 x^2 / 2``."""

    omega: float
    mass: float

    def potential(self, x):
        x = np.asarray(x, dtype=float)
        return 0.5 * self.mass * self.omega**2 * x**2

    def turning_points(self, E: float) -> tuple[float, float]:
        if not E > 0:
            raise UnboundEnergyError(f"E = {E} has no turning points in a harmonic well")
        amp = math.sqrt(2 * E / (self.mass * self.omega**2))
        return -amp, amp

    def with_mass(self, mass: float) -> "HarmonicWell":
        return replace(self, mass=mass)

    def levels(self, hbar: float, n_max: int) -> np.ndarray:
        """Exact ``(n + 1/2) hbar omega`` for ``n = 0..n_max``."""
        return (np.arange(n_max + 1) + 0.5) * hbar * self.omega


PotentialSpec = Union[HarmonicWell, CentralPotentialSpec]


def _with_mass(spec, mass):
    return spec if mass is None or mass == spec.mass else spec.with_mass(mass)


# ---------------------------------------------------------------------------
# classical orbits

_N_TIME_QUAD = 24
_TQ_X, _TQ_W = np.polynomial.legendre.leggauss(_N_TIME_QUAD)
# Number of panels in the tabulated t(s).
_N_PANELS = 512


def _speed(spec, E, r):
    return np.sqrt(np.clip(2 * (E - spec.potential(r)) / spec.mass, 0.0, None))


class _OrbitClock:
    """Elapsed time from the inner turning point as a function of the
    angle ``s`` in ``r(s) = lo + (hi - lo)(1 - cos s)/2``.

    ``dt/ds = (dr/ds) / v`` stays finite at both turning points, so
    panel-wise Gauss-Legendre quadrature is accurate to round-off.
    """

    def __init__(self, spec, E):
        self.spec, self.E = spec, E
        self.lo, self.hi = spec.turning_points(E)
        self.knots = np.linspace(0.0, np.pi, _N_PANELS + 1)
        panels = self.integral(self.knots[:-1], self.knots[1:])
        self.cumulative = np.concatenate([[0.0], np.cumsum(panels)])

    def radius(self, s):
        return self.lo + 0.5 * (self.hi - self.lo) * (1 - np.cos(s))

    def rate(self, s):
        """dt/ds."""
        half = 0.5 * (self.hi - self.lo)
        with np.errstate(divide="ignore", invalid="ignore"):
            g = half * np.sin(s) / _speed(self.spec, self.E, self.radius(s))
        return np.nan_to_num(g, nan=0.0, posinf=0.0)

    def integral(self, a, b):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        nodes = mid[..., None] + half[..., None] * _TQ_X
        return half * (self.rate(nodes) @ _TQ_W)

    @property
    def half_period(self) -> float:
        return float(self.cumulative[-1])

    def invert(self, elapsed: np.ndarray) -> np.ndarray:
        """Angles ``s`` at which the given times have elapsed."""
        i = np.clip(np.searchsorted(self.cumulative, elapsed, side="right") - 1, 0, _N_PANELS - 1)
        start = self.knots[i]
        a, b = start, self.knots[i + 1]
        base = self.cumulative[i]
        target = elapsed - base
        span = self.cumulative[i + 1] - base
        with np.errstate(divide="ignore", invalid="ignore"):
            s = a + (b - a) * np.where(span > 0, target / span, 0.5)
        # safeguarded Newton: keep every iterate inside its panel bracket
        for _ in range(30):
            f = self.integral(start, s) - target
            a = np.where(f < 0, s, a)
            b = np.where(f < 0, b, s)
            g = self.rate(s)
            with np.errstate(divide="ignore", invalid="ignore"):
                step = s - f / g
            bad = ~np.isfinite(step) | (step <= a) | (step >= b)
            s_new = np.where(bad, 0.5 * (a + b), step)
            if np.max(np.abs(s_new - s)) < 1e-15:
                s = s_new
                break
            s = s_new
        return s


def orbital_period(spec: PotentialSpec, E: float, mass: Optional[float] = None) -> float:
    """Period ``T = 2 int dr / v`` of bound 1D / l = 0 radial motion."""
    return 2.0 * _OrbitClock(_with_mass(spec, mass), E).half_period


@dataclass(frozen=True)
class ClassicalOrbit:
    """One period of ``r(t)`` sampled at ``t_k = (k + 1/2) T / N``."""

    spec: PotentialSpec
    mass: float
    energy: float
    period: float
    omega: float
    t: np.ndarray
    r: np.ndarray
    v: np.ndarray

    def energy_error(self) -> np.ndarray:
        """``|m v^2 / 2 + V(r) - E| / |E|`` along the samples."""
        e = 0.5 * self.mass * self.v**2 + self.spec.potential(self.r)
        return np.abs(e - self.energy) / abs(self.energy)


def classical_orbit(
    spec: PotentialSpec, E: float, mass: Optional[float] = None, n_samples: int = 4096
) -> ClassicalOrbit:
    """Sample ``r(t)`` over one period by inverting ``t(r) = int dr / v``.

    The orbit is at its outer turning point at ``t = 0``, falls inward for
    half a period and returns.  Samples avoid the turning points themselves.

    Raises
    ------
    UnboundEnergyError
        If ``E`` has no pair of turning points.
    """
    spec = _with_mass(spec, mass)
    clock = _OrbitClock(spec, E)
    half_period = clock.half_period
    period = 2 * half_period
    t = (np.arange(n_samples) + 0.5) * period / n_samples
    inward = t <= half_period
    # time measured from the inner turning point on the way out
    from_inner = np.where(inward, half_period - t, t - half_period)
    r = clock.radius(clock.invert(from_inner))
    v = _speed(spec, E, r) * np.where(inward, -1.0, 1.0)
    return ClassicalOrbit(spec, spec.mass, E, period, 2 * np.pi / period, t, r, v)


def fourier_series(t: np.ndarray, samples: np.ndarray, period: float, ell_max: int) -> dict:
    """Rectangle-rule ``c_l = (1/T) int r(t) exp(-i l omega t) dt`` for
    ``|l| <= ell_max`` from uniform samples covering one period."""
    n = len(samples)
    if n < 32 * max(ell_max, 1):
        raise UndersamplingError(
            f"{n} samples cannot resolve harmonics up to {ell_max} (need >= {32 * ell_max})"
        )
    omega = 2 * np.pi / period
    return {
        ell: complex(np.mean(samples * np.exp(-1j * ell * omega * t)))
        for ell in range(-ell_max, ell_max + 1)
    }


def fourier_coefficients(orbit: ClassicalOrbit, ell_max: int) -> dict:
    """Fourier coefficients ``{l: c_l}`` of ``r(t)`` for ``|l| <= ell_max``."""
    return fourier_series(orbit.t, orbit.r, orbit.period, ell_max)


# ---------------------------------------------------------------------------
# quantum bases

@dataclass(frozen=True)
class RadialGrid:
    """Interior points ``r_j = j h``, ``h = r_max / (n_grid + 1)``."""

    r_max: float
    n_grid: int


@dataclass(frozen=True)
class BoundStateBasis:
    """Real orthonormal eigenvectors (columns of ``states``) on ``x``.

    ``first_n`` is the quantum number of column 0.
    """

    spec: PotentialSpec
    mass: float
    x: np.ndarray
    weight: float
    energies: np.ndarray
    states: np.ndarray
    first_n: int

    @property
    def n_max(self) -> int:
        return self.first_n + len(self.energies) - 1

    def _column(self, n: int) -> int:
        if not self.first_n <= n <= self.n_max:
            raise IndexError(f"quantum number {n} outside [{self.first_n}, {self.n_max}]")
        return n - self.first_n

    def energy(self, n: int) -> float:
        return float(self.energies[self._column(n)])

    def state(self, n: int) -> np.ndarray:
        return self.states[:, self._column(n)]

    def overlap_matrix(self) -> np.ndarray:
        return self.states.T @ self.states * self.weight


def _fourier_grid_hamiltonian(spec: HarmonicWell, hbar: float, x: np.ndarray) -> np.ndarray:
    n = len(x)
    dx = x[1] - x[0]
    k = 2 * np.pi * np.fft.fftfreq(n, d=dx)
    column = np.fft.ifft(hbar**2 * k**2 / (2 * spec.mass)).real
    return circulant(column) + np.diag(spec.potential(x))


def _well_levels(spec, hbar, x, n_levels, vectors=True):
    H = _fourier_grid_hamiltonian(spec, hbar, x)
    return eigh(H, subset_by_index=(0, n_levels - 1), eigvals_only=not vectors)


def bound_basis(
    spec: PotentialSpec,
    grid: Union[SpatialGrid, RadialGrid],
    n_max: int,
    hbar: float = 1.0,
    mass: Optional[float] = None,
) -> BoundStateBasis:
    """Diagonalize the discretized Hamiltonian up to quantum number ``n_max``.

    A harmonic well uses a dense Fourier-grid Hamiltonian on a periodic
    :class:`SpatialGrid` (the same kinetic operator as the propagator).  A
    1/r potential uses the tridiagonal radial solver on a :class:`RadialGrid`.

    Raises
    ------
    ConvergenceError
        If level ``n_max`` moves by more than 1e-4 (relative) when the grid
        is refined 1.5x.
    """
    spec = _with_mass(spec, mass)
    if isinstance(spec, HarmonicWell):
        if not isinstance(grid, SpatialGrid):
            raise TypeError("a harmonic well needs a SpatialGrid")
        n_levels = n_max + 1
        x = np.array(grid.x)
        w, v = _well_levels(spec, hbar, x, n_levels)
        fine = np.linspace(grid.x_min, grid.x_max, int(round(1.5 * grid.n_points)),
                           endpoint=False)
        refined = _well_levels(spec, hbar, fine, n_levels, vectors=False)[-1]
        v = _fix_signs(v) / np.sqrt(grid.dx)
        weight, first_n = grid.dx, 0
    else:
        if not isinstance(grid, RadialGrid):
            raise TypeError("a 1/r potential needs a RadialGrid")
        n_levels = n_max
        x, w, v = radial_states(spec, hbar, grid.r_max, grid.n_grid, n_levels)
        fine_n = int(round(1.5 * (grid.n_grid + 1))) - 1
        refined = radial_levels(spec, hbar, grid.r_max, fine_n, (n_levels - 1, n_levels - 1))[0]
        weight, first_n = x[0], 1
    shift = abs(refined - w[-1]) / abs(w[-1])
    if shift > 1e-4:
        raise ConvergenceError(f"level {n_max} moves by {shift:.2e} under 1.5x grid refinement")
    return BoundStateBasis(spec, spec.mass, x, weight, w, v, first_n)


def matrix_element(basis: BoundStateBasis, n: int, ell: int) -> float:
    """``<psi_{n+l}| r |psi_n>`` by grid quadrature."""
    return float(np.sum(basis.state(n + ell) * basis.x * basis.state(n)) * basis.weight)


def auto_grid(spec: PotentialSpec, n_max: int, hbar: float = 1.0):
    """A grid that resolves and contains all states up to ``n_max``."""
    if isinstance(spec, HarmonicWell):
        E = (n_max + 0.5) * hbar * spec.omega
        amp = spec.turning_points(E)[1]
        length_scale = math.sqrt(hbar / (spec.mass * spec.omega))
        half = 1.2 * amp + 10 * length_scale
        k_needed = 2 * math.sqrt(2 * spec.mass * E) / hbar + 10 / length_scale
        n = 64
        while math.pi * n / (2 * half) < k_needed:
            n *= 2
        return SpatialGrid(-half, half, n)
    E = analytic_spectrum(spec, hbar, n_max).analytic_energy[-1]
    r_max = 1.5 * spec.turning_points(E)[1]
    h = bohr_radius(spec, hbar) / 4
    return RadialGrid(r_max, max(2000, int(round(r_max / h)) - 1))


# ---------------------------------------------------------------------------
# correspondence checks

def _orbit_energy(E_lo: float, E_hi: float, convention: str) -> float:
    if convention == "midpoint":
        return 0.5 * (E_lo + E_hi)
    if convention == "lower":
        return E_lo
    raise ValueError(f"convention must be one of {CONVENTIONS}")


@dataclass(frozen=True)
class CorrespondenceRow:
    ell: int
    orbit_energy: float
    c_ell: float
    element: float
    difference: float
    relative: float
    # <psi_{Kn+Kl}| r |psi_{Kn}> for mass K m (index scaling as printed)
    scaled_element: Optional[float] = None
    scaled_difference: Optional[float] = None
    scaled_relative: Optional[float] = None
    pair_relative: Optional[float] = None
    # <psi_{Kn+l}| r |psi_{Kn}> for mass K m (neighbouring levels near Kn are
    # spaced by hbar*omega, so a step of l carries frequency l*omega)
    unit_step_element: Optional[float] = None
    unit_step_relative: Optional[float] = None
    unit_step_pair_relative: Optional[float] = None


def correspondence_check(
    spec: PotentialSpec,
    n: int,
    ell_max: int,
    K: Optional[int] = None,
    hbar: float = 1.0,
    convention: str = "midpoint",
    mass: Optional[float] = None,
    n_samples: int = 4096,
) -> list[CorrespondenceRow]:
    """Compare ``<psi_{n+l}| r |psi_n>`` with the classical ``c_l``.

    With ``K`` (gravitational reading), elements of a particle of mass
    ``K m`` around level ``K n`` are compared with the same ``c_l`` of the
    mass-``m`` orbit, both with index step ``K l`` and with step ``l``.
    ``c_l`` is real because the orbit starts at a turning point.
    """
    spec = _with_mass(spec, mass)
    basis = bound_basis(spec, auto_grid(spec, n + ell_max, hbar), n + ell_max, hbar)
    scaled = None
    if K is not None:
        big = spec.with_mass(K * spec.mass)
        top = K * (n + ell_max)
        scaled = bound_basis(big, auto_grid(big, top, hbar), top, hbar)

    rows = []
    for ell in range(ell_max + 1):
        E = _orbit_energy(basis.energy(n), basis.energy(n + ell), convention)
        orbit = classical_orbit(spec, E, n_samples=n_samples)
        c = fourier_coefficients(orbit, max(ell, 1))[ell].real
        el = matrix_element(basis, n, ell)
        row = CorrespondenceRow(ell, E, c, el, abs(el - c), abs(el - c) / abs(c))
        if scaled is not None:
            sel = matrix_element(scaled, K * n, K * ell)
            row = replace(
                row,
                scaled_element=sel,
                scaled_difference=abs(sel - c),
                scaled_relative=abs(sel - c) / abs(c),
                pair_relative=abs(sel - el) / abs(el),
            )
            uel = matrix_element(scaled, K * n, ell)
            row = replace(
                row,
                unit_step_element=uel,
                unit_step_relative=abs(uel - c) / abs(c),
                unit_step_pair_relative=abs(uel - el) / abs(el),
            )
        rows.append(row)
    return rows


@dataclass(frozen=True)
class LevelSpacing:
    delta_E: float
    ell_hbar_omega: float
    relative_gap: float


def level_spacing_check(
    spec: PotentialSpec, n: int, ell: int, hbar: float = 1.0, convention: str = "midpoint"
) -> LevelSpacing:
    """Compare ``E_{n+l} - E_n`` with ``l hbar omega`` of the classical orbit.

    Energies come from the exact spectrum (Bohr levels or ``(n+1/2) hbar omega``).
    """
    if isinstance(spec, HarmonicWell):
        levels = spec.levels(hbar, n + ell)
        E_lo, E_hi = levels[n], levels[n + ell]
    else:
        levels = analytic_spectrum(spec, hbar, n + ell).analytic_energy
        E_lo, E_hi = levels[n - 1], levels[n + ell - 1]
    delta = E_hi - E_lo
    omega = 2 * np.pi / orbital_period(spec, _orbit_energy(E_lo, E_hi, convention))
    quantum = ell * hbar * omega
    return LevelSpacing(float(delta), float(quantum), float(abs(delta - quantum) / delta))


@dataclass(frozen=True)
class ScalingCheck:
    v_action_1: float
    v_action_2: float
    p_action_ratio: float
    relative_difference: float


def scaling_check(
    spec: CentralPotentialSpec,
    K: int,
    n: int,
    hbar: float = 1.0,
    energies: str = "analytic",
) -> ScalingCheck:
    """Loop actions of ``(m, n)`` and ``(K m, K n)`` in a 1/r potential.

    ``energies="numeric"`` takes ``E_n`` from the radial eigensolver instead
    of the Bohr formula.
    """
    if int(K) != K or K < 2:
        raise ValueError("K must be an integer >= 2")
    big = spec.with_mass(K * spec.mass)
    if energies == "analytic":
        E1 = analytic_spectrum(spec, hbar, n).analytic_energy[-1]
        E2 = analytic_spectrum(big, hbar, K * n).analytic_energy[-1]
    elif energies == "numeric":
        E1 = _numeric_level(spec, hbar, n)
        E2 = _numeric_level(big, hbar, K * n)
    else:
        raise ValueError("energies must be 'analytic' or 'numeric'")
    a1 = action_integrals(spec, hbar, E1)
    a2 = action_integrals(big, hbar, E2)
    return ScalingCheck(
        v_action_1=a1.v_action,
        v_action_2=a2.v_action,
        p_action_ratio=a2.p_action / a1.p_action,
        relative_difference=abs(a2.v_action - a1.v_action) / abs(a1.v_action),
    )


def _numeric_level(spec: CentralPotentialSpec, hbar: float, n: int) -> float:
    r_n = analytic_spectrum(spec, hbar, n).analytic_radius[-1]
    r_max = 4 * r_n
    n_grid = max(2000, int(round(8 * r_max / bohr_radius(spec, hbar))))
    res = radial_eigensolver(spec, hbar, r_max, n_grid, n)
    return float(res.numeric_energy[-1])
