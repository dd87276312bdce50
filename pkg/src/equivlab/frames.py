"""Extended Galilean transformation into a rigidly accelerating frame.

The frame coordinate is ``x' = x + xi(t)`` with ``t' = t``.  A lab state
maps to the accelerated-frame state

    phi(x', t) = exp(-i f(x', t)) psi_lab(x' - xi(t), t),
    f = (m/hbar) (-xi'(t) x' + 1/2 int_0^t xi'^2 dt),

which obeys the Schroedinger equation with the inertial potential
``-m xi''(t) x'``.  Proper-time helpers work in natural units (c = 1).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import BoundaryError, DomainError
from .propagator import AcceleratedFrame, Free, propagate
from .units import EDGE_TOLERANCE, SpatialGrid, Wavefunction, overlap


class Trajectory:
    """Frame displacement ``xi(t)`` with its derivative channels."""

    def xi(self, t):
        raise NotImplementedError

    def xi_dot(self, t):
        raise NotImplementedError

    def xi_ddot(self, t):
        raise NotImplementedError

    def xi_dot_sq_integral(self, t):
        """``int_0^t xi'(s)^2 ds``."""
        raise NotImplementedError


@dataclass(frozen=True)
class Rest(Trajectory):
    def xi(self, t):
        return 0.0 * np.asarray(t, dtype=float)

    xi_dot = xi_ddot = xi_dot_sq_integral = xi


@dataclass(frozen=True)
class ConstantVelocity(Trajectory):
    v: float

    def xi(self, t):
        return self.v * np.asarray(t, dtype=float)

    def xi_dot(self, t):
        return self.v + 0.0 * np.asarray(t, dtype=float)

    def xi_ddot(self, t):
        return 0.0 * np.asarray(t, dtype=float)

    def xi_dot_sq_integral(self, t):
        return self.v**2 * np.asarray(t, dtype=float)


@dataclass(frozen=True)
class ConstantAcceleration(Trajectory):
    a: float

    def xi(self, t):
        t = np.asarray(t, dtype=float)
        return 0.5 * self.a * t**2

    def xi_dot(self, t):
        return self.a * np.asarray(t, dtype=float)

    def xi_ddot(self, t):
        return self.a + 0.0 * np.asarray(t, dtype=float)

    def xi_dot_sq_integral(self, t):
        t = np.asarray(t, dtype=float)
        return self.a**2 * t**3 / 3


@dataclass(frozen=True)
class Sinusoidal(Trajectory):
    """``xi(t) = A sin(Omega t)``."""

    amplitude: float
    omega: float

    def xi(self, t):
        return self.amplitude * np.sin(self.omega * np.asarray(t, dtype=float))

    def xi_dot(self, t):
        return self.amplitude * self.omega * np.cos(self.omega * np.asarray(t, dtype=float))

    def xi_ddot(self, t):
        return -self.amplitude * self.omega**2 * np.sin(self.omega * np.asarray(t, dtype=float))

    def xi_dot_sq_integral(self, t):
        t = np.asarray(t, dtype=float)
        A, w = self.amplitude, self.omega
        return (A * w) ** 2 * (t / 2 + np.sin(2 * w * t) / (4 * w))


# 3-point Gauss-Legendre integrates the quartic xi'^2 of a cubic spline exactly.
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(3)


class TabulatedNumeric(Trajectory):
    """Sampled ``xi(t)`` interpolated by a cubic spline.

    Derivatives come from the spline; ``int xi'^2`` is integrated exactly
    piece by piece, so it starts at zero and never decreases.
    """

    def __init__(self, t, xi):
        t = np.asarray(t, dtype=float)
        if t[0] != 0.0:
            raise ValueError("tabulated trajectory must start at t = 0")
        self._spline = CubicSpline(t, np.asarray(xi, dtype=float))
        self._d1 = self._spline.derivative(1)
        self._d2 = self._spline.derivative(2)
        self._knots = t
        seg = np.array([self._segment(a, b) for a, b in zip(t[:-1], t[1:])])
        self._cumulative = np.concatenate([[0.0], np.cumsum(seg)])

    def _segment(self, a, b):
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        return half * np.sum(_GL_WEIGHTS * self._d1(mid + half * _GL_NODES) ** 2)

    def xi(self, t):
        return self._spline(t)

    def xi_dot(self, t):
        return self._d1(t)

    def xi_ddot(self, t):
        return self._d2(t)

    def xi_dot_sq_integral(self, t):
        scalar = np.ndim(t) == 0
        ts = np.atleast_1d(np.asarray(t, dtype=float))
        i = np.clip(np.searchsorted(self._knots, ts, side="right") - 1, 0, len(self._knots) - 2)
        out = self._cumulative[i] + np.array(
            [self._segment(a, b) for a, b in zip(self._knots[i], ts)]
        )
        return float(out[0]) if scalar else out


def phase_function(x_prime, t: float, mass: float, traj: Trajectory, hbar: float = 1.0):
    """``f(x', t) = (m/hbar) (-xi'(t) x' + xi_dot_sq_integral(t) / 2)``."""
    x_prime = np.asarray(x_prime, dtype=float)
    return (mass / hbar) * (
        -traj.xi_dot(t) * x_prime + 0.5 * traj.xi_dot_sq_integral(t)
    )


def spectral_derivative(values: np.ndarray, grid: SpatialGrid) -> np.ndarray:
    """d/dx of grid data that is periodic up to a linear ramp.

    The end-to-end ramp is removed, the periodic remainder is differentiated
    in the Fourier basis and the ramp slope is added back.
    """
    x = grid.x
    slope = (values[-1] - values[0]) / (x[-1] - x[0])
    rest = values - slope * (x - x[0])
    d_rest = np.fft.ifft(1j * grid.k * np.fft.fft(rest))
    if np.isrealobj(values):
        d_rest = d_rest.real
    return slope + d_rest


@dataclass(frozen=True)
class PhaseField:
    grid: SpatialGrid
    t: float
    mass: float
    traj: Trajectory
    values: np.ndarray
    hbar: float = 1.0

    def gradient(self) -> np.ndarray:
        return spectral_derivative(self.values, self.grid)


def phase_field(grid: SpatialGrid, t: float, mass: float, traj: Trajectory,
                hbar: float = 1.0) -> PhaseField:
    return PhaseField(grid, t, mass, traj, phase_function(grid.x, t, mass, traj, hbar), hbar)


def spectral_shift(amplitudes: np.ndarray, grid: SpatialGrid, shift: float) -> np.ndarray:
    """Return samples of ``a(x - shift)``; exact for band-limited periodic data."""
    return np.fft.ifft(np.fft.fft(amplitudes) * np.exp(-1j * grid.k * shift))


def _check_edges(psi: Wavefunction, what: str) -> None:
    if psi.edge_amplitude >= EDGE_TOLERANCE:
        raise BoundaryError(
            f"{what}: edge amplitude {psi.edge_amplitude:.3e} >= {EDGE_TOLERANCE:g}"
        )


def to_accelerated_frame(psi_lab: Wavefunction, traj: Trajectory) -> Wavefunction:
    """Map a lab-frame state at time ``psi_lab.time`` into the accelerated frame."""
    t = psi_lab.time
    grid = psi_lab.grid
    shifted = spectral_shift(psi_lab.amplitudes, grid, float(traj.xi(t)))
    f = phase_function(grid.x, t, psi_lab.mass, traj, psi_lab.hbar)
    phi = psi_lab.replace(np.exp(-1j * f) * shifted)
    _check_edges(phi, "to_accelerated_frame")
    return phi


def from_accelerated_frame(phi: Wavefunction, traj: Trajectory) -> Wavefunction:
    """Inverse of :func:`to_accelerated_frame`."""
    t = phi.time
    grid = phi.grid
    f = phase_function(grid.x, t, phi.mass, traj, phi.hbar)
    lab = spectral_shift(np.exp(1j * f) * phi.amplitudes, grid, -float(traj.xi(t)))
    psi = phi.replace(lab)
    _check_edges(psi, "from_accelerated_frame")
    return psi


@dataclass(frozen=True)
class EquivalenceResult:
    fidelity: float
    max_pointwise_error: float
    peak_amplitude: float
    lab_then_transform: Wavefunction
    transform_then_propagate: Wavefunction


def equivalence_experiment(
    psi0: Wavefunction, traj: Trajectory, dt: float, n_steps: int
) -> EquivalenceResult:
    """Compare the two routes to the accelerated-frame state at ``t0 + n_steps dt``.

    Route A propagates freely in the lab and transforms at the end.  Route B
    transforms at the start and propagates under the inertial potential.
    """
    lab = propagate(psi0, Free(), dt, n_steps).final_state
    a = to_accelerated_frame(lab, traj)
    phi0 = to_accelerated_frame(psi0, traj)
    b = propagate(phi0, AcceleratedFrame(traj), dt, n_steps).final_state
    diff = np.abs(a.amplitudes - b.amplitudes)
    return EquivalenceResult(
        fidelity=abs(overlap(a, b)),
        max_pointwise_error=float(diff.max()),
        peak_amplitude=float(np.abs(a.amplitudes).max()),
        lab_then_transform=a,
        transform_then_propagate=b,
    )


def proper_time_residue(xi_dot: float, dx_prime: float, dt: float) -> float:
    """Non-relativistic residue ``xi' dx' - xi'^2 dt / 2`` of the Lorentz time
    transformation (c = 1)."""
    if np.any(np.abs(xi_dot) > 0.3):
        warnings.warn(
            "|xi_dot| > 0.3: the non-relativistic residue is a poor approximation",
            stacklevel=2,
        )
    return xi_dot * dx_prime - 0.5 * xi_dot**2 * dt


def phase_differential(xi_dot, dx_prime, dt, mass: float, hbar: float = 1.0):
    """``(df/dx') dx' + (m / 2 hbar) xi'^2 dt`` with ``df/dx' = -(m/hbar) xi'``."""
    return -(mass / hbar) * xi_dot * dx_prime + (mass / (2 * hbar)) * xi_dot**2 * dt


@dataclass(frozen=True)
class FreeParticlePhase:
    phase_pr_Et: float
    phase_minus_m_tau: float
    difference: float


def free_particle_phase_check(v: float, t: float, mass: float) -> FreeParticlePhase:
    """Compare ``p r - E t`` along ``r = v t`` with ``-m tau`` (hbar = c = 1)."""
    if not abs(v) < 1:
        raise DomainError(f"|v| = {abs(v)} must be below the speed of light")
    gamma = 1.0 / math.sqrt(1.0 - v * v)
    p = mass * gamma * v
    E = mass * gamma
    r = v * t
    lhs = p * r - E * t
    rhs = -mass * t / gamma
    return FreeParticlePhase(lhs, rhs, abs(lhs - rhs))
