"""Split-operator (Strang) time evolution on a periodic grid.

Each step applies half a potential phase, an exact kinetic phase in the
discrete Fourier basis and another half potential phase.  Time-dependent
potentials are sampled at the step midpoint.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Optional

import numpy as np
from scipy import fft as sp_fft

from .errors import BoundaryError, StabilityError
from .units import EDGE_TOLERANCE, Wavefunction, observables, overlap

# Edge amplitude tolerated at traced samples during a run.
TRACE_EDGE_TOLERANCE = 1e-9


class Potential:
    """Base class of the potential family ``V(x, t)``.

    Subclasses implement :meth:`values`; ``time_dependent`` tells the
    propagator whether it may cache the potential phase.
    """

    time_dependent = False

    def values(self, x: np.ndarray, t: float, mass: float) -> np.ndarray:
        raise NotImplementedError

    def gradient(self, x: np.ndarray, t: float, mass: float) -> np.ndarray:
        """dV/dx by central differences; linear subclasses override."""
        h = 1e-6 * max(1.0, float(np.max(np.abs(x))))
        return (self.values(x + h, t, mass) - self.values(x - h, t, mass)) / (2 * h)


@dataclass(frozen=True)
class Free(Potential):
    def values(self, x, t, mass):
        return np.zeros_like(np.asarray(x, dtype=float))

    def gradient(self, x, t, mass):
        return np.zeros_like(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class UniformGravity(Potential):
    """``V = m g x``; the force ``-m g`` points toward negative x."""

    g: float

    def values(self, x, t, mass):
        return mass * self.g * np.asarray(x, dtype=float)

    def gradient(self, x, t, mass):
        return np.full_like(np.asarray(x, dtype=float), mass * self.g)


@dataclass(frozen=True)
class AcceleratedFrame(Potential):
    """Inertial potential ``V(x', t) = -m xi''(t) x'`` seen in a frame
    displaced by ``xi(t)``."""

    traj: object
    time_dependent = True

    def values(self, x, t, mass):
        return -mass * self.traj.xi_ddot(t) * np.asarray(x, dtype=float)

    def gradient(self, x, t, mass):
        return np.full_like(np.asarray(x, dtype=float), -mass * self.traj.xi_ddot(t))


@dataclass(frozen=True)
class Tabulated(Potential):
    """Arbitrary potential from a sampler ``V(x, t) -> array``."""

    sampler: Callable[[np.ndarray, float], np.ndarray]
    time_dependent: bool = True

    def values(self, x, t, mass):
        return np.asarray(self.sampler(np.asarray(x, dtype=float), t), dtype=float)


def harmonic_well(omega: float, mass: float, center: float = 0.0) -> Tabulated:
    """``V = m omega^2 (x - center)^2 / 2`` as a static tabulated potential."""
    k = mass * omega**2
    return Tabulated(lambda x, t: 0.5 * k * (x - center) ** 2, time_dependent=False)


@dataclass(frozen=True)
class TraceSeries:
    """Observables sampled every ``trace_every`` steps (including t0)."""

    t: np.ndarray
    norm: np.ndarray
    mean_x: np.ndarray
    mean_p: np.ndarray
    spread_x: np.ndarray
    spread_p: np.ndarray
    edge: np.ndarray


@dataclass(frozen=True)
class PropagationResult:
    final_state: Wavefunction
    trace: Optional[TraceSeries]
    steps_taken: int
    norm_drift: float


def kinetic_phase_per_step(psi: Wavefunction, dt: float) -> float:
    """Largest kinetic phase ``hbar k_max^2 dt / (2 m)`` accumulated in one step."""
    return psi.hbar * psi.grid.k_max**2 * dt / (2 * psi.mass)


def _check_contract(psi: Wavefunction, dt: float) -> None:
    if not dt > 0:
        raise ValueError("dt must be positive")
    phase = kinetic_phase_per_step(psi, dt)
    if not phase < np.pi:
        raise StabilityError(
            f"kinetic phase per step {phase:.4g} >= pi; reduce dt below "
            f"{2 * np.pi * psi.mass / (psi.hbar * psi.grid.k_max**2):.4g}"
        )
    if psi.edge_amplitude >= EDGE_TOLERANCE:
        raise BoundaryError(
            f"initial edge amplitude {psi.edge_amplitude:.3e} >= {EDGE_TOLERANCE:g}"
        )


_DTYPES = {"double": np.complex128, "extended": np.clongdouble}


def _evolve(psi: Wavefunction, V: Potential, dt: float, n_steps: int,
            precision: str = "extended") -> Iterator[np.ndarray]:
    """Yield the amplitudes after each Strang step.

    ``precision="extended"`` runs the FFTs and phase products in long double,
    which keeps FFT round-off from biasing the norm; ``"double"`` is faster.
    """
    dtype = _DTYPES[precision]
    real = np.longdouble if precision == "extended" else np.float64
    x = psi.grid.x
    k_sq = psi.grid.k.astype(real) ** 2
    kinetic = np.exp(-1j * (psi.hbar * dt / (2 * psi.mass)) * k_sq).astype(dtype)
    half = -0.5 * dt / psi.hbar

    def potential_phase(t):
        return np.exp(1j * (half * V.values(x, t, psi.mass)).astype(real)).astype(dtype)

    static_phase = None if V.time_dependent else potential_phase(psi.time)
    a = np.array(psi.amplitudes, dtype=dtype)
    for step in range(n_steps):
        if static_phase is None:
            phase = potential_phase(psi.time + (step + 0.5) * dt)
        else:
            phase = static_phase
        a *= phase
        a = sp_fft.ifft(sp_fft.fft(a) * kinetic)
        a *= phase
        yield a


def _sample(state: Wavefunction) -> tuple:
    obs = observables(state)
    return (state.time, obs.norm, obs.mean_x, obs.mean_p, obs.spread_x, obs.spread_p,
            state.edge_amplitude)


def propagate(
    psi: Wavefunction,
    V: Potential,
    dt: float,
    n_steps: int,
    trace_every: int = 0,
    precision: str = "extended",
) -> PropagationResult:
    """Advance ``psi`` by ``n_steps`` Strang steps of size ``dt``.

    Raises
    ------
    StabilityError
        If the kinetic phase per step reaches pi (aliasing).
    BoundaryError
        If the initial edge amplitude is not below 1e-12, or any traced
        sample (and the final state) has edge amplitude above 1e-9.
    """
    if n_steps < 0:
        raise ValueError("n_steps must be non-negative")
    if precision not in _DTYPES:
        raise ValueError(f"precision must be one of {sorted(_DTYPES)}")
    _check_contract(psi, dt)
    rows = [_sample(psi)] if trace_every > 0 else None

    state = psi
    for step, amps in enumerate(_evolve(psi, V, dt, n_steps, precision), start=1):
        if rows is not None and step % trace_every == 0:
            state = psi.replace(amps.astype(complex), time=psi.time + step * dt)
            rows.append(_sample(state))
            if state.edge_amplitude > TRACE_EDGE_TOLERANCE:
                raise BoundaryError(
                    f"edge amplitude {state.edge_amplitude:.3e} at t={state.time:.6g} "
                    "exceeds the trace tolerance; enlarge the domain"
                )
        if step == n_steps:
            state = psi.replace(amps.astype(complex), time=psi.time + n_steps * dt)
    if state.edge_amplitude > TRACE_EDGE_TOLERANCE:
        raise BoundaryError(
            f"edge amplitude {state.edge_amplitude:.3e} at t={state.time:.6g} "
            "exceeds the trace tolerance; enlarge the domain"
        )

    trace = None
    if rows is not None:
        cols = [np.array(c) for c in zip(*rows)]
        trace = TraceSeries(*cols)
    return PropagationResult(
        final_state=state,
        trace=trace,
        steps_taken=n_steps,
        norm_drift=abs(state.norm - 1.0),
    )


@dataclass(frozen=True)
class StationaryCheck:
    residual: float
    phase_rate: float
    expected_rate: float


def stationary_check(
    psi: Wavefunction, V: Potential, E: float, dt: float, n_steps: int
) -> StationaryCheck:
    """Evolve ``psi`` under a static ``V`` and measure how far it drifts.

    ``residual = 1 - |<psi(0)|psi(t)>|`` is small iff ``psi`` is an
    eigenstate.  ``phase_rate`` is the least-squares slope of the unwrapped
    overlap phase, to be compared with ``expected_rate = -E/hbar``.
    """
    if V.time_dependent:
        raise ValueError("stationary_check needs a time-independent potential")
    expected = -E / psi.hbar
    if n_steps == 0:
        return StationaryCheck(0.0, expected, expected)
    _check_contract(psi, dt)
    phases = [0.0]
    last = psi
    for amps in _evolve(psi, V, dt, n_steps):
        last = psi.replace(amps.astype(complex))
        phases.append(np.angle(overlap(psi, last)))
    t = dt * np.arange(n_steps + 1)
    unwrapped = np.unwrap(np.array(phases))
    rate = float(np.polyfit(t, unwrapped, 1)[0]) if n_steps > 1 else float(unwrapped[-1] / dt)
    residual = 1.0 - abs(overlap(psi, last))
    return StationaryCheck(float(residual), rate, expected)
