"""Hydrogen-like spectra for Coulomb and gravitational 1/r couplings.

Provides the closed-form Bohr levels, an independent finite-difference
radial (l = 0) eigensolver, and Bohr-Sommerfeld loop actions.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import BoxTooSmallError, UnboundEnergyError


class CentralPotentialSpec:
    """Attractive ``V(r) = -coupling / r`` acting on a particle of ``mass``."""

    mass: float

    @property
    def coupling(self) -> float:
        raise NotImplementedError

    def potential(self, r):
        return -self.coupling / np.asarray(r, dtype=float)

    def turning_points(self, E: float) -> tuple[float, float]:
        """Inner and outer classical turning points of l = 0 motion at ``E``."""
        if not E < 0:
            raise UnboundEnergyError(f"E = {E} is not bound in an attractive 1/r potential")
        return 0.0, self.coupling / -E

    def with_mass(self, mass: float) -> "CentralPotentialSpec":
        return replace(self, mass=mass)

    def _validate(self):
        if not self.mass > 0:
            raise ValueError("mass must be positive")
        if not self.coupling > 0:
            raise ValueError("coupling constants must be strictly positive")


@dataclass(frozen=True)
class Coulomb(CentralPotentialSpec):
    """``V = -e^2 / r`` (Gaussian convention)."""

    e_sq: float
    mass: float

    def __post_init__(self):
        self._validate()

    @property
    def coupling(self) -> float:
        return self.e_sq


@dataclass(frozen=True)
class Gravitational(CentralPotentialSpec):
    """``V = -G M m / r`` around a source of mass ``M``."""

    G: float
    M: float
    mass: float

    def __post_init__(self):
        self._validate()

    @property
    def coupling(self) -> float:
        return self.G * self.M * self.mass


def bohr_radius(spec: CentralPotentialSpec, hbar: float) -> float:
    return hbar**2 / (spec.mass * spec.coupling)


@dataclass(frozen=True)
class SpectrumResult:
    """Levels indexed by principal quantum number ``n`` (ground state n = 1)."""

    n: np.ndarray
    analytic_radius: np.ndarray
    analytic_energy: np.ndarray
    numeric_energy: Optional[np.ndarray] = None
    relative_error: Optional[np.ndarray] = None
    r: Optional[np.ndarray] = None
    states: Optional[np.ndarray] = None


def analytic_spectrum(
    spec: CentralPotentialSpec, hbar: float, n_max: int, reduced_mass: bool = False
) -> SpectrumResult:
    """Bohr radii ``hbar^2 n^2 / (m k)`` and energies ``-m k^2 / (2 hbar^2 n^2)``.

    ``k`` is the coupling (``e^2`` or ``G M m``).  With ``reduced_mass`` the
    inertial mass becomes ``m M / (m + M)`` (gravitational sources only);
    by default the source is infinitely heavy.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    mu = spec.mass
    if reduced_mass:
        if not isinstance(spec, Gravitational):
            raise ValueError("reduced mass needs a source mass M")
        mu = spec.mass * spec.M / (spec.mass + spec.M)
    n = np.arange(1, n_max + 1)
    k = spec.coupling
    radius = hbar**2 * n**2 / (mu * k)
    energy = -mu * k**2 / (2 * hbar**2 * n**2)
    return SpectrumResult(n=n, analytic_radius=radius, analytic_energy=energy)


def _fix_signs(states: np.ndarray) -> np.ndarray:
    """Make each column positive on its outermost lobe."""
    for j in range(states.shape[1]):
        col = states[:, j]
        big = np.nonzero(np.abs(col) > 1e-3 * np.abs(col).max())[0][-1]
        if col[big] < 0:
            states[:, j] = -col
    return states


def _radial_operator(spec: CentralPotentialSpec, hbar: float, r_max: float, n_grid: int):
    h = r_max / (n_grid + 1)
    r = h * np.arange(1, n_grid + 1)
    t = hbar**2 / (2 * spec.mass * h**2)
    diag = 2 * t + spec.potential(r)
    off = np.full(n_grid - 1, -t)
    return r, h, diag, off


def radial_levels(spec, hbar, r_max, n_grid, levels) -> np.ndarray:
    """Eigenvalues only, for the (0-based) index range ``levels = (lo, hi)``."""
    _, _, diag, off = _radial_operator(spec, hbar, r_max, n_grid)
    return eigh_tridiagonal(diag, off, eigvals_only=True, select="i", select_range=levels)


def radial_states(spec, hbar, r_max, n_grid, n_levels):
    """Lowest ``n_levels`` l = 0 eigenpairs of the finite-difference operator.

    Returns ``(r, energies, states)`` with ``u(r)`` normalized so that
    ``sum(u^2) * h = 1`` and positive on its outermost lobe.
    """
    r, h, diag, off = _radial_operator(spec, hbar, r_max, n_grid)
    w, v = eigh_tridiagonal(diag, off, select="i", select_range=(0, n_levels - 1))
    v /= np.sqrt(h)
    return r, w, _fix_signs(v)


def radial_eigensolver(
    spec: CentralPotentialSpec,
    hbar: float,
    r_max: float,
    n_grid: int,
    n_levels: int,
    box_check: bool = True,
) -> SpectrumResult:
    """Solve ``-(hbar^2/2m) u'' + V u = E u`` with ``u(0) = u(r_max) = 0``.

    Second-order finite differences on ``n_grid`` interior points give a
    symmetric tridiagonal matrix.  The lowest ``n_levels`` eigenvalues are
    paired with the Bohr formula.

    Raises
    ------
    BoxTooSmallError
        If the highest requested level moves by more than 1e-4 (relative)
        when the box is enlarged 1.5x at fixed spacing.
    """
    if n_levels < 1:
        raise ValueError("n_levels must be >= 1")
    if n_grid < 2000:
        raise ValueError("n_grid must be >= 2000")
    analytic = analytic_spectrum(spec, hbar, n_levels)
    if r_max < 3 * analytic.analytic_radius[-1]:
        raise ValueError(
            f"r_max={r_max} is below 3 r_n = {3 * analytic.analytic_radius[-1]:.6g}"
        )
    r, w, v = radial_states(spec, hbar, r_max, n_grid, n_levels)
    if box_check:
        h = r[0]
        big_grid = int(round(1.5 * r_max / h)) - 1
        wide = radial_levels(spec, hbar, (big_grid + 1) * h, big_grid,
                             (n_levels - 1, n_levels - 1))[0]
        shift = abs(wide - w[-1]) / abs(w[-1])
        if shift > 1e-4:
            raise BoxTooSmallError(
                f"level {n_levels} shifts by {shift:.2e} when r_max grows 1.5x"
            )
    rel = np.abs(w - analytic.analytic_energy) / np.abs(analytic.analytic_energy)
    return replace(analytic, numeric_energy=w, relative_error=rel, r=r, states=v)


def kinetic_expectations(spec: CentralPotentialSpec, hbar: float,
                         result: SpectrumResult) -> np.ndarray:
    """``<T>`` of each numeric state from its finite-difference gradient."""
    u = result.states
    h = result.r[0]
    padded = np.vstack([np.zeros(u.shape[1]), u, np.zeros(u.shape[1])])
    grad = np.diff(padded, axis=0) / h
    return hbar**2 / (2 * spec.mass) * np.sum(grad**2, axis=0) * h


# Mapping r = lo + (hi - lo)(1 - cos s)/2 absorbs square-root behaviour at
# both turning points, leaving a smooth integrand in s on [0, pi].
_N_QUAD = 256
_QUAD_X, _QUAD_W = np.polynomial.legendre.leggauss(_N_QUAD)


def turning_point_quadrature(lo: float, hi: float, n: int = _N_QUAD):
    """Nodes ``r`` and weights ``dr`` for integrals between turning points."""
    if n == _N_QUAD:
        x, w = _QUAD_X, _QUAD_W
    else:
        x, w = np.polynomial.legendre.leggauss(n)
    s = 0.5 * np.pi * (x + 1)
    half = 0.5 * (hi - lo)
    r = lo + half * (1 - np.cos(s))
    return r, w * 0.5 * np.pi * half * np.sin(s)


def _local_momentum(spec, E, r):
    return np.sqrt(np.clip(2 * spec.mass * (E - spec.potential(r)), 0.0, None))


@dataclass(frozen=True)
class ActionIntegrals:
    p_action: float
    v_action: float


def action_integrals(spec, hbar: float, E: float) -> ActionIntegrals:
    """Loop actions ``oint p dr`` and ``oint v dr = oint p dr / m`` at energy ``E``.

    ``spec`` is any potential object exposing ``mass``, ``potential(r)`` and
    ``turning_points(E)``.  ``hbar`` is accepted for symmetry with the other
    spectrum routines; the actions do not depend on it.
    """
    lo, hi = spec.turning_points(E)
    r, w = turning_point_quadrature(lo, hi)
    p_action = 2.0 * float(np.sum(w * _local_momentum(spec, E, r)))
    return ActionIntegrals(p_action=p_action, v_action=p_action / spec.mass)

