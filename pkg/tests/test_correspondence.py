import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import jvp

from equivlab.bound_states import Gravitational
from equivlab.correspondence import (
    HarmonicWell,
    RadialGrid,
    auto_grid,
    bound_basis,
    classical_orbit,
    correspondence_check,
    fourier_coefficients,
    fourier_series,
    level_spacing_check,
    matrix_element,
    orbital_period,
    scaling_check,
)
from equivlab.errors import ConvergenceError, UnboundEnergyError, UndersamplingError
from equivlab.units import SpatialGrid


def kepler_radial_coefficients(kappa, E, ell):
    """Fourier coefficients of radial (e = 1) Kepler motion timed from apocentre.

    With a = kappa / (2|E|) and eccentric anomaly u, r = a (1 - cos u) and
    M = u - sin u, giving c_0 = 3a/2 and c_l = -(a/l) J'_l(l) (-1)^l.
    """
    a = kappa / (2 * abs(E))
    if ell == 0:
        return 1.5 * a
    return -(a / ell) * jvp(ell, ell) * (-1) ** ell


def kepler_period(kappa, mass, E):
    return math.pi * kappa * math.sqrt(mass) / (math.sqrt(2) * abs(E) ** 1.5)


def test_harmonic_orbit_is_a_cosine():
    well = HarmonicWell(1.7, 0.8)
    orbit = classical_orbit(well, 2.3, n_samples=1024)
    A = math.sqrt(2 * 2.3 / (0.8 * 1.7**2))
    assert orbit.period == pytest.approx(2 * math.pi / 1.7, rel=1e-10)
    assert orbit.r == pytest.approx(A * np.cos(1.7 * orbit.t), abs=1e-9 * A)
    assert orbit.v == pytest.approx(-A * 1.7 * np.sin(1.7 * orbit.t), abs=1e-8 * A)
    assert orbit.energy_error().max() < 1e-12


def test_kepler_orbit_against_closed_forms():
    spec = Gravitational(1.0, 1.0, 1.0)
    E = -1 / 800
    orbit = classical_orbit(spec, E, n_samples=16384)
    assert orbit.period == pytest.approx(kepler_period(1.0, 1.0, E), rel=1e-10)
    assert orbital_period(spec, E) == pytest.approx(orbit.period, rel=1e-14)
    assert orbit.energy_error().max() < 1e-10
    c = fourier_coefficients(orbit, 3)
    for ell in range(4):
        assert c[ell].real == pytest.approx(kepler_radial_coefficients(1.0, E, ell), rel=2e-6)
        assert abs(c[ell].imag) < 1e-9 * abs(c[0])
        assert c[-ell] == pytest.approx(np.conj(c[ell]))


def test_kepler_coefficients_converge_with_sampling():
    # r ~ t^(2/3) at the collision point limits the rectangle rule to a
    # fractional order; 4x more samples must still gain about a decade
    spec = Gravitational(1.0, 1.0, 1.0)
    E = -1 / 800
    exact = kepler_radial_coefficients(1.0, E, 2)
    errs = [abs(fourier_coefficients(classical_orbit(spec, E, n_samples=n), 2)[2].real - exact)
            for n in (1024, 4096, 16384)]
    assert errs[0] / errs[1] > 8 and errs[1] / errs[2] > 8


def test_orbit_is_invariant_under_joint_mass_energy_scaling():
    spec = Gravitational(1.0, 1.0, 1.0)
    a = classical_orbit(spec, -0.01, n_samples=512)
    b = classical_orbit(spec, -0.03, mass=3.0, n_samples=512)
    # kappa = G M m scales with m, so r(t) is unchanged
    assert b.period == pytest.approx(a.period, rel=1e-10)
    assert b.r == pytest.approx(a.r, rel=1e-10)


def test_orbit_errors():
    with pytest.raises(UnboundEnergyError):
        classical_orbit(Gravitational(1.0, 1.0, 1.0), 0.1)
    with pytest.raises(UnboundEnergyError):
        classical_orbit(HarmonicWell(1.0, 1.0), -0.1)
    with pytest.raises(UndersamplingError):
        fourier_series(np.linspace(0, 1, 60), np.zeros(60), 1.0, 2)


def test_fourier_series_of_a_trigonometric_polynomial():
    T = 3.0
    t = (np.arange(256) + 0.5) * T / 256
    w = 2 * np.pi / T
    f = 1.5 + 0.4 * np.cos(w * t) - 0.2 * np.sin(2 * w * t)
    c = fourier_series(t, f, T, 3)
    assert c[0] == pytest.approx(1.5)
    assert c[1] == pytest.approx(0.2)
    assert c[2] == pytest.approx(0.1j)
    assert abs(c[3]) < 1e-15


@settings(max_examples=20, deadline=None)
@given(omega=st.floats(0.2, 5.0), mass=st.floats(0.2, 5.0), E=st.floats(0.1, 50.0))
def test_harmonic_first_coefficient_is_half_amplitude(omega, mass, E):
    orbit = classical_orbit(HarmonicWell(omega, mass), E, n_samples=256)
    A = math.sqrt(2 * E / (mass * omega**2))
    c = fourier_coefficients(orbit, 2)
    assert c[1].real == pytest.approx(A / 2, rel=1e-9)
    assert abs(c[2]) < 1e-9 * A


@pytest.fixture(scope="module")
def well_basis():
    well = HarmonicWell(1.0, 1.0)
    return well, bound_basis(well, auto_grid(well, 30), 30)


def test_well_basis_energies_and_orthonormality(well_basis):
    well, basis = well_basis
    assert basis.energies == pytest.approx(well.levels(1.0, 30), rel=1e-10)
    assert basis.overlap_matrix() == pytest.approx(np.eye(31), abs=1e-10)
    assert basis.first_n == 0 and basis.n_max == 30
    with pytest.raises(IndexError):
        basis.state(31)


@pytest.mark.parametrize("n", [0, 5, 20, 29])
def test_well_position_elements_are_exact(well_basis, n):
    _, basis = well_basis
    assert matrix_element(basis, n, 1) == pytest.approx(math.sqrt((n + 1) / 2), rel=1e-10)
    assert abs(matrix_element(basis, n, 0)) < 1e-10


def test_radial_basis_matches_bohr_levels():
    spec = Gravitational(1.0, 1.0, 1.0)
    basis = bound_basis(spec, auto_grid(spec, 6), 6)
    assert basis.first_n == 1
    assert basis.energy(3) == pytest.approx(-1 / 18, rel=1e-3)
    assert basis.overlap_matrix() == pytest.approx(np.eye(6), abs=1e-10)


def test_basis_guards():
    well = HarmonicWell(1.0, 1.0)
    with pytest.raises(TypeError):
        bound_basis(well, RadialGrid(10.0, 2000), 3)
    with pytest.raises(TypeError):
        bound_basis(Gravitational(1.0, 1.0, 1.0), SpatialGrid(-8, 8, 64), 3)
    with pytest.raises(ConvergenceError):
        bound_basis(well, SpatialGrid(-5.0, 5.0, 32), 10)


def test_harmonic_correspondence_midpoint_is_exact():
    row = correspondence_check(HarmonicWell(1.0, 1.0), 20, 1)[1]
    assert row.relative < 1e-8
    assert row.c_ell == pytest.approx(math.sqrt(21 / 2), rel=1e-9)


def test_harmonic_correspondence_lower_convention_improves_with_n():
    errs = [correspondence_check(HarmonicWell(1.0, 1.0), n, 1, convention="lower")[1].relative
            for n in (10, 20, 40)]
    assert errs[0] > errs[1] > errs[2]
    # c_1 at E_n is sqrt((n + 1/2)/2), so the gap is sqrt((n+1)/(n+1/2)) - 1
    assert errs[1] == pytest.approx(math.sqrt(21 / 20.5) - 1, rel=1e-6)


def test_gravitational_correspondence_small_n():
    rows = correspondence_check(Gravitational(1.0, 1.0, 1.0), 10, 1)
    assert rows[0].relative < 1e-4
    assert rows[1].relative < 5e-3
    with pytest.raises(ValueError):
        correspondence_check(HarmonicWell(1.0, 1.0), 5, 1, convention="upper")


def test_level_spacing():
    well = HarmonicWell(1.3, 1.0)
    assert level_spacing_check(well, 7, 2).relative_gap < 1e-9
    spec = Gravitational(1.0, 1.0, 1.0)
    for ell in (1, 2):
        far = level_spacing_check(spec, 100, ell).relative_gap
        near = level_spacing_check(spec, 10, ell).relative_gap
        assert far <= 0.02 and far < near
    s = level_spacing_check(spec, 10, 1)
    assert s.delta_E == pytest.approx(0.5 / 100 - 0.5 / 121)


def test_scaling_check():
    spec = Gravitational(1.0, 1.0, 1.0)
    res = scaling_check(spec, 3, 5)
    assert res.relative_difference < 1e-9
    assert res.p_action_ratio == pytest.approx(3.0, rel=1e-12)
    with pytest.raises(ValueError):
        scaling_check(spec, 1, 5)
    with pytest.raises(ValueError):
        scaling_check(spec, 2, 5, energies="guessed")
