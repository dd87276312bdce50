"""Named experiments with pass/fail criteria and plot-ready tables.

Each experiment takes validated ``params`` and ``tolerances`` dicts and
returns an :class:`ExperimentOutput`.  Runs are deterministic: the only
randomness is drawn from a fixed-seed generator.
"""

from __future__ import annotations

import copy
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import bound_states as bs
from . import correspondence as cs
from . import frames
from .errors import ConfigError
from .estimates import estimate_reports
from .propagator import Free, UniformGravity, harmonic_well, propagate
from .units import SpatialGrid, constants_for, gaussian_packet, observables


@dataclass(frozen=True)
class Criterion:
    name: str
    measured: float
    tolerance: float
    comparison: str  # "<=", ">=", "<", ">"

    @property
    def passed(self) -> bool:
        m, t = self.measured, self.tolerance
        return {
            "<=": m <= t,
            ">=": m >= t,
            "<": m < t,
            ">": m > t,
        }[self.comparison]

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "measured": float(self.measured),
            "tolerance": float(self.tolerance),
            "comparison": self.comparison,
            "passed": bool(self.passed),
        }


@dataclass
class ExperimentOutput:
    criteria: list[Criterion]
    columns: list[str]
    rows: list[tuple] = field(default_factory=list)


@dataclass(frozen=True)
class Experiment:
    name: str
    params: dict
    tolerances: dict
    run: Callable[[dict, dict], ExperimentOutput]
    positive: tuple = ()


# ---------------------------------------------------------------------------
# equivalence: extended Galilean transformation and proper-time identities

_TRAJECTORIES = {
    "rest": lambda p: frames.Rest(),
    "constant_velocity": lambda p: frames.ConstantVelocity(p["v"]),
    "constant_acceleration": lambda p: frames.ConstantAcceleration(p["a"]),
    "sinusoidal": lambda p: frames.Sinusoidal(p["amplitude"], p["omega"]),
}


def _phase_identity_errors(traj, mass, grid, times):
    grad_err, rate_err = 0.0, 0.0
    eps = 1e-5
    for t in times:
        field_ = frames.phase_field(grid, t, mass, traj)
        expected = -mass * float(traj.xi_dot(t))
        grad_err = max(grad_err, float(np.max(np.abs(field_.gradient() - expected))))
        g = lambda s: 0.5 * float(traj.xi_dot_sq_integral(s))
        rate = (g(t + eps) - g(t - eps)) / (2 * eps)
        target = 0.5 * float(traj.xi_dot(t)) ** 2
        rate_err = max(rate_err, abs(rate - target) / abs(target))
    return grad_err, rate_err


def run_equivalence(p: dict, tol: dict) -> ExperimentOutput:
    grid = SpatialGrid(p["x_min"], p["x_max"], p["n_points"])
    psi0 = gaussian_packet(grid, p["x0"], p["p0"], p["delta_x"], p["mass"])
    traj = _TRAJECTORIES[p["trajectory"]](p)
    n_steps = int(round(p["T"] / p["dt"]))
    res = frames.equivalence_experiment(psi0, traj, p["dt"], n_steps)
    crit = [
        Criterion("one_minus_fidelity", 1.0 - res.fidelity, tol["fidelity"], "<="),
        Criterion("pointwise_error_over_peak", res.max_pointwise_error / res.peak_amplitude,
                  tol["pointwise"], "<="),
    ]
    if p["trajectory"] != "rest":
        fine = frames.equivalence_experiment(psi0, traj, p["dt"] / 2, 2 * n_steps)
        factor = res.max_pointwise_error / fine.max_pointwise_error
        crit += [
            Criterion("dt_halving_error_factor_min", factor, tol["convergence_low"], ">="),
            Criterion("dt_halving_error_factor_max", factor, tol["convergence_high"], "<="),
        ]

    families = [frames.ConstantVelocity(0.7), frames.ConstantAcceleration(p["a"]),
                frames.Sinusoidal(p["amplitude"], p["omega"])]
    times = (0.3, 0.7, 1.1, 1.9)
    errs = [_phase_identity_errors(f, p["mass"], grid, times) for f in families]
    crit += [
        Criterion("phase_gradient_error", max(e[0] for e in errs), tol["phase_gradient"], "<="),
        Criterion("phase_rate_relative_error", max(e[1] for e in errs), tol["phase_rate"], "<="),
    ]

    phase_diff = max(
        frames.free_particle_phase_check(v, 1.0, 1.0).difference for v in (0.0, 0.3, 0.6, 0.99)
    )
    rng = np.random.default_rng(0)
    xi_dot = rng.uniform(-0.3, 0.3, 1000)
    dxp = rng.uniform(-1.0, 1.0, 1000)
    dt = rng.uniform(0.0, 1.0, 1000)
    m = rng.uniform(0.5, 2.0, 1000)
    lhs = -m * frames.proper_time_residue(xi_dot, dxp, dt)
    rhs = frames.phase_differential(xi_dot, dxp, dt, m)
    crit += [
        Criterion("free_particle_phase_difference", phase_diff, tol["proper_time_phase"], "<="),
        Criterion("proper_time_identity_error", float(np.max(np.abs(lhs - rhs))),
                  tol["proper_time_identity"], "<="),
    ]

    a, b = res.lab_then_transform.amplitudes, res.transform_then_propagate.amplitudes
    rows = [
        (float(x), float(ai.real), float(ai.imag), float(bi.real), float(bi.imag),
         float(abs(ai - bi)))
        for x, ai, bi in zip(grid.x, a, b)
    ]
    return ExperimentOutput(crit, ["x", "re_lab_then_transform", "im_lab_then_transform",
                                   "re_transform_then_propagate", "im_transform_then_propagate",
                                   "abs_difference"], rows)


# ---------------------------------------------------------------------------
# bohr: gravitational hydrogen-like spectrum

def run_bohr(p: dict, tol: dict) -> ExperimentOutput:
    spec = bs.Gravitational(p["G"], p["M"], p["mass"])
    res = bs.radial_eigensolver(spec, 1.0, p["r_max"], p["n_grid"], p["n_levels"])
    heavy = bs.analytic_spectrum(spec.with_mass(2 * p["mass"]), 1.0, 1)
    light = bs.analytic_spectrum(spec, 1.0, 1)
    e_ratio = heavy.analytic_energy[0] / light.analytic_energy[0]
    r_ratio = light.analytic_radius[0] / heavy.analytic_radius[0]
    virial = bs.kinetic_expectations(spec, 1.0, res) / -res.numeric_energy
    crit = [
        Criterion("max_relative_energy_error", float(res.relative_error.max()),
                  tol["energy"], "<="),
        Criterion("energy_mass_cubed_scaling_error", abs(e_ratio - 8.0) / 8.0,
                  tol["scaling"], "<="),
        Criterion("radius_inverse_mass_squared_scaling_error", abs(r_ratio - 4.0) / 4.0,
                  tol["scaling"], "<="),
        Criterion("virial_relative_error", float(np.max(np.abs(virial - 1.0))),
                  tol["virial"], "<="),
    ]
    rows = [
        (int(n), float(r), float(e), float(en), float(er))
        for n, r, e, en, er in zip(res.n, res.analytic_radius, res.analytic_energy,
                                   res.numeric_energy, res.relative_error)
    ]
    return ExperimentOutput(crit, ["n", "analytic_radius", "analytic_energy",
                                   "numeric_energy", "relative_error"], rows)


# ---------------------------------------------------------------------------
# scaling: Bohr-Sommerfeld actions under (m, n) -> (K m, K n)

def run_scaling(p: dict, tol: dict) -> ExperimentOutput:
    spec = bs.Gravitational(p["G"], p["M"], p["mass"])
    h = 2 * math.pi
    rows, worst_action = [], 0.0
    for n in p["action_levels"]:
        E = bs.analytic_spectrum(spec, 1.0, n).analytic_energy[-1]
        act = bs.action_integrals(spec, 1.0, E)
        gap = abs(act.p_action / h - n) / n
        worst_action = max(worst_action, gap)
        rows.append(("action", n, float(act.p_action / h), float(act.v_action), gap))
    analytic = cs.scaling_check(spec, p["K"], p["n"])
    numeric = cs.scaling_check(spec, p["K"], p["n"], energies="numeric")
    rows.append(("scaling_analytic", p["n"], analytic.v_action_1, analytic.v_action_2,
                 analytic.relative_difference))
    rows.append(("scaling_numeric", p["n"], numeric.v_action_1, numeric.v_action_2,
                 numeric.relative_difference))
    crit = [
        Criterion("p_action_over_h_minus_n_relative", worst_action, tol["action"], "<="),
        Criterion("v_action_difference_analytic", analytic.relative_difference,
                  tol["scaling_analytic"], "<="),
        Criterion("p_action_ratio_error", abs(analytic.p_action_ratio - p["K"]) / p["K"],
                  tol["scaling_analytic"], "<="),
        Criterion("v_action_difference_numeric", numeric.relative_difference,
                  tol["scaling_numeric"], "<="),
    ]
    return ExperimentOutput(crit, ["kind", "n", "value_1", "value_2", "relative"], rows)


# ---------------------------------------------------------------------------
# spacing: level spacing against classical frequency

def run_spacing(p: dict, tol: dict) -> ExperimentOutput:
    spec = bs.Gravitational(p["G"], p["M"], p["mass"])
    well = cs.HarmonicWell(p["well_omega"], p["mass"])
    rows, gaps = [], {}
    for ell in p["ells"]:
        for n in p["levels"]:
            s = cs.level_spacing_check(spec, n, ell)
            gaps[(n, ell)] = s.relative_gap
            rows.append(("gravitational", n, ell, s.delta_E, s.ell_hbar_omega, s.relative_gap))
    worst_well = 0.0
    for ell in p["ells"]:
        for n in p["levels"]:
            s = cs.level_spacing_check(well, n, ell)
            worst_well = max(worst_well, s.relative_gap)
            rows.append(("harmonic", n, ell, s.delta_E, s.ell_hbar_omega, s.relative_gap))
    top, low = max(p["levels"]), min(p["levels"])
    crit = []
    for ell in p["ells"]:
        crit.append(Criterion(f"gravitational_gap_n{top}_l{ell}", gaps[(top, ell)],
                              tol["gravitational_gap"], "<="))
        crit.append(Criterion(f"gap_n{top}_minus_gap_n{low}_l{ell}",
                              gaps[(top, ell)] - gaps[(low, ell)], 0.0, "<"))
    crit.append(Criterion("harmonic_gap", worst_well, tol["harmonic_gap"], "<="))
    return ExperimentOutput(crit, ["potential", "n", "ell", "delta_E", "ell_hbar_omega",
                                   "relative_gap"], rows)


# ---------------------------------------------------------------------------
# correspondence: matrix elements against classical Fourier coefficients

def run_correspondence(p: dict, tol: dict) -> ExperimentOutput:
    well = cs.HarmonicWell(p["well_omega"], p["mass"])
    spec = bs.Gravitational(p["G"], p["M"], p["mass"])
    rows, crit = [], []

    hw = cs.correspondence_check(well, p["well_n"], 1)[1]
    rows.append(("harmonic", p["well_n"], 1, hw.c_ell, hw.element, hw.relative))
    crit.append(Criterion("harmonic_c1_relative_error", hw.relative, tol["harmonic"], "<="))

    grav_errors, well_errors = [], []
    for n in p["levels"]:
        K = p["K"] if n == p["scaled_n"] else None
        table = cs.correspondence_check(spec, n, p["ell_max"], K=K)
        for row in table:
            rows.append(("gravitational", n, row.ell, row.c_ell, row.element, row.relative))
        grav_errors.append(table[1].relative)
        if K is not None:
            for row in table:
                rows.append((f"gravitational_K{K}_step_Kl", K * n, K * row.ell, row.c_ell,
                             row.scaled_element, row.scaled_relative))
                rows.append((f"gravitational_K{K}_step_l", K * n, row.ell, row.c_ell,
                             row.unit_step_element, row.unit_step_relative))
                if row.ell in p["scaled_ells"]:
                    crit.append(Criterion(f"scaled_Kl_vs_c{row.ell}", row.scaled_relative,
                                          tol["scaled"], "<="))
                    crit.append(Criterion(f"scaled_Kl_vs_unscaled_l{row.ell}", row.pair_relative,
                                          tol["pair"], "<="))
            crit.append(Criterion("diagonal_vs_c0", table[0].relative, tol["diagonal"], "<="))
        well_errors.append(
            cs.correspondence_check(well, n, 1, convention="lower")[1].relative
        )
    crit.append(Criterion("gravitational_error_steps_nonincreasing",
                          float(np.max(np.diff(grav_errors))), 0.0, "<"))
    crit.append(Criterion("harmonic_lower_convention_error_steps_nonincreasing",
                          float(np.max(np.diff(well_errors))), 0.0, "<"))
    return ExperimentOutput(crit, ["system", "n", "ell", "c_ell", "matrix_element",
                                   "relative_error"], rows)


# ---------------------------------------------------------------------------
# estimates

def run_estimates(p: dict, tol: dict) -> ExperimentOutput:
    reports = estimate_reports(constants_for(p["unit_system"]))
    crit, rows = [], []
    for r in reports:
        rows.append((r.name, r.formula, r.value, r.units,
                     "" if r.paper_quoted is None else r.paper_quoted,
                     "" if r.log10_discrepancy is None else r.log10_discrepancy))
        if r.log10_discrepancy is not None:
            crit.append(Criterion(f"log10_gap_{r.name}", r.log10_discrepancy,
                                  tol["log10_gap"], "<="))
    return ExperimentOutput(crit, ["name", "formula", "value", "units", "paper_quoted",
                                   "log10_discrepancy"], rows)


# ---------------------------------------------------------------------------
# packet: propagator health and mass-dependent spreading

def run_packet(p: dict, tol: dict) -> ExperimentOutput:
    grid = SpatialGrid(p["x_min"], p["x_max"], p["n_points"])
    crit = []

    psi = gaussian_packet(grid, 1.0, 0.0, 1.0, 1.0)
    long_run = propagate(psi, harmonic_well(1.0, 1.0), p["dt"], 10_000)
    crit.append(Criterion("norm_drift_per_1e4_steps", long_run.norm_drift, tol["norm"], "<="))

    free = propagate(gaussian_packet(grid, 0.0, 0.0, 1.0, 1.0), Free(), p["dt"],
                     int(round(p["T"] / p["dt"])))
    width = observables(free.final_state).spread_x
    expected = math.sqrt(1.0 + (p["T"] / 2.0) ** 2)
    crit.append(Criterion("free_spreading_relative_error", abs(width - expected) / expected,
                          tol["spreading"], "<="))

    n_steps = int(round(p["T"] / p["dt"]))
    traces = []
    for mass in (1.0, 2.0):
        start = gaussian_packet(grid, 0.0, mass * p["v0"], 1.0, mass)
        traces.append(propagate(start, UniformGravity(p["g"]), p["dt"], n_steps,
                                trace_every=p["trace_every"]).trace)
    light, heavy = traces
    crit.append(Criterion("mean_x_trace_difference",
                          float(np.max(np.abs(light.mean_x - heavy.mean_x))),
                          tol["mean_trace"], "<="))
    spread_gap = abs(light.spread_x[-1] - heavy.spread_x[-1]) / heavy.spread_x[-1]
    crit.append(Criterion("final_spread_relative_difference", spread_gap,
                          tol["spread_difference"], ">"))
    rows = [
        (float(t), float(a), float(b), float(c), float(d))
        for t, a, b, c, d in zip(light.t, light.mean_x, heavy.mean_x,
                                 light.spread_x, heavy.spread_x)
    ]
    return ExperimentOutput(crit, ["t", "mean_x_m1", "mean_x_m2", "spread_x_m1",
                                   "spread_x_m2"], rows)


# ---------------------------------------------------------------------------

_GRAVITY = {"G": 1.0, "M": 1.0, "mass": 1.0}

EXPERIMENTS: dict[str, Experiment] = {
    e.name: e
    for e in [
        Experiment(
            "equivalence",
            {"trajectory": "constant_acceleration", "a": 0.5, "v": 0.5, "amplitude": 0.3,
             "omega": 2.0, "T": 2.0, "dt": 2e-3, "x_min": -128.0, "x_max": 128.0,
             "n_points": 4096, "x0": 0.0, "p0": 0.0, "delta_x": 1.0, "mass": 1.0},
            {"fidelity": 1e-6, "pointwise": 1e-4, "convergence_low": 3.5,
             "convergence_high": 4.5, "phase_gradient": 1e-8, "phase_rate": 1e-6,
             "proper_time_phase": 1e-10, "proper_time_identity": 1e-12},
            run_equivalence,
            positive=("T", "dt", "delta_x", "mass", "omega"),
        ),
        Experiment(
            "bohr",
            {**_GRAVITY, "r_max": 400.0, "n_grid": 8000, "n_levels": 5},
            {"energy": 1e-3, "scaling": 1e-12, "virial": 1e-2},
            run_bohr,
            positive=("G", "M", "mass", "r_max", "n_grid", "n_levels"),
        ),
        Experiment(
            "scaling",
            {**_GRAVITY, "K": 3, "n": 5, "action_levels": [5, 10, 20, 40]},
            {"action": 5e-3, "scaling_analytic": 1e-9, "scaling_numeric": 1e-2},
            run_scaling,
            positive=("G", "M", "mass", "K", "n"),
        ),
        Experiment(
            "spacing",
            {**_GRAVITY, "well_omega": 1.0, "levels": [10, 30, 100], "ells": [1, 2]},
            {"gravitational_gap": 2e-2, "harmonic_gap": 1e-6},
            run_spacing,
            positive=("G", "M", "mass", "well_omega"),
        ),
        Experiment(
            "correspondence",
            {**_GRAVITY, "well_omega": 1.0, "well_n": 20, "levels": [10, 20, 40],
             "scaled_n": 40, "K": 2, "ell_max": 2, "scaled_ells": [0, 1, 2]},
            {"harmonic": 1e-2, "scaled": 5e-2, "pair": 2e-2, "diagonal": 2e-2},
            run_correspondence,
            positive=("G", "M", "mass", "well_omega", "K"),
        ),
        Experiment(
            "estimates",
            {"unit_system": "CGS"},
            {"log10_gap": 3.0},
            run_estimates,
        ),
        Experiment(
            "packet",
            {"x_min": -32.0, "x_max": 32.0, "n_points": 1024, "dt": 2e-3, "T": 2.0,
             "g": 1.0, "v0": 0.5, "trace_every": 50},
            {"norm": 1e-12, "spreading": 1e-6, "mean_trace": 1e-8, "spread_difference": 1e-2},
            run_packet,
            positive=("dt", "T", "trace_every"),
        ),
    ]
}


def _check_type(where: str, value, default):
    if isinstance(default, bool) or isinstance(value, bool):
        ok = isinstance(value, bool) and isinstance(default, bool)
    elif isinstance(default, int):
        ok = isinstance(value, int)
    elif isinstance(default, float):
        ok = isinstance(value, (int, float))
    elif isinstance(default, list):
        ok = isinstance(value, list) and all(isinstance(v, int) and not isinstance(v, bool)
                                             for v in value)
    else:
        ok = isinstance(value, type(default))
    if not ok:
        raise ConfigError(f"{where}: expected {type(default).__name__}, got {value!r}")


def resolve(name: str, section: dict | None) -> tuple[dict, dict]:
    """Merge a config section over an experiment's defaults, strictly."""
    exp = EXPERIMENTS[name]
    section = {} if section is None else section
    if not isinstance(section, dict):
        raise ConfigError(f"{name}: section must be an object")
    unknown = set(section) - {"params", "tolerances"}
    if unknown:
        raise ConfigError(f"{name}: unknown keys {sorted(unknown)}")
    params = copy.deepcopy(exp.params)
    tols = dict(exp.tolerances)
    for kind, base, given in (("params", params, section.get("params", {})),
                              ("tolerances", tols, section.get("tolerances", {}))):
        if not isinstance(given, dict):
            raise ConfigError(f"{name}.{kind} must be an object")
        for key, value in given.items():
            if key not in base:
                raise ConfigError(f"{name}.{kind}: unknown key {key!r}")
            _check_type(f"{name}.{kind}.{key}", value, base[key])
            base[key] = float(value) if isinstance(base[key], float) else value
    for key, value in tols.items():
        if not value > 0:
            raise ConfigError(f"{name}.tolerances.{key} must be positive, got {value}")
    for key in exp.positive:
        if not params[key] > 0:
            raise ConfigError(f"{name}.params.{key} must be positive, got {params[key]}")
    if name == "equivalence" and params["trajectory"] not in _TRAJECTORIES:
        raise ConfigError(f"equivalence.params.trajectory must be one of {sorted(_TRAJECTORIES)}")
    if name == "estimates" and params["unit_system"] not in ("SI", "CGS", "natural"):
        raise ConfigError("estimates.params.unit_system must be SI, CGS or natural")
    return params, tols
