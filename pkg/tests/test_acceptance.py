"""Acceptance criteria 1-10, each at its stated tolerance.

Every test appends one ``CRITERION n: PASS|FAIL ...`` line to ``RESULTS``;
``conftest.py`` prints them after the run.  Runtime bounds are part of each
verdict.  Running this file directly prints the same lines.
"""

import json
import math
import time

import numpy as np
import pytest

from equivlab import bound_states as bs
from equivlab import correspondence as cs
from equivlab import frames
from equivlab.cli import main
from equivlab.estimates import estimate_reports
from equivlab.propagator import (
    Free,
    UniformGravity,
    harmonic_well,
    kinetic_phase_per_step,
    propagate,
)
from equivlab.units import SpatialGrid, gaussian_packet

from test_estimates import HAND_CGS, four_figures

RESULTS: list[str] = []


class Verdict:
    """Collects named checks for one criterion and records a summary line."""

    def __init__(self, number, limit_s):
        self.number = number
        self.limit_s = limit_s
        self.checks = []
        self.notes = []
        self.start = time.perf_counter()

    def check(self, label, ok, detail):
        self.checks.append((label, bool(ok), detail))

    def note(self, text):
        self.notes.append(text)

    def finish(self, elapsed=None):
        elapsed = time.perf_counter() - self.start if elapsed is None else elapsed
        self.check("runtime", elapsed < self.limit_s, f"{elapsed:.2f}s < {self.limit_s}s")
        ok = all(c[1] for c in self.checks)
        failed = [f"{label} ({detail})" for label, good, detail in self.checks if not good]
        body = "; ".join(f"{label}: {detail}" for label, _, detail in self.checks)
        line = f"CRITERION {self.number}: {'PASS' if ok else 'FAIL'} | {body}"
        if self.notes:
            line += " | note: " + "; ".join(self.notes)
        RESULTS.append(line)
        print(line)
        assert ok, "failed checks: " + ", ".join(failed)


def test_criterion_01_strong_equivalence():
    v = Verdict(1, 10.0)
    grid = SpatialGrid(-128.0, 128.0, 4096)
    psi0 = gaussian_packet(grid, 0.0, 0.0, 1.0, 1.0)
    traj = frames.ConstantAcceleration(0.5)
    dt, T = 2e-3, 2.0
    v.check("anti-aliasing", kinetic_phase_per_step(psi0, dt) < math.pi,
            f"phase/step {kinetic_phase_per_step(psi0, dt):.3f} < pi")
    t0 = time.perf_counter()
    res = frames.equivalence_experiment(psi0, traj, dt, int(round(T / dt)))
    run_time = time.perf_counter() - t0
    v.check("fidelity", res.fidelity >= 1 - 1e-6, f"1-F = {1 - res.fidelity:.2e}")
    rel = res.max_pointwise_error / res.peak_amplitude
    v.check("pointwise", rel <= 1e-4, f"{rel:.2e} of peak")
    half = frames.equivalence_experiment(psi0, traj, dt / 2, int(round(T / dt)) * 2)
    factor = res.max_pointwise_error / half.max_pointwise_error
    v.check("dt-halving factor", 3.5 <= factor <= 4.5, f"{factor:.3f}")
    v.finish(run_time)


def test_criterion_02_phase_identities():
    v = Verdict(2, 1.0)
    grid = SpatialGrid(-64.0, 64.0, 2048)
    families = [frames.ConstantVelocity(0.7), frames.ConstantAcceleration(0.5),
                frames.Sinusoidal(0.3, 2.0)]
    mass, eps = 1.3, 1e-5
    grad_err = rate_err = 0.0
    for traj in families:
        for t in (0.3, 0.7, 1.1, 1.9):
            field = frames.phase_field(grid, t, mass, traj)
            grad_err = max(grad_err, np.max(np.abs(field.gradient() + mass * traj.xi_dot(t))))
            g = lambda s: 0.5 * float(traj.xi_dot_sq_integral(s))
            rate = (g(t + eps) - g(t - eps)) / (2 * eps)
            target = 0.5 * float(traj.xi_dot(t)) ** 2
            rate_err = max(rate_err, abs(rate - target) / target)
    v.check("df/dx' = -(m/hbar) xi'", grad_err <= 1e-8, f"max err {grad_err:.2e}")
    v.check("dg/dt = xi'^2/2", rate_err <= 1e-6, f"max rel err {rate_err:.2e}")
    v.finish()


def test_criterion_03_proper_time():
    v = Verdict(3, 1.0)
    worst = max(frames.free_particle_phase_check(speed, 1.0, 1.0).difference
                for speed in (0.0, 0.3, 0.6, 0.99))
    v.check("pr - Et = -m tau", worst <= 1e-10, f"max diff {worst:.2e}")
    rng = np.random.default_rng(20240601)
    xi_dot = rng.uniform(-0.3, 0.3, 1000)
    dxp = rng.uniform(-1.0, 1.0, 1000)
    dt = rng.uniform(0.0, 1.0, 1000)
    m = rng.uniform(0.1, 10.0, 1000)
    err = np.max(np.abs(-m * frames.proper_time_residue(xi_dot, dxp, dt)
                        - frames.phase_differential(xi_dot, dxp, dt, m)))
    v.check("d tau identity (1000 draws)", err <= 1e-12, f"max err {err:.2e}")
    v.finish()


def test_criterion_04_gravitational_bohr_atom():
    v = Verdict(4, 15.0)
    spec = bs.Gravitational(1.0, 1.0, 1.0)
    res = bs.radial_eigensolver(spec, 1.0, 400.0, 8000, 5)
    exact = -1.0 / (2.0 * np.arange(1, 6) ** 2)
    rel = np.abs(res.numeric_energy - exact) / np.abs(exact)
    v.check("E_n n=1..5", rel.max() <= 1e-3, f"max rel {rel.max():.2e}")
    light = bs.analytic_spectrum(spec, 1.0, 5)
    heavy = bs.analytic_spectrum(spec.with_mass(2.0), 1.0, 5)
    e_ok = np.all(heavy.analytic_energy == 8.0 * light.analytic_energy)
    r_ok = np.all(heavy.analytic_radius == light.analytic_radius / 4.0)
    v.check("E ~ m^3", e_ok, "exact" if e_ok else "inexact")
    v.check("r ~ m^-2", r_ok, "exact" if r_ok else "inexact")
    v.finish()


def test_criterion_05_actions_and_scaling():
    v = Verdict(5, 10.0)
    spec = bs.Gravitational(1.0, 1.0, 1.0)
    worst = 0.0
    for n in (5, 10, 20, 40, 80):
        E = bs.analytic_spectrum(spec, 1.0, n).analytic_energy[-1]
        worst = max(worst, abs(bs.action_integrals(spec, 1.0, E).p_action / (2 * math.pi * n) - 1))
    v.check("p-action = n h (n>=5)", worst <= 5e-3, f"max rel {worst:.2e}")
    analytic = max(cs.scaling_check(spec, K, n).relative_difference
                   for K in (2, 3, 5) for n in (1, 5, 20))
    v.check("v-action scaling, analytic E", analytic <= 1e-9, f"{analytic:.2e}")
    numeric = cs.scaling_check(spec, 3, 5, energies="numeric").relative_difference
    v.check("v-action scaling, numeric E (K=3, n=5)", numeric <= 1e-2, f"{numeric:.2e}")
    v.finish()


def test_criterion_06_level_spacing():
    v = Verdict(6, 5.0)
    spec = bs.Gravitational(1.0, 1.0, 1.0)
    for ell in (1, 2):
        far = cs.level_spacing_check(spec, 100, ell).relative_gap
        near = cs.level_spacing_check(spec, 10, ell).relative_gap
        v.check(f"gap n=100 l={ell}", far <= 0.02, f"{far:.2e}")
        v.check(f"gap n=100 < gap n=10, l={ell}", far < near, f"{far:.2e} < {near:.2e}")
    well = max(cs.level_spacing_check(cs.HarmonicWell(1.0, 1.0), n, ell).relative_gap
               for n in (0, 10, 100) for ell in (1, 2))
    v.check("harmonic", well <= 1e-6, f"{well:.2e}")
    v.note("omega taken at the mean energy of the two levels")
    v.finish()


def test_criterion_07_correspondence_limit():
    v = Verdict(7, 60.0)
    well = cs.correspondence_check(cs.HarmonicWell(1.0, 1.0), 20, 1)[1]
    v.check("harmonic <21|x|20> vs c_1", well.relative <= 1e-2, f"{well.relative:.2e}")
    spec = bs.Gravitational(1.0, 1.0, 1.0)
    errors = []
    for n in (10, 20, 40):
        table = cs.correspondence_check(spec, n, 2, K=2 if n == 40 else None)
        errors.append(table[1].relative)
        if n == 40:
            rows = table
    v.check("error strictly decreasing n=10,20,40 (l=1)",
            errors[0] > errors[1] > errors[2], ", ".join(f"{e:.2e}" for e in errors))
    for row in rows:
        v.check(f"l={row.ell}: <psi_{80 + 2 * row.ell}|r|psi_80>(2m) vs c_l",
                row.scaled_relative <= 0.05,
                f"{row.scaled_relative:.2e}")
        v.check(f"l={row.ell}: <psi_{40 + row.ell}|r|psi_40>(m) vs c_l", row.relative <= 0.05,
                f"{row.relative:.2e}")
        v.check(f"l={row.ell}: (m,40) vs (2m,80) elements", row.pair_relative <= 0.02,
                f"{row.pair_relative:.2e}")
    step = rows[1]
    v.note(f"index step l instead of K*l at l=1 gives {step.unit_step_relative:.2e} vs c_1 and "
           f"{step.unit_step_pair_relative:.2e} vs the m element")
    v.finish()


def test_criterion_08_propagator_health():
    v = Verdict(8, 10.0)
    grid = SpatialGrid(-32.0, 32.0, 1024)
    long = propagate(gaussian_packet(grid, 1.0, 0.0, 1.0, 1.0), harmonic_well(1.0, 1.0),
                     2e-3, 10_000)
    v.check("norm drift / 1e4 steps", long.norm_drift <= 1e-12, f"{long.norm_drift:.2e}")
    free = propagate(gaussian_packet(grid, 0.0, 0.0, 1.0, 1.0), Free(), 2e-3, 1000,
                     trace_every=100).trace
    law = np.sqrt(1 + (free.t / 2) ** 2)
    spread_err = np.max(np.abs(free.spread_x - law) / law)
    v.check("free spreading law", spread_err <= 1e-6, f"max rel {spread_err:.2e}")
    traces = [propagate(gaussian_packet(grid, 0.0, 0.5 * m, 1.0, m), UniformGravity(1.0),
                        2e-3, 1000, trace_every=50).trace for m in (1.0, 2.0)]
    mean_gap = np.max(np.abs(traces[0].mean_x - traces[1].mean_x))
    v.check("<x>(t) m=1 vs m=2", mean_gap <= 1e-8, f"{mean_gap:.2e}")
    spread_gap = abs(traces[0].spread_x[-1] - traces[1].spread_x[-1]) / traces[1].spread_x[-1]
    v.check("dx(t=2) m=1 vs m=2 differ", spread_gap > 1e-2, f"{spread_gap:.2%}")
    v.finish()


def test_criterion_09_estimates():
    v = Verdict(9, 1.0)
    reports = {r.name: r for r in estimate_reports()}
    mismatched = [n for n, val in HAND_CGS.items() if not four_figures(reports[n].value, val)]
    v.check("4 significant figures vs hand arithmetic", not mismatched,
            "all match" if not mismatched else ", ".join(mismatched))
    gaps = {n: r.log10_discrepancy for n, r in reports.items() if r.paper_quoted is not None}
    v.check("quoted figures within 3 decades", max(gaps.values()) <= 3.0,
            ", ".join(f"{n}={g:.2f}" for n, g in gaps.items()))
    v.finish()


def _strip_duration(path):
    data = json.loads(path.read_text())
    data.pop("duration_s")
    return data


def test_criterion_10_cli_determinism(tmp_path):
    v = Verdict(10, math.inf)  # no runtime bound is stated
    a, b = tmp_path / "a", tmp_path / "b"
    code_a = main(["all", "--out-dir", str(a)])
    code_b = main(["all", "--out-dir", str(b)])
    csvs = sorted(p.name for p in a.glob("*.csv"))
    same_csv = all((a / n).read_bytes() == (b / n).read_bytes() for n in csvs)
    v.check("CSV bytes identical", same_csv and len(csvs) == 7, f"{len(csvs)} files")
    sums = sorted(p.name for p in a.glob("*.summary.json"))
    same_json = all(_strip_duration(a / n) == _strip_duration(b / n) for n in sums)
    v.check("summaries identical modulo duration", same_json and len(sums) == 7,
            f"{len(sums)} files")
    any_fail = any(not json.loads((a / n).read_text())["passed"] for n in sums)
    v.check("exit status of all matches verdicts", code_a == code_b == (1 if any_fail else 0),
            f"exit {code_a}")
    bad = tmp_path / "tight.json"
    bad.write_text(json.dumps({"bohr": {"tolerances": {"energy": 1e-12}}}))
    code = main(["bohr", "--config", str(bad), "--out-dir", str(tmp_path / "c")])
    v.check("injected failure exits 1", code == 1, f"exit {code}")
    bad.write_text(json.dumps({"equivalence": {"params": {"dt": -1e-3}}}))
    out = tmp_path / "d"
    code = main(["equivalence", "--config", str(bad), "--out-dir", str(out)])
    v.check("malformed config exits 2, no files", code == 2 and not out.exists(), f"exit {code}")
    v.finish()


if __name__ == "__main__":  # pragma: no cover
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
