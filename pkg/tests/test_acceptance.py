"""Acceptance gate: one criterion per test, one PASS/FAIL line each.

Run with `pytest -v -s tests/test_acceptance.py` to see the verdict lines.
Two criteria are expected to fail; the analysis lives outside the package:

* criterion 2 asserts the displayed closed form of epsilon, which is
  inconsistent with the residual check of criterion 1 (the amplitude that
  actually solves the equation is sqrt(omega^2 + k^2) / (1 + d^2));
* criterion 10's delta=0 clause asks for 1e-8 orbital distance at T=10 on a
  state whose linearization has an eigenvalue with real part ~5.6, so any
  finite splitting error is amplified by ~e^56.
"""
import math
import shutil
import time

import numpy as np
import pytest

from cgl_lab import errors
from cgl_lab.boundstate import (compute_d, construct_bound_state,
                                elliptic_residual_field, epsilon_eta, residual,
                                solve_gamma)
from cgl_lab.continuation import (analytic_slopes, branch_derivative_check,
                                  continue_branch, physical_solution)
from cgl_lab.evolve import EvolveSpec, evolve
from cgl_lab.experiments import orbital_distance, parse_scenario, run_scenario
from cgl_lab.grid import Field, make_grid, norm
from cgl_lab.params import CGLParams, TrigParams
from cgl_lab.spectra import kernel_check, stability_report

from conftest import FIXTURES


def _verdict(num, name, ok, detail):
    print(f"\n[criterion {num:2d}] {'PASS' if ok else 'FAIL'} {name}: {detail}")
    assert ok, f"criterion {num} ({name}): {detail}"


# ---------------------------------------------------------------- criterion 1

def test_criterion_01_boundstate_residual():
    g = make_grid("periodic", L=60.0, N=4096)
    t0 = time.perf_counter()
    bs = construct_bound_state(0.3, 1.0, 0.0, 2.0, g)
    res = residual(bs)
    elapsed = time.perf_counter() - t0
    ok = res < 1e-6 and elapsed < 5.0
    _verdict(1, "bound-state residual", ok,
             f"max residual {res:.3g} (< 1e-6), runtime {elapsed:.2f}s (< 5s)")


# ---------------------------------------------------------------- criterion 2

def test_criterion_02_epsilon_identity():
    rng = np.random.default_rng(7)
    worst = 0.0
    count = 0
    while count < 1000:
        theta = rng.uniform(-1.2, 1.2)
        omega = rng.uniform(-2.0, 2.0)
        k = rng.uniform(-2.0, 2.0)
        sigma = rng.uniform(0.3, 3.0)
        try:
            d = compute_d(theta, omega, k)
            gamma = solve_gamma(d, sigma, theta)
            eps, _ = epsilon_eta(theta, gamma, omega, k, d)
        except errors.CGLLabError:
            continue
        worst = max(worst, abs(eps - math.hypot(omega, k)))
        count += 1
    ok = worst < 1e-12
    _verdict(2, "epsilon identity", ok,
             f"max |eps - sqrt(omega^2+k^2)| = {worst:.3g} over 1000 draws "
             "(< 1e-12)")


# ---------------------------------------------------------------- criterion 3

def test_criterion_03_gamma_identity():
    rng = np.random.default_rng(11)
    worst = 0.0
    min_gap = math.inf
    count = 0
    while count < 100:
        theta = rng.uniform(-1.2, 1.2)
        sigma = rng.uniform(0.3, 4.0)
        try:
            d = compute_d(theta, 1.0, 0.0)
            gamma = solve_gamma(d, sigma, theta)
        except errors.CGLLabError:
            continue
        worst = max(worst, abs(math.cos(gamma) * (sigma + 4.0)
                               - sigma * math.sin(gamma - theta)))
        min_gap = min(min_gap, gamma - theta)
        count += 1
    ok = worst < 1e-10 and min_gap > 0
    _verdict(3, "gamma identity", ok,
             f"max defect {worst:.3g} (< 1e-10), min gamma-theta {min_gap:.3g} "
             "(> 0) over 100 draws")


# ---------------------------------------------------------------- criterion 4

CRITERION4_STATES = [
    (0.3, 1.0, -10.0, 0.5),
    (0.3, 1.0, 0.0, 2.0),
    (0.5, 1.0, -1.0, 2.0),
    (-0.2, 1.0, -2.0, 1.0),
    (0.8, 1.0, -0.5, 3.0),
]


def test_criterion_04_symmetry_kernel():
    g = make_grid("dirichlet", L=60.0, N=2048)
    details = []
    ok = True
    for theta, omega, k, sigma in CRITERION4_STATES:
        bs = construct_bound_state(theta, omega, k, sigma, g)
        r_gauge, r_transl = kernel_check(bs)
        t0 = time.perf_counter()
        report = stability_report(bs)
        elapsed = time.perf_counter() - t0
        bound = -k - (1.0 + sigma) * report.sup_norm ** sigma - 1e-6
        min_re = float(report.eigenvalues.real.min())
        state_ok = (report.kernel_dim >= 2
                    and max(r_gauge, r_transl) < 1e-5
                    and min_re >= bound
                    and elapsed < 120.0)
        ok = ok and state_ok
        details.append(
            f"(theta={theta},k={k},sigma={sigma}): dim={report.kernel_dim} "
            f"kres={max(r_gauge, r_transl):.2g} minRe={min_re:.4g}"
            f">={bound:.4g} {elapsed:.0f}s")
    _verdict(4, "symmetry kernel", ok, "; ".join(details))


# ------------------------------------------------------- criteria 5 and 6

def _aligned_runs():
    rng = np.random.default_rng(2025)
    g = make_grid("dirichlet", L=math.pi, N=63)
    k_cap = 0.5 * (math.pi / 2.0) ** -2  # times a, below
    runs = []
    for _ in range(20):
        a = rng.uniform(0.5, 2.0)
        b = rng.uniform(0.5, 2.0)
        ratio = rng.uniform(-1.0, 1.0)
        k = rng.uniform(-0.5, k_cap * a)
        p = CGLParams(a=a, alpha=ratio * a, b=b, beta=ratio * b, k=k,
                      sigma=2.0)
        coeffs = (rng.standard_normal(4) + 1j * rng.standard_normal(4))
        u = np.zeros(g.N, dtype=complex)
        for m, c in enumerate(coeffs, start=1):
            u += c * np.sin(m * g.nodes)
        u0 = Field(0.5 * u / max(np.abs(u).max(), 1e-300), g)
        spec = EvolveSpec(params=p, dt=0.01, T=50.0, monitor_stride=1,
                          monitors=("L2", "H1", "V"))
        runs.append((p, evolve(u0, spec)))
    return runs


@pytest.fixture(scope="module")
def aligned_runs():
    return _aligned_runs()


def test_criterion_05_lyapunov_monotone(aligned_runs):
    worst_step = -math.inf
    worst_decay = 0.0
    for p, traj in aligned_runs:
        v = traj.monitors["V"]
        scale = np.maximum(np.abs(v[:-1]), 1e-300)
        worst_step = max(worst_step, float(np.max(np.diff(v) / scale)))
        h1 = traj.monitors["H1"]
        worst_decay = max(worst_decay, float(h1[-1] / h1[0]))
    ok = worst_step <= 1e-8 and worst_decay < 1e-3
    _verdict(5, "Lyapunov monotonicity", ok,
             f"worst relative V increase {worst_step:.3g} (<= 1e-8), worst "
             f"final/initial H1 {worst_decay:.3g} (< 1e-3), 20 runs, T=50")


def test_criterion_06_l2_gronwall(aligned_runs):
    worst = 0.0
    for p, traj in aligned_runs:
        l2 = traj.monitors["L2"]
        bound = l2[0] * np.exp(p.k * traj.times) * (1.0 + 1e-6)
        worst = max(worst, float(np.max(l2 / bound)))
    ok = worst <= 1.0
    _verdict(6, "L2 Gronwall", ok,
             f"max ||u(t)|| / (e^(kt)||u0||(1+1e-6)) = {worst:.9f} (<= 1)")


# ---------------------------------------------------------------- criterion 7

def test_criterion_07_instability(tmp_path):
    shutil.copy(FIXTURES / "instability.toml", tmp_path / "instability.toml")
    t0 = time.perf_counter()
    res = run_scenario(tmp_path / "instability.toml")
    elapsed = time.perf_counter() - t0
    ok = res.verdict == "confirmed" and res.metrics["t_end"] < 50.0 \
        and elapsed < 30.0
    _verdict(7, "instability escape", ok,
             f"verdict {res.verdict}, escape at t={res.metrics['t_end']:.3f} "
             f"(< 50), runtime {elapsed:.1f}s (< 30s)")


# ---------------------------------------------------------------- criterion 8

def test_criterion_08_integrator_order():
    g = make_grid("periodic", L=60.0, N=256)
    x = g.nodes - g.center
    u0 = Field(1.2 * np.exp(-(x / 3.0) ** 2 + 0.3j * x), g)
    p = TrigParams(theta=0.3, gamma=0.2, k=-0.1, nu=1.0, sigma=2.0)

    def final(dt):
        spec = EvolveSpec(params=p, dt=dt, T=0.5, monitor_stride=10 ** 9)
        return evolve(u0, spec).final.samples

    u1, u2, u4 = final(0.02), final(0.01), final(0.005)
    e1 = np.max(np.abs(u1 - u2))
    e2 = np.max(np.abs(u2 - u4))
    order = math.log2(e1 / e2)

    gd = make_grid("dirichlet", L=math.pi, N=63)
    v0 = Field(0.5 * np.sin(2.0 * gd.nodes).astype(complex), gd)
    pl = TrigParams(theta=0.2, gamma=0.0, k=-0.3, nu=0.0, sigma=2.0)
    traj = evolve(v0, EvolveSpec(params=pl, dt=0.01, T=1.0,
                                 monitor_stride=10 ** 9))
    exact = v0.samples * np.exp((-np.exp(0.2j) * 4.0 - 0.3) * 1.0)
    lin_err = float(np.max(np.abs(traj.final.samples - exact)))

    ok = 1.8 <= order <= 2.2 and lin_err < 1e-12
    _verdict(8, "integrator order", ok,
             f"observed order {order:.3f} (in [1.8, 2.2]), nu=0 defect "
             f"{lin_err:.3g} (< 1e-12)")


# ---------------------------------------------------------------- criterion 9

def test_criterion_09_continuation():
    g = make_grid("dirichlet", L=math.pi, N=127)
    branch = continue_branch(g, n=1, theta=0.3, gamma=0.2, sigma=2.0,
                             mu_max=0.1, steps=10)
    dk_err, domega_err = branch_derivative_check(branch)
    max_res = max(pt.residual for pt in branch.points)
    phys_res = 0.0
    for pt in branch.points[1:]:
        u = physical_solution(pt, branch.sigma)
        res = elliptic_residual_field(u, branch.theta, branch.gamma,
                                      pt.omega, pt.k, branch.sigma)
        phys_res = max(phys_res, float(np.max(np.abs(res))))
    ok = dk_err < 0.01 and domega_err < 0.01 and max_res < 1e-10 \
        and phys_res < 1e-8
    _verdict(9, "continuation", ok,
             f"slope errors ({dk_err:.2%}, {domega_err:.2%}) (< 1%), max "
             f"point residual {max_res:.3g} (< 1e-10), max physical residual "
             f"{phys_res:.3g} (< 1e-8)")


# --------------------------------------------------------------- criterion 10

def test_criterion_10_orbital_diagnostic(tmp_path):
    src = FIXTURES / "bs_orbital.toml"
    sc = parse_scenario(src)
    expected = sc.raw.get("expected_verdict")

    a = tmp_path / "a"
    b = tmp_path / "b"
    series = {}
    verdicts = {}
    for tag, sub in (("a", a), ("b", b)):
        sub.mkdir()
        shutil.copy(src, sub / "bs_orbital.toml")
        res = run_scenario(sub / "bs_orbital.toml")
        verdicts[tag] = res.verdict
        series[tag] = (sub / "out" / "bs_orbital" / "monitors.csv").read_bytes()
    deterministic = series["a"] == series["b"]
    verdict_ok = verdicts["a"] == expected

    g = make_grid("periodic", L=60.0, N=2048)
    bs = construct_bound_state(sc.raw["params"]["theta"],
                               sc.raw["params"]["omega"],
                               sc.raw["params"]["k"],
                               sc.raw["params"]["sigma"], g)
    run_params = TrigParams(theta=bs.theta, gamma=bs.gamma, k=bs.k,
                            omega=bs.omega, nu=1.0, sigma=bs.sigma)
    spec = EvolveSpec(params=run_params, dt=1e-3, T=10.0, frame="rotating",
                      monitor_stride=10 ** 9)
    traj = evolve(bs.phi.copy(), spec)
    if traj.final is None:
        delta0 = math.inf
    else:
        delta0 = orbital_distance(traj.final, bs)
    equilibrium_ok = delta0 < 1e-8

    ok = deterministic and verdict_ok and equilibrium_ok
    _verdict(10, "orbital diagnostic", ok,
             f"deterministic series {deterministic}, verdict "
             f"{verdicts['a']} == recorded {expected!r}: {verdict_ok}, "
             f"delta=0 distance at T=10 is {delta0:.3g} (< 1e-8): "
             f"{equilibrium_ok}")


# --------------------------------------------------------------- criterion 11

def test_criterion_11_determinism(tmp_path):
    fixtures = ["zero_stability.toml", "instability.toml"]
    identical = []
    for name in fixtures:
        stem = name.rsplit(".", 1)[0]
        payloads = []
        for tag in ("a", "b"):
            sub = tmp_path / f"{stem}_{tag}"
            sub.mkdir()
            shutil.copy(FIXTURES / name, sub / name)
            run_scenario(sub / name)
            payloads.append((sub / "out" / stem / "monitors.csv").read_bytes())
        identical.append(payloads[0] == payloads[1])
    ok = all(identical)
    _verdict(11, "determinism", ok,
             "bit-identical monitor CSVs on re-run: "
             + ", ".join(f"{n}={v}" for n, v in zip(fixtures, identical))
             + " (bs_orbital covered by criterion 10)")
