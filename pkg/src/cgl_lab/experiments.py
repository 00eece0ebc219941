"""Scenario runner: zero-solution decay, instability escape, and the
symmetry-reduced (orbital) bound-state diagnostic.

Scenario files are flat TOML: a top-level `kind` plus [params], [grid],
[initial], [evolve], kind-specific and [output] sections; see
fixtures/*.toml for the schema in use.  Verdict thresholds (the 1e-3 decay
factor and the 10x escape/refute factors) are fixed constants so fixtures
are reproducible without tuning.
"""

from __future__ import annotations

import json
import math
import os
import subprocess
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Optional

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import __version__
from .boundstate import BoundState, construct_bound_state
from .errors import CGLLabError, ParseError
from .evolve import (
    BLOWUP,
    ESCAPED,
    LAB,
    ROTATING,
    Coefficients,
    EvolveSpec,
    evolve,
)
from .grid import (
    Field,
    Grid1D,
    derivative,
    forward_modes,
    inner_real,
    make_grid,
    norm,
)
from .continuation import linear_eigenpair
from .lyapunov import V, thresholds
from .params import CGLParams, TrigParams, validate

CONFIRMED = "confirmed"
REFUTED = "refuted"
INCONCLUSIVE = "inconclusive"

DECAY_FACTOR = 1e-3
ESCAPE_FACTOR = 10.0
REFUTE_FACTOR = 10.0
MONOTONE_TOL = 1e-8
GAUGE_GRID = 64

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


# ---------------------------------------------------------------------------
# orbital distance

def _golden_min(fun, lo, hi, iters=40):
    a, b = lo, hi
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = fun(d)
    return (c, fc) if fc < fd else (d, fd)


def orbital_distance(u: Field, bs: BoundState) -> float:
    """H1 distance from u to the symmetry orbit {e^{i rho} phi(. - y)}.

    Coarse search over a 64-point gauge grid and all node translations,
    refined by one golden-section pass in y and then in rho.  Always an
    upper bound for ||u - phi||_H1 since the identity candidate is in the
    searched set.
    """
    g = u.grid
    kappa = 2.0 * np.pi * np.fft.fftfreq(g.N, d=g.L / g.N)
    kappa2 = kappa**2
    Fu = forward_modes(u)
    Fphi = forward_modes(bs.phi)
    cnst = g.mode_norm_const
    # complex H1 pairing <u, phi(.-y)> as a function of the shift y
    X = (1.0 + kappa2) * Fu * np.conj(Fphi)
    norm_u2 = cnst * np.sum((1.0 + kappa2) * np.abs(Fu) ** 2)
    norm_p2 = cnst * np.sum((1.0 + kappa2) * np.abs(Fphi) ** 2)

    c_nodes = cnst * g.N * np.fft.ifft(X)  # pairing at shifts y_j = j*L/N

    def dist2(c_val, rho):
        d2 = norm_u2 + norm_p2 - 2.0 * (np.exp(-1j * rho) * c_val).real
        return max(d2.real, 0.0)

    rhos = 2.0 * np.pi * np.arange(GAUGE_GRID) / GAUGE_GRID
    d2_grid = (norm_u2 + norm_p2
               - 2.0 * (np.exp(-1j * rhos)[:, None] * c_nodes[None, :]).real)
    l0, j0 = np.unravel_index(np.argmin(d2_grid), d2_grid.shape)
    rho0 = rhos[l0]
    h = g.L / g.N
    y0 = j0 * h

    def c_of_y(y):
        return cnst * np.sum(X * np.exp(1j * kappa * y))

    y_best, _ = _golden_min(lambda y: dist2(c_of_y(y), rho0), y0 - h, y0 + h)
    c_best = c_of_y(y_best)
    drho = 2.0 * np.pi / GAUGE_GRID
    _, d2_best = _golden_min(lambda r: dist2(c_best, r), rho0 - drho, rho0 + drho)
    d2_best = min(d2_best, dist2(c_nodes[j0], rho0))
    return math.sqrt(max(d2_best, 0.0))


def smooth_perturbation(bs: BoundState, rel_size: float) -> Field:
    """Fixed smooth bump, orthogonalized (real pairing) against the gauge
    and translation directions so it does not seed pure symmetry drift,
    scaled to rel_size * ||phi||_H1 in H1."""
    g = bs.phi.grid
    x = g.nodes - g.center
    bump = (1.0 + 0.5j) * np.exp(-(x / 4.0) ** 2) * np.cos(x / 3.0)
    pert = Field(bump, g)
    for direction in (Field(1j * bs.phi.samples, g), derivative(bs.phi)):
        nd2 = inner_real(direction, direction)
        if nd2 > 0:
            coef = inner_real(pert, direction) / nd2
            pert = Field(pert.samples - coef * direction.samples, g)
    size = norm(pert, "H1")
    target = rel_size * norm(bs.phi, "H1")
    return Field(pert.samples * (target / size), g)


# ---------------------------------------------------------------------------
# scenarios

@dataclass
class Scenario:
    kind: str
    raw: dict
    path: Optional[str] = None
    seed: int = 0


@dataclass
class ScenarioResult:
    verdict: str
    reason: str
    metrics: dict
    artifacts: list = dc_field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return {CONFIRMED: 0, REFUTED: 2, INCONCLUSIVE: 3}[self.verdict]


def _require(table: dict, key: str, where: str):
    if key not in table:
        raise ParseError(f"missing key {key!r} in [{where}]")
    return table[key]


def parse_scenario(path) -> Scenario:
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    kind = raw.get("kind")
    if kind not in ("zero_stability", "instability", "bs_orbital", "custom"):
        raise ParseError(f"{path}: unknown scenario kind {kind!r}")
    return Scenario(kind=kind, raw=raw, path=str(path), seed=int(raw.get("seed", 0)))


def _cgl_params(table: dict) -> CGLParams:
    try:
        return CGLParams(a=float(_require(table, "a", "params")),
                         alpha=float(table.get("alpha", 0.0)),
                         b=float(_require(table, "b", "params")),
                         beta=float(table.get("beta", 0.0)),
                         k=float(_require(table, "k", "params")),
                         sigma=float(_require(table, "sigma", "params")))
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad [params] table: {exc}") from exc


def _trig_params(table: dict) -> TrigParams:
    try:
        return TrigParams(theta=float(_require(table, "theta", "params")),
                          gamma=float(table.get("gamma", 0.0)),
                          k=float(_require(table, "k", "params")),
                          omega=float(table.get("omega", 0.0)),
                          nu=float(table.get("nu", 1.0)),
                          sigma=float(_require(table, "sigma", "params")))
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad [params] table: {exc}") from exc


def _grid_from(table: dict) -> Grid1D:
    return make_grid(table.get("kind", "periodic"),
                     float(_require(table, "L", "grid")),
                     int(_require(table, "N", "grid")))


def _initial_field(table: dict, grid: Grid1D, seed: int) -> Field:
    kind = table.get("type", "gaussian")
    amp = float(table.get("amp", 1.0))
    if kind == "eigenmode":
        n = int(table.get("n", 1))
        _, u = linear_eigenpair(grid, n)
        return Field(amp * u.samples, grid)
    if kind == "gaussian":
        width = float(table.get("width", 1.0))
        x = grid.nodes - grid.center
        return Field(amp * np.exp(-((x / width) ** 2)).astype(complex), grid)
    if kind == "random_smooth":
        rng = np.random.default_rng(seed)
        x = grid.nodes - grid.center
        modes = int(table.get("modes", 4))
        u = np.zeros(grid.N, dtype=complex)
        for m in range(1, modes + 1):
            cr = rng.standard_normal() + 1j * rng.standard_normal()
            if grid.kind == "dirichlet":
                u += cr * np.sin(m * np.pi * grid.nodes / grid.L)
            else:
                u += cr * np.exp(2j * np.pi * m * x / grid.L)
        return Field(amp * u / max(np.abs(u).max(), 1e-300), grid)
    if kind == "file":
        from .grid import load_field_csv

        return load_field_csv(_require(table, "path", "initial"))
    raise ParseError(f"unknown initial data type {kind!r}")


def _evolve_spec(table: dict, params, frame: str, monitors, p=2.0) -> EvolveSpec:
    return EvolveSpec(params=params,
                      dt=float(_require(table, "dt", "evolve")),
                      T=float(_require(table, "T", "evolve")),
                      frame=frame,
                      monitor_stride=int(table.get("monitor_stride", 1)),
                      blowup_cap=float(table.get("blowup_cap", 1e6)),
                      monitors=tuple(monitors), p=p)


def run_zero_stability(sc: Scenario) -> ScenarioResult:
    """Decay of the zero solution: confirmed when the monitored norm is
    non-increasing (1e-8 relative per step) and ends below 1e-3 times its
    initial value."""
    raw = sc.raw
    p_cgl = _cgl_params(raw.get("params", {}))
    grid = _grid_from(raw.get("grid", {}))
    opts = raw.get("zero_stability", {})
    monitor = opts.get("monitor", "L2")
    p_exp = float(opts.get("p", 2.0))

    vp = validate(p_cgl)
    reasons = []
    if not vp.global_existence:
        reasons.append("global existence fails (b + alpha*beta/a < 0)")
    thr = thresholds(p_cgl.a, p_cgl.k, 1, grid.L, grid)
    if monitor == "H1":
        if vp.lyapunov_aligned is not True:
            reasons.append("alignment alpha/a = beta/b required for H1 decay")
        if p_cgl.k > thr.h1_threshold:
            reasons.append("k above the H1 threshold")
    elif p_exp == 2.0:
        if p_cgl.k > 0 and p_cgl.k / p_cgl.a >= thr.poincare_k_over_a:
            reasons.append("k/a above the Poincare constant")
    else:
        if p_cgl.k > 0:
            reasons.append("Lp decay requires k <= 0")
        if abs(p_cgl.alpha) / p_cgl.a > 2.0 / (p_exp - 2.0):
            reasons.append("|alpha|/a > 2/(p-2)")
    if reasons:
        return ScenarioResult(INCONCLUSIVE, "hypotheses: " + "; ".join(reasons), {})

    u0 = _initial_field(raw.get("initial", {}), grid, sc.seed)
    monitors = ["L2", "H1", "Linf", "V", "grad2", "Ns"]
    if monitor == "Lp":
        monitors.append("Lp")
    spec = _evolve_spec(raw.get("evolve", {}), p_cgl, LAB, monitors, p=p_exp)
    traj = evolve(u0, spec)
    series = traj.monitors[monitor]
    initial, final = series[0], series[-1]
    steps_ok = bool(np.all(np.diff(series) <= MONOTONE_TOL * np.maximum(series[:-1], 1e-300)))
    decayed = final <= DECAY_FACTOR * initial
    metrics = {"initial": float(initial), "final": float(final),
               "monotone": steps_ok, "outcome": traj.outcome}
    if traj.outcome == BLOWUP:
        return ScenarioResult(REFUTED, "trajectory blew up", metrics, _traj_art(sc, traj))
    if steps_ok and decayed:
        return ScenarioResult(CONFIRMED, "monotone decay below threshold",
                              metrics, _traj_art(sc, traj))
    return ScenarioResult(REFUTED, "decay criterion not met", metrics, _traj_art(sc, traj))


def run_instability(sc: Scenario) -> ScenarioResult:
    """Escape from the zero solution: eigenmode data with V < 0 must leave
    the ball of radius escape_factor * ||u0||_H1 before T (or blow up)."""
    raw = sc.raw
    p_cgl = _cgl_params(raw.get("params", {}))
    grid = _grid_from(raw.get("grid", {}))
    opts = raw.get("instability", {})
    factor = float(opts.get("escape_radius_factor", ESCAPE_FACTOR))

    reasons = []
    if not p_cgl.b < 0:
        reasons.append("need b < 0")
    vp = validate(p_cgl)
    if vp.lyapunov_aligned is not True:
        reasons.append("need alignment alpha/a = beta/b")
    thr = thresholds(p_cgl.a, p_cgl.k, 1, grid.L, grid)
    if thr.eig_window is None:
        reasons.append("k/a not strictly inside an eigenvalue window")
    if reasons:
        return ScenarioResult(INCONCLUSIVE, "hypotheses: " + "; ".join(reasons), {})

    init = dict(raw.get("initial", {}))
    init.setdefault("type", "eigenmode")
    init.setdefault("n", thr.eig_window)
    u0 = _initial_field(init, grid, sc.seed)
    v0 = V(u0, p_cgl.a, p_cgl.b, p_cgl.k, p_cgl.sigma)
    if not v0 < 0:
        return ScenarioResult(
            INCONCLUSIVE, "initialization: V(u0) >= 0, decrease/increase amp",
            {"V0": v0})
    h1_0 = norm(u0, "H1")
    escape_radius = factor * h1_0

    spec = _evolve_spec(raw.get("evolve", {}), p_cgl, LAB,
                        ["L2", "H1", "Linf", "V", "grad2", "Ns"])
    traj = evolve(u0, spec,
                  stop_when=lambda t, f: norm(f, "H1") >= escape_radius)
    metrics = {"V0": float(v0), "h1_initial": float(h1_0),
               "escape_radius": float(escape_radius),
               "h1_final": float(traj.monitors["H1"][-1]),
               "t_end": float(traj.t_end), "outcome": traj.outcome}
    if traj.outcome in (ESCAPED, BLOWUP):
        return ScenarioResult(CONFIRMED, f"escape at t={traj.t_end:.4g}",
                              metrics, _traj_art(sc, traj))
    return ScenarioResult(REFUTED, "no escape before T", metrics, _traj_art(sc, traj))


def run_bs_orbital(sc: Scenario) -> ScenarioResult:
    """Orbital-stability diagnostic around a constructed bound-state in the
    rotating frame: confirmed when the symmetry-reduced distance does not
    grow; refuted when it grows by 10x."""
    raw = sc.raw
    tp = _trig_params(raw.get("params", {}))
    grid = _grid_from(raw.get("grid", {}))
    opts = raw.get("bs_orbital", {})
    delta = float(opts.get("delta", 0.01))

    bs = construct_bound_state(tp.theta, tp.omega, tp.k, tp.sigma, grid)
    run_params = TrigParams(theta=bs.theta, gamma=bs.gamma, k=bs.k,
                            omega=bs.omega, nu=1.0, sigma=bs.sigma)
    if delta > 0:
        pert = smooth_perturbation(bs, delta)
        u0 = Field(bs.phi.samples + pert.samples, grid)
    else:
        u0 = bs.phi.copy()

    spec = _evolve_spec(raw.get("evolve", {}), run_params, ROTATING,
                        ["L2", "H1", "Linf"])
    traj = evolve(u0, spec,
                  extra_monitors={"orbdist": lambda f: orbital_distance(f, bs)})
    dist = traj.monitors["orbdist"]
    metrics = {"dist_initial": float(dist[0]), "dist_final": float(dist[-1]),
               "dist_max": float(dist.max()), "gamma": bs.gamma,
               "outcome": traj.outcome}
    art = _traj_art(sc, traj)
    if traj.outcome == BLOWUP:
        return ScenarioResult(REFUTED, "trajectory blew up", metrics, art)
    if dist[-1] < 1e-8 or dist[-1] <= dist[0]:
        return ScenarioResult(CONFIRMED, "distance did not grow", metrics, art)
    if dist[-1] >= REFUTE_FACTOR * max(dist[0], 1e-300):
        return ScenarioResult(REFUTED, "distance grew by 10x", metrics, art)
    return ScenarioResult(INCONCLUSIVE, "distance drifted without verdict",
                          metrics, art)


def _output_dir(sc: Scenario) -> Optional[Path]:
    out = sc.raw.get("output", {}).get("dir")
    if out is None:
        return None
    base = Path(sc.path).parent if sc.path else Path(".")
    path = Path(out)
    if not path.is_absolute():
        path = base / path
    path.mkdir(parents=True, exist_ok=True)
    return path


def write_monitors_csv(traj, path) -> None:
    names = sorted(traj.monitors)
    with open(path, "w") as fh:
        fh.write("t," + ",".join(names) + "\n")
        for i, t in enumerate(traj.times):
            row = ",".join(f"{traj.monitors[n][i]:.17g}" for n in names)
            fh.write(f"{t:.17g},{row}\n")


def git_describe() -> str:
    try:
        out = subprocess.run(["git", "describe", "--always", "--dirty"],
                             capture_output=True, text=True, timeout=5,
                             cwd=os.path.dirname(os.path.abspath(__file__)))
        if out.returncode == 0:
            return out.stdout.strip()
    except OSError:
        pass
    return f"cgl-lab-{__version__}"


def _traj_art(sc: Scenario, traj) -> list:
    outdir = _output_dir(sc)
    if outdir is None:
        return []
    csv_path = outdir / "monitors.csv"
    write_monitors_csv(traj, csv_path)
    return [str(csv_path)]


def run_scenario(path) -> ScenarioResult:
    """Parse, dispatch by kind, write artifacts and the summary JSON."""
    sc = parse_scenario(path)
    runners = {
        "zero_stability": run_zero_stability,
        "instability": run_instability,
        "bs_orbital": run_bs_orbital,
    }
    if sc.kind == "custom":
        raise ParseError("custom scenarios need a registered runner")
    result = runners[sc.kind](sc)
    outdir = _output_dir(sc)
    if outdir is not None:
        summary = {
            "verdict": result.verdict,
            "reason": result.reason,
            "metrics": result.metrics,
            "scenario": sc.raw,
            "build": git_describe(),
        }
        spath = outdir / "summary.json"
        with open(spath, "w") as fh:
            json.dump(summary, fh, indent=2, sort_keys=True)
            fh.write("\n")
        result.artifacts.append(str(spath))
    return result
