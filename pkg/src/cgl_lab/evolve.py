"""Strang split-step integrator with exact linear and exact nonlinear substeps.

Both substeps are solved in closed form, so the only error is the splitting
error (second order).  The code carries generic complex coefficients

    u_t = c_lin * Lap u + c_nl * |u|^sigma u + k u  (- i omega u, rotating)

covering both spellings: the trig form has c_lin = e^{i theta},
c_nl = nu e^{i gamma}; the Cartesian form has c_lin = a + i alpha,
c_nl = -(b + i beta).
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field as dc_field
from typing import Callable, Optional

import numpy as np

from .errors import SubstepBlowup
from .grid import Field, forward_modes, gradient_l2_sq, inverse_modes, norm
from .params import CGLParams, TrigParams

LAB = "lab"
ROTATING = "rotating"

COMPLETED = "completed"
BLOWUP = "blowup"
ESCAPED = "escaped"


@dataclass(frozen=True)
class Coefficients:
    linear: complex
    nonlinear: complex
    k: float
    omega: float
    sigma: float

    @classmethod
    def from_trig(cls, p: TrigParams) -> "Coefficients":
        return cls(linear=cmath.exp(1j * p.theta),
                   nonlinear=p.nu * cmath.exp(1j * p.gamma),
                   k=p.k, omega=p.omega, sigma=p.sigma)

    @classmethod
    def from_cgl(cls, p: CGLParams) -> "Coefficients":
        return cls(linear=complex(p.a, p.alpha),
                   nonlinear=-complex(p.b, p.beta),
                   k=p.k, omega=0.0, sigma=p.sigma)


def as_coefficients(params) -> Coefficients:
    if isinstance(params, Coefficients):
        return params
    if isinstance(params, TrigParams):
        return Coefficients.from_trig(params)
    if isinstance(params, CGLParams):
        return Coefficients.from_cgl(params)
    raise TypeError(f"cannot interpret {type(params).__name__} as evolution coefficients")


@dataclass(frozen=True)
class EvolveSpec:
    params: object  # TrigParams, CGLParams or Coefficients
    dt: float
    T: float
    frame: str = LAB
    monitor_stride: int = 1
    blowup_cap: float = 1e6
    monitors: tuple = ("L2", "H1", "Linf")
    p: float = 2.0  # exponent for the Lp monitor

    def __post_init__(self):
        if not (0 < self.dt < self.T):
            raise ValueError(f"need 0 < dt < T, got dt={self.dt}, T={self.T}")
        if self.frame not in (LAB, ROTATING):
            raise ValueError(f"unknown frame {self.frame!r}")
        if self.monitor_stride < 1:
            raise ValueError("monitor_stride must be >= 1")


@dataclass
class Trajectory:
    times: np.ndarray
    monitors: dict
    outcome: str
    t_end: float
    snapshots: list = dc_field(default_factory=list)
    final: Optional[Field] = None


def linear_substep(f: Field, dt: float, params, frame: str = LAB) -> Field:
    """Exact per-mode evolution of u_t = c_lin Lap u + k u (- i omega u)."""
    c = as_coefficients(params)
    omega_eff = c.omega if frame == ROTATING else 0.0
    factor = np.exp(dt * (-c.linear * f.grid.mode_multipliers + c.k - 1j * omega_eff))
    return inverse_modes(factor * forward_modes(f), f.grid)


def nonlinear_substep(f: Field, dt: float, params) -> Field:
    """Exact pointwise evolution of u_t = c_nl |u|^sigma u.

    In polar coordinates r' = A r^(sigma+1), phase' = B r^sigma with
    A = Re c_nl, B = Im c_nl, which integrates to
    r(t) = r0 (1 - sigma A r0^sigma t)^(-1/sigma).  The amplitude blows up
    inside the substep when the parenthesis hits zero (A > 0, focusing).
    """
    c = as_coefficients(params)
    if c.nonlinear == 0:
        return f.copy()
    A, B = c.nonlinear.real, c.nonlinear.imag
    r0s = np.abs(f.samples) ** c.sigma
    if A == 0.0:
        return Field(f.samples * np.exp(1j * B * r0s * dt), f.grid)
    w = c.sigma * A * r0s * dt  # q = 1 - w; log1p keeps accuracy for tiny A
    if A > 0 and w.max() >= 1.0:
        node = int(np.argmax(w))
        t_star = 1.0 / (c.sigma * A * r0s[node])
        raise SubstepBlowup(
            f"nonlinear substep blows up at t*={t_star:.6g} (node {node})",
            t_star=t_star, node=node,
        )
    logq = np.log1p(-w)
    growth = np.exp(-logq / c.sigma)
    dphase = -(B / (c.sigma * A)) * logq
    return Field(f.samples * growth * np.exp(1j * dphase), f.grid)


def step_strang(f: Field, dt: float, params, frame: str = LAB) -> Field:
    c = as_coefficients(params)
    f = linear_substep(f, dt / 2, c, frame)
    f = nonlinear_substep(f, dt, c)
    return linear_substep(f, dt / 2, c, frame)


def _sample_monitors(f: Field, c: Coefficients, names, p: float,
                     extra: dict) -> dict:
    # local import: lyapunov depends on grid only, no cycle at call time
    from .lyapunov import V, V_dot

    a_eq = c.linear.real
    b_eq = -c.nonlinear.real
    out = {}
    for name in names:
        if name in ("L2", "H1", "Linf"):
            out[name] = norm(f, name)
        elif name == "Lp":
            out[name] = norm(f, "Lp", p=p)
        elif name == "grad2":
            out[name] = gradient_l2_sq(f)
        elif name == "Ns":
            out[name] = norm(f, "Lp", p=c.sigma + 2.0) ** (c.sigma + 2.0)
        elif name == "V":
            out[name] = V(f, a_eq, b_eq, c.k, c.sigma)
        elif name == "Vdot":
            out[name] = V_dot(f, a_eq, b_eq, c.k, c.sigma)
        else:
            raise ValueError(f"unknown monitor {name!r}")
    for name, fn in extra.items():
        out[name] = fn(f)
    return out


def evolve(f0: Field, spec: EvolveSpec,
           extra_monitors: Optional[dict] = None,
           stop_when: Optional[Callable[[float, Field], bool]] = None,
           snapshot_times: tuple = ()) -> Trajectory:
    """Step Strang splitting until T, blow-up, or the stop predicate fires.

    Monitors are sampled at t=0, every monitor_stride steps, and at the end.
    Failures are encoded in the outcome, never raised.
    """
    c = as_coefficients(spec.params)
    extra = extra_monitors or {}
    n_steps = max(1, round(spec.T / spec.dt))
    dt = spec.T / n_steps

    times = [0.0]
    rows = [_sample_monitors(f0, c, spec.monitors, spec.p, extra)]
    snapshots = []
    snap_left = sorted(snapshot_times)
    outcome = COMPLETED
    f = f0.copy()
    t = 0.0
    t_end = spec.T

    if stop_when is not None and stop_when(t, f):
        outcome = ESCAPED
        n_steps = 0
        t_end = 0.0

    for i in range(n_steps):
        try:
            f = step_strang(f, dt, c, spec.frame)
        except SubstepBlowup as exc:
            outcome = BLOWUP
            t_end = t + (exc.t_star or dt)
            break
        except (ValueError, FloatingPointError):
            # amplitude left the floating-point range inside a substep
            outcome = BLOWUP
            t_end = t + dt
            break
        t = (i + 1) * dt
        sampled = (i + 1) % spec.monitor_stride == 0 or i == n_steps - 1
        if sampled:
            times.append(t)
            rows.append(_sample_monitors(f, c, spec.monitors, spec.p, extra))
        while snap_left and t >= snap_left[0] - 1e-12:
            snap_left.pop(0)
            snapshots.append((t, f.copy()))
        amax = float(np.abs(f.samples).max())
        if not np.isfinite(amax) or amax > spec.blowup_cap:
            outcome = BLOWUP
            t_end = t
            break
        if stop_when is not None and sampled and stop_when(t, f):
            outcome = ESCAPED
            t_end = t
            break

    monitors = {name: np.array([r[name] for r in rows]) for name in rows[0]}
    return Trajectory(times=np.array(times), monitors=monitors, outcome=outcome,
                      t_end=t_end, snapshots=snapshots,
                      final=f if outcome != BLOWUP else None)
