"""Parameterizations of the complex Ginzburg-Landau equation.

Two equivalent spellings are supported:

* Cartesian coefficients:  u_t = (a + i alpha) Lap u - (b + i beta)|u|^s u + k u
* trigonometric (unit-modulus) coefficients:
  u_t = e^{i theta} Lap u + nu e^{i gamma}|u|^s u + k u  (- i omega u in the
  rotating frame)

The conversion rescales x and the amplitude of u but leaves t and k alone,
so every threshold expressed in terms of k carries over unchanged.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import NonPositiveDiffusion, NonPositivePower, ZeroNonlinearity

TAU = 2.0 * math.pi


def wrap_angle(x: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    w = math.fmod(x + math.pi, TAU)
    if w <= 0.0:
        w += TAU
    return w - math.pi


@dataclass(frozen=True)
class CGLParams:
    a: float
    alpha: float
    b: float
    beta: float
    k: float
    sigma: float

    def __post_init__(self):
        if not (self.a > 0):
            raise NonPositiveDiffusion(f"diffusion a must be > 0, got {self.a}")
        if not (self.sigma > 0):
            raise NonPositivePower(f"nonlinearity power sigma must be > 0, got {self.sigma}")


@dataclass(frozen=True)
class TrigParams:
    theta: float
    gamma: float
    k: float
    omega: float = 0.0  # 0 -> lab frame
    nu: float = 1.0  # nonlinear amplitude; 0 disables the nonlinearity
    sigma: float = 2.0

    def __post_init__(self):
        if not abs(self.theta) < math.pi / 2:
            raise ValueError(f"|theta| must be < pi/2, got {self.theta}")
        if not (-math.pi < self.gamma <= math.pi):
            raise ValueError(f"gamma must lie in (-pi, pi], got {self.gamma}")
        if self.nu < 0:
            raise ValueError(f"nu must be >= 0, got {self.nu}")
        if not (self.sigma > 0):
            raise NonPositivePower(f"sigma must be > 0, got {self.sigma}")


@dataclass(frozen=True)
class ScaleFactors:
    spatial: float  # x-rescaling
    amplitude: float  # u-rescaling

    def __post_init__(self):
        ok = (
            self.spatial > 0
            and self.amplitude > 0
            and math.isfinite(self.spatial)
            and math.isfinite(self.amplitude)
        )
        if not ok:
            raise ValueError(f"scale factors must be positive and finite: {self}")


@dataclass(frozen=True)
class ValidatedParams:
    params: CGLParams
    global_existence: bool
    lyapunov_aligned: bool | None  # None when b == 0 (ratio undefined)


def validate(p: CGLParams) -> ValidatedParams:
    """Annotate parameters with the global-existence and alignment flags.

    Global existence holds when b + alpha*beta/a >= 0.  The alignment flag
    records whether alpha/a == beta/b, the hypothesis under which the energy
    functional is a strict Lyapunov function; it is None when b == 0.
    """
    global_existence = p.b + p.alpha * p.beta / p.a >= 0
    if p.b == 0:
        aligned = None
    else:
        aligned = math.isclose(p.alpha / p.a, p.beta / p.b, rel_tol=1e-12, abs_tol=1e-12)
    return ValidatedParams(p, global_existence, aligned)


def to_trig(p: CGLParams) -> tuple[TrigParams, ScaleFactors]:
    """Convert Cartesian coefficients to the trigonometric normalization.

    With s = spatial and A = amplitude, w(t, x) = u(t, s*x)/A solves the
    trig-form equation with (theta, gamma, k) whenever u solves the
    Cartesian one.
    """
    if p.b == 0 and p.beta == 0:
        raise ZeroNonlinearity("b = beta = 0: gamma is undefined")
    theta = cmath.phase(complex(p.a, p.alpha))
    gamma = cmath.phase(complex(-p.b, -p.beta))
    spatial = math.sqrt(abs(complex(p.a, p.alpha)))
    amplitude = abs(complex(p.b, p.beta)) ** (-1.0 / p.sigma)
    trig = TrigParams(theta=theta, gamma=wrap_angle(gamma), k=p.k, omega=0.0, nu=1.0,
                      sigma=p.sigma)
    return trig, ScaleFactors(spatial=spatial, amplitude=amplitude)
