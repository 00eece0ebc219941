"""Lyapunov functionals, dissipation identities and k-thresholds."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import BadExponent, MissingMonitors
from .grid import DIRICHLET, Field, Grid1D, gradient_l2_sq, laplacian
from .params import CGLParams


@dataclass(frozen=True)
class ThresholdReport:
    poincare_k_over_a: float  # (|Omega|/omega_N)^(-2/N)
    h1_threshold: float  # a/2 times the same constant
    eig_window: Optional[int]  # n with lambda_n < k/a < lambda_{n+1}, if any


def unit_ball_volume(n_dim: int) -> float:
    return math.pi ** (n_dim / 2.0) / math.gamma(n_dim / 2.0 + 1.0)


def W_p(f: Field, p: float) -> float:
    """Integral of |f|^p (the p-th power, not the norm)."""
    if p < 2:
        raise BadExponent(f"W_p needs p >= 2, got {p}")
    return float(f.grid.quad_weight * np.sum(np.abs(f.samples) ** p))


def V(f: Field, a: float, b: float, k: float, sigma: float) -> float:
    """Energy functional a/2 |grad u|^2 + b/(s+2) |u|^(s+2) - k/2 |u|^2."""
    w = f.grid.quad_weight
    absf = np.abs(f.samples)
    return float(a / 2.0 * gradient_l2_sq(f)
                 + b / (sigma + 2.0) * w * np.sum(absf ** (sigma + 2.0))
                 - k / 2.0 * w * np.sum(absf**2))


def V_dot(f: Field, a: float, b: float, k: float, sigma: float) -> float:
    """Dissipation rate -|| a Lap u - b |u|^s u + k u ||_2^2.

    This equals dV/dt along trajectories only when alpha/a = beta/b; the
    caller owns that hypothesis (see params.validate).
    """
    u = f.samples
    r = a * laplacian(f).samples - b * np.abs(u) ** sigma * u + k * u
    return float(-f.grid.quad_weight * np.sum(np.abs(r) ** 2))


def thresholds(a: float, k: float, n_dim: int, volume: float,
               grid: Optional[Grid1D] = None) -> ThresholdReport:
    """Decay/instability thresholds for the driving coefficient k.

    The Poincare-type constant is implemented exactly as the theorems state
    it, (|Omega|/omega_N)^(-2/N), even though the sharp 1D constant is
    (pi/L)^2.  When a Dirichlet grid is supplied, the window n with
    k/a in (lambda_n, lambda_{n+1}) is located from the exact eigenvalues.
    """
    if volume <= 0 or n_dim < 1:
        raise ValueError("need volume > 0 and n_dim >= 1")
    poincare = (volume / unit_ball_volume(n_dim)) ** (-2.0 / n_dim)
    window = None
    if grid is not None and grid.kind == DIRICHLET:
        lam = grid.mode_multipliers
        ratio = k / a
        idx = np.searchsorted(lam, ratio)
        # strict interior of (lambda_idx, lambda_{idx+1}), 1-based
        if 1 <= idx < grid.N and lam[idx - 1] < ratio < lam[idx]:
            window = int(idx)
    return ThresholdReport(poincare_k_over_a=poincare,
                           h1_threshold=a / 2.0 * poincare,
                           eig_window=window)


def energy_identity_residuals(traj, params: CGLParams) -> np.ndarray:
    """Residual of the mass identity
    d/dt ||u||_2^2 / 2 = -a ||grad u||^2 - b ||u||_{s+2}^{s+2} + k ||u||_2^2
    along a trajectory, via centered differences on the monitor series.
    (The k-term is implemented squared; the unsquared print is a typo.)
    """
    need = ("L2", "grad2", "Ns")
    for name in need:
        if name not in traj.monitors:
            raise MissingMonitors(f"trajectory lacks the {name!r} monitor")
    t = np.asarray(traj.times)
    if len(t) < 3:
        raise MissingMonitors("need at least 3 samples for centered differences")
    m2 = traj.monitors["L2"] ** 2
    rhs = (-params.a * traj.monitors["grad2"] - params.b * traj.monitors["Ns"]
           + params.k * m2)
    dmdt = (m2[2:] - m2[:-2]) / (t[2:] - t[:-2])
    return np.abs(0.5 * dmdt - rhs[1:-1])
