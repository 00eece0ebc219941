"""Real-linearized operator around a bound-state and its discrete spectrum.

The linearization L (with u_t = -L u) contains a Re(conj(phi) u) term and is
therefore only real-linear; it is represented as a dense 2N x 2N real matrix
acting on the stacked (Re u, Im u).  The essential spectrum of the continuum
operator lives in {Re lambda >= -k}; on a finite grid it cannot appear, so
only the boundary constant -k is reported as metadata.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np
import scipy.fft
import scipy.linalg

from .boundstate import BoundState, amplitude
from .errors import EigensolveFailed, SizeMismatch, ZeroProfile
from .grid import PERIODIC, Field, Grid1D, derivative, laplacian, norm

KERNEL_TOL = 1e-4


@dataclass
class RealLinearOperator:
    matrix: np.ndarray  # 2N x 2N, real
    grid: Grid1D
    theta: float
    gamma: float
    omega: float
    k: float
    sigma: float


@dataclass(frozen=True)
class StabilityReport:
    eigenvalues: np.ndarray  # 2N, complex, conjugate-closed
    kernel_dim: int
    abscissa_excl_kernel: float
    essential_bound: float  # -k (continuum constant, not realized on the grid)
    condition_1_9: bool  # (1+sigma) ||phi||_inf^sigma < -k
    lower_bound_check: bool
    sup_norm: float


def _pow_guard(absphi: np.ndarray, expo: float) -> np.ndarray:
    """absphi**expo with the convention 0**negative = 0 (the full potential
    term vanishes at zeros of phi for sigma > 0)."""
    out = np.zeros_like(absphi)
    mask = absphi > 0
    out[mask] = absphi[mask] ** expo
    return out


def dense_laplacian(grid: Grid1D) -> np.ndarray:
    """Real N x N matrix of the spectral Laplacian."""
    eye = np.eye(grid.N)
    if grid.kind == PERIODIC:
        modes = np.fft.fft(eye, axis=0)
        return np.fft.ifft(-grid.mode_multipliers[:, None] * modes, axis=0).real
    modes = scipy.fft.dst(eye, type=1, norm="ortho", axis=0)
    return scipy.fft.idst(-grid.mode_multipliers[:, None] * modes, type=1,
                          norm="ortho", axis=0)


def apply_linearized(u: Field, phi: Field, theta: float, gamma: float,
                     omega: float, k: float, sigma: float) -> Field:
    """Matrix-free application of L (sign convention u_t = -L u)."""
    if u.grid != phi.grid:
        raise SizeMismatch("field and profile live on different grids")
    absphi = np.abs(phi.samples)
    pot = _pow_guard(absphi, sigma)
    chirpdir = _pow_guard(absphi, sigma - 2.0) * phi.samples
    rhs = (cmath.exp(1j * theta) * laplacian(u).samples
           + cmath.exp(1j * gamma) * (pot * u.samples
                                      + sigma * chirpdir
                                      * (np.conj(phi.samples) * u.samples).real)
           - 1j * omega * u.samples + k * u.samples)
    return Field(-rhs, u.grid)


def assemble_from_profile(phi: Field, theta: float, gamma: float, omega: float,
                          k: float, sigma: float) -> RealLinearOperator:
    """Dense real 2N x 2N matrix of L around an arbitrary profile."""
    g = phi.grid
    N = g.N
    D2 = dense_laplacian(g)
    cth = cmath.exp(1j * theta)
    cga = cmath.exp(1j * gamma)
    absphi = np.abs(phi.samples)
    pot = cga * _pow_guard(absphi, sigma)  # complex diagonal, complex-linear part
    w = sigma * cga * _pow_guard(absphi, sigma - 2.0) * phi.samples
    pr, pi = phi.samples.real, phi.samples.imag

    # complex-linear part C = cth*D2 + diag(pot) + (k - i omega) I
    re_c = cth.real * D2 + np.diag(pot.real + k)
    im_c = cth.imag * D2 + np.diag(pot.imag - omega)
    G = np.zeros((2 * N, 2 * N))
    G[:N, :N] = re_c
    G[:N, N:] = -im_c
    G[N:, :N] = im_c
    G[N:, N:] = re_c
    # real-linear part w * (phi_r p + phi_i q)
    G[:N, :N] += np.diag(w.real * pr)
    G[:N, N:] += np.diag(w.real * pi)
    G[N:, :N] += np.diag(w.imag * pr)
    G[N:, N:] += np.diag(w.imag * pi)
    return RealLinearOperator(matrix=-G, grid=g, theta=theta, gamma=gamma,
                              omega=omega, k=k, sigma=sigma)


def assemble(bs: BoundState, grid: Grid1D | None = None) -> RealLinearOperator:
    if grid is not None and grid != bs.phi.grid:
        raise SizeMismatch("bound-state profile does not live on the given grid")
    return assemble_from_profile(bs.phi, bs.theta, bs.gamma, bs.omega, bs.k, bs.sigma)


def spectrum(op: RealLinearOperator) -> np.ndarray:
    try:
        return scipy.linalg.eigvals(op.matrix)
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover
        raise EigensolveFailed(str(exc)) from exc


def kernel_check(bs: BoundState, _op: RealLinearOperator | None = None) -> tuple[float, float]:
    """Relative residuals of the gauge direction i*phi and the translation
    direction phi' under L; both vanish for an exact bound-state."""
    phi = bs.phi
    nphi = norm(phi, "L2")
    if nphi == 0:
        raise ZeroProfile("cannot normalize kernel residuals for phi = 0")
    args = (bs.theta, bs.gamma, bs.omega, bs.k, bs.sigma)
    gauge = Field(1j * phi.samples, phi.grid)
    res_gauge = norm(apply_linearized(gauge, phi, *args), "L2") / nphi
    dphi = derivative(phi)
    ndphi = norm(dphi, "L2")
    res_translation = norm(apply_linearized(dphi, phi, *args), "L2") / ndphi
    return float(res_gauge), float(res_translation)


def stability_report(bs: BoundState, grid: Grid1D | None = None,
                     kernel_tol: float = KERNEL_TOL) -> StabilityReport:
    op = assemble(bs, grid)
    eigs = spectrum(op)
    kernel = np.abs(eigs) < kernel_tol
    kernel_dim = int(kernel.sum())
    rest = eigs[~kernel]
    abscissa = float(rest.real.min()) if rest.size else float("inf")
    sup = amplitude(bs.epsilon, bs.eta, bs.sigma)
    bound = -bs.k - (1.0 + bs.sigma) * sup**bs.sigma
    return StabilityReport(
        eigenvalues=eigs,
        kernel_dim=kernel_dim,
        abscissa_excl_kernel=abscissa,
        essential_bound=-bs.k,
        condition_1_9=(1.0 + bs.sigma) * sup**bs.sigma < -bs.k,
        lower_bound_check=bool(np.all(eigs.real >= bound - 1e-6)),
        sup_norm=sup,
    )
