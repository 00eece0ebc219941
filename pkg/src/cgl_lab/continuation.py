"""Newton continuation of the bound-state branch from a linear eigenpair.

On a Dirichlet interval, the map
    F(mu, zeta, omega, k) = Lap v + mu e^{i(gamma-theta)} |v|^sigma v
                            + (k - i omega) e^{-i theta} v,   v = phi + zeta
vanishes at mu = 0 with (omega, k) = (-lambda sin theta, lambda cos theta).
For fixed mu the unknowns are (zeta, omega, k) with zeta constrained to be
orthogonal to phi under the real pairings with phi and i*phi (this also pins
the gauge rotation).  The square bordered system is solved by damped Newton
with a dense real Jacobian.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BranchNotInvertible,
    IndexOutOfRange,
    JacobianSingular,
    NewtonDiverged,
    NotEnoughPoints,
)
from .grid import DIRICHLET, Field, Grid1D, inner_real, norm
from .spectra import dense_laplacian

NEWTON_TOL = 1e-10
MAX_ITER = 50
MIN_STEP = 1e-6


@dataclass
class BranchPoint:
    mu: float
    omega: float
    k: float
    v: Field
    residual: float


@dataclass
class Branch:
    points: list
    theta: float
    gamma: float
    sigma: float
    lam: float  # base eigenvalue
    eig_index: int
    grid: Grid1D
    phi_eig: Field


def linear_eigenpair(grid: Grid1D, n: int) -> tuple[float, Field]:
    """Exact sine eigenpair of the Dirichlet Laplacian, L2-normalized."""
    if grid.kind != DIRICHLET:
        raise IndexOutOfRange("linear eigenpairs require a Dirichlet grid")
    if not (1 <= n <= grid.N):
        raise IndexOutOfRange(f"eigenvalue index {n} outside 1..{grid.N}")
    lam = (n * math.pi / grid.L) ** 2
    u = np.sin(n * math.pi * grid.nodes / grid.L)
    u = u / math.sqrt(grid.L / 2.0)  # integral of sin^2 over (0, L) is L/2
    return lam, Field(u.astype(complex), grid)


def _guarded_pow(absv: np.ndarray, expo: float) -> np.ndarray:
    out = np.zeros_like(absv)
    mask = absv > 0
    out[mask] = absv[mask] ** expo
    return out


def _F(v: np.ndarray, omega: float, k: float, mu: float, D2: np.ndarray,
       cg: complex, ce: complex, sigma: float) -> np.ndarray:
    return (D2 @ v + mu * cg * np.abs(v) ** sigma * v
            + (k - 1j * omega) * ce * v)


@dataclass
class ContinuationProblem:
    grid: Grid1D
    n: int
    theta: float
    gamma: float
    sigma: float
    lam: float
    phi_eig: Field

    @classmethod
    def create(cls, grid: Grid1D, n: int, theta: float, gamma: float,
               sigma: float) -> "ContinuationProblem":
        lam, phi = linear_eigenpair(grid, n)
        return cls(grid=grid, n=n, theta=theta, gamma=gamma, sigma=sigma,
                   lam=lam, phi_eig=phi)

    def origin(self) -> BranchPoint:
        return BranchPoint(mu=0.0, omega=-self.lam * math.sin(self.theta),
                           k=self.lam * math.cos(self.theta),
                           v=self.phi_eig.copy(), residual=0.0)


def newton_solve(problem: ContinuationProblem, mu: float,
                 guess: BranchPoint) -> BranchPoint:
    """Solve F = 0 at fixed mu for (zeta, omega, k), zeta orthogonal to the
    eigenfunction under both real pairings."""
    g = problem.grid
    N = g.N
    wq = g.quad_weight
    D2 = dense_laplacian(g)
    cg = cmath.exp(1j * (problem.gamma - problem.theta))
    ce = cmath.exp(-1j * problem.theta)
    phi = problem.phi_eig.samples.real  # sine eigenfunction, real
    sigma = problem.sigma

    v = guess.v.samples.copy()
    omega, k = guess.omega, guess.k

    def full_residual(v, omega, k):
        Fv = _F(v, omega, k, mu, D2, cg, ce, sigma)
        zeta = v - phi
        c1 = wq * np.sum(zeta.real * phi)
        c2 = wq * np.sum(zeta.imag * phi)
        vec = np.concatenate([Fv.real, Fv.imag, [c1, c2]])
        fnorm = math.sqrt(wq * np.sum(np.abs(Fv) ** 2))
        return vec, max(fnorm, abs(c1), abs(c2))

    res_vec, res = full_residual(v, omega, k)
    for _ in range(MAX_ITER):
        if res < NEWTON_TOL:
            return BranchPoint(mu=mu, omega=omega, k=k,
                               v=Field(v, g), residual=res)
        absv = np.abs(v)
        pot = mu * cg * absv**sigma
        w = mu * cg * sigma * _guarded_pow(absv, sigma - 2.0) * v
        s = (k - 1j * omega) * ce
        # complex-linear block: D2 + diag(pot) + s I
        A_re = D2 + np.diag(pot.real + s.real)
        A_im = np.diag(pot.imag + s.imag)
        J = np.zeros((2 * N + 2, 2 * N + 2))
        J[:N, :N] = A_re + np.diag(w.real * v.real)
        J[:N, N:2 * N] = -A_im + np.diag(w.real * v.imag)
        J[N:2 * N, :N] = A_im + np.diag(w.imag * v.real)
        J[N:2 * N, N:2 * N] = A_re + np.diag(w.imag * v.imag)
        dFdw = -1j * ce * v
        dFdk = ce * v
        J[:N, 2 * N] = dFdw.real
        J[N:2 * N, 2 * N] = dFdw.imag
        J[:N, 2 * N + 1] = dFdk.real
        J[N:2 * N, 2 * N + 1] = dFdk.imag
        J[2 * N, :N] = wq * phi
        J[2 * N + 1, N:2 * N] = wq * phi
        try:
            delta = np.linalg.solve(J, -res_vec)
        except np.linalg.LinAlgError as exc:
            raise JacobianSingular(str(exc)) from exc

        step = 1.0
        for _half in range(20):
            v_new = v + step * (delta[:N] + 1j * delta[N:2 * N])
            omega_new = omega + step * delta[2 * N]
            k_new = k + step * delta[2 * N + 1]
            vec_new, res_new = full_residual(v_new, omega_new, k_new)
            if res_new < res or res_new < NEWTON_TOL:
                break
            step /= 2.0
        else:
            raise NewtonDiverged(f"damping failed at mu={mu}, residual={res:.3g}")
        v, omega, k = v_new, omega_new, k_new
        res_vec, res = vec_new, res_new
    raise NewtonDiverged(f"no convergence after {MAX_ITER} iterations at mu={mu}")


def continue_branch(grid: Grid1D, n: int, theta: float, gamma: float,
                    sigma: float, mu_max: float, steps: int) -> Branch:
    """Uniform mu-stepping from the linear eigenpair, previous point as
    predictor; steps are halved on Newton failure down to 1e-6."""
    if steps < 1 or mu_max < 0:
        raise ValueError("need steps >= 1 and mu_max >= 0")
    problem = ContinuationProblem.create(grid, n, theta, gamma, sigma)
    points = [problem.origin()]
    if mu_max > 0:
        targets = np.linspace(0.0, mu_max, steps + 1)[1:]
        current = points[0]
        mu = 0.0
        for target in targets:
            while mu < target - 1e-15:
                step = target - mu
                while True:
                    try:
                        nxt = newton_solve(problem, mu + step, current)
                        break
                    except NewtonDiverged:
                        step /= 2.0
                        if step < MIN_STEP:
                            raise NewtonDiverged(
                                f"branch continuation stalled at mu={mu:.6g}"
                            ) from None
                current = nxt
                mu += step
            points.append(current)
    return Branch(points=points, theta=theta, gamma=gamma, sigma=sigma,
                  lam=problem.lam, eig_index=n, grid=grid,
                  phi_eig=problem.phi_eig)


def physical_solution(point: BranchPoint, sigma: float) -> Field:
    """u = mu^(1/sigma) v, which satisfies the elliptic bound-state equation
    when mu > 0."""
    if point.mu <= 0:
        raise ValueError("physical solution requires mu > 0")
    return Field(point.mu ** (1.0 / sigma) * point.v.samples, point.v.grid)


def analytic_slopes(branch: Branch) -> tuple[float, float]:
    """(dk/dmu, domega/dmu) at mu = 0 from the projection formulas."""
    phi = branch.phi_eig
    p = norm(phi, "Lp", p=branch.sigma + 2.0) ** (branch.sigma + 2.0)
    m2 = norm(phi, "L2") ** 2
    return (-math.cos(branch.gamma) * p / m2, math.sin(branch.gamma) * p / m2)


def branch_derivative_check(branch: Branch) -> tuple[float, float]:
    """Relative error of finite-difference branch slopes at mu = 0 against
    the analytic projection formulas."""
    if len(branch.points) < 3:
        raise NotEnoughPoints("need at least 3 branch points")
    p0, p1, p2 = branch.points[0], branch.points[1], branch.points[2]
    h1, h2 = p1.mu - p0.mu, p2.mu - p0.mu
    # second-order one-sided difference on (possibly) nonuniform spacing
    def dfdmu(f0, f1, f2):
        return (f1 - f0) * h2 / (h1 * (h2 - h1)) - (f2 - f0) * h1 / (h2 * (h2 - h1))
    dk = dfdmu(p0.k, p1.k, p2.k)
    domega = dfdmu(p0.omega, p1.omega, p2.omega)
    dk_exact, domega_exact = analytic_slopes(branch)
    dk_err = abs(dk - dk_exact) / max(abs(dk_exact), 1e-300)
    domega_err = (abs(domega - domega_exact) / abs(domega_exact)
                  if domega_exact != 0 else abs(domega))
    return dk_err, domega_err


def mu_of_k(branch: Branch, k: float) -> float:
    """Invert the k(mu) map by monotone interpolation along the branch."""
    ks = np.array([p.k for p in branch.points])
    mus = np.array([p.mu for p in branch.points])
    dk0, _ = analytic_slopes(branch)
    if abs(dk0) < 1e-12 or not (np.all(np.diff(ks) < 0) or np.all(np.diff(ks) > 0)):
        raise BranchNotInvertible("k(mu) is not strictly monotone on this branch")
    order = np.argsort(ks)
    if not (ks[order][0] <= k <= ks[order][-1]):
        raise BranchNotInvertible(f"k={k} outside the computed range")
    return float(np.interp(k, ks[order], mus[order]))
