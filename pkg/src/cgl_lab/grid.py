"""1D spectral grids: periodic Fourier box and Dirichlet sine interval.

The periodic grid truncates the line to [-L/2, L/2) with uniform nodes and
FFT differentiation; the Dirichlet grid covers (0, L) with interior nodes
x_j = jL/(N+1) and the sine basis, which diagonalizes the Laplacian with the
exact eigenvalues (m pi / L)^2.  Quadrature is uniform-weight in both cases
and integrates products of basis functions exactly (discrete orthogonality
of the complex exponentials / sines).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field

import numpy as np
import scipy.fft

from .errors import BadExponent, BadGridSpec, SizeMismatch

PERIODIC = "periodic"
DIRICHLET = "dirichlet"


@dataclass(frozen=True)
class Grid1D:
    kind: str
    L: float
    N: int
    nodes: np.ndarray = dc_field(repr=False)
    mode_multipliers: np.ndarray = dc_field(repr=False)  # eigenvalues of -d^2/dx^2
    quad_weight: float = 0.0  # uniform weight per node

    def __eq__(self, other):
        return (
            isinstance(other, Grid1D)
            and self.kind == other.kind
            and self.L == other.L
            and self.N == other.N
        )

    def __hash__(self):
        return hash((self.kind, self.L, self.N))

    @property
    def center(self) -> float:
        return 0.0 if self.kind == PERIODIC else self.L / 2.0

    # normalization constant relating mode-space sums to integrals:
    # integral |f|^2 dx = mode_norm_const * sum |modes|^2
    @property
    def mode_norm_const(self) -> float:
        if self.kind == PERIODIC:
            return self.L / self.N**2
        return self.L / (self.N + 1)


@dataclass
class Field:
    samples: np.ndarray
    grid: Grid1D

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=complex)
        if self.samples.shape != (self.grid.N,):
            raise SizeMismatch(
                f"field has {self.samples.shape}, grid expects ({self.grid.N},)"
            )
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("field samples must be finite")

    def copy(self) -> "Field":
        return Field(self.samples.copy(), self.grid)


def make_grid(kind: str, L: float, N: int) -> Grid1D:
    if kind not in (PERIODIC, DIRICHLET):
        raise BadGridSpec(f"unknown grid kind {kind!r}")
    if not (L > 0 and math.isfinite(L)):
        raise BadGridSpec(f"domain length must be positive, got {L}")
    if N < 4:
        raise BadGridSpec(f"need N >= 4 samples, got {N}")
    if kind == PERIODIC:
        if N % 2 != 0:
            raise BadGridSpec(f"periodic grid needs even N, got {N}")
        nodes = -L / 2 + (L / N) * np.arange(N)
        kappa = 2.0 * np.pi * np.fft.fftfreq(N, d=L / N)
        mult = kappa**2
        weight = L / N
    else:
        j = np.arange(1, N + 1)
        nodes = j * L / (N + 1)
        m = np.arange(1, N + 1)
        mult = (m * np.pi / L) ** 2
        weight = L / (N + 1)
    return Grid1D(kind=kind, L=L, N=N, nodes=nodes, mode_multipliers=mult,
                  quad_weight=weight)


def forward_modes(f: Field) -> np.ndarray:
    """Expand a field in the grid's spectral basis.

    Periodic: unnormalized FFT coefficients (numpy convention).
    Dirichlet: orthonormal DST-I coefficients, applied separately to the
    real and imaginary parts (the transform is real).
    """
    g = f.grid
    if g.kind == PERIODIC:
        return np.fft.fft(f.samples)
    re = scipy.fft.dst(f.samples.real, type=1, norm="ortho")
    im = scipy.fft.dst(f.samples.imag, type=1, norm="ortho")
    return re + 1j * im


def inverse_modes(modes: np.ndarray, grid: Grid1D) -> Field:
    modes = np.asarray(modes, dtype=complex)
    if modes.shape != (grid.N,):
        raise SizeMismatch(f"got {modes.shape} modes for grid of size {grid.N}")
    if grid.kind == PERIODIC:
        return Field(np.fft.ifft(modes), grid)
    re = scipy.fft.idst(modes.real, type=1, norm="ortho")
    im = scipy.fft.idst(modes.imag, type=1, norm="ortho")
    return Field(re + 1j * im, grid)


def laplacian(f: Field) -> Field:
    modes = forward_modes(f)
    return inverse_modes(-f.grid.mode_multipliers * modes, f.grid)


def derivative(f: Field) -> Field:
    """Spectral first derivative sampled on the nodes."""
    g = f.grid
    if g.kind == PERIODIC:
        kappa = 2.0 * np.pi * np.fft.fftfreq(g.N, d=g.L / g.N)
        return Field(np.fft.ifft(1j * kappa * np.fft.fft(f.samples)), g)
    # sine series differentiates into a cosine series; evaluate densely
    c = forward_modes(f)
    b = math.sqrt(2.0 / (g.N + 1)) * c  # coefficients of sin(m pi x / L)
    m = np.arange(1, g.N + 1)
    cosmat = np.cos(np.outer(g.nodes, m * np.pi / g.L))
    return Field(cosmat @ (b * (m * np.pi / g.L)), g)


def gradient_l2_sq(f: Field) -> float:
    """Exact integral of |f'|^2 computed in mode space."""
    modes = forward_modes(f)
    return float(f.grid.mode_norm_const * np.sum(f.grid.mode_multipliers * np.abs(modes) ** 2))


def norm(f: Field, which: str = "L2", p: float = 2.0) -> float:
    """Norm of a field: which in {'L2', 'Lp', 'H1', 'Linf'}."""
    w = f.grid.quad_weight
    absf = np.abs(f.samples)
    if which == "L2":
        return float(math.sqrt(w * np.sum(absf**2)))
    if which == "Lp":
        if p < 1:
            raise BadExponent(f"Lp needs p >= 1, got {p}")
        return float((w * np.sum(absf**p)) ** (1.0 / p))
    if which == "Linf":
        return float(absf.max(initial=0.0))
    if which == "H1":
        return float(math.sqrt(w * np.sum(absf**2) + gradient_l2_sq(f)))
    raise BadExponent(f"unknown norm {which!r}")


def inner_real(f: Field, g: Field) -> float:
    """Real scalar product Re integral f conj(g) dx."""
    if f.grid != g.grid:
        raise SizeMismatch("fields live on different grids")
    return float(f.grid.quad_weight * np.sum(f.samples * np.conj(g.samples)).real)


# ---------------------------------------------------------------------------
# serialization

def grid_header(grid: Grid1D) -> dict:
    return {"kind": grid.kind, "L": grid.L, "N": grid.N}


def grid_from_header(header: dict) -> Grid1D:
    return make_grid(header["kind"], float(header["L"]), int(header["N"]))


def save_field_csv(f: Field, path) -> None:
    """Write a field as CSV columns x, re, im with a JSON grid header line."""
    with open(path, "w") as fh:
        fh.write("# " + json.dumps(grid_header(f.grid)) + "\n")
        fh.write("x,re,im\n")
        for x, u in zip(f.grid.nodes, f.samples):
            fh.write(f"{x:.17g},{u.real:.17g},{u.imag:.17g}\n")


def load_field_csv(path) -> Field:
    with open(path) as fh:
        first = fh.readline()
        if not first.startswith("# "):
            raise BadGridSpec(f"{path}: missing grid header line")
        grid = grid_from_header(json.loads(first[2:]))
        fh.readline()  # column names
        data = np.loadtxt(fh, delimiter=",")
    data = np.atleast_2d(data)
    return Field(data[:, 1] + 1j * data[:, 2], grid)
