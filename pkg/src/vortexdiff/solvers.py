"""Numerical propagators for classical diffusion and unitary quantum diffusion.

Three independent classical schemes on the same periodic grid:

* SPECTRAL: multiply each Fourier mode by e^{-D k^2 t}; exact solution of the
  periodic heat equation in one step.  Production path.
* FD_EXPLICIT: forward-Euler 5-point stencil with periodic wrap; O(dx^2)+O(dt),
  kept deliberately simple as convergence-order evidence.
* KERNEL: direct discrete convolution with the sampled heat kernel
  G = e^{-|r|^2 / 4 D t} / (4 pi D t), truncated where G < 1e-16 G(0).

Quantum diffusion is the dispersive analogue e^{-i beta k^2 t}: unitary and
reversible by a conjugation echo, in contrast with classical diffusion whose
inverse amplifies the top of the band by e^{D k_max^2 t} and is therefore
exposed only as a conditioning report, never performed.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

from .analytic import PHYSICALITY_TOL, StateSnapshot
from .grid import ComplexField2D, GridSpec


class Scheme(enum.Enum):
    SPECTRAL = "spectral"
    FD_EXPLICIT = "fd"
    KERNEL = "kernel"


class CflError(ValueError):
    """Explicit-FD timestep above the stability bound; carries max admissible dt."""

    def __init__(self, message: str, max_dt: float):
        super().__init__(message)
        self.max_dt = max_dt


class IrreversibleEvolutionError(RuntimeError):
    """Classical un-diffusion requested; carries the amplification factor."""

    def __init__(self, message: str, amplification: float):
        super().__init__(message)
        self.amplification = amplification


@dataclass(frozen=True)
class SolverConfig:
    """Scheme selection plus FD stepping parameters.

    dt applies to FD_EXPLICIT only; None means "largest stable step",
    cfl_safety * dx^2 / (4 D).
    """

    scheme: Scheme = Scheme.SPECTRAL
    dt: float | None = None
    cfl_safety: float = 0.9

    def __post_init__(self):
        if not (0 < self.cfl_safety <= 1):
            raise ValueError(f"cfl_safety must be in (0, 1], got {self.cfl_safety}")
        if self.dt is not None and not (self.dt > 0):
            raise ValueError(f"dt must be positive, got {self.dt}")


@dataclass(frozen=True)
class QuantumParams:
    """Dispersion coefficient beta of the unitary phase e^{-i beta k^2 t}."""

    beta: float = 1.0


def _k_squared(grid: GridSpec) -> np.ndarray:
    k = 2.0 * np.pi * np.fft.fftfreq(grid.n, d=grid.dx)
    kx, ky = np.meshgrid(k, k, indexing="ij")
    return kx**2 + ky**2


def max_wavenumber(grid: GridSpec) -> float:
    """Nyquist wavenumber pi/dx, the top of the resolved band per axis."""
    return math.pi / grid.dx


def diffuse_spectral(f: ComplexField2D, D: float, t: float) -> ComplexField2D:
    """Heat-equation step: multiply Fourier components by e^{-D k^2 t}."""
    if t < 0:
        raise ValueError(f"time must be >= 0, got {t}")
    if D < 0:
        raise ValueError(f"diffusion coefficient must be >= 0, got {D}")
    if t == 0 or D == 0:
        return f.copy()
    spectrum = np.fft.fft2(f.values)
    spectrum *= np.exp(-D * _k_squared(f.grid) * t)
    return ComplexField2D(f.grid, np.fft.ifft2(spectrum))


def fd_max_dt(grid: GridSpec, D: float, cfl_safety: float = 1.0) -> float:
    """Stability bound of the explicit 5-point step, cfl_safety * dx^2 / (4 D)."""
    return cfl_safety * grid.dx**2 / (4.0 * D)


def _periodic_laplacian(u: np.ndarray, out: np.ndarray) -> np.ndarray:
    np.multiply(u, -4.0, out=out)
    out[1:, :] += u[:-1, :]
    out[0, :] += u[-1, :]
    out[:-1, :] += u[1:, :]
    out[-1, :] += u[0, :]
    out[:, 1:] += u[:, :-1]
    out[:, 0] += u[:, -1]
    out[:, :-1] += u[:, 1:]
    out[:, -1] += u[:, 0]
    return out


def diffuse_fd(f: ComplexField2D, D: float, t: float, cfg: SolverConfig) -> ComplexField2D:
    """Explicit 5-point-stencil time stepping with periodic wrap.

    Marches floor(t/dt) full steps of cfg.dt (or the stability bound when
    cfg.dt is None) plus one shorter final step covering the remainder, so
    an arbitrary t is reached exactly.  A dt above the stability bound is a
    hard error naming the maximum admissible value.
    """
    if t < 0:
        raise ValueError(f"time must be >= 0, got {t}")
    if D < 0:
        raise ValueError(f"diffusion coefficient must be >= 0, got {D}")
    if t == 0 or D == 0:
        return f.copy()
    bound = fd_max_dt(f.grid, D, cfg.cfl_safety)
    dt = bound if cfg.dt is None else cfg.dt
    if dt > bound * (1.0 + 1e-12):
        raise CflError(
            f"FD timestep dt={dt:.6g} violates the stability bound; "
            f"maximum admissible dt is {bound:.6g} "
            f"(cfl_safety={cfg.cfl_safety}, dx={f.grid.dx:.6g}, D={D})",
            max_dt=bound,
        )
    n_full = int(math.floor(t / dt + 1e-12))
    remainder = t - n_full * dt
    u = f.values.copy()
    lap = np.empty_like(u)
    coeff = D * dt / f.grid.dx**2
    for _ in range(n_full):
        _periodic_laplacian(u, lap)
        lap *= coeff
        u += lap
    if remainder > 1e-12 * dt:
        _periodic_laplacian(u, lap)
        lap *= D * remainder / f.grid.dx**2
        u += lap
    return ComplexField2D(f.grid, u)


def heat_kernel_patch(grid: GridSpec, D: float, t: float) -> np.ndarray:
    """Sampled free-space heat kernel on a square patch, zero beyond the
    radius where G drops below 1e-16 of its center value."""
    r_cut = math.sqrt(4.0 * D * t * math.log(1e16))
    half = max(1, int(math.ceil(r_cut / grid.dx)))
    offsets = grid.dx * np.arange(-half, half + 1)
    ox, oy = np.meshgrid(offsets, offsets, indexing="ij")
    r_sq = ox**2 + oy**2
    kernel = np.exp(-r_sq / (4.0 * D * t)) / (4.0 * np.pi * D * t)
    kernel[r_sq > r_cut**2] = 0.0
    return kernel


def diffuse_kernel(f: ComplexField2D, D: float, t: float) -> ComplexField2D:
    """Green-function propagation: discrete convolution with the sampled
    heat kernel times dx^2.  t = 0 is rejected (the kernel degenerates to a
    delta; use the identity instead), as are steps too short for the grid to
    resolve the kernel (4 D t < dx^2), which would fabricate mass."""
    if not (t > 0):
        raise ValueError("kernel propagator needs t > 0 (t = 0 is the identity)")
    if D < 0:
        raise ValueError(f"diffusion coefficient must be >= 0, got {D}")
    if D == 0:
        return f.copy()
    if 4.0 * D * t < f.grid.dx**2:
        raise ValueError(
            f"kernel unresolved: needs 4 D t >= dx^2 = {f.grid.dx ** 2:.6g}, "
            f"got {4.0 * D * t:.6g}; use the spectral scheme for short steps"
        )
    kernel = heat_kernel_patch(f.grid, D, t)
    out = fftconvolve(f.values, kernel.astype(np.complex128), mode="same")
    out *= f.grid.dx**2
    return ComplexField2D(f.grid, out)


def evolve_quantum(f: ComplexField2D, q: QuantumParams, t: float) -> ComplexField2D:
    """Unitary dispersive evolution: multiply Fourier components by e^{-i beta k^2 t}."""
    spectrum = np.fft.fft2(f.values)
    spectrum *= np.exp(-1j * q.beta * _k_squared(f.grid) * t)
    return ComplexField2D(f.grid, np.fft.ifft2(spectrum))


def echo_reverse(f: ComplexField2D, q: QuantumParams, t: float) -> ComplexField2D:
    """Photon-echo style reversal of evolve_quantum(f, q, t).

    Conjugate, evolve forward for the same duration, conjugate again; the net
    effect multiplies each Fourier mode by e^{+i beta k^2 t}, undoing the
    forward pass to rounding accuracy.
    """
    conjugated = ComplexField2D(f.grid, np.conj(f.values))
    evolved = evolve_quantum(conjugated, q, t)
    return ComplexField2D(f.grid, np.conj(evolved.values))


def classical_reversal_amplification(grid: GridSpec, D: float, t: float) -> float:
    """Amplification e^{D k_max^2 t} that inverting classical diffusion would
    apply to the top of the resolved band (k_max = pi/dx)."""
    with np.errstate(over="ignore"):
        return float(np.exp(D * max_wavenumber(grid) ** 2 * t))


def reverse_classical(f: ComplexField2D, D: float, t: float) -> ComplexField2D:
    """Refuse to invert classical diffusion; report the conditioning instead.

    The would-be inverse multiplies Fourier modes by e^{+D k^2 t}, amplifying
    band-top noise by e^{D k_max^2 t}.  Raises IrreversibleEvolutionError
    carrying that factor without touching the field; the t = 0 / D = 0 no-op
    is returned unchanged.
    """
    if t < 0 or D < 0:
        raise ValueError("reverse_classical needs t >= 0 and D >= 0")
    if t == 0 or D == 0:
        return f.copy()
    amplification = classical_reversal_amplification(f.grid, D, t)
    raise IrreversibleEvolutionError(
        f"irreversible: amplification factor {amplification:.6g} "
        f"(e^(D k_max^2 t), k_max = pi/dx = {max_wavenumber(f.grid):.6g})",
        amplification=amplification,
    )


def _diffuse(f: ComplexField2D, D: float, t: float, cfg: SolverConfig) -> ComplexField2D:
    if cfg.scheme is Scheme.SPECTRAL:
        return diffuse_spectral(f, D, t)
    if cfg.scheme is Scheme.FD_EXPLICIT:
        return diffuse_fd(f, D, t, cfg)
    if cfg.scheme is Scheme.KERNEL:
        if t == 0:
            return f.copy()
        return diffuse_kernel(f, D, t)
    raise ValueError(f"unknown scheme {cfg.scheme!r}")


def evolve_snapshot(s: StateSnapshot, D: float, t: float, cfg: SolverConfig) -> StateSnapshot:
    """Propagate a snapshot for duration t under the configured scheme.

    rho12 diffuses as a complex field, rho22 as a real nonnegative field
    (its tiny negative rounding residues are clipped within the physicality
    tolerance); rho11 is homogeneous and diffusion-invariant.
    """
    rho12 = _diffuse(s.rho12, D, t, cfg)
    rho22_c = _diffuse(ComplexField2D(s.grid, s.rho22.astype(np.complex128)), D, t, cfg)
    rho22 = rho22_c.values.real
    floor = -PHYSICALITY_TOL * max(1.0, float(np.max(rho22, initial=0.0)))
    if float(rho22.min()) < floor:
        raise ValueError(
            f"rho22 developed negative values ({rho22.min():.3e}) beyond tolerance; "
            "initial data too rough for this scheme/grid"
        )
    return StateSnapshot(
        time=s.time + t,
        rho12=rho12,
        rho22=np.maximum(rho22, 0.0),
        rho11=s.rho11,
    )
