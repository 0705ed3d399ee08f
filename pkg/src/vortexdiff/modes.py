"""Initial stored-coherence fields: LG modes, plane waves, blocked Gaussian.

The Laguerre-Gaussian radial amplitude used throughout is

    A(r; w0, P, m, p) = (1/w0) * sqrt(2 P / pi) * sqrt(p! / (p+|m|)!)
                        * (sqrt(2) r / w0)^|m| * L_p^{|m|}(2 r^2 / w0^2)
                        * exp(-r^2 / w0^2)

normalized so that the integral of |A|^2 over the plane equals P for every
(p, m).  The full mode carries the helical phase e^{-i m theta} and a complex
prefactor amp (unit by default; it cancels in every fidelity or coherence
diagnostic and is never fitted).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .grid import ComplexField2D, GridSpec


class ModeKind(enum.Enum):
    LG = "lg"
    PLANE_WAVE = "plane_wave"
    BLOCKED_GAUSSIAN = "blocked_gaussian"


class ContainmentError(ValueError):
    """Mode does not fit the grid; carries the minimum admissible extent."""

    def __init__(self, message: str, required_extent: float):
        super().__init__(message)
        self.required_extent = required_extent


@dataclass(frozen=True)
class ModeSpec:
    """Parameters of a stored optical mode.

    kind selects the constructor; p, m, w0, P apply to LG (and the Gaussian
    underlying BLOCKED_GAUSSIAN), k to PLANE_WAVE, block_radius to
    BLOCKED_GAUSSIAN.  amp is a mode-independent complex scale.
    """

    kind: ModeKind
    p: int = 0
    m: int = 0
    w0: float = 1.0
    P: float = 1.0
    amp: complex = 1.0 + 0.0j
    k: float = 0.0
    block_radius: float = 0.0

    def __post_init__(self):
        if not (self.w0 > 0):
            raise ValueError(f"waist w0 must be positive, got {self.w0}")
        if not (self.P > 0):
            raise ValueError(f"total intensity P must be positive, got {self.P}")
        if not isinstance(self.p, (int, np.integer)) or self.p < 0:
            raise ValueError(f"radial index p must be a nonnegative integer, got {self.p!r}")
        if not isinstance(self.m, (int, np.integer)):
            raise ValueError(f"winding number m must be an integer, got {self.m!r}")
        if self.block_radius < 0:
            raise ValueError(f"block_radius must be nonnegative, got {self.block_radius}")


def containment_extent(w0: float, m: int, p: int) -> float:
    """Smallest grid extent that keeps an LG_p^m mode numerically contained.

    4 * w0 * sqrt(1 + |m| + p) leaves the truncated intensity below ~1e-6 P.
    """
    return 4.0 * w0 * math.sqrt(1.0 + abs(m) + p)


def assoc_laguerre(p: int, alpha: int, x):
    """Generalized Laguerre polynomial L_p^alpha(x) by the three-term recurrence.

    (k+1) L_{k+1} = (2k + 1 + alpha - x) L_k - (k + alpha) L_{k-1},
    with L_0 = 1 and L_1 = 1 + alpha - x.  Accepts scalar or ndarray x.
    """
    if not isinstance(p, (int, np.integer)) or p < 0:
        raise ValueError(f"degree p must be a nonnegative integer, got {p!r}")
    if not isinstance(alpha, (int, np.integer)) or alpha < 0:
        raise ValueError(f"order alpha must be a nonnegative integer, got {alpha!r}")
    x = np.asarray(x, dtype=np.float64)
    prev = np.ones_like(x)
    if p == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 + alpha - x
    for kk in range(1, p):
        prev, cur = cur, ((2 * kk + 1 + alpha - x) * cur - (kk + alpha) * prev) / (kk + 1)
    return cur if cur.ndim else float(cur)


def lg_radial_amplitude(r, w0: float, P: float, m: int, p: int = 0):
    """Radial amplitude A(r) of LG_p^m, normalized to total intensity P."""
    r = np.asarray(r, dtype=np.float64)
    am = abs(m)
    norm = math.sqrt(math.factorial(p) / math.factorial(p + am))
    rad = (np.sqrt(2.0) * r / w0) ** am * np.exp(-(r**2) / w0**2)
    if p > 0:
        rad = rad * assoc_laguerre(p, am, 2.0 * r**2 / w0**2)
    return (1.0 / w0) * math.sqrt(2.0 * P / math.pi) * norm * rad


def _require_contained(spec: ModeSpec, grid: GridSpec) -> None:
    required = containment_extent(spec.w0, spec.m, spec.p)
    if required > grid.extent * (1.0 + 1e-12):
        raise ContainmentError(
            f"LG mode (p={spec.p}, m={spec.m}, w0={spec.w0}) is not contained: "
            f"requires grid extent >= {required:.6g}, got {grid.extent:.6g}",
            required_extent=required,
        )


def lg_field(spec: ModeSpec, grid: GridSpec) -> ComplexField2D:
    """Sample an LG_p^m mode: amp * A(r) * e^{-i m theta}.

    Rejects modes whose tails are not contained by the grid (see
    containment_extent); conservation checks downstream need a closed
    intensity budget.
    """
    if spec.kind is not ModeKind.LG:
        raise ValueError(f"lg_field needs kind=LG, got {spec.kind}")
    _require_contained(spec, grid)
    r = grid.radius()
    theta = grid.theta()
    amplitude = lg_radial_amplitude(r, spec.w0, spec.P, spec.m, spec.p)
    values = spec.amp * amplitude * np.exp(-1j * spec.m * theta)
    return ComplexField2D(grid, values)


def blocked_gaussian(spec: ModeSpec, grid: GridSpec) -> ComplexField2D:
    """Gaussian (p=0, m=0) mode with values set to exactly 0 for r < block_radius."""
    if spec.kind is not ModeKind.BLOCKED_GAUSSIAN:
        raise ValueError(f"blocked_gaussian needs kind=BLOCKED_GAUSSIAN, got {spec.kind}")
    if spec.block_radius >= grid.extent:
        raise ValueError(
            f"block_radius {spec.block_radius} must be smaller than grid extent {grid.extent}"
        )
    gauss = ModeSpec(kind=ModeKind.LG, p=0, m=0, w0=spec.w0, P=spec.P, amp=spec.amp)
    _require_contained(gauss, grid)
    r = grid.radius()
    values = spec.amp * lg_radial_amplitude(r, spec.w0, spec.P, 0, 0).astype(np.complex128)
    values[r < spec.block_radius] = 0.0
    return ComplexField2D(grid, values)


def plane_wave(spec: ModeSpec, grid: GridSpec, allow_nonperiodic: bool = False) -> ComplexField2D:
    """Plane wave amp * e^{-i k x}.

    k must be an integer multiple of pi/extent so the wave is periodic on the
    grid; a non-periodic k silently corrupts spectral evolution, so it is
    rejected unless allow_nonperiodic is set.  k beyond the Nyquist limit
    pi/dx is always rejected.
    """
    if spec.kind is not ModeKind.PLANE_WAVE:
        raise ValueError(f"plane_wave needs kind=PLANE_WAVE, got {spec.kind}")
    if abs(spec.k) * grid.dx > math.pi * (1.0 + 1e-12):
        raise ValueError(
            f"k={spec.k} exceeds the Nyquist limit pi/dx = {math.pi / grid.dx:.6g}"
        )
    harmonics = spec.k * grid.extent / math.pi
    if not allow_nonperiodic and abs(harmonics - round(harmonics)) > 1e-9:
        raise ValueError(
            f"k={spec.k} is not grid-periodic (needs an integer multiple of "
            f"pi/extent = {math.pi / grid.extent:.6g}); pass allow_nonperiodic=True to override"
        )
    x, _ = grid.meshgrid()
    values = spec.amp * np.exp(-1j * spec.k * x)
    return ComplexField2D(grid, values)


def build_mode(spec: ModeSpec, grid: GridSpec) -> ComplexField2D:
    """Dispatch on spec.kind."""
    if spec.kind is ModeKind.LG:
        return lg_field(spec, grid)
    if spec.kind is ModeKind.BLOCKED_GAUSSIAN:
        return blocked_gaussian(spec, grid)
    if spec.kind is ModeKind.PLANE_WAVE:
        return plane_wave(spec, grid)
    raise ValueError(f"unknown mode kind {spec.kind!r}")
