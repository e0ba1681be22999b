"""Sampled frequency/time grids and the Fourier convention used everywhere.

Frequencies are measured in the rotating frame of the optical carrier, so
``omega = 0`` is the carrier. The transform pair is

    nu(t)     = (2 pi)^(-1/2) * integral d omega  nu(omega) exp(-i omega t)
    nu(omega) = (2 pi)^(-1/2) * integral dt       nu(t)     exp(+i omega t)

discretised as a centred DFT with Riemann weights, so that
``sum |nu(t_j)|^2 dt == sum |nu(omega_j)|^2 d_omega`` to round-off.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

__all__ = [
    "GridMismatchError",
    "SampledGrid",
    "SpectralAmplitude",
    "TimeAmplitude",
    "to_time",
    "to_freq",
    "inner_product",
    "norm",
    "normalize",
    "rms_width",
    "is_resolved",
    "gaussian_amplitude",
]

_TWO_PI = 2.0 * np.pi


class GridMismatchError(ValueError):
    """Raised when amplitudes living on different grids are combined."""


@dataclass(frozen=True)
class SampledGrid:
    """Paired frequency/time grid, both centred on zero.

    Parameters
    ----------
    n_points : int
        Number of samples (at least 8, power of two recommended).
    delta_omega : float
        Angular-frequency spacing [rad/s].
    carrier : float, optional
        Carrier frequency label. Metadata only, never used numerically.
    """

    n_points: int
    delta_omega: float
    carrier: Optional[float] = field(default=None, compare=False)

    def __post_init__(self):
        if int(self.n_points) != self.n_points or self.n_points < 8:
            raise ValueError(f"n_points must be an integer >= 8, got {self.n_points}")
        if not (np.isfinite(self.delta_omega) and self.delta_omega > 0):
            raise ValueError(f"delta_omega must be positive, got {self.delta_omega}")
        object.__setattr__(self, "n_points", int(self.n_points))
        object.__setattr__(self, "delta_omega", float(self.delta_omega))

    @property
    def delta_t(self) -> float:
        return _TWO_PI / (self.n_points * self.delta_omega)

    @cached_property
    def omega(self) -> np.ndarray:
        w = (np.arange(self.n_points) - self.n_points // 2) * self.delta_omega
        w.flags.writeable = False
        return w

    @cached_property
    def t(self) -> np.ndarray:
        t = (np.arange(self.n_points) - self.n_points // 2) * self.delta_t
        t.flags.writeable = False
        return t

    @property
    def omega_span(self) -> float:
        return self.n_points * self.delta_omega

    @property
    def time_span(self) -> float:
        return self.n_points * self.delta_t

    def omega_index(self, omega: float) -> int:
        """Index of the sample nearest to ``omega``."""
        return int(np.rint(omega / self.delta_omega)) + self.n_points // 2

    def time_index(self, t: float) -> int:
        return int(np.rint(t / self.delta_t)) + self.n_points // 2


def _as_values(grid: SampledGrid, values) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128)
    if arr.shape != (grid.n_points,):
        raise ValueError(f"expected {grid.n_points} samples, got shape {arr.shape}")
    arr.flags.writeable = False
    return arr


class _Amplitude:
    """Shared behaviour of immutable sampled amplitudes."""

    __slots__ = ("grid", "values")

    def __init__(self, grid: SampledGrid, values):
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", _as_values(grid, values))

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __repr__(self):
        return f"{type(self).__name__}(n_points={self.grid.n_points}, norm={self.norm():.6g})"

    def _check(self, other):
        if not isinstance(other, type(self)):
            return NotImplemented
        if other.grid != self.grid:
            raise GridMismatchError("amplitudes live on different grids")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return type(self)(self.grid, self.values + other.values)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return type(self)(self.grid, self.values - other.values)

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return type(self)(self.grid, self.values * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return type(self)(self.grid, self.values / scalar)

    def __neg__(self):
        return type(self)(self.grid, -self.values)

    @property
    def _weight(self) -> float:
        raise NotImplementedError

    def norm_squared(self) -> float:
        return float(np.vdot(self.values, self.values).real * self._weight)

    def norm(self) -> float:
        return float(np.sqrt(self.norm_squared()))


class SpectralAmplitude(_Amplitude):
    """Complex amplitude nu(omega) sampled on ``grid.omega``."""

    __slots__ = ()

    @property
    def _weight(self) -> float:
        return self.grid.delta_omega

    @property
    def omega(self) -> np.ndarray:
        return self.grid.omega


class TimeAmplitude(_Amplitude):
    """Complex amplitude nu(t) sampled on ``grid.t``."""

    __slots__ = ()

    @property
    def _weight(self) -> float:
        return self.grid.delta_t

    @property
    def t(self) -> np.ndarray:
        return self.grid.t


def _centred_fft(x: np.ndarray) -> np.ndarray:
    return np.fft.fftshift(np.fft.fft(np.fft.ifftshift(x), norm="ortho"))


def _centred_ifft(x: np.ndarray) -> np.ndarray:
    return np.fft.fftshift(np.fft.ifft(np.fft.ifftshift(x), norm="ortho"))


def to_time(nu: SpectralAmplitude) -> TimeAmplitude:
    """Transform nu(omega) to nu(t) with the exp(-i omega t) kernel."""
    g = nu.grid
    scale = np.sqrt(g.delta_omega / g.delta_t)
    return TimeAmplitude(g, scale * _centred_fft(nu.values))


def to_freq(nu_t: TimeAmplitude) -> SpectralAmplitude:
    """Inverse of :func:`to_time`."""
    g = nu_t.grid
    scale = np.sqrt(g.delta_t / g.delta_omega)
    return SpectralAmplitude(g, scale * _centred_ifft(nu_t.values))


def inner_product(a: SpectralAmplitude, b: SpectralAmplitude) -> complex:
    """<a, b> = sum conj(a) b d_omega; conjugate-linear in ``a``.

    Also accepts two :class:`TimeAmplitude` objects (weight ``delta_t``).
    """
    if type(a) is not type(b):
        raise TypeError("inner product needs two amplitudes of the same domain")
    if a.grid != b.grid:
        raise GridMismatchError("amplitudes live on different grids")
    return complex(np.vdot(a.values, b.values) * a._weight)


def norm(nu) -> float:
    return nu.norm()


def normalize(nu):
    n = nu.norm()
    if not n > 0:
        raise ValueError("cannot normalise a zero amplitude")
    return type(nu)(nu.grid, nu.values / n)


def _weighted_moments(x: np.ndarray, weights: np.ndarray) -> tuple[float, float]:
    mass = weights.sum()
    if not mass > 0:
        raise ValueError("distribution has zero mass")
    mean = float(np.dot(x, weights) / mass)
    var = float(np.dot((x - mean) ** 2, weights) / mass)
    return mean, float(np.sqrt(max(var, 0.0)))


def rms_width(nu) -> float:
    """RMS width of |nu|^2 in its own domain (omega or t)."""
    axis = nu.omega if isinstance(nu, SpectralAmplitude) else nu.t
    return _weighted_moments(axis, np.abs(nu.values) ** 2)[1]


def is_resolved(nu: SpectralAmplitude) -> bool:
    """True if both RMS widths are below 1/8 of the corresponding grid span."""
    g = nu.grid
    return (rms_width(nu) < g.omega_span / 8) and (rms_width(to_time(nu)) < g.time_span / 8)


def gaussian_amplitude(
    grid: SampledGrid, sigma: float, t0: float = 0.0, omega0: float = 0.0
) -> SpectralAmplitude:
    """Normalised Gaussian nu(omega) = (pi sigma^2)^(-1/4) exp(-(omega-omega0)^2 / 2 sigma^2).

    ``t0`` delays the pulse in time (multiplies by exp(+i omega t0)).
    """
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    w = grid.omega
    vals = (np.pi * sigma**2) ** -0.25 * np.exp(-((w - omega0) ** 2) / (2 * sigma**2))
    if t0:
        vals = vals * np.exp(1j * w * t0)
    return SpectralAmplitude(grid, vals)
